#include "lgmd/pgm_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "lgmd/error.hpp"

namespace fs = std::filesystem;

namespace lgmd {

namespace {

// Skips whitespace and '#' comment lines between header tokens.
int next_header_int(std::istream& in, const std::string& path) {
    for (;;) {
        int c = in.peek();
        if (c == EOF) throw Error(Error::Kind::parse, path + ": truncated header");
        if (c == '#') {
            std::string comment;
            std::getline(in, comment);
            continue;
        }
        if (std::isspace(c)) {
            in.get();
            continue;
        }
        break;
    }
    int value = 0;
    if (!(in >> value)) throw Error(Error::Kind::parse, path + ": malformed header");
    return value;
}

double luminance_from_rgb(unsigned char r, unsigned char g, unsigned char b) {
    return 0.299 * r + 0.587 * g + 0.114 * b;
}

bool frame_extension(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".pgm" || ext == ".ppm";
}

} // namespace

Frame read_pnm_payload(std::istream& in, const std::string& path) {
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6'))
        throw Error(Error::Kind::parse, path + ": not a binary PGM/PPM file");
    const bool color = magic[1] == '6';

    const int width = next_header_int(in, path);
    const int height = next_header_int(in, path);
    const int maxval = next_header_int(in, path);
    if (width <= 0 || height <= 0)
        throw Error(Error::Kind::parse, path + ": non-positive dimensions");
    if (maxval <= 0 || maxval > 255)
        throw Error(Error::Kind::parse, path + ": unsupported maxval " + std::to_string(maxval));
    in.get();  // single whitespace after maxval

    const std::size_t pixels = static_cast<std::size_t>(width) * height;
    const std::size_t bytes = pixels * (color ? 3 : 1);
    std::vector<unsigned char> raw(bytes);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(bytes));
    if (static_cast<std::size_t>(in.gcount()) != bytes)
        throw Error(Error::Kind::parse, path + ": truncated pixel data");

    Frame frame(width, height);
    if (color) {
        for (std::size_t i = 0; i < pixels; ++i)
            frame.data[i] = luminance_from_rgb(raw[3 * i], raw[3 * i + 1], raw[3 * i + 2]);
    } else {
        for (std::size_t i = 0; i < pixels; ++i) frame.data[i] = raw[i];
    }
    return frame;
}

Frame read_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Error::Kind::io, path + ": cannot open");
    return read_pnm_payload(in, path);
}

std::vector<Frame> read_pnm_stream(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Error::Kind::io, path + ": cannot open");
    std::vector<Frame> frames;
    while (in.peek() != EOF) {
        Frame frame = read_pnm_payload(in, path + " (frame " + std::to_string(frames.size()) + ")");
        if (!frames.empty() && !frame.same_shape(frames.front()))
            throw Error(Error::Kind::dimension,
                        path + ": frame " + std::to_string(frames.size()) +
                            " dimensions differ from the first frame");
        frames.push_back(std::move(frame));
    }
    if (frames.empty()) throw Error(Error::Kind::parse, path + ": no frames in stream");
    return frames;
}

void write_pgm(const std::string& path, const Frame& frame) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Error::Kind::io, path + ": cannot open for writing");
    out << "P5\n" << frame.width << " " << frame.height << "\n255\n";
    std::vector<unsigned char> raw(frame.data.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const double v = std::clamp(frame.data[i], 0.0, 255.0);
        raw[i] = static_cast<unsigned char>(std::llround(v));
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) throw Error(Error::Kind::io, path + ": write failed");
}

std::vector<std::string> list_frame_files(const std::string& directory) {
    if (!fs::is_directory(directory))
        throw Error(Error::Kind::io, directory + ": not a directory");
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(directory))
        if (entry.is_regular_file() && frame_extension(entry.path()))
            files.push_back(entry.path().string());
    std::sort(files.begin(), files.end(), [](const std::string& a, const std::string& b) {
        return fs::path(a).filename().string() < fs::path(b).filename().string();
    });
    return files;
}

std::vector<Frame> load_frames(const std::string& source) {
    if (fs::is_regular_file(source)) return read_pnm_stream(source);
    const std::vector<std::string> files = list_frame_files(source);
    if (files.empty()) throw Error(Error::Kind::io, source + ": no .pgm/.ppm frames found");
    std::vector<Frame> frames;
    frames.reserve(files.size());
    for (const std::string& file : files) {
        Frame frame = read_pnm(file);
        if (!frames.empty() && !frame.same_shape(frames.front()))
            throw Error(Error::Kind::dimension,
                        file + ": dimensions differ from the first frame");
        frames.push_back(std::move(frame));
    }
    return frames;
}

void write_frame_sequence(const std::string& directory, const std::vector<Frame>& frames) {
    fs::create_directories(directory);
    char name[32];
    for (std::size_t i = 0; i < frames.size(); ++i) {
        std::snprintf(name, sizeof(name), "frame_%06zu.pgm", i);
        write_pgm((fs::path(directory) / name).string(), frames[i]);
    }
}

} // namespace lgmd
