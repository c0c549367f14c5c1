#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#include "lgmd/grid.hpp"

namespace testutil {

// Scratch directory removed when the test ends.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("lgmd_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::string str() const { return path_.string(); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline lgmd::Frame random_frame(int width, int height, std::mt19937& rng) {
    std::uniform_real_distribution<double> lum(0.0, 255.0);
    lgmd::Frame f(width, height);
    for (double& v : f.data) v = lum(rng);
    return f;
}

// Integer-valued random frame (what a PGM file can hold).
inline lgmd::Frame random_frame_u8(int width, int height, std::mt19937& rng) {
    std::uniform_int_distribution<int> lum(0, 255);
    lgmd::Frame f(width, height);
    for (double& v : f.data) v = lum(rng);
    return f;
}

inline std::vector<lgmd::Frame> random_sequence(int width, int height, int count,
                                                unsigned seed) {
    std::mt19937 rng(seed);
    std::vector<lgmd::Frame> frames;
    frames.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) frames.push_back(random_frame(width, height, rng));
    return frames;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace testutil
