#pragma once

#include <string>
#include <vector>

#include "lgmd/grid.hpp"

namespace lgmd {

// Binary PGM (P5, maxval <= 255). Colour P6 inputs are converted to
// luminance with Y = 0.299 R + 0.587 G + 0.114 B.
Frame read_pnm(const std::string& path);

// One P5/P6 payload from an open stream; `context` names the source in
// error messages.
Frame read_pnm_payload(std::istream& in, const std::string& context);

// Reads every image from a raw stream of concatenated P5/P6 payloads.
std::vector<Frame> read_pnm_stream(const std::string& path);

// Writes 8-bit P5; values are clamped to [0, 255] and rounded.
void write_pgm(const std::string& path, const Frame& frame);

// A directory of .pgm/.ppm files (loaded in filename order) or a single
// raw-stream file. Throws Error{io|parse|dimension} naming the offender.
std::vector<Frame> load_frames(const std::string& source);

// Sorted list of the frame files load_frames() would read.
std::vector<std::string> list_frame_files(const std::string& directory);

// Writes frames as frame_000000.pgm, frame_000001.pgm, ...
void write_frame_sequence(const std::string& directory, const std::vector<Frame>& frames);

} // namespace lgmd
