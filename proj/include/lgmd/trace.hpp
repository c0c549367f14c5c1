#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "lgmd/model.hpp"

namespace lgmd {

// CSV header of the per-frame trace. Fixed; acceptance diffs depend on it.
extern const char* const kTraceHeader;

// Appends per-frame rows to an open trace stream. Floats carry 9
// significant digits, collision is written as 0/1.
class TraceWriter {
public:
    explicit TraceWriter(const std::string& path);  // throws Error{io}
    ~TraceWriter();

    TraceWriter(const TraceWriter&) = delete;
    TraceWriter& operator=(const TraceWriter&) = delete;

    void write(const FrameReport& report);
    void close();  // flush; throws Error{io} on failure

private:
    std::string path_;
    std::unique_ptr<std::ofstream> out_;
};

// Parses a trace CSV back into reports (fields carry the precision the
// format preserves). Throws Error{parse} on malformed content.
std::vector<FrameReport> read_trace(const std::string& path);

std::string format_trace_row(const FrameReport& report);

} // namespace lgmd
