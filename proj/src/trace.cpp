#include "lgmd/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "lgmd/error.hpp"

namespace lgmd {

const char* const kTraceHeader =
    "frame,time_ms,F,F_hat,w,tau_g_hat,k,K,K_adapted,spikes,spike_freq,collision";

namespace {

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

} // namespace

std::string format_trace_row(const FrameReport& r) {
    std::ostringstream row;
    row << r.frame_index << ',' << fmt9(r.time_ms) << ',' << fmt9(r.ffi_raw) << ','
        << fmt9(r.ffi_delayed) << ',' << fmt9(r.inhibition_bias) << ','
        << fmt9(r.group_latency_ms) << ',' << fmt9(r.pooled) << ',' << fmt9(r.potential) << ','
        << fmt9(r.potential_adapted) << ',' << r.spikes << ',' << fmt9(r.spike_rate_hz) << ','
        << (r.collision ? 1 : 0);
    return row.str();
}

TraceWriter::TraceWriter(const std::string& path)
    : path_(path), out_(std::make_unique<std::ofstream>(path)) {
    if (!*out_) throw Error(Error::Kind::io, path + ": cannot open for writing");
    *out_ << kTraceHeader << "\n";
}

TraceWriter::~TraceWriter() = default;

void TraceWriter::write(const FrameReport& report) {
    if (!out_) throw Error(Error::Kind::io, path_ + ": trace already closed");
    *out_ << format_trace_row(report) << "\n";
}

void TraceWriter::close() {
    if (!out_) return;
    out_->flush();
    const bool ok = static_cast<bool>(*out_);
    out_.reset();
    if (!ok) throw Error(Error::Kind::io, path_ + ": write failed");
}

std::vector<FrameReport> read_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Error::Kind::io, path + ": cannot open");
    std::string line;
    if (!std::getline(in, line)) throw Error(Error::Kind::parse, path + ": empty file");
    if (line != kTraceHeader) throw Error(Error::Kind::parse, path + ": unexpected header");

    std::vector<FrameReport> reports;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 12)
            throw Error(Error::Kind::parse,
                        path + ": line " + std::to_string(line_no) + ": expected 12 fields");
        try {
            FrameReport r;
            r.frame_index = std::stoll(fields[0]);
            r.time_ms = std::stod(fields[1]);
            r.ffi_raw = std::stod(fields[2]);
            r.ffi_delayed = std::stod(fields[3]);
            r.inhibition_bias = std::stod(fields[4]);
            r.group_latency_ms = std::stod(fields[5]);
            r.pooled = std::stod(fields[6]);
            r.potential = std::stod(fields[7]);
            r.potential_adapted = std::stod(fields[8]);
            r.spikes = std::stoi(fields[9]);
            r.spike_rate_hz = std::stod(fields[10]);
            r.collision = fields[11] == "1";
            reports.push_back(r);
        } catch (const std::exception&) {
            throw Error(Error::Kind::parse,
                        path + ": line " + std::to_string(line_no) + ": malformed number");
        }
    }
    return reports;
}

} // namespace lgmd
