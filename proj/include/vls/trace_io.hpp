#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "vls/errors.hpp"
#include "vls/textio.hpp"
#include "vls/trace.hpp"

namespace vls {

// Trace file: UTF-8 text, '#'-prefixed key=value header, one decimal sample
// per line, LF endings. 'fs' is mandatory; unknown header keys round-trip
// through the metadata map. Samples print with shortest-exact formatting so
// write -> read reproduces every double bit-for-bit.

inline constexpr int kTraceFormatVersion = 1;

inline std::string trace_to_string(const Trace& trace) {
    trace.validate();
    std::string out;
    out += "# format_version=" + std::to_string(kTraceFormatVersion) + "\n";
    out += "# fs=" + format_double(trace.sampling_rate_hz) + "\n";
    out += "# unit=" + trace.unit + "\n";
    if (trace.truth) {
        out += "# truth_breathing_bpm=" + format_double(trace.truth->breathing_bpm) + "\n";
        out += "# truth_heart_bpm=" + format_double(trace.truth->heart_bpm) + "\n";
    }
    for (const auto& [key, value] : trace.metadata)
        out += "# " + key + "=" + value + "\n";
    for (double v : trace.samples) out += format_double(v) + "\n";
    return out;
}

inline Trace trace_from_string(std::string_view text, const std::string& origin = "<string>") {
    Trace trace;
    trace.unit.clear();
    bool have_fs = false;
    bool have_version = false;
    double truth_breathing = 0.0, truth_heart = 0.0;
    bool have_truth_b = false, have_truth_h = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '#') {
            std::string_view body = trim(line.substr(1));
            if (body.empty()) continue;  // bare comment
            const auto eq = body.find('=');
            if (eq == std::string_view::npos)
                throw parse_error(origin + ": header line is not key=value", line_no);
            const std::string key{trim(body.substr(0, eq))};
            const std::string value{trim(body.substr(eq + 1))};
            try {
                if (key == "format_version") {
                    if (value != std::to_string(kTraceFormatVersion))
                        throw validation_error("unsupported format_version " + value);
                    have_version = true;
                } else if (key == "fs") {
                    trace.sampling_rate_hz = parse_double(value);
                    have_fs = true;
                } else if (key == "unit") {
                    trace.unit = value;
                } else if (key == "truth_breathing_bpm") {
                    truth_breathing = parse_double(value);
                    have_truth_b = true;
                } else if (key == "truth_heart_bpm") {
                    truth_heart = parse_double(value);
                    have_truth_h = true;
                } else {
                    trace.metadata[key] = value;
                }
            } catch (const validation_error& e) {
                throw parse_error(origin + ": " + e.what(), line_no);
            }
            continue;
        }

        double sample = 0.0;
        try {
            sample = parse_double(line);
        } catch (const validation_error&) {
            throw parse_error(origin + ": sample is not a number: '" + std::string(line) + "'",
                              line_no);
        }
        if (!std::isfinite(sample))
            throw parse_error(origin + ": non-finite sample", line_no);
        trace.samples.push_back(sample);
    }

    (void)have_version;  // absent means version 1
    if (!have_fs) throw parse_error(origin + ": missing mandatory header key 'fs'", line_no);
    if (trace.samples.empty()) throw parse_error(origin + ": no samples", line_no);
    if (!(trace.sampling_rate_hz > 0))
        throw parse_error(origin + ": fs must be positive", line_no);
    if (trace.unit.empty()) trace.unit = "W";
    if (have_truth_b != have_truth_h)
        throw parse_error(origin + ": truth requires both truth_breathing_bpm and truth_heart_bpm",
                          line_no);
    if (have_truth_b) trace.truth = GroundTruth{truth_breathing, truth_heart};
    return trace;
}

inline void write_trace(const Trace& trace, const std::string& path) {
    const std::string text = trace_to_string(trace);
    std::ofstream file(path, std::ios::binary);
    if (!file) throw io_error("cannot open '" + path + "' for writing");
    file.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!file) throw io_error("write failed for '" + path + "'");
}

inline Trace read_trace(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw io_error("cannot open '" + path + "' for reading");
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return trace_from_string(buffer.str(), path);
}

}  // namespace vls
