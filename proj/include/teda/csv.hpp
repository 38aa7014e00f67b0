#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "teda/detector.hpp"
#include "teda/pipeline.hpp"
#include "teda/stream.hpp"

namespace teda {

// Round-trip-safe decimal rendering (17 significant digits, trailing zeros
// trimmed). Detect/synth goldens rely on this being byte-stable.
std::string format_real(Real value);

// Strict full-token parse; returns false on trailing garbage or empty input.
bool parse_real(std::string_view token, Real& out);

// Lazy row-by-row CSV sample reader. One sample per row, columns are
// features; an optional header row (any non-numeric cell in row 1) is
// skipped. Ragged rows and non-numeric cells raise ShapeError/InputError
// carrying the 1-based row number.
class CsvSampleReader {
public:
    explicit CsvSampleReader(std::istream& in) : in_(in) {}

    // Next sample in stream order, or nullopt at end of input.
    std::optional<Sample> next();

    std::size_t dims() const { return dims_; }
    std::size_t row() const { return row_; }

private:
    std::istream& in_;
    std::size_t dims_ = 0;
    std::size_t row_ = 0;
    bool started_ = false;
};

// Reads the whole source into a dense buffer (bench and the simulator want
// the stream pre-materialized).
StreamBuffer read_csv_stream(std::istream& in);

// Sample matrix with an x1..xN header.
void write_csv_stream(std::ostream& out, const StreamBuffer& samples);

// Verdict rows as k,xi,zeta,tau,threshold,outlier,degenerate with empty
// cells for unset fields and 0/1 booleans. The header/row pair exists so
// the detect command can stream verdicts without materializing them.
void write_verdicts_header(std::ostream& out);
void write_verdicts_csv(std::ostream& out, const std::vector<SampleVerdict>& verdicts);
void write_verdict_row(std::ostream& out, const SampleVerdict& verdict);
std::vector<SampleVerdict> read_verdicts_csv(std::istream& in);

// Pipeline trace rows as cycle,k,xi,zeta,threshold,outlier.
void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace);

} // namespace teda
