#include "teda/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "teda/error.hpp"

namespace teda {

std::string format_real(Real value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                   std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(trim(line.substr(start)));
            return cells;
        }
        cells.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

bool parse_uint(std::string_view token, std::uint64_t& out) {
    token = trim(token);
    if (token.empty()) return false;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), out);
    return res.ec == std::errc{} && res.ptr == token.data() + token.size();
}

std::optional<Real> parse_optional_cell(std::string_view cell, std::size_t row,
                                        std::size_t col) {
    if (trim(cell).empty()) return std::nullopt;
    Real v = 0;
    if (!parse_real(cell, v)) {
        throw InputError("row " + std::to_string(row) + ", column " +
                         std::to_string(col) + ": cannot parse '" +
                         std::string(cell) + "'");
    }
    return v;
}

bool parse_bool_cell(std::string_view cell, std::size_t row, std::size_t col) {
    const std::string_view t = trim(cell);
    if (t == "0") return false;
    if (t == "1") return true;
    throw InputError("row " + std::to_string(row) + ", column " +
                     std::to_string(col) + ": boolean cell must be 0 or 1, got '" +
                     std::string(cell) + "'");
}

void write_optional(std::ostream& out, const std::optional<Real>& value) {
    if (value) out << format_real(*value);
}

} // namespace

bool parse_real(std::string_view token, Real& out) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') {
        token.remove_prefix(1);
        if (token.empty() || token.front() == '+' || token.front() == '-') return false;
    }
    if (token.empty()) return false;
    double parsed = 0;
    const auto res =
        std::from_chars(token.data(), token.data() + token.size(), parsed);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) return false;
    out = static_cast<Real>(parsed);
    return true;
}

std::optional<Sample> CsvSampleReader::next() {
    std::string line;
    while (std::getline(in_, line)) {
        ++row_;
        const std::string_view view = trim(line);
        if (view.empty()) continue;

        const auto cells = split_cells(view);
        const bool first = !started_;
        started_ = true;
        if (first) dims_ = cells.size();

        if (cells.size() != dims_) {
            throw ShapeError("row " + std::to_string(row_) + ": expected " +
                             std::to_string(dims_) + " cells, got " +
                             std::to_string(cells.size()));
        }

        Sample values(cells.size());
        bool parsed_all = true;
        std::size_t bad_col = 0;
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (!parse_real(cells[j], values[j])) {
                parsed_all = false;
                bad_col = j;
                break;
            }
        }
        if (!parsed_all) {
            if (first) continue;  // header row
            throw InputError("row " + std::to_string(row_) + ", column " +
                             std::to_string(bad_col + 1) + ": cannot parse '" +
                             std::string(cells[bad_col]) + "'");
        }
        for (std::size_t j = 0; j < values.size(); ++j) {
            if (!std::isfinite(values[j])) {
                throw InputError("row " + std::to_string(row_) + ", column " +
                                 std::to_string(j + 1) + ": non-finite value");
            }
        }
        return values;
    }
    return std::nullopt;
}

StreamBuffer read_csv_stream(std::istream& in) {
    CsvSampleReader reader(in);
    StreamBuffer samples;
    while (auto sample = reader.next()) {
        samples.push_row(*sample);
    }
    return samples;
}

void write_csv_stream(std::ostream& out, const StreamBuffer& samples) {
    for (std::size_t d = 0; d < samples.dims(); ++d) {
        if (d) out << ',';
        out << 'x' << d + 1;
    }
    out << '\n';
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto row = samples.row(i);
        for (std::size_t d = 0; d < row.size(); ++d) {
            if (d) out << ',';
            out << format_real(row[d]);
        }
        out << '\n';
    }
}

void write_verdicts_header(std::ostream& out) {
    out << "k,xi,zeta,tau,threshold,outlier,degenerate\n";
}

void write_verdict_row(std::ostream& out, const SampleVerdict& verdict) {
    out << verdict.k << ',';
    write_optional(out, verdict.xi);
    out << ',';
    write_optional(out, verdict.zeta);
    out << ',';
    write_optional(out, verdict.tau);
    out << ',';
    write_optional(out, verdict.threshold);
    out << ',' << (verdict.outlier ? '1' : '0') << ','
        << (verdict.degenerate ? '1' : '0') << '\n';
}

void write_verdicts_csv(std::ostream& out, const std::vector<SampleVerdict>& verdicts) {
    write_verdicts_header(out);
    for (const SampleVerdict& v : verdicts) write_verdict_row(out, v);
}

std::vector<SampleVerdict> read_verdicts_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) return {};
    if (trim(line) != "k,xi,zeta,tau,threshold,outlier,degenerate") {
        throw InputError("verdict file header mismatch: '" + std::string(trim(line)) +
                         "'");
    }
    std::vector<SampleVerdict> verdicts;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        const std::string_view view = trim(line);
        if (view.empty()) continue;
        const auto cells = split_cells(view);
        if (cells.size() != 7) {
            throw ShapeError("row " + std::to_string(row) + ": expected 7 cells, got " +
                             std::to_string(cells.size()));
        }
        SampleVerdict v;
        if (!parse_uint(cells[0], v.k)) {
            throw InputError("row " + std::to_string(row) +
                             ", column 1: cannot parse sample number '" +
                             std::string(cells[0]) + "'");
        }
        v.xi = parse_optional_cell(cells[1], row, 2);
        v.zeta = parse_optional_cell(cells[2], row, 3);
        v.tau = parse_optional_cell(cells[3], row, 4);
        v.threshold = parse_optional_cell(cells[4], row, 5);
        v.outlier = parse_bool_cell(cells[5], row, 6);
        v.degenerate = parse_bool_cell(cells[6], row, 7);
        verdicts.push_back(std::move(v));
    }
    return verdicts;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace) {
    out << "cycle,k,xi,zeta,threshold,outlier\n";
    for (const TraceEntry& entry : trace) {
        out << entry.cycle << ',' << entry.verdict.k << ',';
        write_optional(out, entry.verdict.xi);
        out << ',';
        write_optional(out, entry.verdict.zeta);
        out << ',';
        write_optional(out, entry.verdict.threshold);
        out << ',' << (entry.verdict.outlier ? '1' : '0') << '\n';
    }
}

} // namespace teda
