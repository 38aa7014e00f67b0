#include "teda/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <string>

#include "teda/error.hpp"

namespace teda {

namespace {

std::vector<Real> broadcast(const std::vector<Real>& values, std::size_t dims,
                            const char* what) {
    if (values.size() == 1) return std::vector<Real>(dims, values[0]);
    if (values.size() == dims) return values;
    throw ConfigError(std::string(what) + " must have 1 or dims entries, got " +
                      std::to_string(values.size()));
}

void check_spec(const SynthSpec& spec) {
    if (spec.length < 2) throw ConfigError("stream length must be at least 2");
    if (spec.dims < 1) throw ConfigError("stream needs at least one dimension");
    for (Real v : spec.level) {
        if (!std::isfinite(v)) throw ConfigError("baseline level must be finite");
    }
    for (Real v : spec.noise_amplitude) {
        if (!std::isfinite(v) || v < 0) {
            throw ConfigError("noise amplitude must be finite and nonnegative");
        }
    }
    for (const FaultSpec& fault : spec.faults) {
        const FaultSegment& seg = fault.segment;
        if (seg.start_k > seg.end_k) {
            throw ConfigError("fault segment starts after it ends");
        }
        if (seg.end_k >= spec.length) {
            throw ConfigError("fault segment [" + std::to_string(seg.start_k) + ", " +
                              std::to_string(seg.end_k) + "] exceeds stream length " +
                              std::to_string(spec.length));
        }
        if (!std::isfinite(fault.magnitude)) {
            throw ConfigError("fault magnitude must be finite");
        }
    }
}

// Deterministic fault offset added on top of the clean signal at `pos`,
// applied to every dimension. The ramp reaches its full drop at the segment
// end and already deviates on its first sample, so every labeled sample
// really is abnormal.
Real fault_offset(const FaultSpec& fault, std::uint64_t pos) {
    if (!fault.segment.contains(pos)) return 0;
    switch (fault.shape) {
    case FaultShape::LevelShift:
        return fault.magnitude;
    case FaultShape::PressureDropRamp: {
        const Real done = static_cast<Real>(pos - fault.segment.start_k + 1);
        return -fault.magnitude * done / static_cast<Real>(fault.segment.length());
    }
    case FaultShape::Spike:
        return pos == fault.segment.start_k ? fault.magnitude : Real(0);
    }
    return 0;
}

} // namespace

LabeledStream generate(const SynthSpec& spec, std::uint64_t seed) {
    check_spec(spec);
    const std::vector<Real> level = broadcast(spec.level, spec.dims, "level");
    const std::vector<Real> amplitude =
        broadcast(spec.noise_amplitude, spec.dims, "noise amplitude");

    std::vector<const FaultSpec*> faults;
    faults.reserve(spec.faults.size());
    for (const FaultSpec& f : spec.faults) faults.push_back(&f);
    std::sort(faults.begin(), faults.end(), [](const FaultSpec* a, const FaultSpec* b) {
        return a->segment.start_k < b->segment.start_k;
    });
    for (std::size_t i = 1; i < faults.size(); ++i) {
        if (faults[i - 1]->segment.end_k >= faults[i]->segment.start_k) {
            throw ConfigError("fault segments overlap");
        }
    }

    // Noise is drawn sample-major, dimension-minor from one generator, and
    // fault offsets are added afterwards: the same seed produces the same
    // noise realization with or without faults.
    std::mt19937_64 rng(seed);
    std::normal_distribution<Real> gauss(0, 1);
    std::uniform_real_distribution<Real> uniform(-1, 1);

    LabeledStream out;
    out.seed = seed;
    out.samples = StreamBuffer(spec.dims);
    out.samples.reserve_rows(spec.length);

    std::vector<Real> row(spec.dims);
    std::size_t next_fault = 0;
    for (std::uint64_t pos = 0; pos < spec.length; ++pos) {
        for (std::size_t d = 0; d < spec.dims; ++d) {
            const Real noise = spec.noise == NoiseKind::Gaussian ? gauss(rng) : uniform(rng);
            row[d] = level[d] + amplitude[d] * noise;
        }
        while (next_fault < faults.size() && faults[next_fault]->segment.end_k < pos) {
            ++next_fault;
        }
        if (next_fault < faults.size()) {
            const Real offset = fault_offset(*faults[next_fault], pos);
            for (Real& v : row) v += offset;
        }
        out.samples.push_row(row);
    }

    out.segments.reserve(faults.size());
    for (const FaultSpec* f : faults) {
        FaultSegment seg = f->segment;
        if (seg.label.empty()) seg.label = fault_shape_name(f->shape);
        out.segments.push_back(std::move(seg));
    }
    return out;
}

FaultSegment damadics_segment(int item) {
    switch (item) {
    case 1: return {58800, 59800, "f18"};
    case 2: return {57275, 57550, "f16"};
    case 3: return {58830, 58930, "f18"};
    case 4: return {58520, 58625, "f18"};
    case 5: return {54600, 54700, "f18"};
    case 6: return {56670, 56770, "f16"};
    case 7: return {37780, 38400, "f17"};
    default:
        throw ConfigError("unknown benchmark item " + std::to_string(item) +
                          " (valid: 1..7)");
    }
}

void write_segments_csv(std::ostream& out, const std::vector<FaultSegment>& segments) {
    out << "start_k,end_k,label\n";
    for (const FaultSegment& seg : segments) {
        out << seg.start_k << ',' << seg.end_k << ',' << seg.label << '\n';
    }
}

std::vector<FaultSegment> read_segments_csv(std::istream& in) {
    auto strip = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() &&
               (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
            s.remove_suffix(1);
        }
        return s;
    };
    auto parse_uint = [&](std::string_view token, std::uint64_t& out_value) {
        token = strip(token);
        if (token.empty()) return false;
        const auto res =
            std::from_chars(token.data(), token.data() + token.size(), out_value);
        return res.ec == std::errc{} && res.ptr == token.data() + token.size();
    };

    std::string line;
    if (!std::getline(in, line)) return {};
    if (strip(line) != "start_k,end_k,label") {
        throw InputError("segment file header mismatch: '" +
                         std::string(strip(line)) + "'");
    }
    std::vector<FaultSegment> segments;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        const std::string_view view = strip(line);
        if (view.empty()) continue;
        const std::size_t c1 = view.find(',');
        const std::size_t c2 = c1 == std::string_view::npos
                                   ? std::string_view::npos
                                   : view.find(',', c1 + 1);
        if (c2 == std::string_view::npos) {
            throw ShapeError("row " + std::to_string(row) +
                             ": expected start_k,end_k,label");
        }
        FaultSegment seg;
        if (!parse_uint(view.substr(0, c1), seg.start_k) ||
            !parse_uint(view.substr(c1 + 1, c2 - c1 - 1), seg.end_k)) {
            throw InputError("row " + std::to_string(row) +
                             ": cannot parse segment bounds");
        }
        if (seg.start_k > seg.end_k) {
            throw InputError("row " + std::to_string(row) +
                             ": segment starts after it ends");
        }
        seg.label = std::string(strip(view.substr(c2 + 1)));
        segments.push_back(std::move(seg));
    }
    return segments;
}

const char* fault_shape_name(FaultShape shape) {
    switch (shape) {
    case FaultShape::LevelShift: return "level-shift";
    case FaultShape::PressureDropRamp: return "pressure-drop";
    case FaultShape::Spike: return "spike";
    }
    return "unknown";
}

} // namespace teda
