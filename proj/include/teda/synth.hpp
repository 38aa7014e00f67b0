#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "teda/stream.hpp"

namespace teda {

// Ground-truth window of injected abnormal behavior, inclusive 0-based
// sample positions.
struct FaultSegment {
    std::uint64_t start_k = 0;
    std::uint64_t end_k = 0;
    std::string label;

    std::uint64_t length() const { return end_k - start_k + 1; }
    bool contains(std::uint64_t pos) const { return pos >= start_k && pos <= end_k; }

    bool operator==(const FaultSegment&) const = default;
};

enum class FaultShape { LevelShift, PressureDropRamp, Spike };
enum class NoiseKind { Gaussian, Uniform };

struct FaultSpec {
    FaultSegment segment;
    FaultShape shape = FaultShape::LevelShift;
    Real magnitude = 0;
};

// Recipe for a synthetic stream: per-dimension baseline level plus noise,
// with fault shapes applied over declared segments. Size-1 level/noise
// vectors broadcast over all dimensions.
struct SynthSpec {
    std::uint64_t length = 0;
    std::size_t dims = 2;
    std::vector<Real> level{0};
    std::vector<Real> noise_amplitude{1};
    NoiseKind noise = NoiseKind::Gaussian;
    std::vector<FaultSpec> faults;
};

struct LabeledStream {
    StreamBuffer samples;
    std::vector<FaultSegment> segments;
    std::uint64_t seed = 0;

    bool operator==(const LabeledStream&) const = default;
};

// Deterministic generator: identical (spec, seed) pairs produce identical
// streams. Fault segments must be in range and non-overlapping.
LabeledStream generate(const SynthSpec& spec, std::uint64_t seed);

// Artificial-failure windows of the actuator-1 benchmark scenario, items
// 1..7: the fault label and the inclusive sample range it occupies.
FaultSegment damadics_segment(int item);

// Segment sidecar file: CSV of start_k,end_k,label.
void write_segments_csv(std::ostream& out, const std::vector<FaultSegment>& segments);
std::vector<FaultSegment> read_segments_csv(std::istream& in);

const char* fault_shape_name(FaultShape shape);

} // namespace teda
