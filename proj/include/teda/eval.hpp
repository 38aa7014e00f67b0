#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "teda/detector.hpp"
#include "teda/synth.hpp"

namespace teda {

// Detection quality of a verdict sequence against ground-truth segments.
struct SegmentScore {
    FaultSegment segment;
    bool detected = false;
    // First flagged position minus segment start, when detected.
    std::optional<std::uint64_t> latency;
};

struct DetectionMetrics {
    std::vector<SegmentScore> segments;
    std::uint64_t detected_segments = 0;
    std::uint64_t false_alarms = 0;       // outlier verdicts outside all segments
    std::uint64_t normal_samples = 0;
    double false_alarms_per_1000 = 0;
    std::uint64_t total_samples = 0;
    std::uint64_t total_outliers = 0;
};

// A segment counts as detected iff at least one outlier verdict falls inside
// it; outliers outside every segment are false alarms. Segment order does
// not matter; segments reaching past the verdict range are an error.
DetectionMetrics score(const std::vector<SampleVerdict>& verdicts,
                       const std::vector<FaultSegment>& segments);

std::string metrics_to_json(const DetectionMetrics& metrics);

// Wall-clock throughput of the software detector.
struct BenchReport {
    std::uint64_t samples = 0;      // stream length (per pass)
    std::uint64_t streams = 1;      // parallel independent detectors
    std::uint64_t repetitions = 1;
    double elapsed_seconds = 0;     // median over repetitions
    double throughput_sps = 0;      // samples * streams / elapsed_seconds
    std::uint64_t outliers = 0;     // verdict checksum; verdicts are discarded
    DetectorConfig config;
};

// Folds the detector over the pre-materialized stream `repetitions` times
// and reports the median pass. With streams > 1, each repetition runs that
// many independent detectors in parallel and the throughput is aggregate.
BenchReport bench(const StreamBuffer& stream, const DetectorConfig& config,
                  std::uint64_t repetitions, std::uint64_t streams = 1);

std::string bench_to_json(const BenchReport& report);

} // namespace teda
