#include "teda/eval.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "teda/error.hpp"

namespace teda {

DetectionMetrics score(const std::vector<SampleVerdict>& verdicts,
                       const std::vector<FaultSegment>& segments) {
    std::vector<FaultSegment> sorted(segments);
    std::sort(sorted.begin(), sorted.end(),
              [](const FaultSegment& a, const FaultSegment& b) {
                  return a.start_k < b.start_k;
              });
    std::uint64_t fault_samples = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i].start_k > sorted[i].end_k) {
            throw InputError("segment '" + sorted[i].label + "' starts after it ends");
        }
        if (sorted[i].end_k >= verdicts.size()) {
            throw InputError("segment [" + std::to_string(sorted[i].start_k) + ", " +
                             std::to_string(sorted[i].end_k) +
                             "] reaches past the " + std::to_string(verdicts.size()) +
                             " verdicts");
        }
        if (i > 0 && sorted[i - 1].end_k >= sorted[i].start_k) {
            throw ConfigError("segments overlap");
        }
        fault_samples += sorted[i].length();
    }

    DetectionMetrics metrics;
    metrics.total_samples = verdicts.size();
    metrics.segments.reserve(sorted.size());
    for (const FaultSegment& seg : sorted) {
        metrics.segments.push_back(SegmentScore{seg, false, std::nullopt});
    }

    std::size_t si = 0;
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        while (si < sorted.size() && sorted[si].end_k < i) ++si;
        if (!verdicts[i].outlier) continue;
        ++metrics.total_outliers;
        if (si < sorted.size() && sorted[si].contains(i)) {
            SegmentScore& hit = metrics.segments[si];
            if (!hit.detected) {
                hit.detected = true;
                hit.latency = i - sorted[si].start_k;
                ++metrics.detected_segments;
            }
        } else {
            ++metrics.false_alarms;
        }
    }

    metrics.normal_samples = metrics.total_samples - fault_samples;
    metrics.false_alarms_per_1000 =
        metrics.normal_samples > 0
            ? 1000.0 * static_cast<double>(metrics.false_alarms) /
                  static_cast<double>(metrics.normal_samples)
            : 0.0;
    return metrics;
}

std::string metrics_to_json(const DetectionMetrics& metrics) {
    nlohmann::json j;
    j["total_samples"] = metrics.total_samples;
    j["total_outliers"] = metrics.total_outliers;
    j["segments_total"] = metrics.segments.size();
    j["detected_segments"] = metrics.detected_segments;
    j["false_alarms"] = metrics.false_alarms;
    j["normal_samples"] = metrics.normal_samples;
    j["false_alarms_per_1000"] = metrics.false_alarms_per_1000;
    nlohmann::json segs = nlohmann::json::array();
    for (const SegmentScore& s : metrics.segments) {
        nlohmann::json seg;
        seg["start_k"] = s.segment.start_k;
        seg["end_k"] = s.segment.end_k;
        seg["label"] = s.segment.label;
        seg["detected"] = s.detected;
        if (s.latency) {
            seg["latency"] = *s.latency;
        } else {
            seg["latency"] = nullptr;
        }
        segs.push_back(std::move(seg));
    }
    j["segments"] = std::move(segs);
    return j.dump();
}

namespace {

std::uint64_t fold_stream(const StreamBuffer& stream, const DetectorConfig& config) {
    DetectorState state;
    std::uint64_t outliers = 0;
    for (std::size_t i = 0; i < stream.size(); ++i) {
        outliers += advance(state, stream.row(i), config).outlier ? 1 : 0;
    }
    return outliers;
}

} // namespace

BenchReport bench(const StreamBuffer& stream, const DetectorConfig& config,
                  std::uint64_t repetitions, std::uint64_t streams) {
    if (stream.size() == 0) throw InputError("bench needs a nonempty stream");
    if (repetitions < 1) throw ConfigError("bench needs at least one repetition");
    if (streams < 1) throw ConfigError("bench needs at least one stream");

    BenchReport report;
    report.samples = stream.size();
    report.streams = streams;
    report.repetitions = repetitions;
    report.config = config;

    std::vector<double> elapsed;
    elapsed.reserve(repetitions);
    for (std::uint64_t rep = 0; rep < repetitions; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        if (streams == 1) {
            report.outliers = fold_stream(stream, config);
        } else {
            std::vector<std::uint64_t> counts(streams, 0);
            std::vector<std::thread> workers;
            workers.reserve(streams);
            for (std::uint64_t s = 0; s < streams; ++s) {
                workers.emplace_back([&, s] { counts[s] = fold_stream(stream, config); });
            }
            for (std::thread& w : workers) w.join();
            report.outliers = counts[0];
        }
        const auto t1 = std::chrono::steady_clock::now();
        elapsed.push_back(std::chrono::duration<double>(t1 - t0).count());
    }

    std::sort(elapsed.begin(), elapsed.end());
    const std::size_t mid = elapsed.size() / 2;
    const double median = elapsed.size() % 2 == 1
                              ? elapsed[mid]
                              : 0.5 * (elapsed[mid - 1] + elapsed[mid]);
    report.elapsed_seconds = median;
    const double denom = median > 0 ? median : 1e-9;
    report.throughput_sps =
        static_cast<double>(report.samples) * static_cast<double>(streams) / denom;
    return report;
}

std::string bench_to_json(const BenchReport& report) {
    nlohmann::json j;
    j["samples"] = report.samples;
    j["streams"] = report.streams;
    j["repetitions"] = report.repetitions;
    j["elapsed_seconds"] = report.elapsed_seconds;
    j["throughput_sps"] = report.throughput_sps;
    j["outliers"] = report.outliers;
    j["m"] = report.config.m;
    j["variance_mode"] = variance_mode_name(report.config.variance_mode);
    j["zero_variance"] = zero_variance_policy_name(report.config.zero_variance_policy);
    return j.dump();
}

} // namespace teda
