#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include <json.hpp>

#include "teda/error.hpp"
#include "teda/eval.hpp"
#include "teda/properties.hpp"

using namespace teda;

namespace {

std::vector<SampleVerdict> verdicts_with_outliers(std::size_t n,
                                                  std::initializer_list<std::size_t> hits) {
    std::vector<SampleVerdict> verdicts(n);
    for (std::size_t i = 0; i < n; ++i) verdicts[i].k = i + 1;
    for (std::size_t i : hits) verdicts[i].outlier = true;
    return verdicts;
}

} // namespace

TEST_CASE("score separates hits inside segments from false alarms") {
    const auto verdicts = verdicts_with_outliers(10, {3, 4, 9});
    const std::vector<FaultSegment> segments{{3, 5, "fault"}};
    const DetectionMetrics m = score(verdicts, segments);

    CHECK(m.total_samples == 10);
    CHECK(m.total_outliers == 3);
    CHECK(m.detected_segments == 1);
    REQUIRE(m.segments.size() == 1);
    CHECK(m.segments[0].detected);
    CHECK(m.segments[0].latency == 0);  // first hit right at the segment start
    CHECK(m.false_alarms == 1);         // the hit at position 9
    CHECK(m.normal_samples == 7);
    CHECK(m.false_alarms_per_1000 == doctest::Approx(1000.0 / 7.0));
}

TEST_CASE("detection latency counts from the segment start") {
    const auto verdicts = verdicts_with_outliers(10, {5});
    const DetectionMetrics m = score(verdicts, {{3, 6, "fault"}});
    REQUIRE(m.segments[0].latency.has_value());
    CHECK(*m.segments[0].latency == 2);
}

TEST_CASE("undetected segments stay unflagged") {
    const auto verdicts = verdicts_with_outliers(10, {});
    const DetectionMetrics m = score(verdicts, {{2, 4, "quiet"}});
    CHECK(m.detected_segments == 0);
    CHECK_FALSE(m.segments[0].detected);
    CHECK_FALSE(m.segments[0].latency.has_value());
    CHECK(m.false_alarms == 0);
}

TEST_CASE("scoring ignores the order segments are listed in") {
    const auto verdicts = verdicts_with_outliers(30, {4, 12, 27});
    std::vector<FaultSegment> segments{{10, 14, "b"}, {3, 5, "a"}, {25, 28, "c"}};
    const std::string reference = metrics_to_json(score(verdicts, segments));
    std::mt19937 rng(3);
    for (int i = 0; i < 5; ++i) {
        std::shuffle(segments.begin(), segments.end(), rng);
        CHECK(metrics_to_json(score(verdicts, segments)) == reference);
    }
}

TEST_CASE("score validates segments against the verdict range") {
    const auto verdicts = verdicts_with_outliers(10, {});
    CHECK_THROWS_AS(score(verdicts, {{8, 12, "late"}}), InputError);
    CHECK_THROWS_AS(score(verdicts, {{5, 3, "inverted"}}), InputError);
    CHECK_THROWS_AS(score(verdicts, {{1, 4, "a"}, {4, 6, "b"}}), ConfigError);
}

TEST_CASE("empty inputs score to zeros") {
    const DetectionMetrics m = score({}, {});
    CHECK(m.total_samples == 0);
    CHECK(m.false_alarms_per_1000 == 0);
    CHECK(m.segments.empty());
}

TEST_CASE("metrics serialize with per-segment detail") {
    const auto verdicts = verdicts_with_outliers(10, {4});
    const std::string text = metrics_to_json(score(verdicts, {{3, 6, "fault"}}));
    CHECK(text.find('\n') == std::string::npos);  // reports stay grep-friendly one-liners
    const auto parsed = nlohmann::json::parse(text);
    CHECK(parsed["total_samples"] == 10);
    CHECK(parsed["detected_segments"] == 1);
    CHECK(parsed["false_alarms"] == 0);
    CHECK(parsed["normal_samples"] == 6);
    REQUIRE(parsed["segments"].size() == 1);
    CHECK(parsed["segments"][0]["label"] == "fault");
    CHECK(parsed["segments"][0]["detected"] == true);
    CHECK(parsed["segments"][0]["latency"] == 1);
    CHECK(parsed["segments"][0]["start_k"] == 3);
    CHECK(parsed["segments"][0]["end_k"] == 6);
}

TEST_CASE("undetected segments serialize a null latency") {
    const auto verdicts = verdicts_with_outliers(10, {});
    const auto parsed =
        nlohmann::json::parse(metrics_to_json(score(verdicts, {{3, 6, "quiet"}})));
    CHECK(parsed["segments"][0]["latency"].is_null());
}

TEST_CASE("bench reports consistent arithmetic and the true outlier count") {
    const auto stream = random_stream(55, 4000, 2);
    const DetectorConfig config;
    const BenchReport report = bench(stream, config, 3);

    CHECK(report.samples == 4000);
    CHECK(report.repetitions == 3);
    CHECK(report.streams == 1);
    CHECK(report.elapsed_seconds > 0);
    CHECK(report.throughput_sps > 0);
    CHECK(report.throughput_sps ==
          doctest::Approx(static_cast<double>(report.samples) /
                          report.elapsed_seconds));

    std::uint64_t expected = 0;
    for (const SampleVerdict& v : run_stream(stream, config)) expected += v.outlier;
    CHECK(report.outliers == expected);
}

TEST_CASE("bench with parallel streams keeps per-stream results") {
    const auto stream = random_stream(56, 2000, 2);
    const DetectorConfig config;
    const BenchReport one = bench(stream, config, 2, 1);
    const BenchReport two = bench(stream, config, 2, 2);
    CHECK(two.streams == 2);
    CHECK(two.outliers == one.outliers);  // identical detectors, identical stream
    CHECK(two.throughput_sps ==
          doctest::Approx(2.0 * static_cast<double>(two.samples) /
                          two.elapsed_seconds));
}

TEST_CASE("bench validates its arguments") {
    const DetectorConfig config;
    CHECK_THROWS_AS(bench(StreamBuffer{}, config, 1), InputError);
    const auto stream = random_stream(1, 10, 1);
    CHECK_THROWS_AS(bench(stream, config, 0), ConfigError);
    CHECK_THROWS_AS(bench(stream, config, 1, 0), ConfigError);
}

TEST_CASE("bench report serializes its configuration") {
    const auto stream = random_stream(57, 100, 1);
    DetectorConfig config;
    config.variance_mode = VarianceMode::ExactPopulation;
    config.zero_variance_policy = ZeroVariancePolicy::NotOutlier;
    config.m = 2.5;
    const std::string text = bench_to_json(bench(stream, config, 1));
    CHECK(text.find('\n') == std::string::npos);  // reports stay grep-friendly one-liners
    const auto parsed = nlohmann::json::parse(text);
    CHECK(parsed["samples"] == 100);
    CHECK(parsed["variance_mode"] == "exact");
    CHECK(parsed["zero_variance"] == "not-outlier");
    CHECK(parsed["m"] == 2.5);
    CHECK(parsed["throughput_sps"].is_number());
}
