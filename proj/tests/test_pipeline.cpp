#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "teda/error.hpp"
#include "teda/pipeline.hpp"
#include "teda/properties.hpp"

using namespace teda;

namespace {

StreamBuffer make_stream(const std::vector<std::vector<Real>>& rows) {
    StreamBuffer buf(rows.empty() ? 0 : rows[0].size());
    for (const auto& row : rows) buf.push_row(row);
    return buf;
}

} // namespace

TEST_CASE("a single sample takes three cycles to classify") {
    PipelineState pipe;
    const DetectorConfig config;
    const std::vector<Real> x{7};

    CHECK_FALSE(tick(pipe, std::span<const Real>(x), config).has_value());  // cycle 0
    CHECK(pipe.occupied());
    CHECK_FALSE(tick(pipe, std::nullopt, config).has_value());              // cycle 1
    CHECK_FALSE(tick(pipe, std::nullopt, config).has_value());              // cycle 2
    const auto verdict = tick(pipe, std::nullopt, config);                  // cycle 3
    REQUIRE(verdict.has_value());
    CHECK(verdict->k == 1);
    CHECK(verdict->degenerate);
    CHECK_FALSE(pipe.occupied());
    CHECK(pipe.cycle == 4);
}

TEST_CASE("two-sample trace carries the hand-unrolled verdict") {
    const auto trace = simulate(make_stream({{0}, {2}}), DetectorConfig{});
    REQUIRE(trace.size() == 2);
    CHECK(trace[0].cycle == 3);
    CHECK(trace[0].verdict.k == 1);
    CHECK(trace[0].verdict.degenerate);
    CHECK(trace[1].cycle == 4);
    CHECK(trace[1].verdict.k == 2);
    CHECK(trace[1].verdict.xi == 1.5);
    CHECK(trace[1].verdict.zeta == 0.75);
    CHECK(trace[1].verdict.threshold == 2.5);
    CHECK_FALSE(trace[1].verdict.outlier);
}

TEST_CASE("ten back-to-back samples classify at cycles 3 through 12") {
    const auto stream = random_stream(5, 10, 2);
    const auto trace = simulate(stream, DetectorConfig{});
    REQUIRE(trace.size() == 10);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        CHECK(trace[i].cycle == i + 3);
        CHECK(trace[i].verdict.k == i + 1);
    }
}

TEST_CASE("bubbles delay verdicts but never change them") {
    const auto stream = make_stream({{1}, {2}, {3}});
    const auto sequential = run_stream(stream, DetectorConfig{});

    PipelineState pipe;
    const DetectorConfig config;
    std::vector<std::pair<std::uint64_t, SampleVerdict>> got;
    auto drive = [&](std::optional<std::span<const Real>> input) {
        const std::uint64_t cycle = pipe.cycle;
        if (auto v = tick(pipe, input, config)) got.emplace_back(cycle, *v);
    };

    drive(stream.row(0));   // cycle 0
    drive(std::nullopt);    // cycle 1, bubble
    drive(stream.row(1));   // cycle 2
    drive(std::nullopt);    // cycle 3 -> verdict of sample 0
    drive(std::nullopt);    // cycle 4, bubble
    drive(stream.row(2));   // cycle 5 -> verdict of sample 1
    while (pipe.occupied()) drive(std::nullopt);

    REQUIRE(got.size() == 3);
    CHECK(got[0].first == 3);  // ingested at 0
    CHECK(got[1].first == 5);  // ingested at 2
    CHECK(got[2].first == 8);  // ingested at 5
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].second == sequential[i]);
    }
}

TEST_CASE("pipeline verdicts are bit-identical to the sequential detector") {
    for (VarianceMode mode : {VarianceMode::PaperEq3, VarianceMode::ExactPopulation}) {
        DetectorConfig config;
        config.variance_mode = mode;
        for (std::uint64_t seed : {11u, 12u, 13u}) {
            const auto stream = random_stream(seed, 257, 1 + seed % 5);
            const auto sequential = run_stream(stream, config);
            const auto trace = simulate(stream, config);
            REQUIRE(trace.size() == sequential.size());
            for (std::size_t i = 0; i < trace.size(); ++i) {
                CHECK(trace[i].verdict == sequential[i]);
                CHECK(trace[i].cycle == i + 3);
            }
        }
    }
}

TEST_CASE("draining empties the pipeline and extra ticks are inert") {
    PipelineState pipe;
    const DetectorConfig config;
    const std::vector<Real> x{1};
    tick(pipe, std::span<const Real>(x), config);
    while (pipe.occupied()) tick(pipe, std::nullopt, config);
    CHECK(pipe.cycle == 4);
    CHECK_FALSE(tick(pipe, std::nullopt, config).has_value());
    CHECK_FALSE(tick(pipe, std::nullopt, config).has_value());
    CHECK(pipe.cycle == 6);  // the clock keeps running
    CHECK(pipe.mean.k == 1); // the recursion state does not
}

TEST_CASE("an empty stream produces an empty trace") {
    CHECK(simulate(StreamBuffer{}, DetectorConfig{}).empty());
}

TEST_CASE("the pipeline validates samples like the sequential path") {
    PipelineState pipe;
    const DetectorConfig config;
    const std::vector<Real> x{1, 2};
    tick(pipe, std::span<const Real>(x), config);
    const std::vector<Real> ragged{1};
    CHECK_THROWS_AS(tick(pipe, std::span<const Real>(ragged), config), ShapeError);
    const std::vector<Real> bad{1, std::numeric_limits<Real>::quiet_NaN()};
    CHECK_THROWS_AS(tick(pipe, std::span<const Real>(bad), config), InputError);
}

TEST_CASE("timing model reproduces the published operating point") {
    const TimingModel model{138};
    CHECK(initial_delay_ns(model) == 414.0);
    CHECK(sample_period_ns(model) == 138.0);
    CHECK(throughput_sps(model) == doctest::Approx(7246376.81).epsilon(1e-8));
    CHECK(throughput_sps(model) > 7.2e6);
    CHECK(throughput_sps(model) < 7.25e6);
}

TEST_CASE("timing model scales linearly in the critical path") {
    const TimingModel fast{10};
    CHECK(initial_delay_ns(fast) == 30.0);
    CHECK(throughput_sps(fast) == 1e8);
}

TEST_CASE("timing model rejects nonpositive critical paths") {
    CHECK_THROWS_AS(initial_delay_ns(TimingModel{0}), ConfigError);
    CHECK_THROWS_AS(sample_period_ns(TimingModel{-1}), ConfigError);
    CHECK_THROWS_AS(throughput_sps(TimingModel{std::numeric_limits<Real>::infinity()}),
                    ConfigError);
}
