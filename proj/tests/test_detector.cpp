#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "teda/detector.hpp"
#include "teda/error.hpp"
#include "teda/properties.hpp"

using namespace teda;

namespace {

StreamBuffer make_stream(const std::vector<std::vector<Real>>& rows) {
    StreamBuffer buf(rows.empty() ? 0 : rows[0].size());
    for (const auto& row : rows) buf.push_row(row);
    return buf;
}

} // namespace

TEST_CASE("eccentricity golden value") {
    const std::vector<Real> mu{1};
    const std::vector<Real> x{2};
    // 1/2 + |1-2|^2 / (2 * 0.5) = 0.5 + 1 = 1.5, exactly representable.
    CHECK(eccentricity(mu, x, 0.5, 2) == 1.5);
    CHECK(typicality(1.5) == -0.5);
    CHECK(normalized_eccentricity(1.5) == 0.75);
}

TEST_CASE("eccentricity preconditions") {
    const std::vector<Real> mu{1};
    const std::vector<Real> x{2};
    CHECK_THROWS_AS(eccentricity(mu, x, 0.5, 1), StateError);
    CHECK_THROWS_AS(eccentricity(mu, x, 0.0, 2), DegenerateVarianceError);
    CHECK_THROWS_AS(eccentricity(mu, x, -1.0, 2), DegenerateVarianceError);
    CHECK_THROWS_AS(eccentricity(mu, std::vector<Real>{1, 2}, 0.5, 2), ShapeError);
    CHECK_THROWS_AS(eccentricity(mu, std::vector<Real>{std::nan("")}, 0.5, 2),
                    InputError);
}

TEST_CASE("threshold curve is 5/k at the default sensitivity") {
    CHECK(outlier_threshold(3, 2) == 2.5);
    CHECK(outlier_threshold(3, 10) == 0.5);
    CHECK(outlier_threshold(3, 100) == 0.05);
    CHECK(outlier_threshold(3, 1000) == 0.005);
}

TEST_CASE("threshold validates its inputs") {
    CHECK_THROWS_AS(outlier_threshold(0, 2), ConfigError);
    CHECK_THROWS_AS(outlier_threshold(-1, 2), ConfigError);
    CHECK_THROWS_AS(outlier_threshold(std::nan(""), 2), ConfigError);
    CHECK_THROWS_AS(outlier_threshold(3, 0), StateError);
}

TEST_CASE("two-sample run matches the hand-unrolled verdict") {
    const DetectorConfig config;
    const auto verdicts = run_stream(make_stream({{0}, {2}}), config);
    REQUIRE(verdicts.size() == 2);

    const SampleVerdict& first = verdicts[0];
    CHECK(first.k == 1);
    CHECK(first.degenerate);
    CHECK_FALSE(first.outlier);
    CHECK_FALSE(first.xi.has_value());
    CHECK_FALSE(first.zeta.has_value());
    CHECK_FALSE(first.tau.has_value());
    CHECK_FALSE(first.threshold.has_value());

    const SampleVerdict& second = verdicts[1];
    CHECK(second.k == 2);
    CHECK_FALSE(second.degenerate);
    CHECK(second.xi == 1.5);
    CHECK(second.zeta == 0.75);
    CHECK(second.tau == -0.5);
    CHECK(second.threshold == 2.5);
    CHECK_FALSE(second.outlier);  // 0.75 <= 2.5
}

TEST_CASE("verdict fields satisfy their algebraic ties") {
    const DetectorConfig config;
    const auto stream = random_stream(99, 400, 3);
    const auto verdicts = run_stream(stream, config);
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        const SampleVerdict& v = verdicts[i];
        CHECK(v.k == i + 1);
        if (!v.xi) continue;
        CHECK(*v.tau == Real(1) - *v.xi);
        CHECK(*v.zeta * 2 == *v.xi);
        CHECK(*v.xi >= Real(1) / static_cast<Real>(v.k));
        CHECK(*v.threshold == outlier_threshold(config.m, v.k));
    }
}

TEST_CASE("threshold comparison is strict") {
    DetectorConfig config;
    config.m = 1;
    // dist2 = 1, sigma2 = 1, k = 2: xi = 1/2 + 1/2 = 1, zeta = 1/2, and the
    // threshold (1 + 1)/4 = 1/2; equality must not flag.
    const SampleVerdict at = classify(2, 1.0, 0.5, 1.0, config);
    CHECK(at.zeta == 0.5);
    CHECK(at.threshold == 0.5);
    CHECK_FALSE(at.outlier);
    // Just past the threshold flips the decision.
    const SampleVerdict above = classify(2, 1.0, 0.5, 0.5, config);
    CHECK(*above.zeta > *above.threshold);
    CHECK(above.outlier);
}

TEST_CASE("constant streams follow the one-over-k zero-variance policy") {
    const DetectorConfig config;  // EccentricityIsOneOverK
    const auto verdicts = run_stream(make_stream({{5}, {5}, {5}}), config);
    REQUIRE(verdicts.size() == 3);
    CHECK(verdicts[1].degenerate);
    CHECK(verdicts[1].xi == 0.5);
    CHECK(verdicts[1].zeta == 0.25);
    CHECK(verdicts[1].tau == 0.5);
    CHECK_FALSE(verdicts[1].outlier);
    CHECK(verdicts[2].degenerate);
    CHECK(*verdicts[2].xi == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK_FALSE(verdicts[2].outlier);
}

TEST_CASE("constant streams can instead emit bare not-outlier verdicts") {
    DetectorConfig config;
    config.zero_variance_policy = ZeroVariancePolicy::NotOutlier;
    const auto verdicts = run_stream(make_stream({{5}, {5}}), config);
    CHECK(verdicts[1].degenerate);
    CHECK_FALSE(verdicts[1].xi.has_value());
    CHECK_FALSE(verdicts[1].outlier);
    CHECK(verdicts[1].threshold.has_value());
}

TEST_CASE("zero variance with nonzero distance never reports an eccentricity") {
    // Unreachable through advance (a nonzero distance forces a positive
    // variance) but classify must still behave when driven directly.
    const DetectorConfig config;
    const SampleVerdict v = classify(3, 4.0, Real(1) / 3, 0.0, config);
    CHECK(v.degenerate);
    CHECK_FALSE(v.xi.has_value());
    CHECK_FALSE(v.outlier);
}

TEST_CASE("a jump after a constant prefix revives the variance") {
    const DetectorConfig config;
    const auto verdicts = run_stream(make_stream({{5}, {5}, {10}}), config);
    const SampleVerdict& v = verdicts[2];
    CHECK_FALSE(v.degenerate);
    // mu3 = 20/3, sigma2_3 = (1/3)(10 - 20/3)^2 = 100/27,
    // xi = 1/3 + (100/9) / (3 * 100/27) = 4/3.
    CHECK(*v.xi == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(*v.threshold == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK_FALSE(v.outlier);
}

TEST_CASE("advance validates configuration and input") {
    DetectorState state;
    DetectorConfig config;
    config.m = 0;
    CHECK_THROWS_AS(advance(state, std::vector<Real>{1}, config), ConfigError);
    config.m = 3;
    CHECK_THROWS_AS(advance(state, std::vector<Real>{}, config), ShapeError);
    advance(state, std::vector<Real>{1, 2}, config);
    CHECK_THROWS_AS(advance(state, std::vector<Real>{1}, config), ShapeError);
    const std::vector<Real> inf{1, std::numeric_limits<Real>::infinity()};
    CHECK_THROWS_AS(advance(state, inf, config), InputError);
    CHECK(state.k == 1);  // failed advances leave the count alone
}

TEST_CASE("step leaves its input state untouched") {
    const DetectorConfig config;
    DetectorState state;
    advance(state, std::vector<Real>{1}, config);
    const DetectorState before = state;
    const StepResult result = step(state, std::vector<Real>{4}, config);
    CHECK(state == before);
    CHECK(result.state.k == 2);
    CHECK(result.verdict.k == 2);
    // Applying advance to a copy gives the identical transition.
    DetectorState replay = before;
    const SampleVerdict direct = advance(replay, std::vector<Real>{4}, config);
    CHECK(replay == result.state);
    CHECK(direct == result.verdict);
}

TEST_CASE("run_stream reports the failing sample position") {
    StreamBuffer stream(1);
    stream.push_row(std::vector<Real>{1});
    stream.push_row(std::vector<Real>{std::nan("")});
    const DetectorConfig config;
    CHECK_THROWS_WITH_AS(run_stream(stream, config),
                         doctest::Contains("sample 1"), InputError);
}

TEST_CASE("negative sensitivity never classifies") {
    DetectorConfig config;
    config.m = -3;
    CHECK_THROWS_AS(run_stream(make_stream({{0}, {2}}), config), ConfigError);
}

TEST_CASE("policy names are stable") {
    CHECK(std::string(zero_variance_policy_name(
              ZeroVariancePolicy::EccentricityIsOneOverK)) == "one-over-k");
    CHECK(std::string(zero_variance_policy_name(ZeroVariancePolicy::NotOutlier)) ==
          "not-outlier");
}
