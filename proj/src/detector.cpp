#include "teda/detector.hpp"

#include <cmath>
#include <string>

#include "teda/error.hpp"

namespace teda {

const char* zero_variance_policy_name(ZeroVariancePolicy policy) {
    return policy == ZeroVariancePolicy::EccentricityIsOneOverK ? "one-over-k"
                                                                : "not-outlier";
}

namespace {

void check_config(const DetectorConfig& config) {
    if (!(config.m > 0) || !std::isfinite(config.m)) {
        throw ConfigError("sensitivity m must be positive and finite");
    }
}

} // namespace

Real eccentricity_from_parts(Real dist2, Real inv_k, Real sigma2, std::uint64_t k) {
    if (k < 2) throw StateError("eccentricity needs at least two samples");
    if (!(sigma2 > 0)) throw DegenerateVarianceError("eccentricity needs positive variance");
    return inv_k + dist2 / (sigma2 * static_cast<Real>(k));
}

Real eccentricity(std::span<const Real> mu, std::span<const Real> x,
                  Real sigma2, std::uint64_t k) {
    if (mu.size() != x.size()) {
        throw ShapeError("mean has " + std::to_string(mu.size()) +
                         " dimensions, sample has " + std::to_string(x.size()));
    }
    if (!all_finite(x)) throw InputError("non-finite value in sample");
    const Real dist2 = squared_distance(mu, x);
    return eccentricity_from_parts(dist2, Real(1) / static_cast<Real>(k), sigma2, k);
}

Real typicality(Real xi) { return Real(1) - xi; }

Real normalized_eccentricity(Real xi) { return xi / Real(2); }

Real outlier_threshold(Real m, std::uint64_t k) {
    if (!(m > 0) || !std::isfinite(m)) {
        throw ConfigError("sensitivity m must be positive and finite");
    }
    if (k == 0) throw StateError("threshold undefined before the first sample");
    return (m * m + Real(1)) / (Real(2) * static_cast<Real>(k));
}

SampleVerdict classify(std::uint64_t k, Real dist2, Real inv_k, Real sigma2,
                       const DetectorConfig& config) {
    check_config(config);
    SampleVerdict v;
    v.k = k;
    if (k < 2) {
        // First sample: no spread to measure against yet.
        v.degenerate = true;
        return v;
    }
    v.threshold = outlier_threshold(config.m, k);
    if (sigma2 > 0) {
        const Real xi = eccentricity_from_parts(dist2, inv_k, sigma2, k);
        v.xi = xi;
        v.zeta = normalized_eccentricity(xi);
        v.tau = typicality(xi);
        v.outlier = *v.zeta > *v.threshold;
        return v;
    }
    // Constant prefix: variance is zero, the ratio in the eccentricity is
    // undefined.
    v.degenerate = true;
    if (config.zero_variance_policy == ZeroVariancePolicy::EccentricityIsOneOverK &&
        dist2 == 0) {
        const Real xi = inv_k;
        v.xi = xi;
        v.zeta = normalized_eccentricity(xi);
        v.tau = typicality(xi);
        v.outlier = *v.zeta > *v.threshold;
    }
    return v;
}

SampleVerdict advance(DetectorState& state, std::span<const Real> x,
                      const DetectorConfig& config) {
    check_config(config);
    if (x.empty()) throw ShapeError("empty sample");
    if (state.k == 0) {
        state.mu.resize(x.size());
    } else if (x.size() != state.mu.size()) {
        throw ShapeError("sample has " + std::to_string(x.size()) +
                         " dimensions, stream has " + std::to_string(state.mu.size()));
    }
    if (!all_finite(x)) throw InputError("non-finite value in sample");

    const std::uint64_t k = state.k + 1;
    update_mean_into(state.mu, x, k);
    const Real dist2 = squared_distance(state.mu, x);
    const Real raw = variance_step(state.sigma2, k, dist2, config.variance_mode);
    state.sigma2 = clamp_variance(raw, state.sigma2_clamps);
    state.k = k;
    return classify(k, dist2, Real(1) / static_cast<Real>(k), state.sigma2, config);
}

StepResult step(const DetectorState& state, std::span<const Real> x,
                const DetectorConfig& config) {
    StepResult result;
    result.state = state;
    result.verdict = advance(result.state, x, config);
    return result;
}

std::vector<SampleVerdict> run_stream(const StreamBuffer& samples,
                                      const DetectorConfig& config) {
    check_config(config);
    std::vector<SampleVerdict> verdicts;
    verdicts.reserve(samples.size());
    DetectorState state;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        try {
            verdicts.push_back(advance(state, samples.row(i), config));
        } catch (const InputError& e) {
            throw InputError("sample " + std::to_string(i) + ": " + e.what());
        } catch (const ShapeError& e) {
            throw ShapeError("sample " + std::to_string(i) + ": " + e.what());
        }
    }
    return verdicts;
}

} // namespace teda
