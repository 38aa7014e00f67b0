#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "teda/recursive_stats.hpp"
#include "teda/stream.hpp"

namespace teda {

// What to emit when the variance is zero at k >= 2 (constant prefix), where
// the eccentricity's sigma2 > 0 precondition fails.
//   EccentricityIsOneOverK: report xi = 1/k, the limit of a perfectly
//                           typical sample (only when the distance term is
//                           also zero). Never an outlier.
//   NotOutlier:             leave xi/zeta/tau unset, classify as normal.
enum class ZeroVariancePolicy { EccentricityIsOneOverK, NotOutlier };

// Stable CLI/report names: "one-over-k" and "not-outlier".
const char* zero_variance_policy_name(ZeroVariancePolicy policy);

struct DetectorConfig {
    Real m = 3;
    VarianceMode variance_mode = VarianceMode::PaperEq3;
    ZeroVariancePolicy zero_variance_policy = ZeroVariancePolicy::EccentricityIsOneOverK;

    bool operator==(const DetectorConfig&) const = default;
};

// Per-sample classification. Fields are unset for k = 1 and (depending on
// policy) for zero-variance prefixes; "unset" is an absent optional, never
// NaN. When set: tau == 1 - xi and zeta == xi / 2 bit-exactly.
struct SampleVerdict {
    std::uint64_t k = 0;
    std::optional<Real> xi;
    std::optional<Real> zeta;
    std::optional<Real> tau;
    std::optional<Real> threshold;
    bool outlier = false;
    bool degenerate = false;

    bool operator==(const SampleVerdict&) const = default;
};

// Eccentricity of x against mean mu, variance sigma2 at iteration k:
//   xi = 1/k + |mu - x|^2 / (k * sigma2)
// Requires k >= 2 and sigma2 > 0; always >= 1/k.
Real eccentricity(std::span<const Real> mu, std::span<const Real> x,
                  Real sigma2, std::uint64_t k);

// Same formula from parts already computed elsewhere (the pipelined
// architecture reuses the distance and 1/k produced by the variance stage).
Real eccentricity_from_parts(Real dist2, Real inv_k, Real sigma2, std::uint64_t k);

// tau = 1 - xi.
Real typicality(Real xi);

// zeta = xi / 2.
Real normalized_eccentricity(Real xi);

// Chebyshev-equivalent comparison threshold (m^2 + 1) / (2k); m = 3 gives
// the familiar 5/k curve. m must be positive.
Real outlier_threshold(Real m, std::uint64_t k);

// Classify sample number k from the pieces the update pass produced. This is
// the single place the k = 1 branch, the zero-variance policies and the
// strict threshold comparison live; both the sequential detector and the
// pipeline simulator end with this call, which is what makes their verdicts
// bit-identical.
SampleVerdict classify(std::uint64_t k, Real dist2, Real inv_k, Real sigma2,
                       const DetectorConfig& config);

// One detector iteration, mutating state in place. Returns the verdict for
// x (sample number state.k + 1). Throws InputError/ShapeError on bad input;
// zero variance never aborts, it is handled by the configured policy.
SampleVerdict advance(DetectorState& state, std::span<const Real> x,
                      const DetectorConfig& config);

// Pure form of advance: leaves the argument state untouched.
struct StepResult {
    DetectorState state;
    SampleVerdict verdict;
};
StepResult step(const DetectorState& state, std::span<const Real> x,
                const DetectorConfig& config);

// Folds advance over a materialized stream: one verdict per sample, in
// order, single pass, working state independent of stream length. The first
// malformed sample aborts with its position in the message.
std::vector<SampleVerdict> run_stream(const StreamBuffer& samples,
                                      const DetectorConfig& config);

} // namespace teda
