#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "teda/stream.hpp"

namespace teda {

// Which variance recursion the detector runs.
//
// PaperEq3 is the faithful hardware recursion:
//     s2_k = ((k-1)/k) * s2_{k-1} + (1/k) * |x_k - mu_k|^2
// It does not reproduce the population variance (for {0,2} it yields 0.5,
// not 1.0). ExactPopulation replaces the 1/k factor with 1/(k-1) for k >= 2,
// which makes s2_k equal the population variance of the prefix exactly; the
// sum-normalization identity of the eccentricity holds only in that mode.
enum class VarianceMode { PaperEq3, ExactPopulation };

// Stable CLI/report names: "paper" and "exact".
const char* variance_mode_name(VarianceMode mode);

// Full recursive detector state carried between samples. k counts samples
// seen so far; mu/sigma2 are meaningful once k >= 1.
struct DetectorState {
    std::uint64_t k = 0;
    std::vector<Real> mu;
    Real sigma2 = 0;
    // Times a variance update rounded below zero and was clamped. The
    // recursion only adds nonnegative terms, so this stays 0 in practice.
    std::uint64_t sigma2_clamps = 0;

    bool operator==(const DetectorState&) const = default;
};

// |a - b|^2, summed in index order. Shared by the variance update and the
// eccentricity so both paths see identical rounding.
Real squared_distance(std::span<const Real> a, std::span<const Real> b);

// Running mean update for sample number k (k >= 1), applied element-wise
// in place: mu <- ((k-1)/k) mu + (1/k) x. k = 1 loads x directly.
void update_mean_into(std::span<Real> mu, std::span<const Real> x, std::uint64_t k);

// Mean update on an immutable state: returns mu_k for sample x arriving as
// number state.k + 1.
std::vector<Real> update_mean(const DetectorState& state, std::span<const Real> x);

// The scalar variance recursion once the squared distance is known:
//   PaperEq3:        ((k-1)/k) s2_prev + (1/k) dist2
//   ExactPopulation: ((k-1)/k) s2_prev + dist2 / (k-1)
// Returns 0 for k <= 1. Both the sequential detector and the pipeline
// simulator funnel through this one function so their variances agree
// bit for bit.
Real variance_step(Real sigma2_prev, std::uint64_t k, Real dist2, VarianceMode mode);

// Variance update for sample x arriving as number state.k + 1; mu_new must
// already be the updated mean for this sample (the mean is updated first).
// Returns 0 for the first sample.
Real update_variance(const DetectorState& state, std::span<const Real> x,
                     std::span<const Real> mu_new, VarianceMode mode);

// Clamp a raw variance at zero, counting any (theoretically unreachable)
// negative rounding in `clamps`.
Real clamp_variance(Real raw, std::uint64_t& clamps);

// ---------------------------------------------------------------------------
// Batch oracles. Deliberately non-recursive, used to cross-check the running
// updates; keep them independent of the update path above.
// ---------------------------------------------------------------------------

// Componentwise arithmetic mean by direct summation.
std::vector<Real> batch_mean(const StreamBuffer& samples);

// Population variance (1/k) * sum_i |x_i - mu|^2 by direct two-pass summation.
Real batch_variance(const StreamBuffer& samples, std::span<const Real> mu);

// One prefix point of the unrolled recursions.
struct StatePoint {
    std::vector<Real> mu;
    Real sigma2 = 0;
};

// Evaluates the unrolled form of the recursions at every prefix, using
// prefix sums instead of the running updates:
//   mu_k     = (1/k) sum_{i<=k} x_i
//   PaperEq3:        s2_k = (1/k) sum_{i<=k} |x_i - mu_i|^2   (mu_i = prefix mean)
//   ExactPopulation: s2_k = (1/k) sum_{i<=k} |x_i - c|^2 - |mu_k - c|^2
// with c fixed at the first sample so the subtraction stays well-conditioned.
std::vector<StatePoint> unrolled_oracle(const StreamBuffer& samples, VarianceMode mode);

} // namespace teda
