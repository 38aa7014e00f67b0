#include "teda/recursive_stats.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "teda/error.hpp"

namespace teda {

const char* variance_mode_name(VarianceMode mode) {
    return mode == VarianceMode::PaperEq3 ? "paper" : "exact";
}

bool all_finite(std::span<const Real> x) {
    for (Real v : x) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

void StreamBuffer::push_row(std::span<const Real> x) {
    if (x.empty()) throw ShapeError("empty sample row");
    if (dims_ == 0) {
        dims_ = x.size();
    } else if (x.size() != dims_) {
        throw ShapeError("sample has " + std::to_string(x.size()) +
                         " dimensions, stream has " + std::to_string(dims_));
    }
    data_.insert(data_.end(), x.begin(), x.end());
}

Real squared_distance(std::span<const Real> a, std::span<const Real> b) {
    Real acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Real d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

void update_mean_into(std::span<Real> mu, std::span<const Real> x, std::uint64_t k) {
    if (k <= 1) {
        for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = x[i];
        return;
    }
    const Real ratio = static_cast<Real>(k - 1) / static_cast<Real>(k);
    const Real inv_k = Real(1) / static_cast<Real>(k);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        mu[i] = ratio * mu[i] + inv_k * x[i];
    }
}

namespace {

void check_sample_shape(const DetectorState& state, std::span<const Real> x) {
    if (x.empty()) throw ShapeError("empty sample");
    if (state.k > 0 && x.size() != state.mu.size()) {
        throw ShapeError("sample has " + std::to_string(x.size()) +
                         " dimensions, stream has " + std::to_string(state.mu.size()));
    }
    if (!all_finite(x)) throw InputError("non-finite value in sample");
}

} // namespace

std::vector<Real> update_mean(const DetectorState& state, std::span<const Real> x) {
    check_sample_shape(state, x);
    std::vector<Real> mu(state.mu);
    mu.resize(x.size());
    update_mean_into(mu, x, state.k + 1);
    return mu;
}

Real variance_step(Real sigma2_prev, std::uint64_t k, Real dist2, VarianceMode mode) {
    if (k <= 1) return 0;
    const Real ratio = static_cast<Real>(k - 1) / static_cast<Real>(k);
    if (mode == VarianceMode::PaperEq3) {
        const Real inv_k = Real(1) / static_cast<Real>(k);
        return ratio * sigma2_prev + inv_k * dist2;
    }
    return ratio * sigma2_prev + dist2 / static_cast<Real>(k - 1);
}

Real update_variance(const DetectorState& state, std::span<const Real> x,
                     std::span<const Real> mu_new, VarianceMode mode) {
    check_sample_shape(state, x);
    if (mu_new.size() != x.size()) {
        throw ShapeError("updated mean has " + std::to_string(mu_new.size()) +
                         " dimensions, sample has " + std::to_string(x.size()));
    }
    const std::uint64_t k = state.k + 1;
    const Real dist2 = squared_distance(mu_new, x);
    return variance_step(state.sigma2, k, dist2, mode);
}

Real clamp_variance(Real raw, std::uint64_t& clamps) {
    if (raw < 0) {
        ++clamps;
        return 0;
    }
    return raw;
}

std::vector<Real> batch_mean(const StreamBuffer& samples) {
    if (samples.size() == 0) throw InputError("batch_mean of empty stream");
    const std::size_t dims = samples.dims();
    std::vector<Real> sum(dims, 0);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto row = samples.row(i);
        for (std::size_t d = 0; d < dims; ++d) sum[d] += row[d];
    }
    const Real inv_n = Real(1) / static_cast<Real>(samples.size());
    for (Real& v : sum) v *= inv_n;
    return sum;
}

Real batch_variance(const StreamBuffer& samples, std::span<const Real> mu) {
    if (samples.size() == 0) throw InputError("batch_variance of empty stream");
    if (mu.size() != samples.dims()) {
        throw ShapeError("mean has " + std::to_string(mu.size()) +
                         " dimensions, stream has " + std::to_string(samples.dims()));
    }
    Real acc = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto row = samples.row(i);
        for (std::size_t d = 0; d < mu.size(); ++d) {
            const Real diff = row[d] - mu[d];
            acc += diff * diff;
        }
    }
    return acc / static_cast<Real>(samples.size());
}

std::vector<StatePoint> unrolled_oracle(const StreamBuffer& samples, VarianceMode mode) {
    const std::size_t n = samples.size();
    if (n == 0) throw InputError("unrolled_oracle of empty stream");
    const std::size_t dims = samples.dims();

    std::vector<StatePoint> out;
    out.reserve(n);

    std::vector<Real> sum(dims, 0);
    const auto center = samples.row(0);  // shift for the ExactPopulation form
    Real cum_dist2 = 0;

    for (std::size_t i = 0; i < n; ++i) {
        const auto row = samples.row(i);
        const Real k = static_cast<Real>(i + 1);

        StatePoint point;
        point.mu.resize(dims);
        for (std::size_t d = 0; d < dims; ++d) {
            sum[d] += row[d];
            point.mu[d] = sum[d] / k;
        }

        if (mode == VarianceMode::PaperEq3) {
            Real d2 = 0;
            for (std::size_t d = 0; d < dims; ++d) {
                const Real diff = row[d] - point.mu[d];
                d2 += diff * diff;
            }
            cum_dist2 += d2;
            point.sigma2 = cum_dist2 / k;
        } else {
            Real d2 = 0;
            Real mu_off2 = 0;
            for (std::size_t d = 0; d < dims; ++d) {
                const Real diff = row[d] - center[d];
                d2 += diff * diff;
                const Real mu_off = point.mu[d] - center[d];
                mu_off2 += mu_off * mu_off;
            }
            cum_dist2 += d2;
            const Real sigma2 = cum_dist2 / k - mu_off2;
            point.sigma2 = sigma2 > 0 ? sigma2 : 0;
        }
        out.push_back(std::move(point));
    }
    return out;
}

} // namespace teda
