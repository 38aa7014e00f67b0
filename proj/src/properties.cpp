#include "teda/properties.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <utility>

#include "teda/detector.hpp"
#include "teda/error.hpp"
#include "teda/pipeline.hpp"

namespace teda {

namespace {

bool close(Real a, Real b, Real rel, Real abs) {
    const Real diff = std::fabs(a - b);
    if (diff <= abs) return true;
    return diff <= rel * std::max(std::fabs(a), std::fabs(b));
}

struct StreamCase {
    std::uint64_t seed = 0;
    std::size_t length = 0;
    std::size_t dims = 0;
    StreamBuffer samples;
};

std::vector<StreamCase> make_corpus(const PropertyOptions& options) {
    std::vector<StreamCase> corpus;
    corpus.reserve(options.stream_count);
    std::mt19937_64 rng(options.seed);
    for (std::uint64_t i = 0; i < options.stream_count; ++i) {
        StreamCase c;
        c.seed = stream_seed(options.seed, i);
        // Always include the tiny lengths: they exercise the k = 1 / k = 2
        // branches more densely than uniform draws would.
        if (i < 4) {
            c.length = 2 + i;
        } else {
            c.length = 2 + rng() % (options.max_length > 1 ? options.max_length - 1 : 1);
        }
        c.dims = 1 + rng() % (options.max_dims > 0 ? options.max_dims : 1);
        c.samples = random_stream(c.seed, c.length, c.dims);
        corpus.push_back(std::move(c));
    }
    return corpus;
}

std::string where(const StreamCase& c, std::size_t prefix) {
    return "stream seed=" + std::to_string(c.seed) +
           " len=" + std::to_string(c.length) + " dims=" + std::to_string(c.dims) +
           " prefix k=" + std::to_string(prefix + 1);
}

using Check = PropertyResult (*)(const PropertyOptions&,
                                 const std::vector<StreamCase>&);

PropertyResult check_recursion_matches_unrolled(const PropertyOptions& options,
                                                const std::vector<StreamCase>& corpus) {
    PropertyResult r{"recursion-matches-unrolled-oracle", PropertyStatus::Pass, ""};
    const DetectorConfig config{3, options.mode, ZeroVariancePolicy::EccentricityIsOneOverK};
    for (const StreamCase& c : corpus) {
        const auto oracle = unrolled_oracle(c.samples, options.mode);
        DetectorState state;
        for (std::size_t i = 0; i < c.samples.size(); ++i) {
            advance(state, c.samples.row(i), config);
            for (std::size_t d = 0; d < c.dims; ++d) {
                if (!close(state.mu[d], oracle[i].mu[d], 1e-9, 1e-12)) {
                    r.status = PropertyStatus::Fail;
                    r.detail = "mean mismatch at " + where(c, i);
                    return r;
                }
            }
            if (!close(state.sigma2, oracle[i].sigma2, 1e-9, 1e-12)) {
                r.status = PropertyStatus::Fail;
                r.detail = "variance mismatch at " + where(c, i);
                return r;
            }
        }
    }
    r.detail = std::to_string(corpus.size()) + " streams, every prefix";
    return r;
}

PropertyResult check_exact_mode_matches_batch(const PropertyOptions& options,
                                              const std::vector<StreamCase>& corpus) {
    PropertyResult r{"exact-mode-matches-batch-statistics", PropertyStatus::Pass, ""};
    const DetectorConfig config{3, VarianceMode::ExactPopulation,
                                ZeroVariancePolicy::EccentricityIsOneOverK};
    (void)options;
    for (const StreamCase& c : corpus) {
        DetectorState state;
        StreamBuffer prefix(c.dims);
        for (std::size_t i = 0; i < c.samples.size(); ++i) {
            advance(state, c.samples.row(i), config);
            prefix.push_row(c.samples.row(i));
            const auto mu = batch_mean(prefix);
            for (std::size_t d = 0; d < c.dims; ++d) {
                if (!close(state.mu[d], mu[d], 1e-9, 1e-12)) {
                    r.status = PropertyStatus::Fail;
                    r.detail = "mean mismatch at " + where(c, i);
                    return r;
                }
            }
            if (!close(state.sigma2, batch_variance(prefix, mu), 1e-9, 1e-12)) {
                r.status = PropertyStatus::Fail;
                r.detail = "variance mismatch at " + where(c, i);
                return r;
            }
        }
    }
    r.detail = std::to_string(corpus.size()) + " streams, every prefix";
    return r;
}

PropertyResult check_eccentricity_sum_identity(const PropertyOptions& options,
                                               const std::vector<StreamCase>& corpus) {
    PropertyResult r{"eccentricity-sum-normalization", PropertyStatus::Pass, ""};
    if (options.mode != VarianceMode::ExactPopulation) {
        r.status = PropertyStatus::Skip;
        r.detail = "holds for batch statistics only; rerun with the exact variance mode";
        return r;
    }
    for (const StreamCase& c : corpus) {
        const auto mu = batch_mean(c.samples);
        const Real sigma2 = batch_variance(c.samples, mu);
        if (!(sigma2 > 0)) continue;  // constant stream: eccentricity undefined
        const std::uint64_t k = c.samples.size();
        Real sum_xi = 0;
        for (std::size_t i = 0; i < c.samples.size(); ++i) {
            sum_xi += eccentricity(mu, c.samples.row(i), sigma2, k);
        }
        if (!close(sum_xi, Real(2), 1e-9, 1e-12)) {
            r.status = PropertyStatus::Fail;
            r.detail = "sum over " + std::to_string(k) + " samples is " +
                       std::to_string(sum_xi) + " (stream seed=" +
                       std::to_string(c.seed) + ")";
            return r;
        }
    }
    r.detail = "sum of eccentricities = 2 on every stream";
    return r;
}

PropertyResult check_algebraic_ties(const PropertyOptions& options,
                                    const std::vector<StreamCase>& corpus) {
    PropertyResult r{"verdict-field-algebra", PropertyStatus::Pass, ""};
    const DetectorConfig config{3, options.mode, ZeroVariancePolicy::EccentricityIsOneOverK};
    for (const StreamCase& c : corpus) {
        const auto verdicts = run_stream(c.samples, config);
        for (std::size_t i = 0; i < verdicts.size(); ++i) {
            const SampleVerdict& v = verdicts[i];
            const std::uint64_t k = i + 1;
            if (v.k != k) {
                r.status = PropertyStatus::Fail;
                r.detail = "verdict numbering broken at " + where(c, i);
                return r;
            }
            if (!v.xi) continue;
            const bool ok = *v.tau == Real(1) - *v.xi && *v.zeta * 2 == *v.xi &&
                            *v.xi >= Real(1) / static_cast<Real>(k) &&
                            *v.threshold == outlier_threshold(config.m, k);
            if (!ok) {
                r.status = PropertyStatus::Fail;
                r.detail = "field ties broken at " + where(c, i);
                return r;
            }
        }
    }
    r.detail = "tau = 1 - xi, 2 zeta = xi, xi >= 1/k on every verdict";
    return r;
}

PropertyResult check_shift_invariance(const PropertyOptions& options,
                                      const std::vector<StreamCase>& corpus) {
    PropertyResult r{"variance-shift-invariance", PropertyStatus::Pass, ""};
    const DetectorConfig config{3, options.mode, ZeroVariancePolicy::EccentricityIsOneOverK};
    for (const StreamCase& c : corpus) {
        std::mt19937_64 rng(c.seed ^ 0x5ca1ab1eULL);
        std::uniform_real_distribution<Real> dist(-100, 100);
        std::vector<Real> shift(c.dims);
        for (Real& v : shift) v = dist(rng);

        StreamBuffer shifted(c.dims);
        std::vector<Real> row(c.dims);
        for (std::size_t i = 0; i < c.samples.size(); ++i) {
            const auto src = c.samples.row(i);
            for (std::size_t d = 0; d < c.dims; ++d) row[d] = src[d] + shift[d];
            shifted.push_row(row);
        }

        DetectorState base, moved;
        for (std::size_t i = 0; i < c.samples.size(); ++i) {
            advance(base, c.samples.row(i), config);
            advance(moved, shifted.row(i), config);
            if (!close(moved.sigma2, base.sigma2, 1e-9, 1e-12)) {
                r.status = PropertyStatus::Fail;
                r.detail = "variance not shift-invariant at " + where(c, i);
                return r;
            }
            for (std::size_t d = 0; d < c.dims; ++d) {
                if (!close(moved.mu[d], base.mu[d] + shift[d], 1e-9, 1e-9)) {
                    r.status = PropertyStatus::Fail;
                    r.detail = "mean did not track the shift at " + where(c, i);
                    return r;
                }
            }
        }
    }
    r.detail = "translated streams keep their variance";
    return r;
}

PropertyResult check_affine_invariance(const PropertyOptions& options,
                                       const std::vector<StreamCase>& corpus) {
    PropertyResult r{"eccentricity-affine-invariance", PropertyStatus::Pass, ""};
    const DetectorConfig config{3, options.mode, ZeroVariancePolicy::EccentricityIsOneOverK};
    const Real scales[] = {Real(0.5), Real(3), Real(-2)};
    for (std::size_t ci = 0; ci < corpus.size(); ++ci) {
        const StreamCase& c = corpus[ci];
        const Real a = scales[ci % 3];
        std::mt19937_64 rng(c.seed ^ 0x0ff5e7ULL);
        std::uniform_real_distribution<Real> dist(-50, 50);
        std::vector<Real> shift(c.dims);
        for (Real& v : shift) v = dist(rng);

        StreamBuffer mapped(c.dims);
        std::vector<Real> row(c.dims);
        for (std::size_t i = 0; i < c.samples.size(); ++i) {
            const auto src = c.samples.row(i);
            for (std::size_t d = 0; d < c.dims; ++d) row[d] = a * src[d] + shift[d];
            mapped.push_row(row);
        }

        const auto base = run_stream(c.samples, config);
        const auto image = run_stream(mapped, config);
        for (std::size_t i = 0; i < base.size(); ++i) {
            if (base[i].outlier != image[i].outlier ||
                base[i].degenerate != image[i].degenerate ||
                base[i].xi.has_value() != image[i].xi.has_value()) {
                r.status = PropertyStatus::Fail;
                r.detail = "decision changed under x -> " + std::to_string(a) +
                           "x + b at " + where(c, i);
                return r;
            }
            if (base[i].xi &&
                !close(*base[i].xi, *image[i].xi, 1e-9, 1e-12)) {
                r.status = PropertyStatus::Fail;
                r.detail = "eccentricity changed under x -> " + std::to_string(a) +
                           "x + b at " + where(c, i);
                return r;
            }
        }
    }
    r.detail = "verdicts unchanged under invertible affine maps";
    return r;
}

PropertyResult check_threshold_monotonicity(const PropertyOptions& options,
                                            const std::vector<StreamCase>& corpus) {
    PropertyResult r{"threshold-monotonicity", PropertyStatus::Pass, ""};
    (void)corpus;
    std::mt19937_64 rng(options.seed ^ 0x7157e5ULL);
    std::uniform_real_distribution<Real> m_dist(0.25, 10);
    for (int trial = 0; trial < 200; ++trial) {
        const Real m = m_dist(rng);
        const std::uint64_t k = 2 + rng() % 100000;
        const std::uint64_t k2 = k + 1 + rng() % 1000;
        if (!(outlier_threshold(m, k2) < outlier_threshold(m, k))) {
            r.status = PropertyStatus::Fail;
            r.detail = "not strictly decreasing in k at m=" + std::to_string(m) +
                       " k=" + std::to_string(k);
            return r;
        }
        const Real m2 = m + static_cast<Real>(0.125);
        if (!(outlier_threshold(m2, k) > outlier_threshold(m, k))) {
            r.status = PropertyStatus::Fail;
            r.detail = "not strictly increasing in m at m=" + std::to_string(m) +
                       " k=" + std::to_string(k);
            return r;
        }
    }
    r.detail = "strictly decreasing in k, increasing in m (200 trials)";
    return r;
}

PropertyResult check_variance_nonnegative(const PropertyOptions& options,
                                          const std::vector<StreamCase>& corpus) {
    PropertyResult r{"variance-stays-nonnegative", PropertyStatus::Pass, ""};
    const DetectorConfig config{3, options.mode, ZeroVariancePolicy::EccentricityIsOneOverK};
    for (const StreamCase& c : corpus) {
        DetectorState state;
        for (std::size_t i = 0; i < c.samples.size(); ++i) {
            advance(state, c.samples.row(i), config);
            if (!(state.sigma2 >= 0)) {
                r.status = PropertyStatus::Fail;
                r.detail = "negative variance at " + where(c, i);
                return r;
            }
        }
        if (state.sigma2_clamps != 0) {
            r.status = PropertyStatus::Fail;
            r.detail = "variance clamp fired on stream seed=" + std::to_string(c.seed);
            return r;
        }
    }
    r.detail = "no negative variance, no clamp events";
    return r;
}

PropertyResult check_pipeline_equivalence(const PropertyOptions& options,
                                          const std::vector<StreamCase>& corpus) {
    PropertyResult r{"pipeline-matches-sequential", PropertyStatus::Pass, ""};
    const DetectorConfig config{3, options.mode, ZeroVariancePolicy::EccentricityIsOneOverK};
    for (const StreamCase& c : corpus) {
        const auto sequential = run_stream(c.samples, config);
        const auto trace = simulate(c.samples, config);
        if (trace.size() != sequential.size()) {
            r.status = PropertyStatus::Fail;
            r.detail = "verdict count mismatch on stream seed=" + std::to_string(c.seed);
            return r;
        }
        for (std::size_t i = 0; i < trace.size(); ++i) {
            if (trace[i].cycle != i + 3 || !(trace[i].verdict == sequential[i])) {
                r.status = PropertyStatus::Fail;
                r.detail = "pipeline diverged at " + where(c, i);
                return r;
            }
        }
    }
    r.detail = "bit-identical verdicts, fixed three-cycle latency";
    return r;
}

PropertyResult check_step_fold_equivalence(const PropertyOptions& options,
                                           const std::vector<StreamCase>& corpus) {
    PropertyResult r{"run-stream-matches-step-fold", PropertyStatus::Pass, ""};
    const DetectorConfig config{3, options.mode, ZeroVariancePolicy::EccentricityIsOneOverK};
    for (const StreamCase& c : corpus) {
        const auto folded = run_stream(c.samples, config);
        DetectorState state;
        for (std::size_t i = 0; i < c.samples.size(); ++i) {
            const StepResult result = step(state, c.samples.row(i), config);
            if (!(result.verdict == folded[i])) {
                r.status = PropertyStatus::Fail;
                r.detail = "step/fold divergence at " + where(c, i);
                return r;
            }
            state = result.state;
        }
    }
    r.detail = "pure step fold reproduces run_stream exactly";
    return r;
}

} // namespace

std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t index) {
    // splitmix64 of (base, index) so per-stream seeds look unrelated.
    std::uint64_t z = base_seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

StreamBuffer random_stream(std::uint64_t seed, std::size_t length, std::size_t dims,
                           Real offset_range, Real scale) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<Real> offset_dist(-offset_range, offset_range);
    std::uniform_real_distribution<Real> noise(-scale, scale);
    std::vector<Real> offset(dims);
    for (Real& v : offset) v = offset_dist(rng);

    StreamBuffer samples(dims);
    samples.reserve_rows(length);
    std::vector<Real> row(dims);
    for (std::size_t i = 0; i < length; ++i) {
        for (std::size_t d = 0; d < dims; ++d) row[d] = offset[d] + noise(rng);
        samples.push_row(row);
    }
    return samples;
}

std::vector<PropertyResult> run_property_suite(const PropertyOptions& options) {
    const auto corpus = make_corpus(options);
    const Check checks[] = {
        check_recursion_matches_unrolled,
        check_exact_mode_matches_batch,
        check_eccentricity_sum_identity,
        check_algebraic_ties,
        check_shift_invariance,
        check_affine_invariance,
        check_threshold_monotonicity,
        check_variance_nonnegative,
        check_pipeline_equivalence,
        check_step_fold_equivalence,
    };
    std::vector<PropertyResult> results;
    results.reserve(std::size(checks));
    for (Check check : checks) {
        try {
            results.push_back(check(options, corpus));
        } catch (const std::exception& e) {
            results.push_back(
                PropertyResult{"(exception)", PropertyStatus::Fail, e.what()});
        }
    }
    return results;
}

bool all_passed(const std::vector<PropertyResult>& results) {
    for (const PropertyResult& r : results) {
        if (r.status == PropertyStatus::Fail) return false;
    }
    return true;
}

} // namespace teda
