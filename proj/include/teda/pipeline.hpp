#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "teda/detector.hpp"

namespace teda {

// Functional model of the four-module hardware pipeline (MEAN, VARIANCE,
// ECCENTRICITY, OUTLIER). Registers sit between MEAN and VARIANCE, between
// VARIANCE and ECCENTRICITY, and on the OUTLIER output; ECCENTRICITY and
// OUTLIER complete within the same cycle. A sample ingested at cycle t is
// classified at cycle t + 3. Bubbles (cycles with no input) flow through
// without producing verdicts and without touching the recursion registers.

// MEAN: holds the running mean registers (one per dimension) and the sample
// counter, and latches {k, x, mu_k} for the variance stage.
struct MeanStage {
    std::vector<Real> mu;
    std::uint64_t k = 0;

    struct Out {
        std::uint64_t k = 0;
        std::vector<Real> x;
        std::vector<Real> mu;
        bool operator==(const Out&) const = default;
    };
    std::optional<Out> out;

    bool operator==(const MeanStage&) const = default;
};

// VARIANCE: holds the variance register; latches sigma2 plus the squared
// distance and 1/k it already computed, with k delayed alongside.
struct VarianceStage {
    Real sigma2 = 0;
    std::uint64_t sigma2_clamps = 0;

    struct Out {
        std::uint64_t k = 0;
        Real sigma2 = 0;
        Real dist2 = 0;
        Real inv_k = 0;
        bool operator==(const Out&) const = default;
    };
    std::optional<Out> out;

    bool operator==(const VarianceStage&) const = default;
};

// ECCENTRICITY + OUTLIER: the third cycle; its output register carries the
// finished verdict.
struct EccOutlierStage {
    std::optional<SampleVerdict> out;

    bool operator==(const EccOutlierStage&) const = default;
};

struct PipelineState {
    std::uint64_t cycle = 0;
    MeanStage mean;
    VarianceStage variance;
    EccOutlierStage ecc_outlier;

    bool occupied() const {
        return mean.out.has_value() || variance.out.has_value() ||
               ecc_outlier.out.has_value();
    }

    bool operator==(const PipelineState&) const = default;
};

// Advances the pipeline one clock cycle, optionally ingesting one sample.
// Returns the verdict leaving the pipeline this cycle, if any; the verdict
// for a sample ingested at cycle t is returned by the tick executing cycle
// t + 3. Throws ShapeError/InputError on bad input.
std::optional<SampleVerdict> tick(PipelineState& pipeline,
                                  std::optional<std::span<const Real>> input,
                                  const DetectorConfig& config);

struct TraceEntry {
    std::uint64_t cycle = 0;
    SampleVerdict verdict;

    bool operator==(const TraceEntry&) const = default;
};

// Drives tick over the stream back-to-back (one sample per cycle, no
// bubbles), then drains. Verdict i corresponds to sample i; cycle stamps are
// strictly increasing (3 .. n + 2 for an n-sample run).
std::vector<TraceEntry> simulate(const StreamBuffer& samples,
                                 const DetectorConfig& config);

// ---------------------------------------------------------------------------
// Analytic timing model. One pipeline stage completes per critical-path time
// t_c, so the fill delay is 3 t_c, the per-sample period is t_c, and the
// steady-state throughput is 1/t_c.
// ---------------------------------------------------------------------------

struct TimingModel {
    Real critical_path_ns = 0;
};

Real initial_delay_ns(const TimingModel& model);  // 3 * t_c
Real sample_period_ns(const TimingModel& model);  // t_c
Real throughput_sps(const TimingModel& model);    // 1e9 / t_c[ns]

} // namespace teda
