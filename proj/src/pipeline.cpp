#include "teda/pipeline.hpp"

#include <cassert>
#include <cmath>
#include <string>
#include <utility>

#include "teda/error.hpp"

namespace teda {

namespace {

void check_critical_path(const TimingModel& model) {
    if (!(model.critical_path_ns > 0) || !std::isfinite(model.critical_path_ns)) {
        throw ConfigError("critical path must be positive and finite");
    }
}

} // namespace

std::optional<SampleVerdict> tick(PipelineState& pipeline,
                                  std::optional<std::span<const Real>> input,
                                  const DetectorConfig& config) {
    // Register semantics: every stage reads the latch its upstream neighbour
    // filled on the previous cycle, then overwrites its own output latch.
    // Processing the stages back to front gets read-before-write for free.
    std::optional<SampleVerdict> emitted = std::move(pipeline.ecc_outlier.out);
    pipeline.ecc_outlier.out.reset();

    if (pipeline.variance.out) {
        const VarianceStage::Out& v = *pipeline.variance.out;
        pipeline.ecc_outlier.out = classify(v.k, v.dist2, v.inv_k, v.sigma2, config);
        pipeline.variance.out.reset();
    }

    if (pipeline.mean.out) {
        MeanStage::Out m = std::move(*pipeline.mean.out);
        pipeline.mean.out.reset();
        const Real dist2 = squared_distance(m.mu, m.x);
        const Real raw =
            variance_step(pipeline.variance.sigma2, m.k, dist2, config.variance_mode);
        pipeline.variance.sigma2 =
            clamp_variance(raw, pipeline.variance.sigma2_clamps);
        pipeline.variance.out = VarianceStage::Out{
            m.k, pipeline.variance.sigma2, dist2,
            Real(1) / static_cast<Real>(m.k)};
    }

    if (input) {
        const std::span<const Real> x = *input;
        if (x.empty()) throw ShapeError("empty sample");
        if (pipeline.mean.k == 0) {
            pipeline.mean.mu.resize(x.size());
        } else if (x.size() != pipeline.mean.mu.size()) {
            throw ShapeError("sample has " + std::to_string(x.size()) +
                             " dimensions, stream has " +
                             std::to_string(pipeline.mean.mu.size()));
        }
        if (!all_finite(x)) throw InputError("non-finite value in sample");

        const std::uint64_t k = pipeline.mean.k + 1;
        update_mean_into(pipeline.mean.mu, x, k);
        pipeline.mean.k = k;
        pipeline.mean.out = MeanStage::Out{
            k, std::vector<Real>(x.begin(), x.end()), pipeline.mean.mu};
    }

    pipeline.cycle += 1;
    return emitted;
}

std::vector<TraceEntry> simulate(const StreamBuffer& samples,
                                 const DetectorConfig& config) {
    PipelineState pipeline;
    std::vector<TraceEntry> trace;
    trace.reserve(samples.size());

    auto record = [&](std::optional<SampleVerdict> verdict, std::uint64_t cycle) {
        if (verdict) trace.push_back(TraceEntry{cycle, std::move(*verdict)});
    };

    for (std::size_t i = 0; i < samples.size(); ++i) {
        const std::uint64_t cycle = pipeline.cycle;
        record(tick(pipeline, samples.row(i), config), cycle);
    }
    while (pipeline.occupied()) {
        const std::uint64_t cycle = pipeline.cycle;
        record(tick(pipeline, std::nullopt, config), cycle);
    }
    assert(trace.size() == samples.size());
    return trace;
}

Real initial_delay_ns(const TimingModel& model) {
    check_critical_path(model);
    return Real(3) * model.critical_path_ns;
}

Real sample_period_ns(const TimingModel& model) {
    check_critical_path(model);
    return model.critical_path_ns;
}

Real throughput_sps(const TimingModel& model) {
    check_critical_path(model);
    return Real(1e9) / model.critical_path_ns;
}

} // namespace teda
