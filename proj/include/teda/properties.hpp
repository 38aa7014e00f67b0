#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "teda/recursive_stats.hpp"
#include "teda/stream.hpp"

namespace teda {

// Randomized self-check suite behind the oracle-check command. Each property
// exercises an invariant of the recursion, the detector or the pipeline on
// freshly generated streams and reports pass/fail/skip; failures carry the
// offending stream seed so the case can be replayed.

enum class PropertyStatus { Pass, Fail, Skip };

struct PropertyResult {
    std::string name;
    PropertyStatus status = PropertyStatus::Pass;
    std::string detail;
};

struct PropertyOptions {
    std::uint64_t seed = 42;
    std::uint64_t stream_count = 20;
    std::size_t max_length = 1500;
    std::size_t max_dims = 8;
    VarianceMode mode = VarianceMode::PaperEq3;
};

std::vector<PropertyResult> run_property_suite(const PropertyOptions& options);

bool all_passed(const std::vector<PropertyResult>& results);

// Uniform noise around random per-dimension offsets; deterministic in seed.
StreamBuffer random_stream(std::uint64_t seed, std::size_t length, std::size_t dims,
                           Real offset_range = 5, Real scale = 1);

// Derives the per-stream seed used by the suite, for replaying failures.
std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t index);

} // namespace teda
