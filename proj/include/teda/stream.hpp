#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "teda/error.hpp"

namespace teda {

// Scalar type carried through the whole detector. 64-bit IEEE by default;
// a 32-bit build (-DTEDA_REAL_FLOAT) exists for hardware-comparison studies
// and is not covered by the verification tolerances.
#if defined(TEDA_REAL_FLOAT)
using Real = float;
#else
using Real = double;
#endif

// One N-dimensional observation entering the stream.
using Sample = std::vector<Real>;

bool all_finite(std::span<const Real> x);

// Dense row-major container for a materialized stream. All rows share one
// dimension; push_row rejects anything else.
class StreamBuffer {
public:
    StreamBuffer() = default;
    explicit StreamBuffer(std::size_t dims) : dims_(dims) {}

    std::size_t dims() const { return dims_; }
    std::size_t size() const { return dims_ == 0 ? 0 : data_.size() / dims_; }
    bool empty() const { return data_.empty(); }

    std::span<const Real> row(std::size_t i) const {
        return {data_.data() + i * dims_, dims_};
    }

    void push_row(std::span<const Real> x);
    void reserve_rows(std::size_t rows) { data_.reserve(rows * dims_); }

    std::span<Real> mutable_row(std::size_t i) {
        return {data_.data() + i * dims_, dims_};
    }

    const std::vector<Real>& data() const { return data_; }

    bool operator==(const StreamBuffer&) const = default;

private:
    std::size_t dims_ = 0;
    std::vector<Real> data_;
};

} // namespace teda
