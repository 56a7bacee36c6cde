#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "aq/errors.hpp"

namespace aq {

/// Dense activation dimensions, NCHW order. All dims must be >= 1.
struct Shape4 {
    std::uint32_t n = 0;
    std::uint32_t c = 0;
    std::uint32_t h = 0;
    std::uint32_t w = 0;

    std::size_t volume() const {
        return std::size_t(n) * c * h * w;
    }
    std::size_t spatial() const { return std::size_t(h) * w; }

    bool operator==(const Shape4&) const = default;
};

/// Immutable dense 4-D float32 activation map, NCHW layout.
/// Values are validated finite at construction; min/max based scaling
/// downstream is undefined under NaN/Inf.
class ActivationTensor {
public:
    ActivationTensor(Shape4 shape, std::vector<float> data);

    static ActivationTensor filled(Shape4 shape, float value);

    /// Constructs without the finiteness scan. Only for kernel outputs whose
    /// values are finite by construction (e.g. dequantized codes with finite
    /// params); external data must go through the checking constructor.
    static ActivationTensor prevalidated(Shape4 shape, std::vector<float> data);

    const Shape4& shape() const { return shape_; }
    std::size_t size() const { return data_.size(); }
    std::span<const float> values() const { return data_; }

    float at(std::uint32_t n, std::uint32_t c, std::uint32_t h, std::uint32_t w) const {
        return data_[((std::size_t(n) * shape_.c + c) * shape_.h + h) * shape_.w + w];
    }

private:
    struct Prevalidated {};
    ActivationTensor(Shape4 shape, std::vector<float> data, Prevalidated);

    Shape4 shape_;
    std::vector<float> data_;
};

/// Channel-major 2-D view of an ActivationTensor: C rows of N*H*W values.
/// Row c lists channel c's values batch-major, then row-major spatial:
/// column j maps to sample n = j / (H*W), spatial offset j % (H*W).
/// The view holds a pointer into the parent tensor; no data is copied.
class DecomposedView {
public:
    explicit DecomposedView(const ActivationTensor& parent)
        : parent_(&parent), shape_(parent.shape()) {}

    std::size_t rows() const { return shape_.c; }
    std::size_t cols() const { return std::size_t(shape_.n) * shape_.spatial(); }

    float operator()(std::size_t c, std::size_t j) const {
        const std::size_t hw = shape_.spatial();
        const std::size_t n = j / hw;
        const std::size_t rest = j % hw;
        return parent_->values()[(n * shape_.c + c) * hw + rest];
    }

    /// Contiguous slice of row c belonging to sample n (H*W values).
    std::span<const float> segment(std::size_t c, std::size_t n) const {
        const std::size_t hw = shape_.spatial();
        return parent_->values().subspan((n * shape_.c + c) * hw, hw);
    }

    const Shape4& shape() const { return shape_; }
    const ActivationTensor& parent() const { return *parent_; }

private:
    const ActivationTensor* parent_;
    Shape4 shape_;
};

DecomposedView decompose(const ActivationTensor& a);

struct ChannelMinMax {
    std::vector<float> min_v;
    std::vector<float> max_v;
};

/// Per-channel min and max over each view row (one pass, vectorized over
/// the contiguous per-sample segments; parallel across channels).
ChannelMinMax channel_min_max(const DecomposedView& v);

} // namespace aq
