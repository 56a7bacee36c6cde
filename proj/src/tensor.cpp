#include "aq/tensor.hpp"

#include <cmath>
#include <string>

#include "simd.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace aq {

namespace {

void validate_shape(const Shape4& s) {
    if (s.n < 1 || s.c < 1 || s.h < 1 || s.w < 1) {
        throw ShapeError("tensor dims must all be >= 1, got (" + std::to_string(s.n) + "," +
                         std::to_string(s.c) + "," + std::to_string(s.h) + "," +
                         std::to_string(s.w) + ")");
    }
}

} // namespace

ActivationTensor::ActivationTensor(Shape4 shape, std::vector<float> data)
    : shape_(shape), data_(std::move(data)) {
    validate_shape(shape_);
    if (data_.size() != shape_.volume()) {
        throw ShapeError("data length " + std::to_string(data_.size()) +
                         " does not match shape volume " + std::to_string(shape_.volume()));
    }
    for (float v : data_) {
        if (!std::isfinite(v)) {
            throw ParamError("tensor holds a non-finite value");
        }
    }
}

ActivationTensor ActivationTensor::filled(Shape4 shape, float value) {
    validate_shape(shape);
    return ActivationTensor(shape, std::vector<float>(shape.volume(), value));
}

ActivationTensor::ActivationTensor(Shape4 shape, std::vector<float> data, Prevalidated)
    : shape_(shape), data_(std::move(data)) {
    validate_shape(shape_);
    if (data_.size() != shape_.volume()) {
        throw ShapeError("data length does not match shape volume");
    }
}

ActivationTensor ActivationTensor::prevalidated(Shape4 shape, std::vector<float> data) {
    return ActivationTensor(shape, std::move(data), Prevalidated{});
}

DecomposedView decompose(const ActivationTensor& a) {
    return DecomposedView(a);
}

ChannelMinMax channel_min_max(const DecomposedView& v) {
    const Shape4& s = v.shape();
    const std::size_t channels = s.c;
    ChannelMinMax out;
    out.min_v.resize(channels);
    out.max_v.resize(channels);

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (v.cols() * channels > std::size_t{1} << 16)
#endif
    for (std::int64_t c = 0; c < std::int64_t(channels); ++c) {
        float lo = v.segment(std::size_t(c), 0)[0];
        float hi = lo;
        for (std::uint32_t n = 0; n < s.n; ++n) {
            const std::span<const float> seg = v.segment(std::size_t(c), n);
            simd::span_min_max(seg.data(), seg.size(), lo, hi);
        }
        out.min_v[std::size_t(c)] = lo;
        out.max_v[std::size_t(c)] = hi;
    }
    return out;
}

} // namespace aq
