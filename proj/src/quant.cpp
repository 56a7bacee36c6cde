#include "aq/quant.hpp"

#include <algorithm>
#include <string>

#include "aq/errors.hpp"
#include "simd.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace aq {

namespace detail {

void check_bits(int bits) {
    if (bits < 2 || bits > 8) {
        throw ParamError("bit-width must be in [2, 8], got " + std::to_string(bits));
    }
}

} // namespace detail

QuantParams params_layerwise(const ActivationTensor& a, int bits) {
    detail::check_bits(bits);
    const std::span<const float> x = a.values();
    float lo = x[0];
    float hi = x[0];
    simd::span_min_max(x.data(), x.size(), lo, hi);
    const detail::ScaleZp sz = detail::make_scale_zp(lo, hi, bits);
    QuantParams p;
    p.scale = {sz.scale};
    p.zero_point = {sz.zero_point};
    p.bits = bits;
    p.granularity = Granularity::LayerWise;
    return p;
}

QuantParams params_channelwise(const DecomposedView& v, int bits) {
    detail::check_bits(bits);
    const ChannelMinMax mm = channel_min_max(v);
    const std::size_t channels = v.rows();
    QuantParams p;
    p.scale.resize(channels);
    p.zero_point.resize(channels);
    p.bits = bits;
    p.granularity = Granularity::ChannelWise;
    for (std::size_t c = 0; c < channels; ++c) {
        const detail::ScaleZp sz = detail::make_scale_zp(mm.min_v[c], mm.max_v[c], bits);
        p.scale[c] = sz.scale;
        p.zero_point[c] = sz.zero_point;
    }
    return p;
}

namespace {

void check_param_match(const Shape4& shape, const QuantParams& p) {
    detail::check_bits(p.bits);
    const std::size_t expect = p.granularity == Granularity::LayerWise ? 1 : shape.c;
    if (p.scale.size() != expect || p.zero_point.size() != p.scale.size()) {
        throw ShapeError("param vectors have length " + std::to_string(p.scale.size()) +
                         ", expected " + std::to_string(expect));
    }
}

} // namespace

QuantizedActivation quantize(const ActivationTensor& a, const QuantParams& p) {
    check_param_match(a.shape(), p);
    const Shape4& s = a.shape();
    const std::size_t hw = s.spatial();
    const std::size_t blocks = std::size_t(s.n) * s.c;
    const std::int64_t max_code = p.max_code();
    const bool per_channel = p.granularity == Granularity::ChannelWise;

    QuantizedActivation q;
    q.codes.resize(a.size());
    q.params = p;
    q.shape = s;

    const float* src = a.values().data();
    std::uint8_t* dst = q.codes.data();

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (a.size() > std::size_t{1} << 15)
#endif
    for (std::int64_t b = 0; b < std::int64_t(blocks); ++b) {
        const std::size_t c = std::size_t(b) % s.c;
        const double inv_scale = 1.0 / p.scale[per_channel ? c : 0];
        const double zp = double(p.zero_point[per_channel ? c : 0]);
        simd::quantize_span(src + std::size_t(b) * hw, dst + std::size_t(b) * hw, hw, inv_scale,
                            zp, double(max_code));
    }
    return q;
}

ActivationTensor dequantize_prescale(const QuantizedActivation& q) {
    check_param_match(q.shape, q.params);
    const Shape4& s = q.shape;
    const std::size_t hw = s.spatial();
    const std::size_t blocks = std::size_t(s.n) * s.c;
    const bool per_channel = q.params.granularity == Granularity::ChannelWise;

    std::vector<float> out(q.codes.size());
    const std::uint8_t* src = q.codes.data();
    float* dst = out.data();

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (q.codes.size() > std::size_t{1} << 15)
#endif
    for (std::int64_t b = 0; b < std::int64_t(blocks); ++b) {
        const std::size_t c = std::size_t(b) % s.c;
        const double scale = q.params.scale[per_channel ? c : 0];
        const double zp = double(q.params.zero_point[per_channel ? c : 0]);
        simd::dequantize_span(src + std::size_t(b) * hw, dst + std::size_t(b) * hw, hw, scale, zp);
    }
    // Finite params and 8-bit codes give finite outputs.
    return ActivationTensor::prevalidated(s, std::move(out));
}

ActivationTensor fake_quantize_ste_forward(const ActivationTensor& a, int bits, Granularity g) {
    const QuantParams p = g == Granularity::LayerWise
                              ? params_layerwise(a, bits)
                              : params_channelwise(decompose(a), bits);
    return dequantize_prescale(quantize(a, p));
}

ActivationTensor fake_quantize_ste_backward(const ActivationTensor& upstream_grad,
                                            const Shape4& forward_shape) {
    if (!(upstream_grad.shape() == forward_shape)) {
        throw ShapeError("gradient shape does not match forward input shape");
    }
    return upstream_grad;
}

} // namespace aq
