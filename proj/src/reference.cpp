#include "aq/reference.hpp"

#include "aq/errors.hpp"
#include "simd.hpp"

namespace aq::ref {

namespace {

// Scalar min/max over one channel row, walking the per-sample segments.
void row_min_max(const DecomposedView& v, std::size_t c, float& lo, float& hi) {
    const Shape4& s = v.shape();
    lo = v.segment(c, 0)[0];
    hi = lo;
    for (std::uint32_t n = 0; n < s.n; ++n) {
        const std::span<const float> seg = v.segment(c, n);
        for (float x : seg) {
            if (x < lo) lo = x;
            if (x > hi) hi = x;
        }
    }
}

} // namespace

ChannelMinMax channel_min_max_serial(const DecomposedView& v) {
    const std::size_t channels = v.rows();
    ChannelMinMax out;
    out.min_v.resize(channels);
    out.max_v.resize(channels);
    for (std::size_t c = 0; c < channels; ++c) {
        row_min_max(v, c, out.min_v[c], out.max_v[c]);
    }
    return out;
}

QuantParams params_channelwise_serial(const DecomposedView& v, int bits) {
    detail::check_bits(bits);
    const std::size_t channels = v.rows();
    QuantParams p;
    p.scale.resize(channels);
    p.zero_point.resize(channels);
    p.bits = bits;
    p.granularity = Granularity::ChannelWise;
    for (std::size_t c = 0; c < channels; ++c) {
        float lo;
        float hi;
        row_min_max(v, c, lo, hi);
        const detail::ScaleZp sz = detail::make_scale_zp(lo, hi, bits);
        p.scale[c] = sz.scale;
        p.zero_point[c] = sz.zero_point;
    }
    return p;
}

QuantizedActivation quantize_serial(const ActivationTensor& a, const QuantParams& p) {
    detail::check_bits(p.bits);
    const Shape4& s = a.shape();
    const bool per_channel = p.granularity == Granularity::ChannelWise;
    if (p.scale.size() != (per_channel ? s.c : 1)) {
        throw ShapeError("param vector length does not match channel count");
    }
    const std::size_t hw = s.spatial();
    const double max_code = double(p.max_code());
    QuantizedActivation q;
    q.codes.resize(a.size());
    q.params = p;
    q.shape = s;
    const float* src = a.values().data();
    std::size_t i = 0;
    for (std::uint32_t n = 0; n < s.n; ++n) {
        for (std::uint32_t c = 0; c < s.c; ++c) {
            const double inv_scale = 1.0 / p.scale[per_channel ? c : 0];
            const double zp = double(p.zero_point[per_channel ? c : 0]);
            for (std::size_t k = 0; k < hw; ++k, ++i) {
                q.codes[i] = simd::quantize_one(src[i], inv_scale, zp, max_code);
            }
        }
    }
    return q;
}

ActivationTensor dequantize_prescale_serial(const QuantizedActivation& q) {
    const Shape4& s = q.shape;
    const bool per_channel = q.params.granularity == Granularity::ChannelWise;
    const std::size_t hw = s.spatial();
    std::vector<float> out(q.codes.size());
    std::size_t i = 0;
    for (std::uint32_t n = 0; n < s.n; ++n) {
        for (std::uint32_t c = 0; c < s.c; ++c) {
            const double scale = q.params.scale[per_channel ? c : 0];
            const double zp = double(q.params.zero_point[per_channel ? c : 0]);
            for (std::size_t k = 0; k < hw; ++k, ++i) {
                out[i] = simd::dequantize_one(q.codes[i], scale, zp);
            }
        }
    }
    return ActivationTensor(s, std::move(out));
}

} // namespace aq::ref
