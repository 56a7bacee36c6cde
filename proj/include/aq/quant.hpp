#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "aq/tensor.hpp"

namespace aq {

enum class Granularity { LayerWise, ChannelWise };

/// Affine quantization parameters. Layer-wise granularity carries a single
/// (scale, zero-point) pair; channel-wise carries one pair per channel.
///
/// Rounding everywhere is round-half-to-even. Scales are kept in double and
/// zero-points in int64 so that ranges with large offset-to-width ratios
/// quantize without losing codes to intermediate rounding.
struct QuantParams {
    std::vector<double> scale;
    std::vector<std::int64_t> zero_point;
    int bits = 8;
    Granularity granularity = Granularity::LayerWise;

    std::int64_t max_code() const { return (std::int64_t{1} << bits) - 1; }
};

/// Integer codes plus the parameters that produced them. Codes are stored in
/// unsigned 8-bit cells for every bit-width b <= 8.
struct QuantizedActivation {
    std::vector<std::uint8_t> codes;
    QuantParams params;
    Shape4 shape;

    std::size_t size() const { return codes.size(); }
};

namespace detail {

// Half-to-even rounding of the scale/zero-point formulas. Near-constant
// ranges (width <= 1e-12) fall back to scale 1, zero-point -round(min):
// codes then reproduce constant channels within 0.5 (exactly for integers).
struct ScaleZp {
    double scale;
    std::int64_t zero_point;
};

inline ScaleZp make_scale_zp(float min_v, float max_v, int bits) {
    const double range = double(max_v) - double(min_v);
    if (range <= 1e-12) {
        return {1.0, std::int64_t(std::nearbyint(-double(min_v)))};
    }
    const double denom = double((std::int64_t{1} << bits) - 1);
    const double s = range / denom;
    return {s, std::int64_t(std::nearbyint(-double(min_v) / s))};
}

void check_bits(int bits); // throws ParamError unless 2 <= bits <= 8

} // namespace detail

/// Single (scale, zero-point) pair from the global min/max of the tensor.
QuantParams params_layerwise(const ActivationTensor& a, int bits);

/// Per-channel scale/zero-point vectors from the decomposed view: one
/// vectorized min/max pass over the rows, then one pass over the channel
/// axis for the parameter formulas. No per-channel scalar loop over spatial
/// elements (see aq::ref for the serial counterpart).
QuantParams params_channelwise(const DecomposedView& v, int bits);

/// codes[i] = clamp(round_half_even(x[i]/s + z), 0, 2^b - 1), with (s, z)
/// taken per element channel (or the single layer-wise pair). x/s + z is
/// evaluated as fma(x, 1/s, z) with the reciprocal formed once per channel;
/// serial and vector paths share this arithmetic bit for bit.
QuantizedActivation quantize(const ActivationTensor& a, const QuantParams& p);

/// Reconstructs s_c * (code - z_c) per element: for channel-wise params this
/// is the pre-scaled activation consumed by scale-free accumulation.
ActivationTensor dequantize_prescale(const QuantizedActivation& q);

/// Quantize-then-reconstruct with parameters computed from the input itself
/// (dynamic ranging). Exactly the composition of the three ops above.
ActivationTensor fake_quantize_ste_forward(const ActivationTensor& a, int bits, Granularity g);

/// Straight-through gradient: identity pass-through. Ranges are dynamic, so
/// every forward input lies inside its own quantization range and no
/// gradient clipping applies. Shape-checked against the forward input.
ActivationTensor fake_quantize_ste_backward(const ActivationTensor& upstream_grad,
                                            const Shape4& forward_shape);

} // namespace aq
