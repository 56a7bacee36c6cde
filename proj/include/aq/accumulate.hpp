#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "aq/quant.hpp"

namespace aq {

/// Dense M x C weight matrix: one weight per input channel per output unit.
/// A 1x1-convolution / fully-connected surrogate; values validated finite.
class ChannelWeights {
public:
    ChannelWeights(std::size_t out_units, std::size_t channels, std::vector<float> values);

    static ChannelWeights identity(std::size_t channels);

    std::size_t out_units() const { return out_units_; }
    std::size_t channels() const { return channels_; }
    float at(std::size_t m, std::size_t c) const { return values_[m * channels_ + c]; }
    std::span<const float> row(std::size_t m) const {
        return std::span<const float>(values_).subspan(m * channels_, channels_);
    }
    std::span<const float> values() const { return values_; }

private:
    std::size_t out_units_;
    std::size_t channels_;
    std::vector<float> values_;
};

/// M x (N*H*W) outputs: one row per output unit, columns indexed like a
/// DecomposedView row (batch-major, then row-major spatial).
struct OutputVector {
    std::size_t out_units = 0;
    std::size_t positions = 0;
    std::vector<float> values;

    float at(std::size_t m, std::size_t j) const { return values[m * positions + j]; }
};

/// Channel-wise accumulation with the scale applied inside the loop:
///   y[m][j] = sum_c w[m][c] * s_c * (codes[c][j] - z_c)
/// evaluated with the channel index innermost and the per-channel scale
/// multiplied at every accumulation step. Serial by contract: each output
/// element's channel sum is order-defined, so the scaling cannot be hoisted
/// out of the loop or reassociated. This is the conventional baseline the
/// pre-scaled path is measured against.
OutputVector accumulate_inloop(const QuantizedActivation& q, const ChannelWeights& w);

/// Pre-scaled accumulation: materializes the scale-free activations via
/// dequantize_prescale in one vectorized pass, then computes a dense
/// scale-free inner product over channels. Data-parallel over output units
/// and positions; numerically equivalent to accumulate_inloop.
OutputVector accumulate_prescaled(const QuantizedActivation& q, const ChannelWeights& w);

/// Layer-wise reference path: the single (s, z) pair is hoisted entirely out
/// of both loops. Requires layer-wise params.
OutputVector accumulate_layerwise(const QuantizedActivation& q, const ChannelWeights& w);

} // namespace aq
