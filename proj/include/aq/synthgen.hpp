#pragma once

#include <cstdint>
#include <vector>

#include "aq/tensor.hpp"

namespace aq {

/// SplitMix64 (Steele/Lea/Flood mixing generator). The full algorithm is
/// spelled out here so generated tensors are reproducible from the seed
/// alone, independent of any platform default engine:
///   state += 0x9E3779B97F4A7C15
///   z = state; z = (z ^ z>>30) * 0xBF58476D1EE4E5B9
///   z = (z ^ z>>27) * 0x94D049BB133111EB; return z ^ z>>31
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1EE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1), 53 mantissa bits.
    double next_double() { return double(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }
};

/// Recipe for a synthetic activation tensor reproducing the two distortion
/// drivers of data-free quantization inputs: wide inter-channel magnitude
/// spread and right-skewed value distributions.
///
/// Generation is a pure function of the spec:
/// 1. per-channel magnitude factors, drawn log-uniformly from
///    [1, channel_spread], one SplitMix64 double per channel in order;
/// 2. per element (flat NCHW order) a standard normal via Box-Muller from
///    two SplitMix64 doubles, pushed through the skew map
///    v = expm1(skew * z) / skew (identity at skew == 0; the map is the
///    increasing exponential tilt, so larger knobs give heavier right
///    tails), scaled by the channel factor;
/// 3. if nonneg, negative values clip to zero (ReLU-style).
struct GenSpec {
    std::uint64_t seed = 42;
    Shape4 shape;
    double channel_spread = 1.0; // ratio of largest to smallest channel factor, >= 1
    double skew = 0.0;           // 0 = symmetric Gaussian base
    bool nonneg = false;
};

ActivationTensor generate(const GenSpec& spec);

/// The 19 activation shapes of a CIFAR ResNet-20 stack at batch 16:
/// channels 16 at 32x32 (7 sites), 32 at 16x16 (6), 64 at 8x8 (6).
/// Seeds derive from base_seed; spread/skew/nonneg are set to
/// activation-like defaults (8x spread, 0.3 skew, clipped at zero).
std::vector<GenSpec> resnet20_shape_preset(std::uint64_t base_seed = 42);

} // namespace aq
