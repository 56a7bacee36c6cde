// Independent reference computations the kernels are checked against. These
// recompute results from the raw definitions (per-index walks, double
// precision, division form) and never call the library's fast paths.

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "aq/accumulate.hpp"
#include "aq/quant.hpp"
#include "aq/tensor.hpp"

namespace oracle {

// Value of decomposed element (c, j) straight from the NCHW index formula.
inline float decomposed_at(const aq::ActivationTensor& a, std::size_t c, std::size_t j) {
    const aq::Shape4& s = a.shape();
    const std::size_t hw = s.spatial();
    const std::size_t n = j / hw;
    const std::size_t h = (j % hw) / s.w;
    const std::size_t w = (j % hw) % s.w;
    return a.at(std::uint32_t(n), std::uint32_t(c), std::uint32_t(h), std::uint32_t(w));
}

// Per-element quantization in the division form of the defining formula.
inline std::uint8_t quantize_value(double x, double scale, std::int64_t zp, int bits) {
    const double t = std::nearbyint(x / scale + double(zp));
    const double max_code = double((std::int64_t{1} << bits) - 1);
    const double c = t < 0.0 ? 0.0 : (t > max_code ? max_code : t);
    return std::uint8_t(c);
}

inline double dequantize_value(std::uint8_t code, double scale, std::int64_t zp) {
    return scale * (double(code) - double(zp));
}

// Triple-loop double-precision accumulation over the defining sum.
inline std::vector<double> accumulate_triple_loop(const aq::QuantizedActivation& q,
                                                  const aq::ChannelWeights& w) {
    const aq::Shape4& s = q.shape;
    const std::size_t hw = s.spatial();
    const std::size_t positions = std::size_t(s.n) * hw;
    const bool per_channel = q.params.granularity == aq::Granularity::ChannelWise;
    std::vector<double> y(w.out_units() * positions, 0.0);
    for (std::size_t m = 0; m < w.out_units(); ++m) {
        for (std::size_t j = 0; j < positions; ++j) {
            const std::size_t n = j / hw;
            const std::size_t k = j % hw;
            double acc = 0.0;
            for (std::size_t c = 0; c < s.c; ++c) {
                const double scale = q.params.scale[per_channel ? c : 0];
                const std::int64_t zp = q.params.zero_point[per_channel ? c : 0];
                const std::uint8_t code = q.codes[(n * s.c + c) * hw + k];
                acc += double(w.at(m, c)) * scale * (double(code) - double(zp));
            }
            y[m * positions + j] = acc;
        }
    }
    return y;
}

// Population skewness straight from the moment definitions.
inline double skewness_by_moments(const std::vector<double>& x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= double(x.size());
    double m2 = 0.0;
    double m3 = 0.0;
    for (double v : x) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= double(x.size());
    m3 /= double(x.size());
    return m3 / std::pow(m2, 1.5);
}

// |a - b| relative to max(|a|, |b|, 1).
inline double rel_dev(double a, double b) {
    const double denom = std::max({std::fabs(a), std::fabs(b), 1.0});
    return std::fabs(a - b) / denom;
}

} // namespace oracle
