// Every accumulation step here is an explicit fused multiply-add: the
// in-loop scalar path and the pre-scaled vector path perform the exact same
// per-element fma sequence in ascending channel order and stay bit-identical,
// which the equivalence checks assert at 1e-5 relative.

#include "aq/accumulate.hpp"

#include <cmath>
#include <string>

#include "aq/errors.hpp"
#include "simd.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace aq {

ChannelWeights::ChannelWeights(std::size_t out_units, std::size_t channels,
                               std::vector<float> values)
    : out_units_(out_units), channels_(channels), values_(std::move(values)) {
    if (out_units_ < 1 || channels_ < 1) {
        throw ShapeError("weights need at least one output unit and one channel");
    }
    if (values_.size() != out_units_ * channels_) {
        throw ShapeError("weight value count " + std::to_string(values_.size()) +
                         " does not match " + std::to_string(out_units_) + "x" +
                         std::to_string(channels_));
    }
    for (float v : values_) {
        if (!std::isfinite(v)) {
            throw ParamError("weights hold a non-finite value");
        }
    }
}

ChannelWeights ChannelWeights::identity(std::size_t channels) {
    std::vector<float> v(channels * channels, 0.0f);
    for (std::size_t i = 0; i < channels; ++i) {
        v[i * channels + i] = 1.0f;
    }
    return ChannelWeights(channels, channels, std::move(v));
}

namespace {

void check_channels(const QuantizedActivation& q, const ChannelWeights& w) {
    if (w.channels() != q.shape.c) {
        throw ShapeError("weight column count " + std::to_string(w.channels()) +
                         " does not match activation channel count " + std::to_string(q.shape.c));
    }
}

// y[j] = sum_c w[c] * rows[c*stride + j] for j in [0, cols). Output lanes are
// held in registers across the channel loop and every element accumulates in
// ascending channel order, one fma per step: the same per-element float
// sequence the in-loop path produces.
void mix_rows(const float* rows, std::size_t stride, const float* w, std::size_t channels,
              float* y, std::size_t cols) {
    std::size_t j = 0;
#if defined(__AVX512F__)
    for (; j + 64 <= cols; j += 64) {
        __m512 acc0 = _mm512_setzero_ps();
        __m512 acc1 = _mm512_setzero_ps();
        __m512 acc2 = _mm512_setzero_ps();
        __m512 acc3 = _mm512_setzero_ps();
        for (std::size_t c = 0; c < channels; ++c) {
            const __m512 wv = _mm512_set1_ps(w[c]);
            const float* a = rows + c * stride + j;
            acc0 = _mm512_fmadd_ps(wv, _mm512_loadu_ps(a), acc0);
            acc1 = _mm512_fmadd_ps(wv, _mm512_loadu_ps(a + 16), acc1);
            acc2 = _mm512_fmadd_ps(wv, _mm512_loadu_ps(a + 32), acc2);
            acc3 = _mm512_fmadd_ps(wv, _mm512_loadu_ps(a + 48), acc3);
        }
        _mm512_storeu_ps(y + j, acc0);
        _mm512_storeu_ps(y + j + 16, acc1);
        _mm512_storeu_ps(y + j + 32, acc2);
        _mm512_storeu_ps(y + j + 48, acc3);
    }
    for (; j + 16 <= cols; j += 16) {
        __m512 acc = _mm512_setzero_ps();
        for (std::size_t c = 0; c < channels; ++c) {
            acc = _mm512_fmadd_ps(_mm512_set1_ps(w[c]),
                                  _mm512_loadu_ps(rows + c * stride + j), acc);
        }
        _mm512_storeu_ps(y + j, acc);
    }
#elif defined(__AVX2__)
    for (; j + 32 <= cols; j += 32) {
        __m256 acc0 = _mm256_setzero_ps();
        __m256 acc1 = _mm256_setzero_ps();
        __m256 acc2 = _mm256_setzero_ps();
        __m256 acc3 = _mm256_setzero_ps();
        for (std::size_t c = 0; c < channels; ++c) {
            const __m256 wv = _mm256_set1_ps(w[c]);
            const float* a = rows + c * stride + j;
            acc0 = _mm256_fmadd_ps(wv, _mm256_loadu_ps(a), acc0);
            acc1 = _mm256_fmadd_ps(wv, _mm256_loadu_ps(a + 8), acc1);
            acc2 = _mm256_fmadd_ps(wv, _mm256_loadu_ps(a + 16), acc2);
            acc3 = _mm256_fmadd_ps(wv, _mm256_loadu_ps(a + 24), acc3);
        }
        _mm256_storeu_ps(y + j, acc0);
        _mm256_storeu_ps(y + j + 8, acc1);
        _mm256_storeu_ps(y + j + 16, acc2);
        _mm256_storeu_ps(y + j + 24, acc3);
    }
    for (; j + 8 <= cols; j += 8) {
        __m256 acc = _mm256_setzero_ps();
        for (std::size_t c = 0; c < channels; ++c) {
            acc = _mm256_fmadd_ps(_mm256_set1_ps(w[c]),
                                  _mm256_loadu_ps(rows + c * stride + j), acc);
        }
        _mm256_storeu_ps(y + j, acc);
    }
#endif
    for (; j < cols; ++j) {
        float acc = 0.0f;
        for (std::size_t c = 0; c < channels; ++c) {
            acc = std::fma(w[c], rows[c * stride + j], acc);
        }
        y[j] = acc;
    }
}

// Four output rows at once: each activation load feeds four accumulator
// sets, quartering the activation re-read traffic. Per-element channel
// order and mul/add roundings are identical to mix_rows.
void mix_rows_x4(const float* rows, std::size_t stride, const float* w0, const float* w1,
                 const float* w2, const float* w3, std::size_t channels, float* y0, float* y1,
                 float* y2, float* y3, std::size_t cols) {
    std::size_t j = 0;
#if defined(__AVX512F__)
    for (; j + 32 <= cols; j += 32) {
        __m512 a00 = _mm512_setzero_ps();
        __m512 a01 = _mm512_setzero_ps();
        __m512 a10 = _mm512_setzero_ps();
        __m512 a11 = _mm512_setzero_ps();
        __m512 a20 = _mm512_setzero_ps();
        __m512 a21 = _mm512_setzero_ps();
        __m512 a30 = _mm512_setzero_ps();
        __m512 a31 = _mm512_setzero_ps();
        for (std::size_t c = 0; c < channels; ++c) {
            const float* a = rows + c * stride + j;
            const __m512 v0 = _mm512_loadu_ps(a);
            const __m512 v1 = _mm512_loadu_ps(a + 16);
            const __m512 b0 = _mm512_set1_ps(w0[c]);
            const __m512 b1 = _mm512_set1_ps(w1[c]);
            const __m512 b2 = _mm512_set1_ps(w2[c]);
            const __m512 b3 = _mm512_set1_ps(w3[c]);
            a00 = _mm512_fmadd_ps(b0, v0, a00);
            a01 = _mm512_fmadd_ps(b0, v1, a01);
            a10 = _mm512_fmadd_ps(b1, v0, a10);
            a11 = _mm512_fmadd_ps(b1, v1, a11);
            a20 = _mm512_fmadd_ps(b2, v0, a20);
            a21 = _mm512_fmadd_ps(b2, v1, a21);
            a30 = _mm512_fmadd_ps(b3, v0, a30);
            a31 = _mm512_fmadd_ps(b3, v1, a31);
        }
        _mm512_storeu_ps(y0 + j, a00);
        _mm512_storeu_ps(y0 + j + 16, a01);
        _mm512_storeu_ps(y1 + j, a10);
        _mm512_storeu_ps(y1 + j + 16, a11);
        _mm512_storeu_ps(y2 + j, a20);
        _mm512_storeu_ps(y2 + j + 16, a21);
        _mm512_storeu_ps(y3 + j, a30);
        _mm512_storeu_ps(y3 + j + 16, a31);
    }
#elif defined(__AVX2__)
    for (; j + 16 <= cols; j += 16) {
        __m256 a00 = _mm256_setzero_ps();
        __m256 a01 = _mm256_setzero_ps();
        __m256 a10 = _mm256_setzero_ps();
        __m256 a11 = _mm256_setzero_ps();
        __m256 a20 = _mm256_setzero_ps();
        __m256 a21 = _mm256_setzero_ps();
        __m256 a30 = _mm256_setzero_ps();
        __m256 a31 = _mm256_setzero_ps();
        for (std::size_t c = 0; c < channels; ++c) {
            const float* a = rows + c * stride + j;
            const __m256 v0 = _mm256_loadu_ps(a);
            const __m256 v1 = _mm256_loadu_ps(a + 8);
            const __m256 b0 = _mm256_set1_ps(w0[c]);
            const __m256 b1 = _mm256_set1_ps(w1[c]);
            const __m256 b2 = _mm256_set1_ps(w2[c]);
            const __m256 b3 = _mm256_set1_ps(w3[c]);
            a00 = _mm256_fmadd_ps(b0, v0, a00);
            a01 = _mm256_fmadd_ps(b0, v1, a01);
            a10 = _mm256_fmadd_ps(b1, v0, a10);
            a11 = _mm256_fmadd_ps(b1, v1, a11);
            a20 = _mm256_fmadd_ps(b2, v0, a20);
            a21 = _mm256_fmadd_ps(b2, v1, a21);
            a30 = _mm256_fmadd_ps(b3, v0, a30);
            a31 = _mm256_fmadd_ps(b3, v1, a31);
        }
        _mm256_storeu_ps(y0 + j, a00);
        _mm256_storeu_ps(y0 + j + 8, a01);
        _mm256_storeu_ps(y1 + j, a10);
        _mm256_storeu_ps(y1 + j + 8, a11);
        _mm256_storeu_ps(y2 + j, a20);
        _mm256_storeu_ps(y2 + j + 8, a21);
        _mm256_storeu_ps(y3 + j, a30);
        _mm256_storeu_ps(y3 + j + 8, a31);
    }
#endif
    if (j < cols) {
        mix_rows(rows + j, stride, w0, channels, y0 + j, cols - j);
        mix_rows(rows + j, stride, w1, channels, y1 + j, cols - j);
        mix_rows(rows + j, stride, w2, channels, y2 + j, cols - j);
        mix_rows(rows + j, stride, w3, channels, y3 + j, cols - j);
    }
}

// As mix_rows, but over uint8 code rows widened to float on load.
void mix_code_rows(const std::uint8_t* rows, std::size_t stride, const float* w,
                   std::size_t channels, float* y, std::size_t cols) {
    std::size_t j = 0;
#if defined(__AVX512F__)
    for (; j + 16 <= cols; j += 16) {
        __m512 acc = _mm512_setzero_ps();
        for (std::size_t c = 0; c < channels; ++c) {
            const __m128i bytes =
                _mm_loadu_si128(reinterpret_cast<const __m128i*>(rows + c * stride + j));
            const __m512 a = _mm512_cvtepi32_ps(_mm512_cvtepu8_epi32(bytes));
            acc = _mm512_fmadd_ps(_mm512_set1_ps(w[c]), a, acc);
        }
        _mm512_storeu_ps(y + j, acc);
    }
#elif defined(__AVX2__)
    for (; j + 8 <= cols; j += 8) {
        __m256 acc = _mm256_setzero_ps();
        for (std::size_t c = 0; c < channels; ++c) {
            const __m128i bytes =
                _mm_loadl_epi64(reinterpret_cast<const __m128i*>(rows + c * stride + j));
            const __m256 a = _mm256_cvtepi32_ps(_mm256_cvtepu8_epi32(bytes));
            acc = _mm256_fmadd_ps(_mm256_set1_ps(w[c]), a, acc);
        }
        _mm256_storeu_ps(y + j, acc);
    }
#endif
    for (; j < cols; ++j) {
        float acc = 0.0f;
        for (std::size_t c = 0; c < channels; ++c) {
            acc = std::fma(w[c], float(rows[c * stride + j]), acc);
        }
        y[j] = acc;
    }
}

} // namespace

OutputVector accumulate_inloop(const QuantizedActivation& q, const ChannelWeights& w) {
    check_channels(q, w);
    const Shape4& s = q.shape;
    const std::size_t hw = s.spatial();
    const std::size_t positions = std::size_t(s.n) * hw;
    const std::size_t channels = s.c;
    const bool per_channel = q.params.granularity == Granularity::ChannelWise;

    OutputVector y;
    y.out_units = w.out_units();
    y.positions = positions;
    y.values.assign(w.out_units() * positions, 0.0f);

    const std::uint8_t* codes = q.codes.data();
    for (std::size_t m = 0; m < w.out_units(); ++m) {
        const float* wm = w.row(m).data();
        float* yrow = y.values.data() + m * positions;
        for (std::uint32_t n = 0; n < s.n; ++n) {
            const std::uint8_t* block = codes + std::size_t(n) * channels * hw;
            float* yseg = yrow + std::size_t(n) * hw;
            for (std::size_t k = 0; k < hw; ++k) {
                float acc = 0.0f;
                // Channel index innermost; the scale multiply happens at every
                // step and the scalar accumulator carries the c -> c+1
                // dependence that pins the evaluation order.
                for (std::size_t c = 0; c < channels; ++c) {
                    const double scale = q.params.scale[per_channel ? c : 0];
                    const double zp = double(q.params.zero_point[per_channel ? c : 0]);
                    const float deq = simd::dequantize_one(block[c * hw + k], scale, zp);
                    acc = std::fma(wm[c], deq, acc);
                }
                yseg[k] = acc;
            }
        }
    }
    return y;
}

OutputVector accumulate_prescaled(const QuantizedActivation& q, const ChannelWeights& w) {
    check_channels(q, w);
    const ActivationTensor prescaled = dequantize_prescale(q);
    const Shape4& s = q.shape;
    const std::size_t hw = s.spatial();
    const std::size_t positions = std::size_t(s.n) * hw;
    const std::size_t channels = s.c;
    const std::size_t m_units = w.out_units();

    OutputVector y;
    y.out_units = m_units;
    y.positions = positions;
    y.values.resize(m_units * positions);

    const float* src = prescaled.values().data();
    float* dst = y.values.data();

#ifdef _OPENMP
#pragma omp parallel for schedule(static) \
    if (std::size_t(s.n) * m_units * channels * hw > std::size_t{1} << 15)
#endif
    for (std::int64_t ni = 0; ni < std::int64_t(s.n); ++ni) {
        const std::size_t n = std::size_t(ni);
        const float* ablock = src + n * channels * hw;
        float* ybase = dst + n * hw;
        std::size_t m = 0;
        for (; m + 4 <= m_units; m += 4) {
            mix_rows_x4(ablock, hw, w.row(m).data(), w.row(m + 1).data(), w.row(m + 2).data(),
                        w.row(m + 3).data(), channels, ybase + m * positions,
                        ybase + (m + 1) * positions, ybase + (m + 2) * positions,
                        ybase + (m + 3) * positions, hw);
        }
        for (; m < m_units; ++m) {
            mix_rows(ablock, hw, w.row(m).data(), channels, ybase + m * positions, hw);
        }
    }
    return y;
}

OutputVector accumulate_layerwise(const QuantizedActivation& q, const ChannelWeights& w) {
    check_channels(q, w);
    if (q.params.granularity != Granularity::LayerWise) {
        throw ParamError("accumulate_layerwise requires layer-wise params");
    }
    const Shape4& s = q.shape;
    const std::size_t hw = s.spatial();
    const std::size_t positions = std::size_t(s.n) * hw;
    const std::size_t channels = s.c;
    const std::size_t m_units = w.out_units();
    const double scale = q.params.scale[0];
    const double zp = double(q.params.zero_point[0]);

    // y[m][j] = s * (sum_c w[m][c]*code[c][j]) - s*z*(sum_c w[m][c]); both
    // the scale and the zero-point correction live outside the loops.
    std::vector<float> row_corr(m_units);
    for (std::size_t m = 0; m < m_units; ++m) {
        double acc = 0.0;
        for (float v : w.row(m)) {
            acc += double(v);
        }
        row_corr[m] = float(scale * zp * acc);
    }
    const float sf = float(scale);

    OutputVector y;
    y.out_units = m_units;
    y.positions = positions;
    y.values.resize(m_units * positions);

    const std::uint8_t* codes = q.codes.data();
    float* dst = y.values.data();
    const std::int64_t blocks = std::int64_t(s.n) * std::int64_t(m_units);

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (blocks* channels* hw > std::size_t{1} << 15)
#endif
    for (std::int64_t b = 0; b < blocks; ++b) {
        const std::size_t n = std::size_t(b) / m_units;
        const std::size_t m = std::size_t(b) % m_units;
        float* yseg = dst + m * positions + n * hw;
        mix_code_rows(codes + n * channels * hw, hw, w.row(m).data(), channels, yseg, hw);
        const float corr = row_corr[m];
        for (std::size_t k = 0; k < hw; ++k) {
            yseg[k] = sf * yseg[k] - corr;
        }
    }
    return y;
}

} // namespace aq
