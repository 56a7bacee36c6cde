// Internal vector kernels for the hot per-element loops. Each has an
// AVX-512, an AVX2+FMA and a scalar path that produce bit-identical
// results: rounding is round-to-nearest-even via fixed-mode round
// instructions (imm = 0), the scale step is a single fused multiply-add,
// and dequantization multiplies once after an exact integer subtract.
// The scalar path is the reference the vector paths are tested against.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

#if defined(__AVX512F__) || defined(__AVX2__)
#include <immintrin.h>
#endif

namespace aq::simd {

// ---------------------------------------------------------------- min/max

inline void span_min_max_scalar(const float* p, std::size_t n, float& lo, float& hi) {
    float mn = lo;
    float mx = hi;
    for (std::size_t i = 0; i < n; ++i) {
        const float x = p[i];
        mn = x < mn ? x : mn;
        mx = x > mx ? x : mx;
    }
    lo = mn;
    hi = mx;
}

/// Folds [p, p+n) into running bounds lo/hi (callers seed them with p[0]).
inline void span_min_max(const float* p, std::size_t n, float& lo, float& hi) {
#if defined(__AVX512F__)
    if (n >= 32) {
        __m512 vlo0 = _mm512_set1_ps(lo);
        __m512 vhi0 = _mm512_set1_ps(hi);
        __m512 vlo1 = vlo0;
        __m512 vhi1 = vhi0;
        std::size_t i = 0;
        for (; i + 32 <= n; i += 32) {
            const __m512 a = _mm512_loadu_ps(p + i);
            const __m512 b = _mm512_loadu_ps(p + i + 16);
            vlo0 = _mm512_min_ps(vlo0, a);
            vhi0 = _mm512_max_ps(vhi0, a);
            vlo1 = _mm512_min_ps(vlo1, b);
            vhi1 = _mm512_max_ps(vhi1, b);
        }
        lo = _mm512_reduce_min_ps(_mm512_min_ps(vlo0, vlo1));
        hi = _mm512_reduce_max_ps(_mm512_max_ps(vhi0, vhi1));
        span_min_max_scalar(p + i, n - i, lo, hi);
        return;
    }
#elif defined(__AVX2__)
    if (n >= 16) {
        __m256 vlo0 = _mm256_set1_ps(lo);
        __m256 vhi0 = _mm256_set1_ps(hi);
        __m256 vlo1 = vlo0;
        __m256 vhi1 = vhi0;
        std::size_t i = 0;
        for (; i + 16 <= n; i += 16) {
            const __m256 a = _mm256_loadu_ps(p + i);
            const __m256 b = _mm256_loadu_ps(p + i + 8);
            vlo0 = _mm256_min_ps(vlo0, a);
            vhi0 = _mm256_max_ps(vhi0, a);
            vlo1 = _mm256_min_ps(vlo1, b);
            vhi1 = _mm256_max_ps(vhi1, b);
        }
        const __m256 vlo = _mm256_min_ps(vlo0, vlo1);
        const __m256 vhi = _mm256_max_ps(vhi0, vhi1);
        alignas(32) float tmp_lo[8];
        alignas(32) float tmp_hi[8];
        _mm256_store_ps(tmp_lo, vlo);
        _mm256_store_ps(tmp_hi, vhi);
        for (int k = 0; k < 8; ++k) {
            lo = tmp_lo[k] < lo ? tmp_lo[k] : lo;
            hi = tmp_hi[k] > hi ? tmp_hi[k] : hi;
        }
        span_min_max_scalar(p + i, n - i, lo, hi);
        return;
    }
#endif
    span_min_max_scalar(p, n, lo, hi);
}

// ---------------------------------------------------------------- quantize

/// clamp(round_half_even(fma(x, inv_scale, zp)), 0, max_code) as uint8.
/// Clamping before rounding gives the same codes (the bounds are integers)
/// and lets the vector paths convert with a single cvtpd2dq, whose
/// round-to-nearest-even matches nearbyint under the default FP environment.
inline std::uint8_t quantize_one(float x, double inv_scale, double zp, double max_code) {
    const double t = std::fma(double(x), inv_scale, zp);
    const double c = t < 0.0 ? 0.0 : (t > max_code ? max_code : t);
    return std::uint8_t(std::int32_t(std::nearbyint(c)));
}

inline void quantize_span(const float* in, std::uint8_t* out, std::size_t n, double inv_scale,
                          double zp, double max_code) {
    std::size_t i = 0;
#if defined(__AVX512F__)
    const __m512d vinv = _mm512_set1_pd(inv_scale);
    const __m512d vzp = _mm512_set1_pd(zp);
    const __m512d vmax = _mm512_set1_pd(max_code);
    const __m512d vzero = _mm512_setzero_pd();
    for (; i + 16 <= n; i += 16) {
        const __m256 lo = _mm256_loadu_ps(in + i);
        const __m256 hi = _mm256_loadu_ps(in + i + 8);
        __m512d d0 = _mm512_fmadd_pd(_mm512_cvtps_pd(lo), vinv, vzp);
        __m512d d1 = _mm512_fmadd_pd(_mm512_cvtps_pd(hi), vinv, vzp);
        d0 = _mm512_min_pd(_mm512_max_pd(d0, vzero), vmax);
        d1 = _mm512_min_pd(_mm512_max_pd(d1, vzero), vmax);
        const __m256i i0 = _mm512_cvtpd_epi32(d0); // rounds half-to-even
        const __m256i i1 = _mm512_cvtpd_epi32(d1);
        const __m512i all =
            _mm512_inserti64x4(_mm512_castsi256_si512(i0), i1, 1);
        _mm_storeu_si128(reinterpret_cast<__m128i*>(out + i), _mm512_cvtepi32_epi8(all));
    }
#elif defined(__AVX2__) && defined(__FMA__)
    const __m256d vinv = _mm256_set1_pd(inv_scale);
    const __m256d vzp = _mm256_set1_pd(zp);
    const __m256d vmax = _mm256_set1_pd(max_code);
    const __m256d vzero = _mm256_setzero_pd();
    for (; i + 8 <= n; i += 8) {
        const __m128 lo = _mm_loadu_ps(in + i);
        const __m128 hi = _mm_loadu_ps(in + i + 4);
        __m256d d0 = _mm256_fmadd_pd(_mm256_cvtps_pd(lo), vinv, vzp);
        __m256d d1 = _mm256_fmadd_pd(_mm256_cvtps_pd(hi), vinv, vzp);
        d0 = _mm256_min_pd(_mm256_max_pd(d0, vzero), vmax);
        d1 = _mm256_min_pd(_mm256_max_pd(d1, vzero), vmax);
        const __m128i i0 = _mm256_cvtpd_epi32(d0); // rounds half-to-even
        const __m128i i1 = _mm256_cvtpd_epi32(d1);
        const __m128i packed16 = _mm_packus_epi32(i0, i1);
        const __m128i packed8 = _mm_packus_epi16(packed16, packed16);
        _mm_storel_epi64(reinterpret_cast<__m128i*>(out + i), packed8);
    }
#endif
    for (; i < n; ++i) {
        out[i] = quantize_one(in[i], inv_scale, zp, max_code);
    }
}

// -------------------------------------------------------------- dequantize

/// float32(scale * (code - zp)): exact integer subtract, one rounded multiply.
inline float dequantize_one(std::uint8_t code, double scale, double zp) {
    return float(scale * (double(code) - zp));
}

inline void dequantize_span(const std::uint8_t* in, float* out, std::size_t n, double scale,
                            double zp) {
    std::size_t i = 0;
#if defined(__AVX512F__)
    const __m512d vs = _mm512_set1_pd(scale);
    const __m512d vzp = _mm512_set1_pd(zp);
    for (; i + 16 <= n; i += 16) {
        const __m128i bytes = _mm_loadu_si128(reinterpret_cast<const __m128i*>(in + i));
        const __m512i ints = _mm512_cvtepu8_epi32(bytes);
        const __m256i lo = _mm512_castsi512_si256(ints);
        const __m256i hi = _mm512_extracti64x4_epi64(ints, 1);
        const __m512d d0 = _mm512_mul_pd(_mm512_sub_pd(_mm512_cvtepi32_pd(lo), vzp), vs);
        const __m512d d1 = _mm512_mul_pd(_mm512_sub_pd(_mm512_cvtepi32_pd(hi), vzp), vs);
        _mm256_storeu_ps(out + i, _mm512_cvtpd_ps(d0));
        _mm256_storeu_ps(out + i + 8, _mm512_cvtpd_ps(d1));
    }
#elif defined(__AVX2__)
    const __m256d vs = _mm256_set1_pd(scale);
    const __m256d vzp = _mm256_set1_pd(zp);
    for (; i + 8 <= n; i += 8) {
        const __m128i bytes = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(in + i));
        const __m256i ints = _mm256_cvtepu8_epi32(bytes);
        const __m128i lo = _mm256_castsi256_si128(ints);
        const __m128i hi = _mm256_extracti128_si256(ints, 1);
        const __m256d d0 = _mm256_mul_pd(_mm256_sub_pd(_mm256_cvtepi32_pd(lo), vzp), vs);
        const __m256d d1 = _mm256_mul_pd(_mm256_sub_pd(_mm256_cvtepi32_pd(hi), vzp), vs);
        _mm_storeu_ps(out + i, _mm256_cvtpd_ps(d0));
        _mm_storeu_ps(out + i + 4, _mm256_cvtpd_ps(d1));
    }
#endif
    for (; i < n; ++i) {
        out[i] = dequantize_one(in[i], scale, zp);
    }
}

} // namespace aq::simd
