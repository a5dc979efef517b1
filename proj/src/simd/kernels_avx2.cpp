// AVX2/FMA kernel variants. Compiled with per-function target attributes so
// the rest of the binary stays baseline-only; nothing here may run unless the
// dispatcher verified CPU support.

#include "chanalyze/simd/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#define CHANALYZE_AVX2 __attribute__((target("avx2,fma")))

namespace chanalyze::simd::avx2 {

namespace {

CHANALYZE_AVX2 inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

}  // namespace

CHANALYZE_AVX2 double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * b[i];
    return hsum(acc) + tail;
}

CHANALYZE_AVX2 double sum(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i];
    return hsum(acc) + tail;
}

CHANALYZE_AVX2 void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, r);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

CHANALYZE_AVX2 void scale(double* x, double alpha, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), va));
    }
    for (; i < n; ++i) x[i] *= alpha;
}

CHANALYZE_AVX2 double squared_distance(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        tail += d * d;
    }
    return hsum(acc) + tail;
}

CHANALYZE_AVX2 void matvec(const double* w, std::size_t rows, std::size_t cols, const double* x,
                           double* y) {
    for (std::size_t r = 0; r < rows; ++r) y[r] = dot(w + r * cols, x, cols);
}

CHANALYZE_AVX2 void add_bias_relu(const double* x, const double* b, double* out, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(out + i, _mm256_max_pd(v, zero));
    }
    for (; i < n; ++i) out[i] = x[i] + b[i] > 0.0 ? x[i] + b[i] : 0.0;
}

CHANALYZE_AVX2 void shifted_ratio_product(const double* a, double sa, const double* b, double sb,
                                          const double* c, double sc, double* out, std::size_t n) {
    const __m256d vsa = _mm256_set1_pd(sa);
    const __m256d vsb = _mm256_set1_pd(sb);
    const __m256d vsc = _mm256_set1_pd(sc);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d va = _mm256_add_pd(_mm256_loadu_pd(a + i), vsa);
        const __m256d vb = _mm256_add_pd(_mm256_loadu_pd(b + i), vsb);
        const __m256d vc = _mm256_add_pd(_mm256_loadu_pd(c + i), vsc);
        _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_mul_pd(va, vb), vc));
    }
    for (; i < n; ++i) out[i] = (a[i] + sa) * (b[i] + sb) / (c[i] + sc);
}

}  // namespace chanalyze::simd::avx2

#endif  // x86
