#if defined(__x86_64__)

#include "bridge/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace bridge::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

void axpy_avx2(double c, const double* a, double* out, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i);
        __m256d vo = _mm256_loadu_pd(out + i);
        _mm256_storeu_pd(out + i, _mm256_fmadd_pd(vc, va, vo));
    }
    for (; i < n; ++i) out[i] += c * a[i];
}

double weighted_dot_avx2(const double* w, const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), prod, acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += w[i] * a[i] * b[i];
    return hsum(acc) + tail;
}

double weighted_sum_avx2(const double* w, const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(a + i), acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += w[i] * a[i];
    return hsum(acc) + tail;
}

void cable_terms_avx2(const double* slope, const double* xi, double* chi,
                      double* r_minus_xi, std::size_t n) {
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d s = _mm256_loadu_pd(slope + i);
        __m256d r = _mm256_sqrt_pd(_mm256_fmadd_pd(s, s, one));
        _mm256_storeu_pd(chi + i, _mm256_div_pd(s, r));
        _mm256_storeu_pd(r_minus_xi + i, _mm256_sub_pd(r, _mm256_loadu_pd(xi + i)));
    }
    for (; i < n; ++i) {
        const double s = slope[i];
        const double r = std::sqrt(1.0 + s * s);
        chi[i] = s / r;
        r_minus_xi[i] = r - xi[i];
    }
}

}  // namespace

const Backend avx2_backend() {
    return Backend{axpy_avx2, weighted_dot_avx2, weighted_sum_avx2, cable_terms_avx2, "avx2"};
}

}  // namespace bridge::kernels

#endif  // __x86_64__
