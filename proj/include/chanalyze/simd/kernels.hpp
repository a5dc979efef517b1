#pragma once

#include <cstddef>
#include <string>

// Double-precision kernels behind the arithmetic inner loops (MLP layers,
// k-means distances, Gibbs sampling weights, PageRank updates). Scalar
// reference implementations always exist; an AVX2/FMA variant is selected at
// runtime when the CPU supports it. The two variants are equivalence-tested
// against each other.

namespace chanalyze::simd {

enum class Backend { scalar, avx2 };

bool avx2_supported();

// Active backend. Resolved once: CHANALYZE_SIMD=scalar|avx2 wins if set,
// otherwise the best supported variant.
Backend active_backend();
std::string backend_name();

// Test hook. Forcing avx2 on a CPU without it is ignored.
void force_backend(Backend b);

double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);  // y += alpha*x
void scale(double* x, double alpha, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);

// y = W x, W row-major (rows x cols).
void matvec(const double* w, std::size_t rows, std::size_t cols, const double* x, double* y);

// out[i] = max(0, x[i] + b[i])
void add_bias_relu(const double* x, const double* b, double* out, std::size_t n);

// out[i] = (a[i]+sa) * (b[i]+sb) / (c[i]+sc). Collapsed-Gibbs topic weights.
void shifted_ratio_product(const double* a, double sa, const double* b, double sb,
                           const double* c, double sc, double* out, std::size_t n);

// Scalar reference implementations, exposed for equivalence tests.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double* x, double alpha, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void matvec(const double* w, std::size_t rows, std::size_t cols, const double* x, double* y);
void add_bias_relu(const double* x, const double* b, double* out, std::size_t n);
void shifted_ratio_product(const double* a, double sa, const double* b, double sb,
                           const double* c, double sc, double* out, std::size_t n);
}  // namespace scalar

}  // namespace chanalyze::simd
