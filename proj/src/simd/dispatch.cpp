#include "chanalyze/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace chanalyze::simd {

#if defined(__x86_64__) || defined(__i386__)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double* x, double alpha, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void matvec(const double* w, std::size_t rows, std::size_t cols, const double* x, double* y);
void add_bias_relu(const double* x, const double* b, double* out, std::size_t n);
void shifted_ratio_product(const double* a, double sa, const double* b, double sb,
                           const double* c, double sc, double* out, std::size_t n);
}  // namespace avx2
#endif

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

Backend resolve_initial() {
    if (const char* env = std::getenv("CHANALYZE_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && avx2_supported()) return Backend::avx2;
    }
    return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend> g_backend{resolve_initial()};

}  // namespace

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

std::string backend_name() {
    return active_backend() == Backend::avx2 ? "avx2" : "scalar";
}

void force_backend(Backend b) {
    if (b == Backend::avx2 && !avx2_supported()) return;
    g_backend.store(b, std::memory_order_relaxed);
}

#if defined(__x86_64__) || defined(__i386__)
#define CHANALYZE_DISPATCH(call_scalar, call_avx2) \
    return active_backend() == Backend::avx2 ? call_avx2 : call_scalar
#else
#define CHANALYZE_DISPATCH(call_scalar, call_avx2) return call_scalar
#endif

double dot(const double* a, const double* b, std::size_t n) {
    CHANALYZE_DISPATCH(scalar::dot(a, b, n), avx2::dot(a, b, n));
}

double sum(const double* a, std::size_t n) {
    CHANALYZE_DISPATCH(scalar::sum(a, n), avx2::sum(a, n));
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    CHANALYZE_DISPATCH(scalar::axpy(alpha, x, y, n), avx2::axpy(alpha, x, y, n));
}

void scale(double* x, double alpha, std::size_t n) {
    CHANALYZE_DISPATCH(scalar::scale(x, alpha, n), avx2::scale(x, alpha, n));
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    CHANALYZE_DISPATCH(scalar::squared_distance(a, b, n), avx2::squared_distance(a, b, n));
}

void matvec(const double* w, std::size_t rows, std::size_t cols, const double* x, double* y) {
    CHANALYZE_DISPATCH(scalar::matvec(w, rows, cols, x, y), avx2::matvec(w, rows, cols, x, y));
}

void add_bias_relu(const double* x, const double* b, double* out, std::size_t n) {
    CHANALYZE_DISPATCH(scalar::add_bias_relu(x, b, out, n), avx2::add_bias_relu(x, b, out, n));
}

void shifted_ratio_product(const double* a, double sa, const double* b, double sb, const double* c,
                           double sc, double* out, std::size_t n) {
    CHANALYZE_DISPATCH(scalar::shifted_ratio_product(a, sa, b, sb, c, sc, out, n),
                       avx2::shifted_ratio_product(a, sa, b, sb, c, sc, out, n));
}

#undef CHANALYZE_DISPATCH

}  // namespace chanalyze::simd
