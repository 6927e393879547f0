#pragma once

#include <cstddef>
#include <string>

// Data-parallel inner loops of the simulator. Each kernel has a scalar
// reference implementation and, on x86-64, an AVX2 variant; the active
// backend is chosen once at startup from the CPU features and can be
// forced with the environment variable BRIDGE_KERNELS=scalar|avx2.
// Transcendentals (sin/cos of the torsion field) stay scalar.

namespace bridge::kernels {

struct Backend {
    // out[i] += c * a[i]
    void (*axpy)(double c, const double* a, double* out, std::size_t n);
    // sum_i w[i] * a[i] * b[i]
    double (*weighted_dot)(const double* w, const double* a, const double* b, std::size_t n);
    // sum_i w[i] * a[i]
    double (*weighted_sum)(const double* w, const double* a, std::size_t n);
    // r = sqrt(1 + s^2); chi[i] = s[i]/r; r_minus_xi[i] = r - xi[i]
    void (*cable_terms)(const double* slope, const double* xi, double* chi,
                        double* r_minus_xi, std::size_t n);
    const char* name;
};

const Backend scalar_backend();
#if defined(__x86_64__)
const Backend avx2_backend();
#endif

/// Active backend (selected on first use).
const Backend& active();

/// Name of the active backend ("scalar" or "avx2").
std::string backend_name();

inline void axpy(double c, const double* a, double* out, std::size_t n) {
    active().axpy(c, a, out, n);
}
inline double weighted_dot(const double* w, const double* a, const double* b, std::size_t n) {
    return active().weighted_dot(w, a, b, n);
}
inline double weighted_sum(const double* w, const double* a, std::size_t n) {
    return active().weighted_sum(w, a, n);
}
inline void cable_terms(const double* slope, const double* xi, double* chi,
                        double* r_minus_xi, std::size_t n) {
    active().cable_terms(slope, xi, chi, r_minus_xi, n);
}

}  // namespace bridge::kernels
