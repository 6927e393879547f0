#include "bridge/kernels.hpp"

#include <cmath>

namespace bridge::kernels {
namespace {

void axpy_scalar(double c, const double* a, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] += c * a[i];
}

double weighted_dot_scalar(const double* w, const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * a[i] * b[i];
    return acc;
}

double weighted_sum_scalar(const double* w, const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * a[i];
    return acc;
}

void cable_terms_scalar(const double* slope, const double* xi, double* chi,
                        double* r_minus_xi, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double s = slope[i];
        const double r = std::sqrt(1.0 + s * s);
        chi[i] = s / r;
        r_minus_xi[i] = r - xi[i];
    }
}

}  // namespace

const Backend scalar_backend() {
    return Backend{axpy_scalar, weighted_dot_scalar, weighted_sum_scalar,
                   cable_terms_scalar, "scalar"};
}

}  // namespace bridge::kernels
