#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "bridge/kernels.hpp"

using namespace bridge;

namespace {

std::vector<double> random_vec(std::mt19937& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

}  // namespace

TEST_CASE("backend selection") {
    const auto& b = kernels::active();
    CHECK(b.axpy != nullptr);
    CHECK(b.weighted_dot != nullptr);
    CHECK(b.weighted_sum != nullptr);
    CHECK(b.cable_terms != nullptr);
    const std::string name = kernels::backend_name();
    CHECK((name == "scalar" || name == "avx2"));
}

TEST_CASE("scalar kernels against naive loops") {
    const auto b = kernels::scalar_backend();
    std::mt19937 rng(17);
    for (std::size_t n : {0, 1, 3, 4, 5, 8, 13, 64, 257}) {
        auto a = random_vec(rng, n, -2.0, 2.0);
        auto w = random_vec(rng, n, 0.0, 1.0);
        auto c = random_vec(rng, n, -2.0, 2.0);
        auto out = c;
        b.axpy(1.7, a.data(), out.data(), n);
        double dot = 0.0, sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(out[i] == doctest::Approx(c[i] + 1.7 * a[i]).epsilon(1e-15));
            dot += w[i] * a[i] * c[i];
            sum += w[i] * a[i];
        }
        CHECK(b.weighted_dot(w.data(), a.data(), c.data(), n) ==
              doctest::Approx(dot).epsilon(1e-12));
        CHECK(b.weighted_sum(w.data(), a.data(), n) == doctest::Approx(sum).epsilon(1e-12));
    }
}

TEST_CASE("scalar cable_terms") {
    const auto b = kernels::scalar_backend();
    std::mt19937 rng(23);
    const std::size_t n = 37;
    auto slope = random_vec(rng, n, -3.0, 3.0);
    auto xi = random_vec(rng, n, 1.0, 1.1);
    std::vector<double> chi(n), rmx(n);
    b.cable_terms(slope.data(), xi.data(), chi.data(), rmx.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::sqrt(1.0 + slope[i] * slope[i]);
        CHECK(chi[i] == doctest::Approx(slope[i] / r).epsilon(1e-15));
        CHECK(rmx[i] == doctest::Approx(r - xi[i]).epsilon(1e-15));
    }
}

#if defined(__x86_64__)
TEST_CASE("avx2 matches scalar") {
    if (!__builtin_cpu_supports("avx2")) {
        MESSAGE("avx2 not available on this host, skipping");
        return;
    }
    const auto s = kernels::scalar_backend();
    const auto v = kernels::avx2_backend();
    std::mt19937 rng(41);

    for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 31, 100, 256, 1001}) {
        auto a = random_vec(rng, n, -5.0, 5.0);
        auto b = random_vec(rng, n, -5.0, 5.0);
        auto w = random_vec(rng, n, 0.0, 2.0);

        auto out_s = b, out_v = b;
        s.axpy(-0.37, a.data(), out_s.data(), n);
        v.axpy(-0.37, a.data(), out_v.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(out_v[i] == doctest::Approx(out_s[i]).epsilon(1e-14));

        const double ds = s.weighted_dot(w.data(), a.data(), b.data(), n);
        const double dv = v.weighted_dot(w.data(), a.data(), b.data(), n);
        CHECK(dv == doctest::Approx(ds).epsilon(1e-13));

        const double ss = s.weighted_sum(w.data(), a.data(), n);
        const double sv = v.weighted_sum(w.data(), a.data(), n);
        CHECK(sv == doctest::Approx(ss).epsilon(1e-13));

        auto xi = random_vec(rng, n, 1.0, 1.06);
        std::vector<double> chi_s(n), rmx_s(n), chi_v(n), rmx_v(n);
        s.cable_terms(a.data(), xi.data(), chi_s.data(), rmx_s.data(), n);
        v.cable_terms(a.data(), xi.data(), chi_v.data(), rmx_v.data(), n);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(chi_v[i] == doctest::Approx(chi_s[i]).epsilon(1e-13));
            CHECK(rmx_v[i] == doctest::Approx(rmx_s[i]).epsilon(1e-13));
        }
    }
}

TEST_CASE("avx2 tail handling leaves padding untouched") {
    if (!__builtin_cpu_supports("avx2")) return;
    const auto v = kernels::avx2_backend();
    const std::size_t n = 6;
    std::vector<double> a{1, 2, 3, 4, 5, 6};
    std::vector<double> out(n + 2, -99.0);
    v.axpy(2.0, a.data(), out.data(), n);
    CHECK(out[n] == -99.0);
    CHECK(out[n + 1] == -99.0);
}
#endif
