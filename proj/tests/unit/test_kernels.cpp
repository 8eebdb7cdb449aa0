#include <cmath>

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"
#include "rigidsphere/kernels.hpp"

using namespace rigidsphere;

namespace {

KernelEval mode(double r2, double theta, KernelMode m)
{
    KernelEval k;
    k.r2 = r2;
    k.theta = theta;
    k.mode = m;
    return k;
}

} // namespace

TEST_CASE("sinc2")
{
    CHECK(sinc2(0.0, 1.5) == 1.5);
    const double s3 = std::sqrt(3.0);
    CHECK(std::abs(sinc2(-3.0, 1.0) - std::sinh(2.0 * s3) / (2.0 * s3)) < 1e-14);
    CHECK(std::abs(sinc2(1.0, 0.5) - std::sin(1.0) / 2.0) < 1e-15);
    // sin(2rv)/(2r) = v - (2/3) r^2 v^3 + ...
    CHECK(std::abs(sinc2(1e-14, 1.0) - (1.0 - 2.0e-14 / 3.0)) < 1e-15);
    CHECK(std::abs(sinc2(-3.0, Complex(1.0)) - sinc2(-3.0, 1.0)) < 1e-14);
}

TEST_CASE("kernels vanish to second order")
{
    for (const auto m : {KernelMode::Direct, KernelMode::Series, KernelMode::Auto}) {
        CHECK(std::abs(kernel_Kw(mode(1.0, 2.0, m), 0.0)) < 1e-15);
        CHECK(std::abs(kernel_Kv(mode(-3.0, -3.0, m), 0.0)) < 1e-15);
    }
    const auto kw = kernel_Kw_coeffs(0.7, -1.3, 6);
    const auto kv = kernel_Kv_coeffs(0.7, -1.3, 6);
    CHECK(kw[0] == Complex{});
    CHECK(kw[1] == Complex{});
    CHECK(kv[0] == 0.0);
    CHECK(kv[1] == 0.0);
}

TEST_CASE("Kw at r2 = theta = 0 is w^2/2")
{
    const auto k = mode(0.0, 0.0, KernelMode::Series);
    for (const Complex w : {Complex(0.3), Complex(-1.2, 0.4), Complex(0.0, 2.0)}) {
        CHECK(std::abs(kernel_Kw(k, w) - w * w / 2.0) < 1e-14);
        CHECK(std::abs(kernel_Kw(mode(0.0, 0.0, KernelMode::Auto), w) - w * w / 2.0) < 1e-14);
    }
}

TEST_CASE("Kv on the worked example")
{
    const double s3 = std::sqrt(3.0);
    const double v = 0.1;
    const double expect = (std::exp(0.6) - std::cosh(0.2 * s3) - s3 * std::sinh(0.2 * s3)) / 6.0;
    for (const auto m : {KernelMode::Direct, KernelMode::Series, KernelMode::Auto}) {
        CHECK(std::abs(kernel_Kv(mode(-3.0, -3.0, m), v) - expect) < 1e-15);
    }
}

TEST_CASE("Kv coefficients match the transcendental expansion")
{
    gen::Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const double r2 = rng.uniform(-4.0, 4.0);
        const double th = rng.uniform(-3.0, 3.0);
        if (std::abs(r2 + th * th) < 0.5) {
            continue;
        }
        const auto got = kernel_Kv_coeffs(r2, th, 12);
        const auto want = oracle::kv_taylor(r2, th, 12);
        for (int m = 0; m <= 12; ++m) {
            CHECK(std::abs(got[m] - want[m]) < 1e-12 * (1.0 + std::abs(want[m])) * std::pow(2.0, m));
        }
    }
}

TEST_CASE("Kv(v) = -Kw(2iv)")
{
    gen::Rng rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        const auto k = mode(rng.uniform(-4.0, 4.0), rng.uniform(-3.0, 3.0), KernelMode::Auto);
        const Complex v = rng.complex(1.0);
        const Complex a = kernel_Kv(k, v);
        const Complex b = -kernel_Kw(k, Complex(0.0, 2.0) * v);
        CHECK(std::abs(a - b) < 1e-10 * (1.0 + std::abs(a)));
    }
}

TEST_CASE("sinc2, sinhc and cosh coefficients")
{
    const auto s = sinc2_coeffs(-3.0, 9);
    const auto o = oracle::sinc2_taylor(-3.0, 9);
    for (int m = 0; m <= 9; ++m) {
        CHECK(std::abs(s[m] - o[m]) < 1e-12 * (1.0 + std::abs(o[m])));
    }
    const auto sh = sinhc_coeffs(4.0, 7);
    const auto ch = cosh_coeffs(4.0, 7);
    // sinh(2w)/2 and cosh(2w).
    CHECK(std::abs(sh[1] - 1.0) < 1e-15);
    CHECK(std::abs(sh[3] - 8.0 / 6.0 / 2.0) < 1e-15);
    CHECK(std::abs(ch[2] - 2.0) < 1e-15);
    CHECK(std::abs(ch[4] - 16.0 / 24.0) < 1e-15);
    const auto e = exp_coeffs(Complex(0.0, 1.0), 4);
    CHECK(std::abs(e[3] - Complex(0.0, -1.0 / 6.0)) < 1e-15);
}

TEST_CASE("kernel dual-mode agreement")
{
    gen::Rng rng(43);
    int cases = 0;
    while (cases < 1000) {
        const double r2 = rng.uniform(-10.0, 10.0);
        const double th = rng.uniform(-3.2, 3.2);
        const double d = std::abs(r2 + th * th);
        if (d < 0.1 || d > 10.0) {
            continue;
        }
        ++cases;
        // Direct evaluation cancels O(1) terms down to O(w^2), so |w| stays away from 0.
        const Complex w = std::polar(rng.uniform(0.1, 1.0), rng.uniform(-M_PI, M_PI));
        KernelEval series = mode(r2, th, KernelMode::Series);
        series.series_terms = 30;
        const auto direct = mode(r2, th, KernelMode::Direct);
        const Complex a = kernel_Kw(series, w);
        const Complex b = kernel_Kw(direct, w);
        CHECK(std::abs(a - b) <= 1e-10 * std::abs(a));
        const double v = std::abs(w) * (w.real() < 0.0 ? -1.0 : 1.0);
        const double c = kernel_Kv(series, v);
        const double e = kernel_Kv(direct, v);
        CHECK(std::abs(c - e) <= 1e-10 * std::abs(c));
    }
}
