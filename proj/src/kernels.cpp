#include "rigidsphere/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace rigidsphere {

namespace {

// sum_{j<n} r2^j (-theta^2)^{n-1-j}, i.e. (r2^n - (-theta^2)^n)/(r2 + theta^2).
std::vector<double> kernel_geo(double r2, double theta, int nmax)
{
    std::vector<double> geo(static_cast<std::size_t>(nmax) + 1, 0.0);
    double mt = 1.0;
    for (int n = 1; n <= nmax; ++n) {
        geo[n] = r2 * geo[n - 1] + mt;
        mt *= -theta * theta;
    }
    return geo;
}

int terms_for(double r2, double theta, double x, int minimum)
{
    const double growth = std::max(std::sqrt(std::abs(r2)), std::abs(theta)) * x;
    return std::max(minimum, static_cast<int>(2.0 * growth) + 30);
}

template <class T, class C>
T horner(const std::vector<C> &c, T x)
{
    T acc{};
    for (std::size_t k = c.size(); k-- > 0;) {
        acc = acc * x + c[k];
    }
    return acc;
}

bool use_series(const KernelEval &k, double abs_w)
{
    switch (k.mode) {
    case KernelMode::Series:
        return true;
    case KernelMode::Direct:
        return false;
    case KernelMode::Auto:
        break;
    }
    return std::abs(k.r2 + k.theta * k.theta) < k.crossover / ((1.0 + abs_w) * (1.0 + abs_w));
}

} // namespace

std::vector<Complex> kernel_Kw_coeffs(double r2, double theta, int n)
{
    std::vector<Complex> c(static_cast<std::size_t>(std::max(n, 0)) + 1);
    const auto geo = kernel_geo(r2, theta, n / 2 + 1);
    double fact = 1.0;
    for (int m = 0; m <= n; ++m) {
        if (m > 0) {
            fact *= m;
        }
        const double g = geo[m / 2] / fact;
        c[m] = m % 2 == 0 ? Complex(g, 0.0) : Complex(0.0, theta * g);
    }
    return c;
}

std::vector<double> kernel_Kv_coeffs(double r2, double theta, int n)
{
    // Kv(v) = -Kw(2iv).
    std::vector<double> c(static_cast<std::size_t>(std::max(n, 0)) + 1);
    const auto geo = kernel_geo(r2, theta, n / 2 + 1);
    double scale = 1.0; // 2^m / m!
    for (int m = 0; m <= n; ++m) {
        if (m > 0) {
            scale *= 2.0 / m;
        }
        const int half = m / 2;
        const double sign = half % 2 == 0 ? 1.0 : -1.0;
        c[m] = m % 2 == 0 ? -sign * scale * geo[half] : sign * scale * theta * geo[half];
    }
    return c;
}

std::vector<double> sinc2_coeffs(double r2, int n)
{
    std::vector<double> c(static_cast<std::size_t>(std::max(n, 0)) + 1, 0.0);
    double scale = 1.0; // 2^m / m!
    double power = 1.0; // (-r2)^k
    for (int m = 0; m <= n; ++m) {
        if (m > 0) {
            scale *= 2.0 / m;
        }
        if (m % 2 == 1) {
            c[m] = power * scale / 2.0;
            power *= -r2;
        }
    }
    return c;
}

std::vector<double> sinhc_coeffs(double r2, int n)
{
    std::vector<double> c(static_cast<std::size_t>(std::max(n, 0)) + 1, 0.0);
    double fact = 1.0;
    double power = 1.0;
    for (int m = 0; m <= n; ++m) {
        if (m > 0) {
            fact *= m;
        }
        if (m % 2 == 1) {
            c[m] = power / fact;
            power *= r2;
        }
    }
    return c;
}

std::vector<double> cosh_coeffs(double r2, int n)
{
    std::vector<double> c(static_cast<std::size_t>(std::max(n, 0)) + 1, 0.0);
    double fact = 1.0;
    double power = 1.0;
    for (int m = 0; m <= n; ++m) {
        if (m > 0) {
            fact *= m;
        }
        if (m % 2 == 0) {
            c[m] = power / fact;
            power *= r2;
        }
    }
    return c;
}

std::vector<Complex> exp_coeffs(Complex x, int n)
{
    std::vector<Complex> c(static_cast<std::size_t>(std::max(n, 0)) + 1);
    Complex term = 1.0;
    for (int m = 0; m <= n; ++m) {
        if (m > 0) {
            term *= x / static_cast<double>(m);
        }
        c[m] = term;
    }
    return c;
}

double sinc2(double r2, double v)
{
    const double x = r2 * v * v;
    if (std::abs(x) < 1e-2) {
        return horner(sinc2_coeffs(r2, 21), v);
    }
    if (r2 > 0.0) {
        const double r = std::sqrt(r2);
        return std::sin(2.0 * r * v) / (2.0 * r);
    }
    const double r = std::sqrt(-r2);
    return std::sinh(2.0 * r * v) / (2.0 * r);
}

Complex sinc2(double r2, Complex v)
{
    if (std::abs(r2) * std::norm(v) < 1e-2) {
        return horner(sinc2_coeffs(r2, 21), v);
    }
    const Complex r = std::sqrt(Complex(r2, 0.0));
    return std::sin(2.0 * r * v) / (2.0 * r);
}

Complex kernel_Kw(const KernelEval &k, Complex w)
{
    if (use_series(k, std::abs(w))) {
        const int n = terms_for(k.r2, k.theta, std::abs(w), k.series_terms);
        return horner(kernel_Kw_coeffs(k.r2, k.theta, n), w);
    }
    const Complex I(0.0, 1.0);
    const Complex r = std::sqrt(Complex(k.r2, 0.0));
    const Complex sinhc = k.r2 == 0.0 ? w : std::sinh(r * w) / r;
    return (std::cosh(r * w) - std::exp(I * k.theta * w) + I * k.theta * sinhc) / (k.r2 + k.theta * k.theta);
}

Complex kernel_Kv(const KernelEval &k, Complex v)
{
    return -kernel_Kw(k, Complex(0.0, 2.0) * v);
}

double kernel_Kv(const KernelEval &k, double v)
{
    if (use_series(k, 2.0 * std::abs(v))) {
        const int n = terms_for(k.r2, k.theta, 2.0 * std::abs(v), k.series_terms);
        return horner(kernel_Kv_coeffs(k.r2, k.theta, n), v);
    }
    return (std::exp(-2.0 * k.theta * v) - std::cos(2.0 * std::sqrt(Complex(k.r2)) * v).real()
            + k.theta * 2.0 * sinc2(k.r2, v))
           / (k.r2 + k.theta * k.theta);
}

} // namespace rigidsphere
