#include "rigidsphere/parameters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rigidsphere/error.hpp"

namespace rigidsphere {

TwistParams TwistParams::from_root(double tau, Complex a, double rho, double phi)
{
    TwistParams t;
    t.tau = tau;
    t.a = a;
    t.rho = rho;
    t.phi = phi;
    t.theta = tau + 3.0 * phi;
    t.r2 = -rho + (2.0 * tau + 3.0 * phi) * phi;
    return t;
}

double TwistParams::cubic_defect() const
{
    return ((4.0 * phi + 4.0 * tau) * phi + (tau * tau - rho)) * phi - std::norm(a);
}

namespace {

double cubic_at(double p3, double p2, double p1, double p0, double x)
{
    return ((p3 * x + p2) * x + p1) * x + p0;
}

double polish(double p3, double p2, double p1, double p0, double x)
{
    for (int it = 0; it < 8; ++it) {
        const double f = cubic_at(p3, p2, p1, p0, x);
        const double df = (3.0 * p3 * x + 2.0 * p2) * x + p1;
        if (f == 0.0 || df == 0.0) {
            break;
        }
        const double next = x - f / df;
        if (std::abs(cubic_at(p3, p2, p1, p0, next)) >= std::abs(f)) {
            break;
        }
        x = next;
    }
    return x;
}

std::vector<double> quadratic_real_roots(double a, double b, double c)
{
    if (a == 0.0) {
        if (b == 0.0) {
            return {};
        }
        return {-c / b};
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < -1e-14 * std::max(b * b, std::abs(4.0 * a * c))) {
        return {};
    }
    const double sq = std::sqrt(std::max(disc, 0.0));
    // Avoid cancellation between b and the square root.
    const double qq = -0.5 * (b + std::copysign(sq, b));
    if (qq == 0.0) {
        return {0.0};
    }
    return {qq / a, c / qq};
}

} // namespace

std::vector<double> cubic_real_roots(double p3, double p2, double p1, double p0)
{
    if (p3 == 0.0) {
        throw DomainError("cubic_real_roots: leading coefficient is zero");
    }
    std::vector<double> roots;
    if (p0 == 0.0) {
        roots = quadratic_real_roots(p3, p2, p1);
        roots.push_back(0.0);
    } else {
        const double B = p2 / p3;
        const double C = p1 / p3;
        const double D = p0 / p3;
        const double p = C - B * B / 3.0;
        const double q = 2.0 * B * B * B / 27.0 - B * C / 3.0 + D;
        const double shift = -B / 3.0;
        const double disc = 4.0 * p * p * p + 27.0 * q * q;
        const double scale = 4.0 * std::abs(p * p * p) + 27.0 * q * q;
        if (disc > 1e-12 * scale) {
            const double s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
            roots.push_back(std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s) + shift);
        } else if (p == 0.0) {
            roots.push_back(shift);
        } else {
            const double m = 2.0 * std::sqrt(-p / 3.0);
            const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
            const double phi = std::acos(arg) / 3.0;
            for (int k = 0; k < 3; ++k) {
                roots.push_back(m * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) + shift);
            }
        }
    }
    for (double &x : roots) {
        x = polish(p3, p2, p1, p0, x);
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> merged;
    for (double x : roots) {
        if (merged.empty() || std::abs(x - merged.back()) > 1e-8 * std::max(1.0, std::abs(x))) {
            merged.push_back(x);
        }
    }
    return merged;
}

double tau0_phi(Complex a, double rho)
{
    const double a2 = std::norm(a);
    const double radicand = a2 * a2 - rho * rho * rho / 27.0;
    if (radicand >= 0.0) {
        const double s = std::sqrt(radicand);
        return 0.5 * (std::cbrt(a2 + s) + std::cbrt(a2 - s));
    }
    const Complex s(0.0, std::sqrt(-radicand));
    const auto principal_cbrt = [](Complex x) { return std::pow(x, 1.0 / 3.0); };
    return 0.5 * (principal_cbrt(a2 + s) + principal_cbrt(a2 - s)).real();
}

std::vector<TwistParams> coeffs_to_twist(const NormalFormCoeffs &n)
{
    const double tau = 0.0 - n.c22 / 2.0;
    const Complex a = Complex{} - n.c23 / 2.0;
    const double rho = -1.5 * n.c33 + 2.25 * n.c22 * n.c22;
    std::vector<TwistParams> out;
    for (double phi : cubic_real_roots(4.0, 4.0 * tau, tau * tau - rho, -std::norm(a))) {
        out.push_back(TwistParams::from_root(tau, a, rho, phi));
    }
    return out;
}

NormalFormCoeffs twist_to_coeffs(const TwistParams &t)
{
    NormalFormCoeffs n;
    n.c22 = -2.0 * t.tau;
    n.c23 = -2.0 * t.a;
    n.c33 = (2.0 / 3.0) * (2.25 * n.c22 * n.c22 - t.rho);
    return n;
}

NormalFormCoeffs stanton_to_coeffs(const StantonParams &s)
{
    if (s.r == 0.0 && s.theta == 0.0) {
        throw DomainError("Stanton parameters need c = r + i theta != 0");
    }
    const double B = std::norm(s.b);
    const Complex I(0.0, 1.0);
    NormalFormCoeffs n;
    n.c22 = 6.0 * B - 2.0 * s.theta;
    n.c23 = 2.0 * Complex(s.r, -s.theta) * s.b + 4.0 * I * s.b * B;
    n.c33 = (2.0 / 3.0) * s.r * s.r + 6.0 * s.theta * s.theta + 56.0 * B * B - (112.0 / 3.0) * s.theta * B;
    return n;
}

TwistParams stanton_to_twist(const StantonParams &s)
{
    const double phi = std::norm(s.b);
    const Complex a = -s.b * Complex(s.r, -s.theta + 2.0 * phi);
    const double tau = s.theta - 3.0 * phi;
    const double rho = -3.0 * phi * phi - s.r * s.r + 2.0 * phi * s.theta;
    return TwistParams::from_root(tau, a, rho, phi);
}

Reachability stanton_reachable(const NormalFormCoeffs &n, double tol)
{
    // With B = |b|^2 and k = c22/2: theta = 3B - k, r^2 from c33, and |c23|^2
    // gives 16B^3 - 16kB^2 + (6c33 - 32k^2)B - |c23|^2 = 0.
    const double k = n.c22 / 2.0;
    const double scale = std::max({1.0, std::abs(n.c22), std::abs(n.c23), std::abs(n.c33)});
    Reachability result;
    const auto roots = cubic_real_roots(16.0, -16.0 * k, 6.0 * n.c33 - 32.0 * k * k, -std::norm(n.c23));
    for (double B : roots) {
        if (B < -tol * scale) {
            continue;
        }
        B = std::max(B, 0.0);
        const double r2 = 1.5 * n.c33 + 3.0 * B * B - 2.0 * k * B - 9.0 * k * k;
        if (r2 < -tol * scale * scale) {
            continue;
        }
        StantonParams s;
        s.r = std::sqrt(std::max(r2, 0.0));
        s.theta = 3.0 * B - k;
        if (B > 0.0) {
            const Complex denom = 2.0 * Complex(s.r, -s.theta) + Complex(0.0, 4.0 * B);
            // A vanishing denominator forces c23 = 0 and leaves the phase free.
            s.b = std::abs(denom) > tol * scale ? n.c23 / denom : Complex(std::sqrt(B), 0.0);
        }
        if (std::abs(s.c()) <= tol * scale) {
            result.limit_only = true;
            continue;
        }
        const NormalFormCoeffs back = stanton_to_coeffs(s);
        const double err = std::max({std::abs(back.c22 - n.c22), std::abs(back.c23 - n.c23), std::abs(back.c33 - n.c33)});
        if (err <= 1e3 * tol * scale * scale) {
            result.reachable = true;
            result.witness = s;
            result.limit_only = false;
            return result;
        }
    }
    return result;
}

std::size_t default_root_index(const std::vector<TwistParams> &roots)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < roots.size(); ++i) {
        if (std::abs(roots[i].phi) < std::abs(roots[best].phi)) {
            best = i;
        }
    }
    return best;
}

void to_json(nlohmann::json &j, const NormalFormCoeffs &n)
{
    j = {{"c22", n.c22}, {"c23_re", n.c23.real()}, {"c23_im", n.c23.imag()}, {"c33", n.c33}};
}

void from_json(const nlohmann::json &j, NormalFormCoeffs &n)
{
    n.c22 = j.value("c22", 0.0);
    n.c23 = {j.value("c23_re", 0.0), j.value("c23_im", 0.0)};
    n.c33 = j.value("c33", 0.0);
}

void to_json(nlohmann::json &j, const TwistParams &t)
{
    j = {{"tau", t.tau}, {"a_re", t.a.real()}, {"a_im", t.a.imag()}, {"rho", t.rho},
         {"phi", t.phi}, {"theta", t.theta}, {"r2", t.r2}};
}

// theta and r2 are always recomputed from (tau, a, rho, phi).
void from_json(const nlohmann::json &j, TwistParams &t)
{
    t = TwistParams::from_root(j.value("tau", 0.0), {j.value("a_re", 0.0), j.value("a_im", 0.0)},
                               j.value("rho", 0.0), j.value("phi", 0.0));
}

void to_json(nlohmann::json &j, const StantonParams &s)
{
    j = {{"b_re", s.b.real()}, {"b_im", s.b.imag()}, {"r", s.r}, {"theta", s.theta}};
}

void from_json(const nlohmann::json &j, StantonParams &s)
{
    s.b = {j.value("b_re", 0.0), j.value("b_im", 0.0)};
    s.r = j.value("r", 0.0);
    s.theta = j.value("theta", 0.0);
}

} // namespace rigidsphere
