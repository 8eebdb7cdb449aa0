#include "rigidsphere/surfaces.hpp"

#include <cmath>

#include "rigidsphere/error.hpp"
#include "rigidsphere/kernels.hpp"

namespace rigidsphere {

namespace {

const Complex I(0.0, 1.0);

MultiSeries univariate_real(Var var, int cap, const std::vector<double> &c)
{
    std::vector<Complex> cc(c.begin(), c.end());
    return MultiSeries::univariate(var, cap, cc);
}

} // namespace

Complex defining_value(const TwistParams &t, Complex z, Complex v)
{
    const double zz = std::norm(z);
    const Complex az = std::conj(t.a) * z;
    const KernelEval k{t.r2, t.theta};
    return (1.0 - 4.0 * t.phi * zz) * sinc2(t.r2, v) - std::exp(-2.0 * t.theta * v) * zz
           - (t.phi - 2.0 * az.real() + 4.0 * t.phi * (t.phi - t.theta) * zz) * kernel_Kv(k, v);
}

double defining_value(const TwistParams &t, Complex z, double v)
{
    const double zz = std::norm(z);
    const double az = (std::conj(t.a) * z).real();
    const KernelEval k{t.r2, t.theta};
    return (1.0 - 4.0 * t.phi * zz) * sinc2(t.r2, v) - std::exp(-2.0 * t.theta * v) * zz
           - (t.phi - 2.0 * az + 4.0 * t.phi * (t.phi - t.theta) * zz) * kernel_Kv(k, v);
}

double stanton_defining_value(const StantonParams &s, Complex z, double v)
{
    const Complex c = s.c();
    if (c == Complex{}) {
        throw DomainError("Stanton parameters need c = r + i theta != 0");
    }
    const Complex f1 = 1.0 - 2.0 * I * std::conj(s.b) * z;
    const Complex f2 = 1.0 + 2.0 * I * s.b * std::conj(z);
    if (std::abs(f1) < 1e-300) {
        throw DomainError("pole of Stanton's equation: 1 - 2i conj(b) z = 0");
    }
    if (std::abs(f2) < 1e-300) {
        throw DomainError("pole of Stanton's equation: 1 + 2i b zbar = 0");
    }
    const double B = std::norm(s.b);
    const double c2 = std::norm(c);
    const double e = std::exp(-2.0 * s.theta * v);
    const double lhs = sinc2(s.r * s.r, v) * (1.0 - 2.0 * B * s.theta / c2);
    const Complex rhs = std::norm(z) * e / (f1 * f2) + (B / c2) * (e - std::cos(2.0 * s.r * v))
                        + std::conj(s.b) * z / (std::conj(c) * f1) * (e - std::exp(2.0 * I * s.r * v))
                        + s.b * std::conj(z) / (c * f2) * (e - std::exp(-2.0 * I * s.r * v));
    return lhs - rhs.real();
}

double solve_v(const TwistParams &t, Complex z, const SolveVOptions &opts)
{
    if (std::abs(z) > opts.radius) {
        throw DomainError("solve_v: |z| = " + std::to_string(std::abs(z)) + " exceeds radius "
                          + std::to_string(opts.radius));
    }
    double v = std::norm(z);
    constexpr double h = 1e-30;
    for (int it = 0; it < opts.max_iterations; ++it) {
        const double f = defining_value(t, z, v);
        if (std::abs(f) < opts.tolerance) {
            return v;
        }
        // Complex-step derivative.
        const double df = defining_value(t, z, Complex(v, h)).imag() / h;
        if (df == 0.0 || !std::isfinite(df)) {
            break;
        }
        v -= f / df;
        if (!std::isfinite(v)) {
            break;
        }
    }
    if (std::isfinite(v) && std::abs(defining_value(t, z, v)) < opts.tolerance) {
        return v;
    }
    throw ConvergenceError("solve_v: Newton did not converge at z = (" + std::to_string(z.real()) + ", "
                           + std::to_string(z.imag()) + ")");
}

MultiSeries defining_series(const TwistParams &t, int cap)
{
    const VarSet vars{Var::z, Var::zbar, Var::v};
    const auto z = MultiSeries::variable(vars, cap, Var::z);
    const auto zb = MultiSeries::variable(vars, cap, Var::zbar);
    const auto zz = z * zb;
    const auto sinc = univariate_real(Var::v, cap, sinc2_coeffs(t.r2, cap)).embedded(vars);
    const auto kv = univariate_real(Var::v, cap, kernel_Kv_coeffs(t.r2, t.theta, cap)).embedded(vars);
    const auto ex = MultiSeries::univariate(Var::v, cap, exp_coeffs(-2.0 * t.theta, cap)).embedded(vars);
    const auto weight = t.phi - std::conj(t.a) * z - t.a * zb + 4.0 * t.phi * (t.phi - t.theta) * zz;
    return (1.0 - 4.0 * t.phi * zz) * sinc - ex * zz - weight * kv;
}

SurfaceSeries expand_surface(const TwistParams &t, int cap)
{
    const VarSet zvars{Var::z, Var::zbar};
    const auto v0 = MultiSeries::variable(zvars, cap, Var::z) * MultiSeries::variable(zvars, cap, Var::zbar);
    SurfaceSeries out;
    out.V = solve_implicit(defining_series(t, cap), Var::v, v0);
    out.source = {{"kind", "twist"}, {"params", t}};
    return out;
}

NormalFormCoeffs extract_coeffs(const SurfaceSeries &s, double tol)
{
    const MultiSeries &V = s.V;
    if (V.vars() != VarSet{Var::z, Var::zbar}) {
        throw DomainError("surface series must be in (z, zbar), got " + to_string(V.vars()));
    }
    if (V.cap() < 6) {
        throw DomainError("surface series needs cap >= 6 to read c33");
    }
    auto fail = [](const std::string &what) { throw DomainError("surface not in normal form: " + what); };
    if (std::abs(V.coeff({0, 0})) > tol) {
        fail("nonzero constant term");
    }
    if (std::abs(V.coeff({1, 1}) - 1.0) > tol) {
        fail("coefficient of z zbar is not 1");
    }
    for (auto e : {std::array{1, 0}, std::array{0, 1}, std::array{2, 0}, std::array{0, 2}}) {
        if (std::abs(V.coeff(std::span<const int>(e))) > tol) {
            fail("pure or linear terms present");
        }
    }
    if (!is_hermitian(V, tol)) {
        fail("series is not real (Hermitian)");
    }
    const Complex c22 = V.coeff({2, 2});
    const Complex c23 = V.coeff({2, 3});
    const Complex c32 = V.coeff({3, 2});
    const Complex c33 = V.coeff({3, 3});
    if (std::abs(c22.imag()) > tol * std::max(1.0, std::abs(c22)) || std::abs(c33.imag()) > tol * std::max(1.0, std::abs(c33))) {
        fail("c22 or c33 not real");
    }
    if (std::abs(c32 - std::conj(c23)) > tol * std::max(1.0, std::abs(c23))) {
        fail("c32 is not the conjugate of c23");
    }
    return {c22.real(), c23, c33.real()};
}

std::string to_string(TubeKind kind)
{
    switch (kind) {
    case TubeKind::Parabola:
        return "parabola";
    case TubeKind::Exponential:
        return "exponential";
    case TubeKind::Cos:
        return "cos";
    case TubeKind::Cosh:
        return "cosh";
    }
    return "unknown";
}

std::optional<TubeKind> parse_tube_kind(std::string_view name)
{
    for (auto kind : {TubeKind::Parabola, TubeKind::Exponential, TubeKind::Cos, TubeKind::Cosh}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

MultiSeries tube_h(TubeKind kind, int cap)
{
    const VarSet xs{Var::x};
    const auto x = MultiSeries::variable(xs, cap, Var::x);
    switch (kind) {
    case TubeKind::Parabola:
        return x * x * 0.5;
    case TubeKind::Exponential:
        return exp_series(x);
    case TubeKind::Cos:
        return -log_series(univariate_real(Var::x, cap, cosh_coeffs(-1.0, cap)));
    case TubeKind::Cosh:
        return log_series(univariate_real(Var::x, cap, cosh_coeffs(1.0, cap)));
    }
    throw SeriesError("unknown tube kind");
}

MultiSeries circular_surface(double alpha2, double beta, CircularFamily family, int cap)
{
    // sin(alpha v)/alpha = sum (-alpha^2)^k v^{2k+1}/(2k+1)!; sinh flips the sign of alpha^2.
    const double s2 = family == CircularFamily::Sin ? -alpha2 : alpha2;
    const VarSet vars{Var::t, Var::v};
    const auto lhs = univariate_real(Var::v, cap, sinhc_coeffs(s2, cap)).embedded(vars);
    const auto ex = MultiSeries::univariate(Var::v, cap, exp_coeffs(-2.0 * beta, cap)).embedded(vars);
    const auto t = MultiSeries::variable(vars, cap, Var::t);
    return solve_implicit(lhs - ex * t, Var::v, MultiSeries::variable(VarSet{Var::t}, cap, Var::t));
}

} // namespace rigidsphere
