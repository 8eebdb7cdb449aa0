#include "rigidsphere/maps.hpp"

#include <cmath>

#include "rigidsphere/error.hpp"
#include "rigidsphere/kernels.hpp"

namespace rigidsphere {

namespace {

const Complex I(0.0, 1.0);
const VarSet kZW{Var::z, Var::w};

template <class T>
MultiSeries in_w(int cap, const std::vector<T> &c)
{
    std::vector<Complex> cc(c.begin(), c.end());
    return MultiSeries::univariate(Var::w, cap, cc).embedded(kZW);
}

// (e^{xw} - 1)/x, entire in x.
MultiSeries expm1_over(Complex x, int cap)
{
    std::vector<Complex> c(static_cast<std::size_t>(cap) + 1);
    Complex term = 1.0;
    for (int m = 1; m <= cap; ++m) {
        term /= static_cast<double>(m);
        c[m] = term;
        term *= x;
    }
    return in_w(cap, c);
}

} // namespace

MapJet stanton_map(const StantonParams &s, int cap)
{
    const Complex c = s.c();
    if (c == Complex{}) {
        throw DomainError("stanton_map: c = r + i theta must be nonzero");
    }
    const Complex bb = std::conj(s.b);
    const double B = std::norm(s.b);
    const auto z = MultiSeries::variable(kZW, cap, Var::z);
    const auto frac = z * recip_series(1.0 - 2.0 * I * bb * z);
    const auto ecw = in_w(cap, exp_coeffs(c, cap));
    const auto e1c = expm1_over(c, cap);
    const auto e1cb = expm1_over(std::conj(c), cap);
    MapJet m;
    m.Z = s.b * e1c + ecw * frac;
    m.W = (1.0 - 2.0 * I * B / c) * expm1_over(2.0 * s.r, cap) + (2.0 * I * bb) * frac * ecw * e1cb
          + (2.0 * I * B / c) * ecw * e1cb;
    return m;
}

MapJet twisted_map(const TwistParams &t, int cap)
{
    const auto z = MultiSeries::variable(kZW, cap, Var::z);
    const auto K = in_w(cap, kernel_Kw_coeffs(t.r2, t.theta, cap));
    const auto Sh = in_w(cap, sinhc_coeffs(t.r2, cap));
    const auto Ch = in_w(cap, cosh_coeffs(t.r2, cap));
    const auto eit = in_w(cap, exp_coeffs(I * t.theta, cap));
    const Complex ab = std::conj(t.a);
    const double phi = t.phi;
    const auto P1 = (t.a + 4.0 * (t.theta - phi) * phi * z) * K + (-2.0 * I * phi * Sh + eit) * z;
    const auto P2 = 2.0 * I * (phi - ab * z) * K + Sh;
    const auto Q = 2.0 * (phi - t.theta) * (phi - ab * z) * K + I * (phi - 2.0 * ab * z) * Sh + Ch;
    const auto Qi = recip_series(Q);
    return {P1 * Qi, P2 * Qi};
}

VectorFieldParams twist_field(const TwistParams &t)
{
    return {Complex{}, Complex(0.0, t.tau), t.a, t.rho};
}

VectorFieldParams stanton_field(const StantonParams &s)
{
    return {s.b, s.c(), Complex{}, 0.0};
}

namespace {

std::pair<MultiSeries, MultiSeries> field_rhs(const MultiSeries &Z, const MultiSeries &W, const VectorFieldParams &f)
{
    const Complex ab = std::conj(f.a);
    const auto ZZ = Z * Z;
    const auto ZW = Z * W;
    auto r1 = f.b + f.c * Z + f.a * W + 2.0 * I * ab * ZZ + f.rho * ZW;
    auto r2 = 1.0 + 2.0 * I * std::conj(f.b) * Z + 2.0 * f.c.real() * W + 2.0 * I * ab * ZW + f.rho * W * W;
    return {std::move(r1), std::move(r2)};
}

} // namespace

std::pair<MultiSeries, MultiSeries> system_residual(const MapJet &m, const VectorFieldParams &f)
{
    const auto [r1, r2] = field_rhs(m.Z, m.W, f);
    return {differentiate(m.Z, Var::w) - r1, differentiate(m.W, Var::w) - r2};
}

MapJet integrate_system(const VectorFieldParams &f, const MultiSeries &Z0, int cap)
{
    const auto z0 = Z0.embedded(Z0.vars().with(Var::w)).embedded(kZW).truncated(cap);
    MapJet m{z0, MultiSeries(kZW, cap)};
    // Each pass fixes one more order in w.
    for (int it = 0; it <= cap; ++it) {
        const auto [r1, r2] = field_rhs(m.Z, m.W, f);
        m.Z = z0 + integrate(r1, Var::w);
        m.W = integrate(r2, Var::w);
    }
    return m;
}

MapJet sphere_automorphism(Complex b, double r, int cap)
{
    const auto z = MultiSeries::variable(kZW, cap, Var::z);
    const auto w = MultiSeries::variable(kZW, cap, Var::w);
    const auto den = recip_series(1.0 + 2.0 * I * std::conj(b) * z + Complex(r, -std::norm(b)) * w);
    return {(z - b * w) * den, w * den};
}

MapJet compose_maps(const MapJet &outer, const MapJet &inner)
{
    const std::map<Var, MultiSeries> subs{{Var::z, inner.Z}, {Var::w, inner.W}};
    return {compose(outer.Z, subs), compose(outer.W, subs)};
}

SurfaceSeries induced_surface(const MapJet &m, int cap)
{
    const VarSet all{Var::z, Var::zbar, Var::v};
    const auto iv = MultiSeries::variable(VarSet{Var::v}, cap, Var::v) * I;
    const auto Zi = compose(m.Z.truncated(cap), {{Var::w, iv}});
    const auto Wi = compose(m.W.truncated(cap), {{Var::w, iv}});
    const auto Zc = conjugate_swap(Zi).embedded(all);
    const auto Wc = conjugate_swap(Wi).embedded(all);
    const auto G = (Wi.embedded(all) - Wc) * (1.0 / (2.0 * I)) - Zi.embedded(all) * Zc;
    const VarSet zs{Var::z, Var::zbar};
    const auto v0 = MultiSeries::variable(zs, cap, Var::z) * MultiSeries::variable(zs, cap, Var::zbar);
    SurfaceSeries out;
    out.V = solve_implicit(G, Var::v, v0);
    out.source = {{"kind", "map"}};
    return out;
}

LeadingTerm leading_term(const MultiSeries &s, double rel_tol)
{
    const double top = max_abs_coeff(s);
    LeadingTerm out;
    if (top == 0.0) {
        return out;
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (std::abs(s.data()[i]) > rel_tol * top) {
            const auto ex = s.exponents_at(i);
            out.exps.assign(ex.begin(), ex.end());
            out.value = s.data()[i];
            return out;
        }
    }
    return out;
}

} // namespace rigidsphere
