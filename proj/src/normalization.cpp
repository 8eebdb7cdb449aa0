#include "rigidsphere/normalization.hpp"

#include <cmath>

#include "rigidsphere/error.hpp"

namespace rigidsphere {

namespace {

const Complex I(0.0, 1.0);
const VarSet kU{Var::u};

MultiSeries d_u(const MultiSeries &s)
{
    return differentiate(s, Var::u);
}

MultiSeries i_u(const MultiSeries &s)
{
    return integrate(s, Var::u);
}

MultiSeries constant_u(int cap, Complex c)
{
    return MultiSeries::constant(kU, cap, c);
}

} // namespace

NormalizationData normalization_ode_solve(const NormalFormCoeffs &n, int cap, int iterations,
                                          const NormalizationInit &init)
{
    if (iterations < 0) {
        iterations = cap + 3;
    }
    const double k3 = (3.0 * n.c22 * n.c22 - 2.0 * n.c33) / 2.0;
    // State: alpha, p, P1 = p', h, H1 = h', H2 = h''.
    auto alpha = constant_u(cap, 0.0);
    auto p = constant_u(cap, 0.0);
    auto P1 = constant_u(cap, init.p1);
    auto h = constant_u(cap, 0.0);
    auto H1 = constant_u(cap, 1.0);
    auto H2 = constant_u(cap, init.h2);
    for (int it = 0; it < iterations; ++it) {
        const auto Pb = conjugate_coeffs(P1);
        const auto pp = P1 * Pb;
        const auto dalpha = (n.c22 * H1 - 6.0 * pp) * 0.5;
        const auto dP1 = (-n.c23 * exp_series(-I * alpha) * sqrt_series(H1) * H1 + 4.0 * I * pp * P1) * 0.5;
        const auto mixed = I * (dP1 * Pb - P1 * conjugate_coeffs(dP1));
        const auto dH2 = 3.0
                         * (0.5 * H2 * H2 * recip_series(H1) - k3 * H1 * H1 * H1 - 2.0 * pp * pp * H1
                            - (2.0 / 3.0) * mixed * H1);
        auto alpha_next = i_u(dalpha);
        auto p_next = i_u(P1);
        auto P1_next = init.p1 + i_u(dP1);
        auto h_next = i_u(H1);
        auto H1_next = 1.0 + i_u(H2);
        auto H2_next = init.h2 + i_u(dH2);
        alpha = std::move(alpha_next);
        p = std::move(p_next);
        P1 = std::move(P1_next);
        h = std::move(h_next);
        H1 = std::move(H1_next);
        H2 = std::move(H2_next);
    }
    NormalizationData d{alpha, p, h, MultiSeries{}};
    d.q = i_u(1.0 + 2.0 * I * d_u(p) * conjugate_coeffs(p));
    return d;
}

std::array<MultiSeries, 3> norm_residuals(const NormalizationData &d, const NormalFormCoeffs &n)
{
    const auto hd = d_u(d.h);
    if (hd.constant_term() == Complex{}) {
        throw DomainError("norm_residuals: h'(0) = 0");
    }
    const auto hdd = d_u(hd);
    const auto hddd = d_u(hdd);
    const auto pd = d_u(d.p);
    const auto pdd = d_u(pd);
    const auto pdb = conjugate_coeffs(pd);
    const auto pddb = conjugate_coeffs(pdd);
    const auto pp = pd * pdb;
    const double k3 = (3.0 * n.c22 * n.c22 - 2.0 * n.c33) / 2.0;
    auto r1 = 6.0 * pp + 2.0 * d_u(d.alpha) - n.c22 * hd;
    auto r2 = -n.c23 * exp_series(-I * d.alpha) * sqrt_series(hd) * hd - 2.0 * pdd + 4.0 * I * pp * pd;
    auto r3 = hddd * (1.0 / 3.0) - 0.5 * hdd * hdd * recip_series(hd) + k3 * hd * hd * hd + 2.0 * pp * pp * hd
              + (2.0 / 3.0) * I * (pdd * pdb - pd * pddb) * hd;
    return {std::move(r1), std::move(r2), std::move(r3)};
}

MultiSeries chain_residual(const NormalizationData &d)
{
    return d_u(d.q) - 1.0 - 2.0 * I * d_u(d.p) * conjugate_coeffs(d.p);
}

NormalizationData stanton_normalization_data(const StantonParams &s, int cap)
{
    const Complex c = s.c();
    // log(1 + 2ru)/(2r) = sum (-2r)^n u^{n+1}/(n+1), entire in r.
    std::vector<Complex> hc(static_cast<std::size_t>(cap) + 1);
    double power = 1.0;
    for (int k = 1; k <= cap; ++k) {
        hc[k] = power / k;
        power *= -2.0 * s.r;
    }
    NormalizationData d;
    d.h = MultiSeries::univariate(Var::u, cap, hc);
    d.alpha = d.h * (-s.theta);
    // (e^{cx} - 1)/c = sum c^{k-1} x^k / k!, substituted at x = h.
    std::vector<Complex> ec(static_cast<std::size_t>(cap) + 1);
    Complex term = 1.0;
    for (int k = 1; k <= cap; ++k) {
        term /= static_cast<double>(k);
        ec[k] = term;
        term *= c;
    }
    d.p = s.b * compose(MultiSeries::univariate(Var::u, cap, ec), {{Var::u, d.h}});
    d.q = i_u(1.0 + 2.0 * I * d_u(d.p) * conjugate_coeffs(d.p));
    return d;
}

MapJet normalization_map(const NormalizationData &d, int cap)
{
    const VarSet zw{Var::z, Var::w};
    const int out_cap = std::min(cap, d.h.cap() - 1);
    const auto h = d.h.truncated(out_cap + 1);
    const auto hd = d_u(h);
    if (hd.constant_term() == Complex{}) {
        throw DomainError("normalization_map: h'(0) = 0");
    }
    const auto w1 = compose(reversion(h).truncated(out_cap), {{Var::u, MultiSeries::variable(VarSet{Var::w}, out_cap, Var::w)}})
                        .embedded(zw);
    const auto lift = [&](const MultiSeries &s) { return compose(s.truncated(out_cap), {{Var::u, w1}}); };
    const auto z = MultiSeries::variable(zw, out_cap, Var::z);
    const auto z1 = z * lift(exp_series(-I * d.alpha.truncated(out_cap))) * lift(recip_series(sqrt_series(hd)));
    const auto pbd = conjugate_coeffs(d_u(d.p.truncated(out_cap + 1)));
    const auto den = recip_series(1.0 - 2.0 * I * lift(pbd) * z1);
    MapJet m;
    m.Z = lift(d.p) + z1 * den;
    m.W = lift(d.q) + 2.0 * I * lift(conjugate_coeffs(d.p)) * z1 * den;
    return m;
}

} // namespace rigidsphere
