#include "rigidsphere/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "rigidsphere/error.hpp"

namespace rigidsphere {

namespace {

MultiSeries dz(const MultiSeries &s)
{
    return differentiate(s, Var::z);
}

MultiSeries dzb(const MultiSeries &s)
{
    return differentiate(s, Var::zbar);
}

MultiSeries dt(const MultiSeries &s)
{
    return differentiate(s, Var::t);
}

double largest(std::initializer_list<MultiSeries> terms)
{
    double m = 0.0;
    for (const auto &t : terms) {
        m = std::max(m, max_abs_coeff(t));
    }
    return m;
}

// No residual coefficient is determined when the equation needs more orders than the input has.
CurvatureReport undetermined()
{
    CurvatureReport r;
    r.cap = -1;
    return r;
}

} // namespace

CurvatureReport make_report(const MultiSeries &residual, double base_tol)
{
    CurvatureReport r;
    r.cap = residual.cap();
    r.per_degree_residuals.assign(static_cast<std::size_t>(residual.cap() + 1), 0.0);
    for (std::size_t i = 0; i < residual.size(); ++i) {
        const double m = std::abs(residual.data()[i]);
        const int deg = residual.degree_at(i);
        auto &slot = r.per_degree_residuals[static_cast<std::size_t>(deg)];
        slot = std::max(slot, m);
        r.max_abs_residual_coefficient = std::max(r.max_abs_residual_coefficient, m);
        if (m > base_tol * std::ldexp(1.0, deg) && (r.nonzero_degree < 0 || deg < r.nonzero_degree)) {
            r.nonzero_degree = deg;
        }
    }
    r.spherical = r.nonzero_degree < 0;
    r.residual = residual;
    return r;
}

MultiSeries log_laplacian(const MultiSeries &h)
{
    const auto lap = dz(dzb(h));
    if (std::abs(lap.constant_term()) < 1e-300) {
        throw DomainError("log_laplacian: degenerate Levi form at the origin (h_{z zbar}(0) = 0)");
    }
    return log_series(lap);
}

CurvatureReport curvature_residual(const MultiSeries &f, double base_tol)
{
    if (f.cap() < 3) {
        return undetermined();
    }
    const auto fb = dzb(f);
    const auto fzb = dz(fb);
    const auto fbb = dzb(fb);
    const auto fzbb = dzb(fzb);
    const auto fzbbb = dzb(fzbb);
    const auto t1 = 3.0 * fzbb * fb;
    const auto t2 = 2.0 * fzb * fb * fb;
    const auto t3 = fzb * fbb;
    auto r = make_report(fzbbb - t1 + t2 - t3, base_tol);
    r.term_scale = largest({fzbbb, t1, t2, t3});
    return r;
}

CurvatureReport reduced_residual(const MultiSeries &ft, double base_tol)
{
    if (ft.cap() < 2) {
        return undetermined();
    }
    const auto fz = dz(ft);
    const auto t0 = dzb(dzb(fz));
    const auto t1 = 3.0 * dzb(fz) * ft;
    const auto t2 = 2.0 * fz * ft * ft;
    const auto t3 = fz * dzb(ft);
    auto r = make_report(t0 - t1 + t2 - t3, base_tol);
    r.term_scale = largest({t0, t1, t2, t3});
    return r;
}

MultiSeries circular_g(const MultiSeries &h)
{
    const auto t = MultiSeries::variable(h.vars(), h.cap(), Var::t);
    const auto hd = dt(h);
    return log_series(hd + t * dt(hd));
}

CurvatureReport circular_residual(const MultiSeries &g, double base_tol)
{
    if (g.cap() < 4) {
        return undetermined();
    }
    const auto g1 = dt(g);
    const auto g2 = dt(g1);
    const auto g3 = dt(g2);
    const auto g4 = dt(g3);
    const auto t = MultiSeries::variable(g.vars(), g.cap(), Var::t);
    const auto t0 = t * g4;
    const auto t1 = 3.0 * g3;
    const auto t2 = g1 * (3.0 * t * g3 + 7.0 * g2);
    const auto t3 = t * g2 * g2;
    const auto t4 = 2.0 * t * g1 * g1 * g2;
    const auto t5 = 2.0 * g1 * g1 * g1;
    auto r = make_report(t0 + t1 - t2 - t3 + t4 + t5, base_tol);
    r.term_scale = largest({t0, t1, t2, t3, t4, t5});
    return r;
}

MultiSeries tube_to_planar(const MultiSeries &hx)
{
    const VarSet zs{Var::z, Var::zbar};
    const auto x = (MultiSeries::variable(zs, hx.cap(), Var::z) + MultiSeries::variable(zs, hx.cap(), Var::zbar)) * 0.5;
    return compose(hx, {{Var::x, x}});
}

MultiSeries circular_to_planar(const MultiSeries &ht)
{
    const VarSet zs{Var::z, Var::zbar};
    const auto t = MultiSeries::variable(zs, ht.cap(), Var::z) * MultiSeries::variable(zs, ht.cap(), Var::zbar);
    return compose(ht, {{Var::t, t}});
}

CurvatureReport verify_tube(TubeKind kind, int cap)
{
    return curvature_residual(log_laplacian(tube_to_planar(tube_h(kind, cap))), 1e-10);
}

nlohmann::json report_to_json(const CurvatureReport &r)
{
    nlohmann::json j;
    j["max_abs_residual_coefficient"] = r.max_abs_residual_coefficient;
    j["per_degree_residuals"] = r.per_degree_residuals;
    j["cap"] = r.cap;
    j["term_scale"] = r.term_scale;
    j["verdict"] = r.cap < 0 ? "undetermined" : (r.spherical ? "spherical_to_order" : "nonzero_at_degree");
    if (!r.spherical) {
        j["nonzero_degree"] = r.nonzero_degree;
    }
    return j;
}

} // namespace rigidsphere
