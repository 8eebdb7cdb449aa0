#include "verify_suites.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "rigidsphere/curvature.hpp"
#include "rigidsphere/maps.hpp"
#include "rigidsphere/normalization.hpp"
#include "rigidsphere/parameters.hpp"
#include "rigidsphere/surfaces.hpp"

namespace rigidsphere::cli {

namespace {

// Largest |c| / 2^deg over all coefficients.
double scaled_max(const MultiSeries &s)
{
    double m = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        m = std::max(m, std::abs(s.data()[i]) / std::ldexp(1.0, s.degree_at(i)));
    }
    return m;
}

// Passes when every |c| / 2^deg is at most tol * scale.
CheckResult series_check(std::string name, std::initializer_list<const MultiSeries *> residuals, double tol,
                         double scale = 1.0)
{
    CheckResult c;
    c.name = std::move(name);
    c.tolerance = tol;
    double scaled = 0.0;
    for (const auto *r : residuals) {
        c.max_residual = std::max(c.max_residual, max_abs_coeff(*r));
        scaled = std::max(scaled, scaled_max(*r));
    }
    c.pass = scaled <= tol * scale;
    return c;
}

CheckResult value_check(std::string name, double error, double tol)
{
    CheckResult c;
    c.name = std::move(name);
    c.max_residual = error;
    c.tolerance = tol;
    c.pass = error <= tol;
    return c;
}

// Residual coefficients against tol * 2^deg * max(1, size of the cancelling terms).
CheckResult report_check(std::string name, const CurvatureReport &r, double tol)
{
    CheckResult c;
    c.name = std::move(name);
    c.max_residual = r.max_abs_residual_coefficient;
    c.tolerance = tol;
    double scaled = 0.0;
    for (std::size_t d = 0; d < r.per_degree_residuals.size(); ++d) {
        scaled = std::max(scaled, std::ldexp(r.per_degree_residuals[d], -static_cast<int>(d)));
    }
    c.pass = scaled <= tol * std::max(1.0, r.term_scale);
    c.detail = report_to_json(r);
    return c;
}

struct Sampler {
    std::mt19937_64 rng;
    explicit Sampler(std::uint64_t seed) : rng(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

    NormalFormCoeffs coeffs(double bound)
    {
        const double c22 = uniform(-bound, bound);
        const double re = uniform(-bound, bound);
        const double im = uniform(-bound, bound);
        return {c22, {re, im}, uniform(-bound, bound)};
    }

    StantonParams stanton(double bound)
    {
        StantonParams s;
        const double br = uniform(-bound, bound);
        const double bi = uniform(-bound, bound);
        s.b = {br, bi};
        s.r = uniform(-bound, bound);
        s.theta = uniform(-bound, bound);
        return s;
    }
};

double jet_scale(const MapJet &m)
{
    return std::max({1.0, max_abs_coeff(m.Z), max_abs_coeff(m.W)});
}

double data_scale(const NormalizationData &d)
{
    return std::max({1.0, max_abs_coeff(d.alpha), max_abs_coeff(d.p), max_abs_coeff(d.h), max_abs_coeff(d.q)});
}

// Zero-curvature checks lose four orders to differentiation, so they run at cap >= 8.
int curvature_cap(const SuiteOptions &o)
{
    return std::max(o.cap, 8);
}

std::string label(const char *prefix, int i)
{
    return std::string(prefix) + "[" + std::to_string(i) + "]";
}

void curvature_suite(const SuiteOptions &o, std::vector<CheckResult> &out)
{
    Sampler rnd(o.seed);
    for (int i = 0; i < 5; ++i) {
        const auto n = rnd.coeffs(5.0);
        const auto roots = coeffs_to_twist(n);
        for (std::size_t k = 0; k < roots.size(); ++k) {
            const auto V = expand_surface(roots[k], curvature_cap(o)).V;
            auto c = report_check(label("curvature.theorem_surface", i) + ".root" + std::to_string(k),
                                  curvature_residual(log_laplacian(V), o.tolerance), o.tolerance);
            c.detail["coeffs"] = n;
            c.detail["twist"] = roots[k];
            out.push_back(std::move(c));
        }
    }
}

void map_suite(const SuiteOptions &o, std::vector<CheckResult> &out)
{
    Sampler rnd(o.seed);
    for (int i = 0; i < 3; ++i) {
        const auto s = rnd.stanton(2.0);
        const auto sm = stanton_map(s, o.cap);
        const auto [r1, r2] = system_residual(sm, stanton_field(s));
        out.push_back(series_check(label("map.stanton_system", i), {&r1, &r2}, o.tolerance, jet_scale(sm)));
        for (const auto &t : coeffs_to_twist(stanton_to_coeffs(s))) {
            const auto tm = twisted_map(t, o.cap);
            const auto [q1, q2] = system_residual(tm, twist_field(t));
            auto c = series_check(label("map.twisted_system", i), {&q1, &q2}, o.tolerance, jet_scale(tm));
            c.detail["twist"] = t;
            c.detail["jet_scale"] = jet_scale(tm);
            out.push_back(std::move(c));
        }
    }
    if (o.perturb_phi != 0.0) {
        const auto n = rnd.coeffs(2.0);
        const auto t = coeffs_to_twist(n).front();
        // The defect first enters the Z residual at w^4.
        const int cap = std::max(o.cap, 6);
        nlohmann::json rows = nlohmann::json::array();
        std::vector<double> ratios;
        LeadingTerm reference;
        for (double delta : {o.perturb_phi, o.perturb_phi / 10.0}) {
            const auto tp = TwistParams::from_root(t.tau, t.a, t.rho, t.phi + delta);
            const auto residual = system_residual(twisted_map(tp, cap), twist_field(tp)).first;
            if (reference.exps.empty()) {
                reference = leading_term(residual);
            }
            const Complex lead = reference.exps.empty() ? Complex{} : residual.coeff(reference.exps);
            const double defect = tp.cubic_defect();
            ratios.push_back(std::abs(lead) / std::abs(defect));
            rows.push_back({{"delta", delta}, {"cubic_defect", defect}, {"leading_coefficient", std::abs(lead)},
                            {"ratio", ratios.back()}});
        }
        const double spread = std::abs(ratios[0] - ratios[1]) / std::max(ratios[0], ratios[1]);
        auto c = value_check("map.defect_scaling", spread, 0.1);
        c.detail["rows"] = rows;
        c.detail["leading_exponents"] = reference.exps;
        c.detail["cap"] = cap;
        out.push_back(std::move(c));
    }
}

void normalization_suite(const SuiteOptions &o, std::vector<CheckResult> &out)
{
    Sampler rnd(o.seed);
    {
        // c23 = 0: h = (2/sqrt(k)) arctan(sqrt(k) u/2), k = 9c22^2 - 6c33, alpha = (c22/2)h.
        const NormalFormCoeffs n{rnd.uniform(-2.0, 2.0), {}, rnd.uniform(-2.0, 2.0)};
        const auto d = normalization_ode_solve(n, o.cap);
        const double s = (9.0 * n.c22 * n.c22 - 6.0 * n.c33) / 4.0;
        std::vector<Complex> hc(static_cast<std::size_t>(o.cap) + 1);
        double power = 1.0;
        for (int k = 1; k <= o.cap; k += 2) {
            hc[k] = power / k;
            power *= -s;
        }
        const auto h = MultiSeries::univariate(Var::u, o.cap, hc);
        const auto dh = d.h - h;
        const auto da = d.alpha - h * (n.c22 / 2.0);
        out.push_back(series_check("normalization.arctan_closed_form", {&dh, &da, &d.p}, o.tolerance, data_scale(d)));
    }
    for (int i = 0; i < 3; ++i) {
        const auto n = rnd.coeffs(3.0);
        const auto d = normalization_ode_solve(n, o.cap);
        const auto r = norm_residuals(d, n);
        const auto chain = chain_residual(d);
        out.push_back(series_check(label("normalization.residuals", i), {&r[0], &r[1], &r[2], &chain}, o.tolerance,
                                   data_scale(d)));
    }
    for (int i = 0; i < 2; ++i) {
        const auto s = rnd.stanton(1.5);
        const auto d = stanton_normalization_data(s, o.cap);
        const auto r = norm_residuals(d, stanton_to_coeffs(s));
        out.push_back(
            series_check(label("normalization.stanton_data", i), {&r[0], &r[1], &r[2]}, o.tolerance, data_scale(d)));
        const double init_err = std::max(std::abs(d.p.coeff({1}) - s.b), std::abs(2.0 * d.h.coeff({2}) + 2.0 * s.r));
        out.push_back(value_check(label("normalization.stanton_initial_values", i), init_err, 1e-12));
    }
}

void tubes_suite(const SuiteOptions &o, std::vector<CheckResult> &out)
{
    for (auto kind : {TubeKind::Parabola, TubeKind::Exponential, TubeKind::Cos, TubeKind::Cosh}) {
        out.push_back(report_check("tubes." + to_string(kind), verify_tube(kind, curvature_cap(o)), 1e-10));
    }
}

void circular_suite(const SuiteOptions &o, std::vector<CheckResult> &out)
{
    Sampler rnd(o.seed);
    for (auto family : {CircularFamily::Sin, CircularFamily::Sinh}) {
        const double alpha2 = rnd.uniform(0.1, 1.0);
        const double beta = rnd.uniform(-0.5, 0.5);
        const auto h = circular_surface(alpha2, beta, family, curvature_cap(o));
        const auto g = circular_g(h);
        const std::string name = family == CircularFamily::Sin ? "sin" : "sinh";
        auto c = report_check("circular." + name + ".ode", circular_residual(g, 1e-10), 1e-10);
        c.detail["alpha2"] = alpha2;
        c.detail["beta"] = beta;
        out.push_back(std::move(c));
        // g = c1 t + c2 t^2 + ... with c1 = -8 beta, c2 = +-(3/2)alpha^2 + 22 beta^2.
        const double sign = family == CircularFamily::Sin ? 1.0 : -1.0;
        const double c1 = -8.0 * beta;
        const double c2 = sign * 1.5 * alpha2 + 22.0 * beta * beta;
        auto cc = value_check("circular." + name + ".g_coefficients",
                              std::max(std::abs(g.coeff({1}) - c1), std::abs(g.coeff({2}) - c2)), 1e-10);
        cc.detail["c1"] = g.coeff({1}).real();
        cc.detail["c2"] = g.coeff({2}).real();
        out.push_back(std::move(cc));
        const auto planar = curvature_residual(log_laplacian(circular_to_planar(h)), 1e-9);
        out.push_back(report_check("circular." + name + ".planar_curvature", planar, 1e-9));
    }
}

} // namespace

const std::vector<std::string> &suite_names()
{
    static const std::vector<std::string> names = {"curvature", "map", "normalization", "tubes", "circular", "all"};
    return names;
}

std::vector<CheckResult> run_suite(const std::string &suite, const SuiteOptions &opts)
{
    std::vector<CheckResult> out;
    const bool all = suite == "all";
    bool known = all;
    if (all || suite == "curvature") {
        curvature_suite(opts, out);
        known = true;
    }
    if (all || suite == "map") {
        map_suite(opts, out);
        known = true;
    }
    if (all || suite == "normalization") {
        normalization_suite(opts, out);
        known = true;
    }
    if (all || suite == "tubes") {
        tubes_suite(opts, out);
        known = true;
    }
    if (all || suite == "circular") {
        circular_suite(opts, out);
        known = true;
    }
    if (!known) {
        throw std::invalid_argument("unknown suite \"" + suite + "\"");
    }
    return out;
}

nlohmann::json to_json(const CheckResult &c)
{
    return {{"name", c.name}, {"max_residual", c.max_residual}, {"tolerance", c.tolerance}, {"pass", c.pass},
            {"detail", c.detail}};
}

} // namespace rigidsphere::cli
