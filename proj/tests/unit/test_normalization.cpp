#include <cmath>

#include "doctest.h"
#include "generators.hpp"
#include "rigidsphere/error.hpp"
#include "rigidsphere/normalization.hpp"

using namespace rigidsphere;

namespace {

MultiSeries u_series(int cap, const std::vector<Complex> &c)
{
    return MultiSeries::univariate(Var::u, cap, c);
}

// (2/sqrt(k)) arctan(sqrt(k) u/2) with k = 9c22^2 - 6c33, as the odd series sum (-k/4)^j u^{2j+1}/(2j+1).
MultiSeries arctan_h(double c22, double c33, int cap)
{
    const double s = (9.0 * c22 * c22 - 6.0 * c33) / 4.0;
    std::vector<Complex> c(static_cast<std::size_t>(cap) + 1);
    double power = 1.0;
    for (int k = 1; k <= cap; k += 2) {
        c[k] = power / k;
        power *= -s;
    }
    return u_series(cap, c);
}

double max_residual(const std::array<MultiSeries, 3> &r)
{
    return std::max({max_abs_coeff(r[0]), max_abs_coeff(r[1]), max_abs_coeff(r[2])});
}

} // namespace

TEST_CASE("normalization at the Heisenberg sphere")
{
    const auto d = normalization_ode_solve({}, 10);
    CHECK(max_abs_coeff(d.alpha) == 0.0);
    CHECK(max_abs_coeff(d.p) == 0.0);
    CHECK(max_abs_diff(d.h, MultiSeries::variable(VarSet{Var::u}, 10, Var::u)) == 0.0);
}

TEST_CASE("normalization with c23 = 0 is the arctan closed form")
{
    gen::Rng rng(71);
    for (int trial = 0; trial < 20; ++trial) {
        const double c22 = rng.uniform(-2.0, 2.0);
        const double c33 = rng.uniform(-2.0, 2.0);
        const auto d = normalization_ode_solve({c22, 0.0, c33}, 12);
        const auto h = arctan_h(c22, c33, 12);
        CHECK(max_abs_diff(d.h, h) < 1e-10);
        CHECK(max_abs_diff(d.alpha, h * (c22 / 2.0)) < 1e-10);
        CHECK(max_abs_coeff(d.p) < 1e-10);
    }
    // c22 = 1, c33 = 0: h = (2/3) arctan(3u/2) = u - (3/4) u^3 + (81/80) u^5 - ...
    const auto d = normalization_ode_solve({1.0, 0.0, 0.0}, 12);
    CHECK(std::abs(d.h.coeff({3}) + 0.75) < 1e-14);
    CHECK(std::abs(d.h.coeff({5}) - 81.0 / 80.0) < 1e-13);
}

TEST_CASE("normalization residuals vanish")
{
    gen::Rng rng(72);
    for (int trial = 0; trial < 30; ++trial) {
        const auto n = gen::coeffs(rng, 3.0);
        const auto d = normalization_ode_solve(n, 10);
        const double scale = std::max({1.0, max_abs_coeff(d.h), max_abs_coeff(d.p), max_abs_coeff(d.alpha)});
        CHECK(max_residual(norm_residuals(d, n)) < 1e-10 * scale);
        CHECK(max_abs_coeff(chain_residual(d)) < 1e-10 * scale);
        CHECK(d.p.constant_term() == Complex{});
        CHECK(d.h.constant_term() == Complex{});
        CHECK(std::abs(d.h.coeff({1}) - 1.0) < 1e-15);
    }
}

TEST_CASE("normalization is independent of the iteration count")
{
    gen::Rng rng(73);
    for (int trial = 0; trial < 10; ++trial) {
        const auto n = gen::coeffs(rng, 2.0);
        const auto a = normalization_ode_solve(n, 10);
        const auto b = normalization_ode_solve(n, 10, 25);
        CHECK(max_abs_diff(a.h, b.h) < 1e-13);
        CHECK(max_abs_diff(a.p, b.p) < 1e-13);
        CHECK(max_abs_diff(a.alpha, b.alpha) < 1e-13);
        CHECK(max_abs_diff(a.q, b.q) < 1e-13);
    }
}

TEST_CASE("perturbing h by eps u^3 shows up in the third equation")
{
    gen::Rng rng(74);
    for (int trial = 0; trial < 10; ++trial) {
        const auto n = gen::coeffs(rng, 2.0);
        auto d = normalization_ode_solve(n, 10);
        const double eps = 1e-4;
        d.h.add_to_coeff(std::vector<int>{3}, eps);
        const auto r = norm_residuals(d, n);
        // The residual starts at u^0, so that is the leading coefficient.
        CHECK(std::abs(r[2].coeff({0}) - 2.0 * eps) < 1e-12);
        CHECK(std::abs(r[1].constant_term()) < 1e-12);
    }
}

TEST_CASE("norm_residuals rejects h'(0) = 0")
{
    NormalizationData d = normalization_ode_solve({}, 6);
    d.h = d.h * 0.0;
    CHECK_THROWS_AS(norm_residuals(d, {}), DomainError);
}

TEST_CASE("Stanton's map as normalization data")
{
    gen::Rng rng(75);
    for (int trial = 0; trial < 20; ++trial) {
        auto s = gen::stanton(rng, 2.0);
        if (std::abs(s.r) < 0.1) {
            s.r = 0.5;
        }
        const auto d = stanton_normalization_data(s, 10);
        const auto n = stanton_to_coeffs(s);
        const double scale = std::max({1.0, max_abs_coeff(d.h), max_abs_coeff(d.p), max_abs_coeff(d.alpha)});
        CHECK(max_residual(norm_residuals(d, n)) < 1e-9 * scale);
        CHECK(std::abs(d.p.coeff({1}) - s.b) < 1e-14);
        // h''(0) = -2r.
        CHECK(std::abs(d.h.coeff({2}) - Complex(-s.r)) < 1e-14);
        CHECK(max_abs_coeff(chain_residual(d)) < 1e-9 * scale);
    }
    // theta = 0, b = 0: alpha = 0, h = log(1 + 2ru)/(2r).
    const double r = 0.6;
    const auto d = stanton_normalization_data({0.0, r, 0.0}, 8);
    CHECK(max_abs_coeff(d.alpha) == 0.0);
    CHECK(max_abs_coeff(d.p) == 0.0);
    for (int k = 1; k <= 8; ++k) {
        const double want = (k % 2 == 1 ? 1.0 : -1.0) * std::pow(2.0 * r, k) / k / (2.0 * r);
        CHECK(std::abs(d.h.coeff({k}) - want) < 1e-13);
    }
}

TEST_CASE("normalization_map")
{
    const int cap = 8;
    NormalizationData trivial;
    trivial.alpha = MultiSeries::zero(VarSet{Var::u}, cap + 1);
    trivial.p = trivial.alpha;
    trivial.h = MultiSeries::variable(VarSet{Var::u}, cap + 1, Var::u);
    trivial.q = trivial.h;
    const auto id = normalization_map(trivial, cap);
    const VarSet zw{Var::z, Var::w};
    CHECK(max_abs_diff(id.Z, MultiSeries::variable(zw, cap, Var::z)) < 1e-15);
    CHECK(max_abs_diff(id.W, MultiSeries::variable(zw, cap, Var::w)) < 1e-15);

    gen::Rng rng(76);
    for (int trial = 0; trial < 10; ++trial) {
        auto s = gen::stanton(rng, 1.5);
        if (std::abs(s.r) < 0.1) {
            s.r = 0.5;
        }
        const auto m = normalization_map(stanton_normalization_data(s, 10), 9);
        const auto expect = expand_surface(stanton_to_twist(s), 8).V;
        CHECK(approx_equal(induced_surface(m, 8).V, expect, 1e-9));

        const auto n = gen::coeffs(rng, 2.0);
        const auto mn = normalization_map(normalization_ode_solve(n, 10), 9);
        const auto got = extract_coeffs(induced_surface(mn, 8));
        CHECK(std::abs(got.c22 - n.c22) < 1e-9);
        CHECK(std::abs(got.c23 - n.c23) < 1e-9);
        CHECK(std::abs(got.c33 - n.c33) < 1e-9);
    }
}
