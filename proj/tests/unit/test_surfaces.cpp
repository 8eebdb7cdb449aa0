#include <cmath>

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"
#include "rigidsphere/error.hpp"
#include "rigidsphere/surfaces.hpp"

using namespace rigidsphere;

namespace {

const double SQRT2 = std::sqrt(2.0);
const Complex I(0.0, 1.0);

TwistParams example()
{
    return TwistParams::from_root(0.0, Complex(SQRT2), 6.0, -1.0);
}

// V by fixed-point iteration V <- V - F(z, zbar, V) on sparse polynomials; F_v(0) = 1
// so each pass fixes one more order.
oracle::Poly oracle_surface(const TwistParams &t, int cap)
{
    const int n = cap + 1;
    const auto s2 = oracle::sinc2_taylor(t.r2, n);
    const auto kv = oracle::kv_taylor(t.r2, t.theta, n);
    std::vector<Complex> ex(static_cast<std::size_t>(n) + 1);
    for (int m = 0; m <= n; ++m) {
        ex[m] = std::pow(-2.0 * t.theta, m) / oracle::factorial(m);
    }
    const auto z = oracle::Poly::var(2, cap, 0);
    const auto zb = oracle::Poly::var(2, cap, 1);
    const auto zz = z * zb;
    const auto one = oracle::Poly::constant(2, cap, 1.0);
    const auto lin = one * t.phi - z * std::conj(t.a) - zb * t.a + zz * (4.0 * t.phi * (t.phi - t.theta));
    auto V = zz;
    for (int pass = 0; pass <= cap; ++pass) {
        const auto F = (one - zz * (4.0 * t.phi)) * oracle::apply_univariate(s2, V)
                       - oracle::apply_univariate(ex, V) * zz - lin * oracle::apply_univariate(kv, V);
        V = V - F;
    }
    return V;
}

double stanton_c33(const StantonParams &s)
{
    const double B = std::norm(s.b);
    return 2.0 / 3.0 * s.r * s.r + 6.0 * s.theta * s.theta + 56.0 * B * B - 112.0 / 3.0 * s.theta * B;
}

} // namespace

TEST_CASE("defining_value basics")
{
    const TwistParams zero;
    for (const Complex z : {Complex(0.1, 0.2), Complex(-0.3), Complex(0.0, 0.45)}) {
        CHECK(std::abs(defining_value(zero, z, std::norm(z))) < 1e-16);
    }
    CHECK(defining_value(example(), 0.0, 0.0) == 0.0);
}

TEST_CASE("defining_value is real")
{
    gen::Rng rng(51);
    for (int trial = 0; trial < 200; ++trial) {
        const auto roots = coeffs_to_twist(gen::coeffs(rng, 3.0));
        const auto &t = roots[static_cast<std::size_t>(rng.integer(0, static_cast<int>(roots.size()) - 1))];
        const Complex z = rng.complex(1.0);
        const double v = rng.uniform(-1.0, 1.0);
        const Complex f = defining_value(t, z, Complex(v));
        CHECK(std::abs(f.imag()) < 1e-14);
        CHECK(std::abs(f.real() - defining_value(t, z, v)) < 1e-12 * (1.0 + std::abs(f)));
    }
}

TEST_CASE("stanton_defining_value")
{
    const StantonParams s{0.0, 1.3, 0.0};
    for (const double v : {0.05, 0.2}) {
        const Complex z(0.1, -0.2);
        CHECK(std::abs(stanton_defining_value(s, z, v) - (std::sin(2.6 * v) / 2.6 - std::norm(z))) < 1e-15);
    }
    CHECK(stanton_defining_value({Complex(0.4, 0.1), 0.7, -0.2}, 0.0, 0.0) == 0.0);
    CHECK_THROWS_AS(stanton_defining_value({1.0, 0.0, 0.0}, 0.1, 0.1), DomainError);
    // 1 - 2i conj(b) z = 0 at z = 1/(2i conj(b)).
    const Complex b(0.5, 0.0);
    CHECK_THROWS_AS(stanton_defining_value({b, 1.0, 0.0}, 1.0 / (2.0 * I * std::conj(b)), 0.1), DomainError);
}

TEST_CASE("Stanton's equation is the universal one divided by |1 - 2i conj(b) z|^2")
{
    gen::Rng rng(52);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = gen::stanton(rng, 2.0);
        const auto t = stanton_to_twist(s);
        const Complex z = rng.complex(0.3);
        const double v = rng.uniform(-0.3, 0.3);
        const double D = std::norm(1.0 - 2.0 * I * std::conj(s.b) * z);
        const double u = defining_value(t, z, v);
        CHECK(std::abs(u - D * stanton_defining_value(s, z, v)) < 1e-10 * (1.0 + std::abs(u)));
    }
}

TEST_CASE("solve_v")
{
    CHECK(solve_v(TwistParams{}, 0.0) == 0.0);
    CHECK(std::abs(solve_v(TwistParams{}, 0.3) - 0.09) < 1e-15);
    const auto t = example();
    const auto S = expand_surface(t, 12);
    for (const Complex z : {Complex(0.1), Complex(0.05, -0.07), Complex(0.0, 0.1)}) {
        const double v = solve_v(t, z);
        const Complex sv = evaluate(S.V, {{Var::z, z}, {Var::zbar, std::conj(z)}});
        CHECK(std::abs(v - sv.real()) < 1e-9);
        CHECK(std::abs(defining_value(t, z, v)) < 1e-12);
    }
    CHECK_THROWS_AS(solve_v(t, 0.6), DomainError);
}

TEST_CASE("expand_surface at the Heisenberg sphere")
{
    const auto S = expand_surface(TwistParams{}, 10);
    const VarSet zzb{Var::z, Var::zbar};
    const auto zz = MultiSeries::variable(zzb, 10, Var::z) * MultiSeries::variable(zzb, 10, Var::zbar);
    CHECK(max_abs_diff(S.V, zz) == 0.0);
}

TEST_CASE("expand_surface on the worked example")
{
    const auto S = expand_surface(example(), 8);
    const auto n = extract_coeffs(S);
    CHECK(std::abs(n.c22) < 1e-12);
    CHECK(std::abs(n.c23 - Complex(-2.0 * SQRT2)) < 1e-12);
    CHECK(std::abs(n.c33 + 4.0) < 1e-12);

    // Independent undetermined-coefficient solve of the same equation.
    const auto expect = oracle_surface(example(), 8);
    for (std::size_t i = 0; i < S.V.size(); ++i) {
        const auto e = S.V.exponents_at(i);
        const Complex want = expect.get(oracle::Exps(e.begin(), e.end()));
        CHECK(std::abs(S.V.data()[i] - want) < 1e-10 * (1.0 + std::abs(want)));
    }
    // Frozen from the oracle above.
    CHECK(std::abs(S.V.coeff({2, 2})) < 1e-12);
    CHECK(std::abs(S.V.coeff({2, 3}) - Complex(-2.0 * SQRT2)) < 1e-12);
    CHECK(std::abs(S.V.coeff({3, 3}) + 4.0) < 1e-12);
}

TEST_CASE("expand_surface reproduces Stanton's expansion")
{
    gen::Rng rng(53);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = gen::stanton(rng, 2.0);
        const auto n = extract_coeffs(expand_surface(stanton_to_twist(s), 8));
        const double B = std::norm(s.b);
        CHECK(std::abs(n.c22 - (6.0 * B - 2.0 * s.theta)) < 1e-8);
        CHECK(std::abs(n.c23 - (2.0 * std::conj(s.c()) + 4.0 * I * B) * s.b) < 1e-8);
        CHECK(std::abs(n.c33 - stanton_c33(s)) < 1e-8);
    }
    for (const double th : {-1.0, 0.5}) {
        const StantonParams s{0.0, 0.8, th};
        const auto n = extract_coeffs(expand_surface(stanton_to_twist(s), 8));
        CHECK(std::abs(n.c22 + 2.0 * th) < 1e-12);
        CHECK(std::abs(n.c23) < 1e-12);
        CHECK(std::abs(n.c33 - (2.0 / 3.0 * 0.64 + 6.0 * th * th)) < 1e-12);
    }
}

TEST_CASE("every root reproduces its coefficients")
{
    gen::Rng rng(54);
    for (int trial = 0; trial < 50; ++trial) {
        const auto n = gen::coeffs(rng, 5.0);
        for (const auto &t : coeffs_to_twist(n)) {
            const auto S = expand_surface(t, 8);
            CHECK(is_hermitian(S.V, 1e-8));
            CHECK(S.V.constant_term() == Complex{});
            CHECK(std::abs(S.V.coeff({1, 1}) - 1.0) < 1e-12);
            const auto got = extract_coeffs(S);
            CHECK(std::abs(got.c22 - n.c22) < 1e-8);
            CHECK(std::abs(got.c23 - n.c23) < 1e-8);
            CHECK(std::abs(got.c33 - n.c33) < 1e-8);
        }
    }
}

TEST_CASE("distinct roots give the same surface")
{
    gen::Rng rng(55);
    int multi = 0;
    while (multi < 10) {
        const auto roots = coeffs_to_twist(gen::coeffs(rng, 3.0));
        if (roots.size() < 2) {
            continue;
        }
        ++multi;
        const auto first = expand_surface(roots[0], 10);
        for (std::size_t k = 1; k < roots.size(); ++k) {
            CHECK(approx_equal(expand_surface(roots[k], 10).V, first.V, 1e-9));
        }
    }
}

TEST_CASE("extract_coeffs rejects graphs outside normal form")
{
    const VarSet zzb{Var::z, Var::zbar};
    const auto z = MultiSeries::variable(zzb, 6, Var::z);
    const auto zb = MultiSeries::variable(zzb, 6, Var::zbar);
    CHECK(extract_coeffs({z * zb, {}}).c33 == 0.0);
    CHECK_THROWS_AS(extract_coeffs({z * zb + z * z, {}}), DomainError);
    CHECK_THROWS_AS(extract_coeffs({2.0 * z * zb, {}}), DomainError);
    CHECK_THROWS_AS(extract_coeffs({z * zb + 0.1, {}}), DomainError);
    CHECK_THROWS_AS(extract_coeffs({(z * zb).truncated(4), {}}), DomainError);
}

TEST_CASE("tube_h")
{
    const auto p = tube_h(TubeKind::Parabola, 8);
    CHECK(p.coeff({2}) == Complex(0.5));
    CHECK(p.degree() == 2);
    const auto c = tube_h(TubeKind::Cos, 8);
    CHECK(std::abs(c.coeff({2}) - 0.5) < 1e-15);
    CHECK(std::abs(c.coeff({4}) - 1.0 / 12.0) < 1e-15);
    CHECK(std::abs(c.coeff({6}) - 1.0 / 45.0) < 1e-15);
    const auto ch = tube_h(TubeKind::Cosh, 8);
    CHECK(std::abs(ch.coeff({2}) - 0.5) < 1e-15);
    CHECK(std::abs(ch.coeff({4}) + 1.0 / 12.0) < 1e-15);
    const auto e = tube_h(TubeKind::Exponential, 8);
    CHECK(std::abs(e.coeff({5}) - 1.0 / 120.0) < 1e-15);
    CHECK(parse_tube_kind("cosh") == TubeKind::Cosh);
    CHECK(to_string(TubeKind::Exponential) == "exponential");
    CHECK_FALSE(parse_tube_kind("sphere").has_value());
}

TEST_CASE("circular_surface solves its equation")
{
    const auto flat = circular_surface(0.0, 0.0, CircularFamily::Sin, 8);
    CHECK(max_abs_diff(flat, MultiSeries::variable(VarSet{Var::t}, 8, Var::t)) == 0.0);
    gen::Rng rng(56);
    for (int trial = 0; trial < 20; ++trial) {
        const double alpha2 = rng.uniform(-2.0, 2.0);
        const double beta = rng.uniform(-1.0, 1.0);
        const auto fam = trial % 2 == 0 ? CircularFamily::Sin : CircularFamily::Sinh;
        const auto h = circular_surface(alpha2, beta, fam, 14);
        const double t = 0.01;
        const double v = evaluate(h, {{Var::t, Complex(t)}}).real();
        const Complex al = std::sqrt(Complex(fam == CircularFamily::Sin ? alpha2 : -alpha2));
        const Complex lhs = al == Complex{} ? Complex(v) : std::sin(al * v) / al;
        CHECK(std::abs(lhs - std::exp(-2.0 * beta * v) * t) < 1e-14);
    }
}
