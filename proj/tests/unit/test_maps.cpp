#include <cmath>

#include "doctest.h"
#include "generators.hpp"
#include "rigidsphere/error.hpp"
#include "rigidsphere/maps.hpp"

using namespace rigidsphere;

namespace {

const VarSet ZW{Var::z, Var::w};
const Complex I(0.0, 1.0);

MultiSeries zvar(int cap)
{
    return MultiSeries::variable(ZW, cap, Var::z);
}

MultiSeries wvar(int cap)
{
    return MultiSeries::variable(ZW, cap, Var::w);
}

MultiSeries exp_w(Complex c, int cap)
{
    return exp_series(wvar(cap) * c);
}

double residual_size(const std::pair<MultiSeries, MultiSeries> &r)
{
    return std::max(max_abs_coeff(r.first), max_abs_coeff(r.second));
}

double jet_size(const MapJet &m)
{
    return std::max(max_abs_coeff(m.Z), max_abs_coeff(m.W));
}

} // namespace

TEST_CASE("stanton_map with b = 0")
{
    const int cap = 8;
    const StantonParams s{0.0, 0.7, -0.4};
    const auto m = stanton_map(s, cap);
    CHECK(approx_equal(m.Z, exp_w(s.c(), cap) * zvar(cap), 1e-13));
    CHECK(approx_equal(m.W, (exp_w(2.0 * s.r, cap) - 1.0) * (1.0 / (2.0 * s.r)), 1e-13));
}

TEST_CASE("stanton_map at w = 0")
{
    const int cap = 8;
    const StantonParams s{Complex(0.3, -0.6), 1.1, 0.2};
    const auto m = stanton_map(s, cap);
    const auto z = MultiSeries::variable(VarSet{Var::z}, cap, Var::z);
    CHECK(approx_equal(drop_variable(m.Z, Var::w), z * recip_series(1.0 - 2.0 * I * std::conj(s.b) * z), 1e-13));
    CHECK(max_abs_coeff(drop_variable(m.W, Var::w)) == 0.0);
}

TEST_CASE("twisted_map with zero parameters is the identity")
{
    const auto m = twisted_map(TwistParams{}, 8);
    CHECK(max_abs_diff(m.Z, zvar(8)) < 1e-15);
    CHECK(max_abs_diff(m.W, wvar(8)) < 1e-15);
}

TEST_CASE("identity map under the zero field")
{
    const auto [rz, rw] = system_residual({zvar(6), wvar(6)}, VectorFieldParams{});
    CHECK(max_abs_coeff(rz) == 0.0);
    CHECK(max_abs_coeff(rw) == 0.0);
    // With (b, c) = (1, 0): Z_w - 1 = -1 and W_w - 1 - 2iZ = -2iz.
    const auto [sz, sw] = system_residual({zvar(6), wvar(6)}, {1.0, 0.0, 0.0, 0.0});
    CHECK(sz.constant_term() == Complex(-1.0));
    CHECK(sw.coeff({1, 0}) == Complex(0.0, -2.0));
}

TEST_CASE("Stanton's map solves the flow system")
{
    gen::Rng rng(61);
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = gen::stanton(rng, 2.0);
        const auto m = stanton_map(s, 8);
        CHECK(residual_size(system_residual(m, stanton_field(s))) < 1e-10 * jet_size(m));
    }
}

TEST_CASE("twisted maps solve the flow system on the algebraic set")
{
    gen::Rng rng(62);
    for (int trial = 0; trial < 30; ++trial) {
        const auto n = gen::coeffs(rng, 3.0);
        for (const auto &t : coeffs_to_twist(n)) {
            const auto m = twisted_map(t, 8);
            CHECK(residual_size(system_residual(m, twist_field(t))) < 1e-13 * jet_size(m));
        }
    }
}

TEST_CASE("off the algebraic set the residual scales with the cubic defect")
{
    gen::Rng rng(63);
    for (int trial = 0; trial < 10; ++trial) {
        const auto n = gen::coeffs(rng, 2.0);
        const auto t = coeffs_to_twist(n).front();
        std::vector<double> ratios;
        LeadingTerm ref;
        for (const double delta : {1e-3, 1e-4}) {
            const auto tp = TwistParams::from_root(t.tau, t.a, t.rho, t.phi + delta);
            const auto res = system_residual(twisted_map(tp, 8), twist_field(tp)).first;
            if (ref.exps.empty()) {
                ref = leading_term(res);
                REQUIRE_FALSE(ref.exps.empty());
            }
            ratios.push_back(std::abs(res.coeff(ref.exps)) / std::abs(tp.cubic_defect()));
        }
        CHECK(std::abs(ratios[0] - ratios[1]) < 0.1 * std::max(ratios[0], ratios[1]));
    }
}

TEST_CASE("integrate_system with the zero field")
{
    const auto m = integrate_system({}, MultiSeries::variable(VarSet{Var::z}, 8, Var::z), 8);
    CHECK(max_abs_diff(m.Z, zvar(8)) == 0.0);
    CHECK(max_abs_diff(m.W, wvar(8)) == 0.0);
}

TEST_CASE("integrate_system matches Stanton's closed form")
{
    gen::Rng rng(64);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = gen::stanton(rng, 2.0);
        const int cap = 8;
        const auto z = MultiSeries::variable(VarSet{Var::z}, cap, Var::z);
        const auto z0 = z * recip_series(1.0 - 2.0 * I * std::conj(s.b) * z);
        const auto m = integrate_system(stanton_field(s), z0, cap);
        const auto ref = stanton_map(s, cap);
        CHECK(approx_equal(m.Z, ref.Z, 1e-12));
        CHECK(approx_equal(m.W, ref.W, 1e-12));
    }
}

TEST_CASE("integrate_system matches the twisted map")
{
    gen::Rng rng(65);
    for (int trial = 0; trial < 20; ++trial) {
        for (const auto &t : coeffs_to_twist(gen::coeffs(rng, 3.0))) {
            const auto m = integrate_system(twist_field(t), MultiSeries::variable(VarSet{Var::z}, 8, Var::z), 8);
            const auto ref = twisted_map(t, 8);
            CHECK(approx_equal(m.Z, ref.Z, 1e-10));
            CHECK(approx_equal(m.W, ref.W, 1e-10));
        }
    }
}

TEST_CASE("third order jets of the flow with b = 0, c = i theta")
{
    gen::Rng rng(66);
    for (int trial = 0; trial < 20; ++trial) {
        const double th = rng.uniform(-2.0, 2.0);
        const Complex a = rng.complex(2.0);
        const double rho = rng.uniform(-3.0, 3.0);
        const auto m = integrate_system({0.0, I * th, a, rho}, MultiSeries::variable(VarSet{Var::z}, 8, Var::z), 8);
        const auto Z = m.Z.truncated(3);
        const auto W = m.W.truncated(3);
        const int cap = 3;
        const auto z = zvar(cap);
        const auto w = wvar(cap);
        const auto Zj = z + I * th * z * w + a / 2.0 * w * w + 2.0 * I * std::conj(a) * z * z * w
                        + (rho - th * th) / 2.0 * z * w * w + I * th * a / 6.0 * w * w * w;
        const auto Wj = w + I * std::conj(a) * z * w * w + rho / 3.0 * w * w * w;
        CHECK(max_abs_diff(Z, Zj) < 1e-12);
        CHECK(max_abs_diff(W, Wj) < 1e-12);
    }
}

TEST_CASE("sphere automorphisms")
{
    const auto id = sphere_automorphism(0.0, 0.0, 8);
    CHECK(max_abs_diff(id.Z, zvar(8)) == 0.0);
    CHECK(max_abs_diff(id.W, wvar(8)) == 0.0);
    const auto m = sphere_automorphism(Complex(0.4, -0.3), 0.9, 10);
    const auto S = induced_surface(m, 9);
    const VarSet zzb{Var::z, Var::zbar};
    const auto zz = MultiSeries::variable(zzb, 9, Var::z) * MultiSeries::variable(zzb, 9, Var::zbar);
    CHECK(max_abs_diff(S.V, zz) < 1e-12);
}

TEST_CASE("an automorphism after Stanton's map is the twisted map")
{
    gen::Rng rng(67);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = gen::stanton(rng, 1.5);
        const auto composite = compose_maps(sphere_automorphism(s.b, s.r, 8), stanton_map(s, 8));
        const auto t = twisted_map(stanton_to_twist(s), 8);
        CHECK(approx_equal(composite.Z, t.Z, 1e-10));
        CHECK(approx_equal(composite.W, t.W, 1e-10));
    }
}

TEST_CASE("induced surfaces agree with the universal equation")
{
    gen::Rng rng(68);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = gen::stanton(rng, 2.0);
        const auto t = stanton_to_twist(s);
        const auto expect = expand_surface(t, 8).V;
        CHECK(approx_equal(induced_surface(stanton_map(s, 9), 8).V, expect, 1e-10));
        CHECK(approx_equal(induced_surface(twisted_map(t, 9), 8).V, expect, 1e-10));
    }
    const auto ex = TwistParams::from_root(0.0, Complex(std::sqrt(2.0)), 6.0, -1.0);
    CHECK(approx_equal(induced_surface(twisted_map(ex, 11), 10).V, expand_surface(ex, 10).V, 1e-10));
}

TEST_CASE("leading_term")
{
    MultiSeries s(ZW, 4);
    CHECK(leading_term(s).exps.empty());
    s.set_coeff({1, 2}, 1e-9);
    s.set_coeff({0, 3}, 2.0);
    s.set_coeff({3, 1}, 5.0);
    const auto lt = leading_term(s);
    CHECK(lt.exps == std::vector<int>{0, 3});
    CHECK(lt.value == Complex(2.0));
}
