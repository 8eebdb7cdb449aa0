#pragma once

// Parameter algebra for rigid spheres: normal form coefficients, twist
// parameters and Stanton's parameters, with the conversions between them.

#include <complex>
#include <optional>
#include <vector>

#include "json.hpp"

namespace rigidsphere {

using Complex = std::complex<double>;

// Coefficients of v = |z|^2 + c22|z|^4 + c23 z^2 zbar^3 + conj(c23) z^3 zbar^2 + c33|z|^6 + ...
struct NormalFormCoeffs {
    double c22 = 0.0;
    Complex c23{};
    double c33 = 0.0;
};

struct TwistParams {
    double tau = 0.0;
    Complex a{};
    double rho = 0.0;
    double phi = 0.0;
    double theta = 0.0;
    double r2 = 0.0; // may be negative (imaginary r)

    // Completes (tau, a, rho, phi) with theta and r2.
    static TwistParams from_root(double tau, Complex a, double rho, double phi);

    // 4phi^3 + 4tau phi^2 + (tau^2 - rho)phi - |a|^2; zero on the algebraic set.
    [[nodiscard]] double cubic_defect() const;
};

struct StantonParams {
    Complex b{};
    double r = 0.0;
    double theta = 0.0;

    [[nodiscard]] Complex c() const { return {r, theta}; }
};

struct Reachability {
    bool reachable = false;
    std::optional<StantonParams> witness;
    // Only attainable as a limit of Stanton's family (the solution has c = 0).
    bool limit_only = false;
};

// One entry per distinct real root phi, sorted by phi.
std::vector<TwistParams> coeffs_to_twist(const NormalFormCoeffs &n);

// Real roots of p3 x^3 + p2 x^2 + p1 x + p0, ascending, near-equal roots merged.
std::vector<double> cubic_real_roots(double p3, double p2, double p1, double p0);

// Closed-form root of 4phi^3 - rho phi - |a|^2 = 0 (the tau = 0 cubic):
// phi = (cbrt(|a|^2 + s) + cbrt(|a|^2 - s))/2, s = sqrt(|a|^4 - rho^3/27),
// principal cube roots when s is imaginary.
double tau0_phi(Complex a, double rho);

NormalFormCoeffs twist_to_coeffs(const TwistParams &t);
NormalFormCoeffs stanton_to_coeffs(const StantonParams &s);
TwistParams stanton_to_twist(const StantonParams &s);

Reachability stanton_reachable(const NormalFormCoeffs &n, double tol = 1e-9);

// Index of the root with smallest |phi|.
std::size_t default_root_index(const std::vector<TwistParams> &roots);

void to_json(nlohmann::json &j, const NormalFormCoeffs &n);
void from_json(const nlohmann::json &j, NormalFormCoeffs &n);
void to_json(nlohmann::json &j, const TwistParams &t);
void from_json(const nlohmann::json &j, TwistParams &t);
void to_json(nlohmann::json &j, const StantonParams &s);
void from_json(const nlohmann::json &j, StantonParams &s);

} // namespace rigidsphere
