#pragma once

// Defining functions of rigid spheres and their graph expansions
// v = V(z, zbar).

#include <string>

#include "json.hpp"
#include "rigidsphere/parameters.hpp"
#include "rigidsphere/series.hpp"

namespace rigidsphere {

struct SurfaceSeries {
    MultiSeries V; // in (z, zbar)
    nlohmann::json source;
};

// Universal rigid sphere equation
//   (1 - 4 phi|z|^2) sin(2rv)/(2r) - e^{-2 theta v}|z|^2
//     - (phi - conj(a) z - a zbar + 4 phi(phi - theta)|z|^2) Kv(v) = 0.
double defining_value(const TwistParams &t, Complex z, double v);
// Same expression in complex arithmetic; real for real v.
Complex defining_value(const TwistParams &t, Complex z, Complex v);

// Difference of the two sides of Stanton's equation. Throws DomainError when
// c = 0 or 1 - 2i conj(b) z vanishes.
double stanton_defining_value(const StantonParams &s, Complex z, double v);

struct SolveVOptions {
    double radius = 0.5;
    int max_iterations = 50;
    double tolerance = 1e-12;
};

// Real v with defining_value(t, z, v) = 0 by Newton from |z|^2.
double solve_v(const TwistParams &t, Complex z, const SolveVOptions &opts = {});

// The defining function as a series in (z, zbar, v).
MultiSeries defining_series(const TwistParams &t, int cap);

SurfaceSeries expand_surface(const TwistParams &t, int cap);

// Reads (c22, c23, c33) after checking the graph is in normal form to low order.
NormalFormCoeffs extract_coeffs(const SurfaceSeries &s, double tol = 1e-8);

enum class TubeKind { Parabola, Exponential, Cos, Cosh };

std::string to_string(TubeKind kind);
std::optional<TubeKind> parse_tube_kind(std::string_view name);

// h(x) for the tubes v = h(x): x^2/2, e^x, -log cos x, log cosh x.
MultiSeries tube_h(TubeKind kind, int cap);

enum class CircularFamily { Sin, Sinh };

// h(t) with v = h(|z|^2) solving sin(alpha v)/alpha = e^{-2 beta v} t
// (sinh for the Sinh family). alpha2 = alpha^2 may have either sign.
MultiSeries circular_surface(double alpha2, double beta, CircularFamily family, int cap);

} // namespace rigidsphere
