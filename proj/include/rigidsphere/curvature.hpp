#pragma once

// Zero-curvature certification for rigid hypersurfaces v = h(z, zbar).
// With f = log(h_{z zbar}) the surface is spherical iff
//   f_{z zbar zbar zbar} - 3 f_{z zbar zbar} f_zbar + 2 f_{z zbar} f_zbar^2 - f_{z zbar} f_{zbar zbar} = 0.

#include <vector>

#include "json.hpp"
#include "rigidsphere/series.hpp"
#include "rigidsphere/surfaces.hpp"

namespace rigidsphere {

struct CurvatureReport {
    double max_abs_residual_coefficient = 0.0;
    std::vector<double> per_degree_residuals; // max |coefficient| per total degree
    int cap = 0; // -1 when the input is too short to determine any residual coefficient
    bool spherical = true;
    int nonzero_degree = -1; // lowest degree above tolerance when not spherical
    double term_scale = 0.0; // largest coefficient among the individual terms of the equation
    MultiSeries residual;
};

// Verdict with tolerance base_tol * 2^degree per coefficient.
CurvatureReport make_report(const MultiSeries &residual, double base_tol = 1e-9);

// log(h_{z zbar}); throws DomainError when h_{z zbar}(0, 0) = 0.
MultiSeries log_laplacian(const MultiSeries &h);

CurvatureReport curvature_residual(const MultiSeries &f, double base_tol = 1e-9);
// Same equation written for ftilde = f_zbar.
CurvatureReport reduced_residual(const MultiSeries &ftilde, double base_tol = 1e-9);

// g = log(h' + t h'') for a circular surface v = h(t), t = |z|^2.
MultiSeries circular_g(const MultiSeries &h);
// t g'''' + 3g''' - g'(3t g''' + 7g'') - t(g'')^2 + 2t(g')^2 g'' + 2(g')^3.
CurvatureReport circular_residual(const MultiSeries &g, double base_tol = 1e-9);

// h(x) -> h((z + zbar)/2).
MultiSeries tube_to_planar(const MultiSeries &hx);
// h(t) -> h(z zbar).
MultiSeries circular_to_planar(const MultiSeries &ht);

CurvatureReport verify_tube(TubeKind kind, int cap);

nlohmann::json report_to_json(const CurvatureReport &r);

} // namespace rigidsphere
