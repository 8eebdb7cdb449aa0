#pragma once

// Series solutions of the rigid normalization equations
//   6|p'|^2 + 2 alpha' - c22 h' = 0
//   -c23 e^{-i alpha} (h')^{3/2} - 2p'' + 4i|p'|^2 p' = 0
//   h'''/3 - (h'')^2/(2h') + ((3c22^2 - 2c33)/2)(h')^3 + 2|p'|^4 h'
//     + (2/3)(i p'' conj(p') - i p' conj(p''))h' = 0
// with q' = 1 + 2i p' conj(p). All series are in the real variable u and
// conj() conjugates coefficients.

#include <array>

#include "rigidsphere/maps.hpp"
#include "rigidsphere/parameters.hpp"
#include "rigidsphere/series.hpp"

namespace rigidsphere {

struct NormalizationData {
    MultiSeries alpha; // in u
    MultiSeries p;
    MultiSeries h;
    MultiSeries q;
};

// Initial values beyond alpha(0) = p(0) = h(0) = 0, h'(0) = 1.
struct NormalizationInit {
    Complex p1{}; // p'(0)
    double h2 = 0.0; // h''(0)
};

// iterations < 0 selects the default (enough passes to fix every order).
NormalizationData normalization_ode_solve(const NormalFormCoeffs &n, int cap, int iterations = -1,
                                          const NormalizationInit &init = {});

// Residuals of the three equations, in that order. Throws DomainError if h'(0) = 0.
std::array<MultiSeries, 3> norm_residuals(const NormalizationData &d, const NormalFormCoeffs &n);

// q' - 1 - 2i p' conj(p).
MultiSeries chain_residual(const NormalizationData &d);

// Stanton's map read as normalization data:
//   h = log(1 + 2ru)/(2r), alpha = -theta h, p = (b/c)(e^{ch} - 1).
NormalizationData stanton_normalization_data(const StantonParams &s, int cap);

// Map from surface coordinates to the sphere: w1 = h^{-1}(w),
// z1 = e^{-i alpha(w1)} z / sqrt(h'(w1)), then
//   Z = p(w1) + z1/(1 - 2i conj(p')(w1) z1),  W = q(w1) + 2i conj(p)(w1) z1/(1 - 2i conj(p')(w1) z1).
// Accurate to one order below the data's cap.
MapJet normalization_map(const NormalizationData &d, int cap);

} // namespace rigidsphere
