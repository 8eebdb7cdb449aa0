#pragma once

// Holomorphic map germs (Z, W) in (z, w) onto the sphere Im W = |Z|^2, and the
// flow system of its infinitesimal automorphisms
//   Z_w = b + cZ + aW + 2i conj(a) Z^2 + rho ZW
//   W_w = 1 + 2i conj(b) Z + 2 Re(c) W + 2i conj(a) ZW + rho W^2.

#include <utility>
#include <vector>

#include "rigidsphere/parameters.hpp"
#include "rigidsphere/series.hpp"
#include "rigidsphere/surfaces.hpp"

namespace rigidsphere {

struct MapJet {
    MultiSeries Z; // in (z, w)
    MultiSeries W; // in (z, w)
};

struct VectorFieldParams {
    Complex b{};
    Complex c{};
    Complex a{};
    double rho = 0.0;
};

// Z = (b/c)(e^{cw} - 1) + e^{cw} z/(1 - 2i conj(b) z) and the matching W.
MapJet stanton_map(const StantonParams &s, int cap);

// Z = P1/Q, W = P2/Q built from the entire kernels; identity at w = 0.
MapJet twisted_map(const TwistParams &t, int cap);

// The field (0, i tau, a, rho) whose flow is the twisted map.
VectorFieldParams twist_field(const TwistParams &t);
// The field (b, c, 0, 0) whose flow is Stanton's map.
VectorFieldParams stanton_field(const StantonParams &s);

// (Z_w - rhs1, W_w - rhs2), truncated to cap - 1.
std::pair<MultiSeries, MultiSeries> system_residual(const MapJet &m, const VectorFieldParams &f);

// Solution with Z(z, 0) = Z0(z), W(z, 0) = 0 by Picard iteration in w.
MapJet integrate_system(const VectorFieldParams &f, const MultiSeries &Z0, int cap);

// (z - bw, w) / (1 + 2i conj(b) z + (r - i|b|^2) w), an automorphism of the sphere.
MapJet sphere_automorphism(Complex b, double r, int cap);

// outer after inner.
MapJet compose_maps(const MapJet &outer, const MapJet &inner);

// Graph v = V(z, zbar) of the preimage of Im W = |Z|^2 in the rigid slice w = iv.
SurfaceSeries induced_surface(const MapJet &m, int cap);

// Lowest-degree coefficient whose magnitude exceeds rel_tol times the largest one.
struct LeadingTerm {
    std::vector<int> exps;
    Complex value{};
};
LeadingTerm leading_term(const MultiSeries &s, double rel_tol = 1e-6);

} // namespace rigidsphere
