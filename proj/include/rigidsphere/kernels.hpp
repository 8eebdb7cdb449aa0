#pragma once

// Entire kernels with a removable singularity at r^2 + theta^2 = 0.
//
//   sinc2(v) = sin(2rv)/(2r)
//   Kw(w)    = (cosh(rw) - e^{i theta w} + i theta sinh(rw)/r) / (r^2 + theta^2)
//   Kv(v)    = (e^{-2 theta v} - cos(2rv) + theta sin(2rv)/r) / (r^2 + theta^2) = -Kw(2iv)
//
// Only r^2 enters, so r^2 < 0 (imaginary r) is allowed everywhere.

#include <complex>
#include <vector>

namespace rigidsphere {

using Complex = std::complex<double>;

enum class KernelMode { Auto, Direct, Series };

struct KernelEval {
    double r2 = 0.0;
    double theta = 0.0;
    KernelMode mode = KernelMode::Auto;
    // Auto uses the series when |r^2 + theta^2| < crossover (1 + |w|)^-2.
    double crossover = 0.1;
    // Minimum number of series terms; more are added until the tail is negligible.
    int series_terms = 30;
};

double sinc2(double r2, double v);
Complex sinc2(double r2, Complex v);

Complex kernel_Kw(const KernelEval &k, Complex w);
double kernel_Kv(const KernelEval &k, double v);
Complex kernel_Kv(const KernelEval &k, Complex v);

// Taylor coefficients [0, n] of each function, polynomial in r^2 and theta.
std::vector<Complex> kernel_Kw_coeffs(double r2, double theta, int n);
std::vector<double> kernel_Kv_coeffs(double r2, double theta, int n);
std::vector<double> sinc2_coeffs(double r2, int n);
// sinh(rw)/r and cosh(rw).
std::vector<double> sinhc_coeffs(double r2, int n);
std::vector<double> cosh_coeffs(double r2, int n);
// e^{x w}.
std::vector<Complex> exp_coeffs(Complex x, int n);

} // namespace rigidsphere
