#pragma once

// Truncated dense multivariate power series over complex doubles.
//
// A series lives in an ordered subset of a fixed variable alphabet and keeps
// every coefficient of total degree <= cap. Coefficients are stored densely in
// graded colex order, so a series of cap c is a prefix of the same series at
// any larger cap; truncation is a resize.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rigidsphere {

using Complex = std::complex<double>;

enum class Var : std::uint8_t { z = 0, zbar, w, v, u, t, x };

inline constexpr std::size_t kVarCount = 7;

std::string_view var_name(Var var);
std::optional<Var> parse_var(std::string_view name);

// Ordered subset of the variable alphabet (order = enum order).
class VarSet {
public:
    VarSet() = default;
    VarSet(std::initializer_list<Var> vars);

    static VarSet from_mask(std::uint8_t mask);

    [[nodiscard]] bool contains(Var var) const { return (mask_ >> static_cast<int>(var)) & 1U; }
    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] bool empty() const { return mask_ == 0; }
    // Position of var in the ordered list, or -1.
    [[nodiscard]] int index_of(Var var) const;
    [[nodiscard]] Var at(std::size_t i) const;
    [[nodiscard]] std::vector<Var> list() const;
    [[nodiscard]] std::uint8_t mask() const { return mask_; }

    [[nodiscard]] VarSet united(VarSet other) const { return from_mask(mask_ | other.mask_); }
    [[nodiscard]] VarSet with(Var var) const;
    [[nodiscard]] VarSet without(Var var) const;
    [[nodiscard]] bool is_subset_of(VarSet other) const { return (mask_ & ~other.mask_) == 0; }

    friend bool operator==(VarSet a, VarSet b) { return a.mask_ == b.mask_; }

private:
    std::uint8_t mask_ = 0;
};

std::string to_string(VarSet vars);

namespace detail {
struct Layout;
} // namespace detail

class MultiSeries {
public:
    MultiSeries() = default;
    MultiSeries(VarSet vars, int cap);

    static MultiSeries zero(VarSet vars, int cap) { return {vars, cap}; }
    static MultiSeries constant(VarSet vars, int cap, Complex value);
    static MultiSeries variable(VarSet vars, int cap, Var var);
    // Single variable power series sum_k coeffs[k] var^k, truncated to cap.
    static MultiSeries univariate(Var var, int cap, std::span<const Complex> coeffs);

    [[nodiscard]] VarSet vars() const { return vars_; }
    [[nodiscard]] int cap() const { return cap_; }
    [[nodiscard]] std::size_t size() const { return coeffs_.size(); }
    [[nodiscard]] std::size_t nvars() const { return vars_.size(); }

    // Exponents are listed in the series' variable order.
    [[nodiscard]] Complex coeff(std::span<const int> exps) const;
    [[nodiscard]] Complex coeff(std::initializer_list<int> exps) const;
    void set_coeff(std::span<const int> exps, Complex value);
    void set_coeff(std::initializer_list<int> exps, Complex value);
    void add_to_coeff(std::span<const int> exps, Complex value);

    [[nodiscard]] Complex constant_term() const { return coeffs_.empty() ? Complex{} : coeffs_[0]; }

    // Dense access in storage order.
    [[nodiscard]] std::span<const Complex> data() const { return coeffs_; }
    [[nodiscard]] std::span<const int> exponents_at(std::size_t index) const;
    [[nodiscard]] int degree_at(std::size_t index) const;

    // Highest total degree with a nonzero coefficient, -1 for the zero series.
    [[nodiscard]] int degree() const;

    [[nodiscard]] MultiSeries truncated(int cap) const;
    // Same series viewed in a larger variable set.
    [[nodiscard]] MultiSeries embedded(VarSet vars) const;

    MultiSeries &operator+=(const MultiSeries &other);
    MultiSeries &operator-=(const MultiSeries &other);
    MultiSeries &operator*=(Complex scalar);

    friend MultiSeries operator+(const MultiSeries &a, const MultiSeries &b);
    friend MultiSeries operator-(const MultiSeries &a, const MultiSeries &b);
    friend MultiSeries operator*(const MultiSeries &a, const MultiSeries &b);
    friend MultiSeries operator*(const MultiSeries &a, Complex s);
    friend MultiSeries operator*(Complex s, const MultiSeries &a) { return a * s; }
    friend MultiSeries operator+(const MultiSeries &a, Complex s);
    friend MultiSeries operator+(Complex s, const MultiSeries &a) { return a + s; }
    friend MultiSeries operator-(const MultiSeries &a, Complex s) { return a + (-s); }
    friend MultiSeries operator-(Complex s, const MultiSeries &a);
    friend MultiSeries operator-(const MultiSeries &a);

private:
    VarSet vars_;
    int cap_ = 0;
    const detail::Layout *layout_ = nullptr;
    std::vector<Complex> coeffs_;

    [[nodiscard]] std::size_t rank(std::span<const int> exps) const;
};

// Calculus.
MultiSeries differentiate(const MultiSeries &s, Var var);
MultiSeries integrate(const MultiSeries &s, Var var);

// Formal substitution of series for variables. Variables of outer without an
// assignment are kept. An assigned series with a nonzero constant term is only
// accepted when outer is a polynomial of degree below its cap.
MultiSeries compose(const MultiSeries &outer, const std::map<Var, MultiSeries> &assignments);

// Elementary functions; log, sqrt and recip need a nonzero constant term and
// use the principal branch there.
MultiSeries exp_series(const MultiSeries &s);
MultiSeries log_series(const MultiSeries &s);
MultiSeries sqrt_series(const MultiSeries &s);
MultiSeries recip_series(const MultiSeries &s);
MultiSeries pow_series(const MultiSeries &s, int k);

// Compositional inverse of a univariate series with s(0)=0, s'(0)!=0.
MultiSeries reversion(const MultiSeries &s);

// Solves F(.., var = V(..)) = 0 for V by series Newton iteration from v0.
// Returns V in F's variables without var.
MultiSeries solve_implicit(const MultiSeries &f, Var var, const MultiSeries &v0);
// The (z, zbar, v) graph form.
MultiSeries solve_implicit(const MultiSeries &f, const MultiSeries &v0);

// z <-> zbar swap with conjugated coefficients; other variables are real.
MultiSeries conjugate_swap(const MultiSeries &s);
// Conjugated coefficients, variables untouched (series in a real variable).
MultiSeries conjugate_coeffs(const MultiSeries &s);
bool is_hermitian(const MultiSeries &s, double tol = 1e-10);

// Terms free of var, i.e. the restriction var = 0, without var in the result.
MultiSeries drop_variable(const MultiSeries &s, Var var);

Complex evaluate(const MultiSeries &s, const std::map<Var, Complex> &point);

double max_abs_coeff(const MultiSeries &s);
// Largest |a_k - b_k| over the common truncation.
double max_abs_diff(const MultiSeries &a, const MultiSeries &b);
// |a_k - b_k| <= base_tol * 2^deg * max(1, |a_k|, |b_k|) for every multidegree.
bool approx_equal(const MultiSeries &a, const MultiSeries &b, double base_tol = 1e-10);

// Number of monomials of total degree <= cap in n variables.
std::size_t monomial_count(std::size_t nvars, int cap);

} // namespace rigidsphere
