#include "rigidsphere/series.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <mutex>
#include <limits>
#include <utility>

#include "rigidsphere/error.hpp"

namespace rigidsphere {

namespace {

constexpr std::array<std::string_view, kVarCount> kVarNames = {"z", "zbar", "w", "v", "u", "t", "x"};

// Binomial coefficients up to a fixed bound; ranks never need more.
constexpr int kBinomMax = 96;

const std::vector<std::size_t> &binomial_table()
{
    static const std::vector<std::size_t> table = [] {
        std::vector<std::size_t> t((kBinomMax + 1) * (kBinomMax + 1), 0);
        for (int n = 0; n <= kBinomMax; ++n) {
            t[n * (kBinomMax + 1)] = 1;
            for (int k = 1; k <= n; ++k) {
                t[n * (kBinomMax + 1) + k] = t[(n - 1) * (kBinomMax + 1) + k - 1]
                                             + (k <= n - 1 ? t[(n - 1) * (kBinomMax + 1) + k] : 0);
            }
        }
        return t;
    }();
    return table;
}

std::size_t binom(int n, int k)
{
    if (k < 0 || n < k) {
        return 0;
    }
    if (n > kBinomMax) {
        throw SeriesError("series too large: degree plus variable count exceeds " + std::to_string(kBinomMax));
    }
    return binomial_table()[n * (kBinomMax + 1) + k];
}

} // namespace

namespace detail {

// Monomial table for n variables and a degree cap. Rank of an exponent
// vector is sum_k binom(s_k + k - 1, k) with s_k the k-th prefix sum, the
// colex rank of the multiset, which orders by total degree first.
struct Layout {
    std::size_t nvars = 0;
    int cap = 0;
    std::size_t size = 0;
    std::vector<int> exps;              // size * nvars
    std::vector<int> degs;              // size
    std::vector<std::size_t> deg_start; // cap + 2 entries

    [[nodiscard]] std::span<const int> at(std::size_t i) const
    {
        return {exps.data() + i * nvars, nvars};
    }
};

std::size_t rank_of(std::span<const int> exps)
{
    std::size_t r = 0;
    int s = 0;
    for (std::size_t k = 1; k <= exps.size(); ++k) {
        s += exps[k - 1];
        r += binom(s + static_cast<int>(k) - 1, static_cast<int>(k));
    }
    return r;
}

const Layout &layout_for(std::size_t nvars, int cap)
{
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, int>, std::unique_ptr<Layout>> cache;

    std::lock_guard lock(mutex);
    auto &slot = cache[{nvars, cap}];
    if (!slot) {
        auto layout = std::make_unique<Layout>();
        layout->nvars = nvars;
        layout->cap = cap;
        layout->size = monomial_count(nvars, cap);
        layout->exps.assign(layout->size * nvars, 0);
        layout->degs.assign(layout->size, 0);
        layout->deg_start.assign(cap + 2, 0);
        for (int d = 0; d <= cap + 1; ++d) {
            layout->deg_start[d] = d == 0 ? 0 : monomial_count(nvars, d - 1);
        }
        std::vector<int> e(nvars, 0);
        // Enumerate all exponent vectors of total degree <= cap.
        auto fill = [&](auto &&self, std::size_t i, int remaining) -> void {
            if (i + 1 >= nvars) {
                for (int k = 0; k <= remaining; ++k) {
                    if (nvars > 0) {
                        e[i] = k;
                    }
                    const auto r = rank_of(e);
                    std::copy(e.begin(), e.end(), layout->exps.begin() + static_cast<std::ptrdiff_t>(r * nvars));
                    int deg = 0;
                    for (int x : e) {
                        deg += x;
                    }
                    layout->degs[r] = deg;
                    if (nvars == 0) {
                        break;
                    }
                }
                return;
            }
            for (int k = 0; k <= remaining; ++k) {
                e[i] = k;
                self(self, i + 1, remaining - k);
            }
            e[i] = 0;
        };
        fill(fill, 0, cap);
        slot = std::move(layout);
    }
    return *slot;
}

} // namespace detail

std::size_t monomial_count(std::size_t nvars, int cap)
{
    if (cap < 0) {
        return 0;
    }
    return binom(cap + static_cast<int>(nvars), static_cast<int>(nvars));
}

std::string_view var_name(Var var)
{
    return kVarNames[static_cast<std::size_t>(var)];
}

std::optional<Var> parse_var(std::string_view name)
{
    for (std::size_t i = 0; i < kVarCount; ++i) {
        if (kVarNames[i] == name) {
            return static_cast<Var>(i);
        }
    }
    return std::nullopt;
}

VarSet::VarSet(std::initializer_list<Var> vars)
{
    for (Var v : vars) {
        mask_ |= static_cast<std::uint8_t>(1U << static_cast<int>(v));
    }
}

VarSet VarSet::from_mask(std::uint8_t mask)
{
    VarSet s;
    s.mask_ = static_cast<std::uint8_t>(mask & ((1U << kVarCount) - 1));
    return s;
}

std::size_t VarSet::size() const
{
    return static_cast<std::size_t>(std::popcount(mask_));
}

int VarSet::index_of(Var var) const
{
    if (!contains(var)) {
        return -1;
    }
    const auto below = static_cast<std::uint8_t>(mask_ & ((1U << static_cast<int>(var)) - 1));
    return std::popcount(below);
}

Var VarSet::at(std::size_t i) const
{
    std::size_t seen = 0;
    for (std::size_t k = 0; k < kVarCount; ++k) {
        if ((mask_ >> k) & 1U) {
            if (seen == i) {
                return static_cast<Var>(k);
            }
            ++seen;
        }
    }
    throw SeriesError("variable index out of range");
}

std::vector<Var> VarSet::list() const
{
    std::vector<Var> out;
    for (std::size_t k = 0; k < kVarCount; ++k) {
        if ((mask_ >> k) & 1U) {
            out.push_back(static_cast<Var>(k));
        }
    }
    return out;
}

VarSet VarSet::with(Var var) const
{
    return from_mask(static_cast<std::uint8_t>(mask_ | (1U << static_cast<int>(var))));
}

VarSet VarSet::without(Var var) const
{
    return from_mask(static_cast<std::uint8_t>(mask_ & ~(1U << static_cast<int>(var))));
}

std::string to_string(VarSet vars)
{
    std::string out = "(";
    bool first = true;
    for (Var v : vars.list()) {
        if (!first) {
            out += ", ";
        }
        out += var_name(v);
        first = false;
    }
    return out + ")";
}

// ---------------------------------------------------------------------------
// MultiSeries

MultiSeries::MultiSeries(VarSet vars, int cap)
    : vars_(vars), cap_(std::max(cap, 0)), layout_(&detail::layout_for(vars.size(), std::max(cap, 0))),
      coeffs_(layout_->size, Complex{})
{
}

MultiSeries MultiSeries::constant(VarSet vars, int cap, Complex value)
{
    MultiSeries s(vars, cap);
    s.coeffs_[0] = value;
    return s;
}

MultiSeries MultiSeries::variable(VarSet vars, int cap, Var var)
{
    if (!vars.contains(var)) {
        throw SeriesError("variable " + std::string(var_name(var)) + " not in " + to_string(vars));
    }
    MultiSeries s(vars, cap);
    if (cap >= 1) {
        std::vector<int> e(vars.size(), 0);
        e[static_cast<std::size_t>(vars.index_of(var))] = 1;
        s.set_coeff(e, 1.0);
    }
    return s;
}

MultiSeries MultiSeries::univariate(Var var, int cap, std::span<const Complex> coeffs)
{
    MultiSeries s(VarSet{var}, cap);
    const auto n = std::min<std::size_t>(coeffs.size(), static_cast<std::size_t>(cap) + 1);
    std::copy_n(coeffs.begin(), n, s.coeffs_.begin());
    return s;
}

std::size_t MultiSeries::rank(std::span<const int> exps) const
{
    if (exps.size() != vars_.size()) {
        throw SeriesError("exponent vector has " + std::to_string(exps.size()) + " entries, series has "
                          + std::to_string(vars_.size()) + " variables");
    }
    return detail::rank_of(exps);
}

Complex MultiSeries::coeff(std::span<const int> exps) const
{
    int deg = 0;
    for (int e : exps) {
        if (e < 0) {
            return {};
        }
        deg += e;
    }
    const auto r = rank(exps);
    return deg <= cap_ ? coeffs_[r] : Complex{};
}

Complex MultiSeries::coeff(std::initializer_list<int> exps) const
{
    return coeff(std::span<const int>(exps.begin(), exps.size()));
}

void MultiSeries::set_coeff(std::span<const int> exps, Complex value)
{
    int deg = 0;
    for (int e : exps) {
        if (e < 0) {
            throw SeriesError("negative exponent");
        }
        deg += e;
    }
    const auto r = rank(exps);
    if (deg > cap_) {
        throw SeriesError("multidegree " + std::to_string(deg) + " exceeds cap " + std::to_string(cap_));
    }
    coeffs_[r] = value;
}

void MultiSeries::set_coeff(std::initializer_list<int> exps, Complex value)
{
    set_coeff(std::span<const int>(exps.begin(), exps.size()), value);
}

void MultiSeries::add_to_coeff(std::span<const int> exps, Complex value)
{
    set_coeff(exps, coeff(exps) + value);
}

std::span<const int> MultiSeries::exponents_at(std::size_t index) const
{
    return layout_->at(index);
}

int MultiSeries::degree_at(std::size_t index) const
{
    return layout_->degs[index];
}

int MultiSeries::degree() const
{
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
        if (coeffs_[i] != Complex{}) {
            return layout_->degs[i];
        }
    }
    return -1;
}

MultiSeries MultiSeries::truncated(int cap) const
{
    MultiSeries out(vars_, std::min(cap, cap_));
    std::copy_n(coeffs_.begin(), out.coeffs_.size(), out.coeffs_.begin());
    return out;
}

MultiSeries MultiSeries::embedded(VarSet vars) const
{
    if (vars == vars_) {
        return *this;
    }
    if (!vars_.is_subset_of(vars)) {
        throw SeriesError("cannot embed " + to_string(vars_) + " into " + to_string(vars));
    }
    MultiSeries out(vars, cap_);
    std::vector<std::size_t> pos;
    for (Var v : vars_.list()) {
        pos.push_back(static_cast<std::size_t>(vars.index_of(v)));
    }
    std::vector<int> e(vars.size(), 0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == Complex{}) {
            continue;
        }
        std::fill(e.begin(), e.end(), 0);
        const auto src = exponents_at(i);
        for (std::size_t k = 0; k < pos.size(); ++k) {
            e[pos[k]] = src[k];
        }
        out.coeffs_[detail::rank_of(e)] = coeffs_[i];
    }
    return out;
}

namespace {

VarSet common_vars(const MultiSeries &a, const MultiSeries &b)
{
    if (a.vars().is_subset_of(b.vars())) {
        return b.vars();
    }
    if (b.vars().is_subset_of(a.vars())) {
        return a.vars();
    }
    throw SeriesError("incompatible variable sets " + to_string(a.vars()) + " and " + to_string(b.vars()));
}

// Same series with cap raised; the new top coefficients are zero. Only valid
// where those coefficients cannot influence the caller's result.
MultiSeries padded(const MultiSeries &s, int cap)
{
    if (cap <= s.cap()) {
        return s.truncated(cap);
    }
    MultiSeries out(s.vars(), cap);
    for (std::size_t i = 0; i < s.size(); ++i) {
        out.add_to_coeff(s.exponents_at(i), s.data()[i]);
    }
    return out;
}

} // namespace

MultiSeries &MultiSeries::operator+=(const MultiSeries &other)
{
    *this = *this + other;
    return *this;
}

MultiSeries &MultiSeries::operator-=(const MultiSeries &other)
{
    *this = *this - other;
    return *this;
}

MultiSeries &MultiSeries::operator*=(Complex scalar)
{
    for (auto &c : coeffs_) {
        c *= scalar;
    }
    return *this;
}

MultiSeries operator+(const MultiSeries &a, const MultiSeries &b)
{
    const VarSet vars = common_vars(a, b);
    const int cap = std::min(a.cap(), b.cap());
    MultiSeries out = a.embedded(vars).truncated(cap);
    const MultiSeries bb = b.embedded(vars);
    for (std::size_t i = 0; i < out.coeffs_.size(); ++i) {
        out.coeffs_[i] += bb.coeffs_[i];
    }
    return out;
}

MultiSeries operator-(const MultiSeries &a)
{
    MultiSeries out = a;
    for (auto &c : out.coeffs_) {
        c = -c;
    }
    return out;
}

MultiSeries operator-(const MultiSeries &a, const MultiSeries &b)
{
    return a + (-b);
}

MultiSeries operator+(const MultiSeries &a, Complex s)
{
    MultiSeries out = a;
    out.coeffs_[0] += s;
    return out;
}

MultiSeries operator-(Complex s, const MultiSeries &a)
{
    return (-a) + s;
}

MultiSeries operator*(const MultiSeries &a, Complex s)
{
    MultiSeries out = a;
    out *= s;
    return out;
}

MultiSeries operator*(const MultiSeries &a, const MultiSeries &b)
{
    const VarSet vars = common_vars(a, b);
    const int cap = std::min(a.cap(), b.cap());
    const MultiSeries aa = a.embedded(vars);
    const MultiSeries bb = b.embedded(vars);
    MultiSeries out(vars, cap);
    const std::size_t n = vars.size();
    const auto &la = *aa.layout_;
    const auto &lb = *bb.layout_;
    std::vector<int> e(n, 0);
    const std::size_t alimit = la.deg_start[static_cast<std::size_t>(std::min(cap, aa.cap_)) + 1];
    for (std::size_t i = 0; i < alimit; ++i) {
        const Complex ai = aa.coeffs_[i];
        if (ai == Complex{}) {
            continue;
        }
        const int room = cap - la.degs[i];
        const std::size_t blimit = lb.deg_start[static_cast<std::size_t>(std::min(room, bb.cap_)) + 1];
        const auto ei = la.at(i);
        for (std::size_t j = 0; j < blimit; ++j) {
            const Complex bj = bb.coeffs_[j];
            if (bj == Complex{}) {
                continue;
            }
            const auto ej = lb.at(j);
            for (std::size_t k = 0; k < n; ++k) {
                e[k] = ei[k] + ej[k];
            }
            out.coeffs_[detail::rank_of(e)] += ai * bj;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Calculus

MultiSeries differentiate(const MultiSeries &s, Var var)
{
    const int idx = s.vars().index_of(var);
    if (idx < 0) {
        throw SeriesError("unknown variable " + std::string(var_name(var)) + " for series in " + to_string(s.vars()));
    }
    MultiSeries out(s.vars(), s.cap() - 1);
    if (s.cap() == 0) {
        return out;
    }
    std::vector<int> e(s.nvars());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Complex c = s.data()[i];
        const auto src = s.exponents_at(i);
        if (c == Complex{} || src[static_cast<std::size_t>(idx)] == 0) {
            continue;
        }
        std::copy(src.begin(), src.end(), e.begin());
        const int k = e[static_cast<std::size_t>(idx)]--;
        out.add_to_coeff(e, c * static_cast<double>(k));
    }
    return out;
}

MultiSeries integrate(const MultiSeries &s, Var var)
{
    const MultiSeries src = s.embedded(s.vars().with(var));
    const auto idx = static_cast<std::size_t>(src.vars().index_of(var));
    MultiSeries out(src.vars(), src.cap());
    std::vector<int> e(src.nvars());
    for (std::size_t i = 0; i < src.size(); ++i) {
        const Complex c = src.data()[i];
        if (c == Complex{} || src.degree_at(i) >= src.cap()) {
            continue;
        }
        const auto ex = src.exponents_at(i);
        std::copy(ex.begin(), ex.end(), e.begin());
        const int k = ++e[idx];
        out.add_to_coeff(e, c / static_cast<double>(k));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Composition

MultiSeries compose(const MultiSeries &outer, const std::map<Var, MultiSeries> &assignments)
{
    // Assigned variables are replaced by Horner evaluation; the others ride
    // along inside the coefficient series.
    std::vector<Var> assigned;
    VarSet kept = outer.vars();
    VarSet target;
    bool unit = false;
    for (const auto &[var, series] : assignments) {
        if (!outer.vars().contains(var)) {
            continue;
        }
        assigned.push_back(var);
        kept = kept.without(var);
        target = target.united(series.vars());
        if (series.constant_term() != Complex{}) {
            unit = true;
        }
    }
    target = target.united(kept);
    if (assigned.empty()) {
        return outer.embedded(target);
    }

    int cap = unit ? std::numeric_limits<int>::max() : outer.cap();
    for (Var var : assigned) {
        cap = std::min(cap, assignments.at(var).cap());
    }
    if (unit && outer.degree() >= outer.cap()) {
        throw SeriesError("substituting a series with nonzero constant term into a series that is not a polynomial "
                          "below its cap");
    }

    std::vector<MultiSeries> subs;
    std::vector<int> apos;
    for (Var var : assigned) {
        subs.push_back(assignments.at(var).embedded(target).truncated(cap));
        apos.push_back(outer.vars().index_of(var));
    }
    std::vector<std::size_t> kpos_src;
    std::vector<std::size_t> kpos_dst;
    for (Var var : kept.list()) {
        kpos_src.push_back(static_cast<std::size_t>(outer.vars().index_of(var)));
        kpos_dst.push_back(static_cast<std::size_t>(target.index_of(var)));
    }

    // Group outer's terms by their exponents in the assigned variables.
    std::map<std::vector<int>, MultiSeries> groups;
    std::vector<int> key(assigned.size());
    std::vector<int> e(target.size(), 0);
    for (std::size_t i = 0; i < outer.size(); ++i) {
        const Complex c = outer.data()[i];
        if (c == Complex{}) {
            continue;
        }
        const auto ex = outer.exponents_at(i);
        int kdeg = 0;
        std::fill(e.begin(), e.end(), 0);
        for (std::size_t k = 0; k < kpos_src.size(); ++k) {
            e[kpos_dst[k]] = ex[kpos_src[k]];
            kdeg += ex[kpos_src[k]];
        }
        if (kdeg > cap) {
            continue;
        }
        for (std::size_t k = 0; k < apos.size(); ++k) {
            key[k] = ex[static_cast<std::size_t>(apos[k])];
        }
        auto it = groups.find(key);
        if (it == groups.end()) {
            it = groups.emplace(key, MultiSeries(target, cap)).first;
        }
        it->second.add_to_coeff(e, c);
    }

    std::vector<int> prefix;
    auto horner = [&](auto &&self, std::size_t level) -> MultiSeries {
        if (level == assigned.size()) {
            auto it = groups.find(prefix);
            return it == groups.end() ? MultiSeries(target, cap) : it->second;
        }
        // Highest exponent of this variable occurring below the prefix.
        int top = -1;
        for (const auto &[k, series] : groups) {
            if (std::equal(prefix.begin(), prefix.end(), k.begin())) {
                top = std::max(top, k[level]);
            }
        }
        MultiSeries acc(target, cap);
        for (int k = top; k >= 0; --k) {
            prefix.push_back(k);
            const MultiSeries inner = self(self, level + 1);
            prefix.pop_back();
            acc = k == top ? inner : acc * subs[level] + inner;
        }
        return acc;
    };
    return horner(horner, 0);
}

// ---------------------------------------------------------------------------
// Elementary functions

namespace {

// sum_k coeffs[k] (s - s(0))^k by Horner.
MultiSeries apply_taylor(const MultiSeries &s, const std::vector<Complex> &coeffs)
{
    MultiSeries x = s - s.constant_term();
    MultiSeries acc = MultiSeries::constant(s.vars(), s.cap(), coeffs.back());
    for (std::size_t k = coeffs.size() - 1; k-- > 0;) {
        acc = acc * x + coeffs[k];
    }
    return acc;
}

void require_unit(const MultiSeries &s, const char *what)
{
    if (s.constant_term() == Complex{}) {
        throw SeriesError(std::string(what) + " requires a nonzero constant term");
    }
}

} // namespace

MultiSeries exp_series(const MultiSeries &s)
{
    const Complex e0 = std::exp(s.constant_term());
    std::vector<Complex> c(static_cast<std::size_t>(s.cap()) + 1);
    double fact = 1.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (k > 0) {
            fact *= static_cast<double>(k);
        }
        c[k] = e0 / fact;
    }
    return apply_taylor(s, c);
}

MultiSeries log_series(const MultiSeries &s)
{
    require_unit(s, "log");
    const Complex a = s.constant_term();
    std::vector<Complex> c(static_cast<std::size_t>(s.cap()) + 1);
    c[0] = std::log(a);
    Complex apow = 1.0;
    for (std::size_t k = 1; k < c.size(); ++k) {
        apow *= a;
        c[k] = (k % 2 == 1 ? 1.0 : -1.0) / (static_cast<double>(k) * apow);
    }
    return apply_taylor(s, c);
}

MultiSeries sqrt_series(const MultiSeries &s)
{
    require_unit(s, "sqrt");
    const Complex a = s.constant_term();
    const Complex sa = std::sqrt(a);
    std::vector<Complex> c(static_cast<std::size_t>(s.cap()) + 1);
    double binom_half = 1.0;
    Complex apow = 1.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        c[k] = binom_half * sa / apow;
        binom_half *= (0.5 - static_cast<double>(k)) / static_cast<double>(k + 1);
        apow *= a;
    }
    return apply_taylor(s, c);
}

MultiSeries recip_series(const MultiSeries &s)
{
    require_unit(s, "recip");
    const Complex a = s.constant_term();
    std::vector<Complex> c(static_cast<std::size_t>(s.cap()) + 1);
    Complex apow = a;
    for (std::size_t k = 0; k < c.size(); ++k) {
        c[k] = (k % 2 == 0 ? 1.0 : -1.0) / apow;
        apow *= a;
    }
    return apply_taylor(s, c);
}

MultiSeries pow_series(const MultiSeries &s, int k)
{
    if (k < 0) {
        return pow_series(recip_series(s), -k);
    }
    MultiSeries result = MultiSeries::constant(s.vars(), s.cap(), 1.0);
    MultiSeries base = s;
    while (k > 0) {
        if (k & 1) {
            result = result * base;
        }
        k >>= 1;
        if (k > 0) {
            base = base * base;
        }
    }
    return result;
}

MultiSeries reversion(const MultiSeries &s)
{
    if (s.nvars() != 1) {
        throw SeriesError("reversion needs a univariate series");
    }
    if (s.constant_term() != Complex{}) {
        throw SeriesError("reversion needs s(0) = 0");
    }
    const Var var = s.vars().at(0);
    const MultiSeries ds = differentiate(s, var);
    if (ds.constant_term() == Complex{}) {
        throw SeriesError("reversion needs s'(0) != 0");
    }
    const MultiSeries id = MultiSeries::variable(s.vars(), s.cap(), var);
    MultiSeries x = id * (1.0 / ds.constant_term());
    const int iterations = static_cast<int>(std::ceil(std::log2(std::max(s.cap(), 1)))) + 2;
    for (int it = 0; it < iterations; ++it) {
        const MultiSeries g = compose(s, {{var, x}}) - id;
        const MultiSeries d = padded(compose(ds, {{var, x}}), s.cap());
        x = x - g * recip_series(d);
    }
    return x;
}

MultiSeries solve_implicit(const MultiSeries &f, Var var, const MultiSeries &v0)
{
    if (!f.vars().contains(var)) {
        throw SeriesError("solve_implicit: " + std::string(var_name(var)) + " is not a variable of F");
    }
    const VarSet rest = f.vars().without(var);
    const int cap = f.cap();
    MultiSeries v = padded(v0.embedded(rest), cap);
    const MultiSeries fv = differentiate(f, var);
    {
        const Complex d0 = compose(fv, {{var, v}}).constant_term();
        if (d0 == Complex{} || std::abs(d0) < 1e-300) {
            throw SeriesError("solve_implicit: dF/d" + std::string(var_name(var))
                              + " vanishes at the origin (implicit function theorem fails)");
        }
    }
    const int newton_steps = static_cast<int>(std::ceil(std::log2(std::max(cap, 1)))) + 1;
    const int max_steps = newton_steps + cap + 2;
    // Past the nominal step count, keep refining while the residual shrinks.
    MultiSeries best = v;
    double best_res = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_steps; ++it) {
        const MultiSeries g = compose(f, {{var, v}});
        const double res = max_abs_coeff(g);
        if (it >= newton_steps) {
            if (res >= 0.5 * best_res) {
                if (res < best_res) {
                    best = v;
                }
                break;
            }
        }
        if (res < best_res) {
            best_res = res;
            best = v;
        }
        if (res == 0.0) {
            break;
        }
        const MultiSeries d = padded(compose(fv, {{var, v}}), cap);
        v = v - g * recip_series(d);
    }
    return best;
}

MultiSeries solve_implicit(const MultiSeries &f, const MultiSeries &v0)
{
    return solve_implicit(f, Var::v, v0);
}

// ---------------------------------------------------------------------------
// Conjugation and utilities

MultiSeries conjugate_swap(const MultiSeries &s)
{
    std::uint8_t mask = s.vars().mask();
    const bool hz = s.vars().contains(Var::z);
    const bool hzb = s.vars().contains(Var::zbar);
    mask = static_cast<std::uint8_t>(mask & ~0b11U);
    mask = static_cast<std::uint8_t>(mask | (hz ? 0b10U : 0U) | (hzb ? 0b01U : 0U));
    const VarSet target = VarSet::from_mask(mask);
    MultiSeries out(target, s.cap());
    std::vector<int> e(target.size());
    const auto src_vars = s.vars().list();
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Complex c = s.data()[i];
        if (c == Complex{}) {
            continue;
        }
        const auto ex = s.exponents_at(i);
        for (std::size_t k = 0; k < src_vars.size(); ++k) {
            Var v = src_vars[k];
            if (v == Var::z) {
                v = Var::zbar;
            } else if (v == Var::zbar) {
                v = Var::z;
            }
            e[static_cast<std::size_t>(target.index_of(v))] = ex[k];
        }
        out.set_coeff(e, std::conj(c));
    }
    return out;
}

MultiSeries conjugate_coeffs(const MultiSeries &s)
{
    MultiSeries result(s.vars(), s.cap());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.data()[i] != Complex{}) {
            result.set_coeff(s.exponents_at(i), std::conj(s.data()[i]));
        }
    }
    return result;
}

bool is_hermitian(const MultiSeries &s, double tol)
{
    return approx_equal(s, conjugate_swap(s), tol);
}

MultiSeries drop_variable(const MultiSeries &s, Var var)
{
    const int idx = s.vars().index_of(var);
    if (idx < 0) {
        return s;
    }
    const VarSet target = s.vars().without(var);
    MultiSeries out(target, s.cap());
    std::vector<int> e;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto ex = s.exponents_at(i);
        if (s.data()[i] == Complex{} || ex[static_cast<std::size_t>(idx)] != 0) {
            continue;
        }
        e.assign(ex.begin(), ex.end());
        e.erase(e.begin() + idx);
        out.set_coeff(e, s.data()[i]);
    }
    return out;
}

Complex evaluate(const MultiSeries &s, const std::map<Var, Complex> &point)
{
    const auto vars = s.vars().list();
    std::vector<Complex> values;
    for (Var v : vars) {
        auto it = point.find(v);
        if (it == point.end()) {
            throw SeriesError("evaluate: no value for variable " + std::string(var_name(v)));
        }
        values.push_back(it->second);
    }
    Complex sum{};
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Complex c = s.data()[i];
        if (c == Complex{}) {
            continue;
        }
        Complex term = c;
        const auto ex = s.exponents_at(i);
        for (std::size_t k = 0; k < vars.size(); ++k) {
            for (int p = 0; p < ex[k]; ++p) {
                term *= values[k];
            }
        }
        sum += term;
    }
    return sum;
}

double max_abs_coeff(const MultiSeries &s)
{
    double m = 0.0;
    for (const Complex &c : s.data()) {
        m = std::max(m, std::abs(c));
    }
    return m;
}

double max_abs_diff(const MultiSeries &a, const MultiSeries &b)
{
    return max_abs_coeff(a - b);
}

bool approx_equal(const MultiSeries &a, const MultiSeries &b, double base_tol)
{
    const VarSet vars = common_vars(a, b);
    const int cap = std::min(a.cap(), b.cap());
    const MultiSeries aa = a.embedded(vars).truncated(cap);
    const MultiSeries bb = b.embedded(vars).truncated(cap);
    for (std::size_t i = 0; i < aa.size(); ++i) {
        const Complex x = aa.data()[i];
        const Complex y = bb.data()[i];
        const double scale = std::max({1.0, std::abs(x), std::abs(y)});
        if (std::abs(x - y) > base_tol * std::ldexp(1.0, aa.degree_at(i)) * scale) {
            return false;
        }
    }
    return true;
}

} // namespace rigidsphere
