#ifndef MOTIVIC_RATIONAL_SERIES_HPP
#define MOTIVIC_RATIONAL_SERIES_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "motivic/localized.hpp"

namespace motivic {

/// Exponent vector of a T-monomial.
using ExpVec = std::vector<int>;

inline int total_degree(const ExpVec& n) { return std::accumulate(n.begin(), n.end(), 0); }

inline ExpVec unit_vec(std::size_t r, std::size_t i)
{
    ExpVec e(r, 0);
    e[i] = 1;
    return e;
}

/// One denominator factor (1 - L^-a T^b), with b != 0. A T-free factor
/// belongs to the coefficient ring and is never stored here.
struct TAtom {
    int a = 0;
    ExpVec b;

    TAtom(int a_, ExpVec b_) : a(a_), b(std::move(b_))
    {
        if (a < 0)
            throw validation_error("T-atom requires a >= 0");
        for (int x : b)
            if (x < 0)
                throw validation_error("T-atom exponents must be nonnegative");
        if (total_degree(b) == 0)
            throw validation_error("T-atom requires b != 0");
    }

    bool operator<(const TAtom& o) const
    {
        if (a != o.a)
            return a < o.a;
        return b < o.b;
    }
    bool operator==(const TAtom& o) const { return a == o.a && b == o.b; }
};

/// Truncation of a series to total degree <= bound; the oracle's value domain.
struct TruncatedSeries {
    int nvars = 0;
    int bound = 0;
    std::map<ExpVec, LocalizedMotivicElement> coeffs;

    void set(const ExpVec& n, LocalizedMotivicElement c)
    {
        if (total_degree(n) > bound)
            throw validation_error("exponent beyond truncation bound");
        if (c.is_zero())
            coeffs.erase(n);
        else
            coeffs[n] = std::move(c);
    }

    LocalizedMotivicElement at(const ExpVec& n) const
    {
        auto it = coeffs.find(n);
        return it == coeffs.end() ? LocalizedMotivicElement::zero() : it->second;
    }

    bool equals(const TruncatedSeries& o) const
    {
        if (nvars != o.nvars || bound != o.bound)
            return false;
        for (const auto& [n, c] : coeffs)
            if (!c.equals(o.at(n)))
                return false;
        for (const auto& [n, c] : o.coeffs)
            if (!coeffs.count(n) && !c.is_zero())
                return false;
        return true;
    }

    /// First exponent where the two truncations differ, for diagnostics.
    std::optional<ExpVec> first_difference(const TruncatedSeries& o) const
    {
        std::vector<ExpVec> keys;
        for (const auto& [n, c] : coeffs)
            keys.push_back(n);
        for (const auto& [n, c] : o.coeffs)
            keys.push_back(n);
        std::sort(keys.begin(), keys.end(), [](const ExpVec& x, const ExpVec& y) {
            int dx = total_degree(x), dy = total_degree(y);
            if (dx != dy)
                return dx < dy;
            return x < y;
        });
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        for (const auto& n : keys)
            if (!at(n).equals(o.at(n)))
                return n;
        return std::nullopt;
    }
};

namespace detail {

/// Numerator polynomials: finite maps exponent vector -> coefficient.
using TPoly = std::map<ExpVec, LocalizedMotivicElement>;

inline void tpoly_add_term(TPoly& p, const ExpVec& n, const LocalizedMotivicElement& c)
{
    if (c.is_zero())
        return;
    auto it = p.find(n);
    if (it == p.end()) {
        p.emplace(n, c);
    } else {
        it->second += c;
        if (it->second.is_zero())
            p.erase(it);
    }
}

inline TPoly tpoly_mul(const TPoly& a, const TPoly& b)
{
    TPoly out;
    for (const auto& [na, ca] : a) {
        for (const auto& [nb, cb] : b) {
            ExpVec n(na.size());
            for (std::size_t i = 0; i < n.size(); ++i)
                n[i] = na[i] + nb[i];
            tpoly_add_term(out, n, ca * cb);
        }
    }
    return out;
}

/// Multiply a polynomial by the atom (1 - L^-a T^b).
inline TPoly tpoly_mul_atom(const TPoly& p, const TAtom& at)
{
    TPoly out = p;
    LocalizedMotivicElement scale(MotivicElement::L_pow(-at.a));
    for (const auto& [n, c] : p) {
        ExpVec m(n.size());
        for (std::size_t i = 0; i < m.size(); ++i)
            m[i] = n[i] + at.b[i];
        tpoly_add_term(out, m, -(c * scale));
    }
    return out;
}

/// Exact division of p by (1 - L^-a T^b); nullopt when not divisible.
/// Single-divisor multivariate division: the remainder vanishes iff the
/// atom divides p.
inline std::optional<TPoly> tpoly_div_atom(const TPoly& p, const TAtom& at)
{
    // graded-lex comparison, largest last in iteration order
    auto less = [](const ExpVec& x, const ExpVec& y) {
        int dx = total_degree(x), dy = total_degree(y);
        if (dx != dy)
            return dx < dy;
        return x < y;
    };
    std::map<ExpVec, LocalizedMotivicElement, decltype(less)> work(less);
    for (const auto& [n, c] : p)
        if (!c.is_zero())
            work[n] = c;
    TPoly quot;
    LocalizedMotivicElement la(MotivicElement::L_pow(at.a));
    while (!work.empty()) {
        auto it = std::prev(work.end());
        ExpVec n = it->first;
        LocalizedMotivicElement c = it->second;
        work.erase(it);
        bool divisible = true;
        ExpVec m(n.size());
        for (std::size_t i = 0; i < n.size(); ++i) {
            m[i] = n[i] - at.b[i];
            if (m[i] < 0)
                divisible = false;
        }
        if (!divisible)
            return std::nullopt; // leading term not reducible => nonzero remainder
        // quotient term: leading term of divisor is -L^-a T^b
        LocalizedMotivicElement qc = -(c * la);
        tpoly_add_term(quot, m, qc);
        // subtract qc * (1 - L^-a T^b) * T^0 ... i.e. qc*T^m - qc*L^-a*T^n
        // the T^n part cancels c by construction; add back the T^m part
        auto add = [&](const ExpVec& e, const LocalizedMotivicElement& v) {
            if (v.is_zero())
                return;
            auto jt = work.find(e);
            if (jt == work.end()) {
                work.emplace(e, v);
            } else {
                jt->second += v;
                if (jt->second.is_zero())
                    work.erase(jt);
            }
        };
        add(m, -qc);
    }
    return quot;
}

} // namespace detail

/// Element of the subring of M_k[[T_1..T_r]] generated by M_k[T], the
/// inverted factors (1 - L^-a T^b)^-1 and (L^i - 1)^-1: a numerator
/// polynomial over the localized coefficient ring and a denominator
/// multiset of T-atoms.
class MotivicRationalFunction {
public:
    explicit MotivicRationalFunction(int nvars) : nvars_(nvars)
    {
        if (nvars < 0)
            throw validation_error("variable count must be >= 0");
    }

    MotivicRationalFunction(int nvars, detail::TPoly num, std::vector<TAtom> den)
        : nvars_(nvars), num_(std::move(num)), den_(std::move(den))
    {
        for (const auto& [n, c] : num_)
            if (static_cast<int>(n.size()) != nvars_)
                throw validation_error("numerator exponent arity mismatch");
        for (const auto& at : den_)
            if (static_cast<int>(at.b.size()) != nvars_)
                throw validation_error("denominator atom arity mismatch");
        std::sort(den_.begin(), den_.end());
        reduce();
    }

    static MotivicRationalFunction zero(int nvars) { return MotivicRationalFunction(nvars); }

    static MotivicRationalFunction scalar(int nvars, const LocalizedMotivicElement& c)
    {
        MotivicRationalFunction f(nvars);
        if (!c.is_zero())
            f.num_[ExpVec(static_cast<std::size_t>(nvars), 0)] = c;
        return f;
    }

    static MotivicRationalFunction one(int nvars)
    {
        return scalar(nvars, LocalizedMotivicElement::one());
    }

    static MotivicRationalFunction monomial(int nvars, const ExpVec& n,
                                            const LocalizedMotivicElement& c)
    {
        if (static_cast<int>(n.size()) != nvars)
            throw validation_error("monomial arity mismatch");
        MotivicRationalFunction f(nvars);
        if (!c.is_zero())
            f.num_[n] = c;
        return f;
    }

    int nvars() const { return nvars_; }
    const detail::TPoly& num() const { return num_; }
    const std::vector<TAtom>& den() const { return den_; }
    bool is_zero() const { return num_.empty(); }

    MotivicRationalFunction operator-() const
    {
        MotivicRationalFunction out(nvars_);
        out.den_ = den_;
        for (const auto& [n, c] : num_)
            out.num_[n] = -c;
        return out;
    }

    friend MotivicRationalFunction operator+(const MotivicRationalFunction& f,
                                             const MotivicRationalFunction& g)
    {
        f.check_vars(g);
        if (f.is_zero())
            return g;
        if (g.is_zero())
            return f;
        // least common denominator multiset: per-atom max multiplicity
        std::map<TAtom, int> mf = multiplicities(f.den_), mg = multiplicities(g.den_);
        std::map<TAtom, int> mc = mf;
        for (const auto& [at, n] : mg) {
            auto it = mc.find(at);
            if (it == mc.end())
                mc.emplace(at, n);
            else
                it->second = std::max(it->second, n);
        }
        detail::TPoly nf = f.num_, ng = g.num_;
        std::vector<TAtom> den;
        for (const auto& [at, n] : mc) {
            for (int t = 0; t < n; ++t)
                den.push_back(at);
            int ef = n - (mf.count(at) ? mf.at(at) : 0);
            int eg = n - (mg.count(at) ? mg.at(at) : 0);
            for (int t = 0; t < ef; ++t)
                nf = detail::tpoly_mul_atom(nf, at);
            for (int t = 0; t < eg; ++t)
                ng = detail::tpoly_mul_atom(ng, at);
        }
        for (const auto& [n, c] : ng)
            detail::tpoly_add_term(nf, n, c);
        return MotivicRationalFunction(f.nvars_, std::move(nf), std::move(den));
    }

    friend MotivicRationalFunction operator-(const MotivicRationalFunction& f,
                                             const MotivicRationalFunction& g)
    {
        return f + (-g);
    }

    friend MotivicRationalFunction operator*(const MotivicRationalFunction& f,
                                             const MotivicRationalFunction& g)
    {
        f.check_vars(g);
        std::vector<TAtom> den = f.den_;
        den.insert(den.end(), g.den_.begin(), g.den_.end());
        return MotivicRationalFunction(f.nvars_, detail::tpoly_mul(f.num_, g.num_), std::move(den));
    }

    MotivicRationalFunction& operator+=(const MotivicRationalFunction& o) { return *this = *this + o; }
    MotivicRationalFunction& operator-=(const MotivicRationalFunction& o) { return *this = *this - o; }
    MotivicRationalFunction& operator*=(const MotivicRationalFunction& o) { return *this = *this * o; }

    MotivicRationalFunction scaled(const LocalizedMotivicElement& c) const
    {
        MotivicRationalFunction out(nvars_);
        if (c.is_zero())
            return out;
        out.den_ = den_;
        for (const auto& [n, v] : num_)
            detail::tpoly_add_term(out.num_, n, v * c);
        return out;
    }

    /// Equality as rational functions, by cross-multiplication.
    bool equals(const MotivicRationalFunction& o) const
    {
        check_vars(o);
        detail::TPoly a = num_;
        for (const auto& at : o.den_)
            a = detail::tpoly_mul_atom(a, at);
        detail::TPoly b = o.num_;
        for (const auto& at : den_)
            b = detail::tpoly_mul_atom(b, at);
        if (a.size() != b.size())
            return false;
        for (const auto& [n, c] : a) {
            auto it = b.find(n);
            if (it == b.end() || !c.equals(it->second))
                return false;
        }
        return true;
    }

    /// Exact truncated expansion to total degree <= N: each inverted atom
    /// contributes its geometric series.
    TruncatedSeries expand(int N) const
    {
        if (N < 0)
            throw validation_error("truncation bound must be >= 0");
        TruncatedSeries out;
        out.nvars = nvars_;
        out.bound = N;
        std::map<ExpVec, LocalizedMotivicElement> cur;
        for (const auto& [n, c] : num_)
            if (total_degree(n) <= N)
                cur[n] = c;
        for (const auto& at : den_) {
            // multiply by sum_k (L^-a T^b)^k via the graded recurrence
            // s'[n] = s[n] + L^-a * s'[n - b]
            LocalizedMotivicElement scale(MotivicElement::L_pow(-at.a));
            std::map<ExpVec, LocalizedMotivicElement> pending = std::move(cur);
            std::map<ExpVec, LocalizedMotivicElement> acc;
            for (int g = 0; g <= N; ++g) {
                for (auto it = pending.begin(); it != pending.end();) {
                    if (total_degree(it->first) == g) {
                        auto& slot = acc[it->first];
                        slot += it->second;
                        if (slot.is_zero())
                            acc.erase(it->first);
                        it = pending.erase(it);
                    } else {
                        ++it;
                    }
                }
                std::vector<std::pair<ExpVec, LocalizedMotivicElement>> grade_now;
                for (const auto& [n, c] : acc)
                    if (total_degree(n) == g)
                        grade_now.emplace_back(n, c);
                for (const auto& [n, c] : grade_now) {
                    ExpVec m(n.size());
                    for (std::size_t i = 0; i < m.size(); ++i)
                        m[i] = n[i] + at.b[i];
                    if (total_degree(m) > N)
                        continue;
                    auto& slot = pending[m];
                    slot += c * scale;
                    if (slot.is_zero())
                        pending.erase(m);
                }
            }
            cur = std::move(acc);
        }
        for (auto& [n, c] : cur)
            if (!c.is_zero())
                out.coeffs.emplace(n, std::move(c));
        return out;
    }

    /// Substitute T_j -> L^-c_j T^(e_j), mapping an r-variable function to an
    /// s-variable one. Denominator atoms whose exponent vector collapses to 0
    /// migrate into the coefficient ring; if such an atom also has L-exponent
    /// 0 it collapses to zero and the substitution diverges.
    struct Substitution {
        int c = 0;
        ExpVec e;
    };

    MotivicRationalFunction substitute_monomials(const std::vector<Substitution>& subs,
                                                 int target_vars) const
    {
        if (static_cast<int>(subs.size()) != nvars_)
            throw validation_error("substitution arity mismatch");
        for (const auto& s : subs) {
            if (s.c < 0)
                throw validation_error("substitution requires c >= 0");
            if (static_cast<int>(s.e.size()) != target_vars)
                throw validation_error("substitution target arity mismatch");
            for (int x : s.e)
                if (x < 0)
                    throw validation_error("substitution exponents must be nonnegative");
        }
        // denominator first, so divergence is reported before any work
        std::vector<TAtom> den;
        std::vector<int> coeff_atoms; // migrated T-free atoms (L-exponent a')
        for (const auto& at : den_) {
            long long a2 = at.a;
            ExpVec b2(static_cast<std::size_t>(target_vars), 0);
            for (std::size_t j = 0; j < at.b.size(); ++j) {
                if (at.b[j] == 0)
                    continue;
                a2 += static_cast<long long>(at.b[j]) * subs[j].c;
                for (int i = 0; i < target_vars; ++i)
                    b2[static_cast<std::size_t>(i)] += at.b[j] * subs[j].e[static_cast<std::size_t>(i)];
            }
            if (total_degree(b2) == 0) {
                if (a2 == 0)
                    throw divergence_error("substitution collapses a denominator atom to zero");
                coeff_atoms.push_back(static_cast<int>(a2));
            } else {
                den.emplace_back(static_cast<int>(a2), std::move(b2));
            }
        }
        // numerator termwise: T^n -> L^-(sum n_j c_j) T^(sum n_j e_j)
        detail::TPoly num;
        for (const auto& [n, c] : num_) {
            long long lshift = 0;
            ExpVec m(static_cast<std::size_t>(target_vars), 0);
            for (std::size_t j = 0; j < n.size(); ++j) {
                if (n[j] == 0)
                    continue;
                lshift += static_cast<long long>(n[j]) * subs[j].c;
                for (int i = 0; i < target_vars; ++i)
                    m[static_cast<std::size_t>(i)] += n[j] * subs[j].e[static_cast<std::size_t>(i)];
            }
            LocalizedMotivicElement c2 = c * LocalizedMotivicElement(MotivicElement::L_pow(static_cast<int>(-lshift)));
            detail::tpoly_add_term(num, m, c2);
        }
        // migrate T-free atoms: 1/(1 - L^-a') = L^a' / (L^a' - 1)
        if (!coeff_atoms.empty()) {
            LocalizedMotivicElement factor = LocalizedMotivicElement::one();
            for (int a2 : coeff_atoms)
                factor *= LocalizedMotivicElement(MotivicElement::L_pow(a2), {a2});
            detail::TPoly scaled;
            for (const auto& [n, c] : num)
                detail::tpoly_add_term(scaled, n, c * factor);
            num = std::move(scaled);
        }
        return MotivicRationalFunction(target_vars, std::move(num), std::move(den));
    }

    /// Value of a 0-variable function as a coefficient-ring element.
    LocalizedMotivicElement to_localized() const
    {
        if (nvars_ != 0 || !den_.empty())
            throw validation_error("function is not T-free");
        if (num_.empty())
            return LocalizedMotivicElement::zero();
        return num_.begin()->second;
    }

    /// Rendering: numerator in graded-lex T order, atoms sorted by (a, b).
    std::string to_string(const std::string& var_prefix = "T") const
    {
        std::ostringstream os;
        if (num_.empty()) {
            os << "0";
        } else {
            std::vector<std::pair<ExpVec, LocalizedMotivicElement>> terms(num_.begin(), num_.end());
            std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) {
                int dx = total_degree(x.first), dy = total_degree(y.first);
                if (dx != dy)
                    return dx < dy;
                return x.first < y.first;
            });
            bool first = true;
            for (const auto& [n, c] : terms) {
                std::string mono = monomial_string(n, var_prefix);
                std::string cs = c.to_string();
                bool wrap = c.num().terms().size() > 1 || !c.den().empty();
                std::string piece;
                if (mono.empty()) {
                    piece = cs;
                } else if (cs == "1") {
                    piece = mono;
                } else if (cs == "-1") {
                    piece = "-" + mono;
                } else {
                    piece = (wrap ? "(" + cs + ")" : cs) + "*" + mono;
                }
                if (first) {
                    os << piece;
                    first = false;
                } else if (!piece.empty() && piece[0] == '-') {
                    os << " - " << piece.substr(1);
                } else {
                    os << " + " << piece;
                }
            }
        }
        if (!den_.empty()) {
            std::string d;
            for (std::size_t i = 0; i < den_.size(); ++i) {
                if (i)
                    d += "*";
                d += atom_string(den_[i], var_prefix);
            }
            if (den_.size() > 1)
                d = "(" + d + ")";
            return "(" + os.str() + ") / " + d;
        }
        return os.str();
    }

    static std::string atom_string(const TAtom& at, const std::string& var_prefix)
    {
        std::string s = "(1 - ";
        if (at.a != 0)
            s += "L^-" + std::to_string(at.a) + "*";
        std::string mono = monomial_string(at.b, var_prefix);
        s += mono.empty() ? "1" : mono;
        s += ")";
        return s;
    }

    static std::string monomial_string(const ExpVec& n, const std::string& var_prefix)
    {
        std::string s;
        for (std::size_t i = 0; i < n.size(); ++i) {
            if (n[i] == 0)
                continue;
            if (!s.empty())
                s += "*";
            s += var_prefix + std::to_string(i + 1);
            if (n[i] != 1)
                s += "^" + std::to_string(n[i]);
        }
        return s;
    }

private:
    void check_vars(const MotivicRationalFunction& o) const
    {
        if (nvars_ != o.nvars_)
            throw validation_error("variable count mismatch");
    }

    static std::map<TAtom, int> multiplicities(const std::vector<TAtom>& v)
    {
        std::map<TAtom, int> m;
        for (const auto& at : v) {
            auto it = m.find(at);
            if (it == m.end())
                m.emplace(at, 1);
            else
                ++it->second;
        }
        return m;
    }

    void reduce()
    {
        if (num_.empty()) {
            den_.clear();
            return;
        }
        bool progress = true;
        while (progress && !den_.empty()) {
            progress = false;
            for (auto it = den_.begin(); it != den_.end(); ++it) {
                if (auto q = detail::tpoly_div_atom(num_, *it)) {
                    num_ = std::move(*q);
                    den_.erase(it);
                    progress = true;
                    break;
                }
            }
        }
    }

    int nvars_ = 0;
    detail::TPoly num_;
    std::vector<TAtom> den_;
};

/// The series of Lemme "calcul serie" for a = L^a_exp:
/// prod_{i=1..m} (L^-a T_i) / (1 - L^-a T_i), i.e. the generating series of
/// sum over n in (N\{0})^m of L^{-a|n|} T^n.
inline MotivicRationalFunction geometric_series_product(int a_exp, int m)
{
    if (m < 1)
        throw validation_error("geometric_series_product requires m >= 1");
    if (a_exp < 1)
        throw validation_error("geometric_series_product requires a >= 1");
    ExpVec ones(static_cast<std::size_t>(m), 1);
    detail::TPoly num;
    num[ones] = LocalizedMotivicElement(MotivicElement::L_pow(-a_exp * m));
    std::vector<TAtom> den;
    for (int i = 0; i < m; ++i)
        den.emplace_back(a_exp, unit_vec(static_cast<std::size_t>(m), static_cast<std::size_t>(i)));
    return MotivicRationalFunction(m, std::move(num), std::move(den));
}

} // namespace motivic

#endif
