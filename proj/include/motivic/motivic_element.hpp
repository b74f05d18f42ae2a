#ifndef MOTIVIC_MOTIVIC_ELEMENT_HPP
#define MOTIVIC_MOTIVIC_ELEMENT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "motivic/errors.hpp"
#include "motivic/symbols.hpp"

namespace motivic {

using Rat = boost::multiprecision::cpp_rational;

/// Product of declared class symbols with positive exponents, kept sorted
/// by symbol id. The empty monomial is the unit.
using SymbolMonomial = std::vector<std::pair<SymbolId, int>>;

namespace detail {

inline SymbolMonomial merge_monomials(const SymbolMonomial& a, const SymbolMonomial& b)
{
    SymbolMonomial out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first)
            out.push_back(a[i++]);
        else if (b[j].first < a[i].first)
            out.push_back(b[j++]);
        else {
            out.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i, ++j;
        }
    }
    for (; i < a.size(); ++i) out.push_back(a[i]);
    for (; j < b.size(); ++j) out.push_back(b[j]);
    return out;
}

inline Rat rat_pow(const Rat& base, long long e)
{
    if (e == 0)
        return Rat(1);
    Rat b = e > 0 ? base : Rat(1) / base;
    long long n = e > 0 ? e : -e;
    Rat acc(1);
    while (n > 0) {
        if (n & 1)
            acc *= b;
        b *= b;
        n >>= 1;
    }
    return acc;
}

} // namespace detail

/// An element of the ring M_k = K_0(Var/k)[L^-1], kept as a canonical
/// finite sum of terms c * [S1]^e1...[Sn]^en * L^e with nonzero integer
/// coefficients. Formal: no scissor relations are applied, so the ring is
/// the Laurent-polynomial ring over the declared symbols.
class MotivicElement {
public:
    struct TermKey {
        SymbolMonomial syms;
        int lexp = 0;
        bool operator<(const TermKey& o) const
        {
            if (syms != o.syms)
                return syms < o.syms;
            return lexp < o.lexp;
        }
        bool operator==(const TermKey& o) const { return syms == o.syms && lexp == o.lexp; }
    };

    using TermMap = std::map<TermKey, long long>;

    MotivicElement() = default;

    static MotivicElement zero() { return MotivicElement(); }

    static MotivicElement constant(long long c)
    {
        MotivicElement e;
        if (c != 0)
            e.terms_[TermKey{}] = c;
        return e;
    }

    static MotivicElement one() { return constant(1); }

    /// L^e for any integer e (L is invertible in M_k).
    static MotivicElement L_pow(int e, long long c = 1)
    {
        MotivicElement m;
        if (c != 0)
            m.terms_[TermKey{{}, e}] = c;
        return m;
    }

    /// The class [S] of a declared symbol.
    static MotivicElement symbol_class(const SymbolRegistry& reg, SymbolId id)
    {
        reg.at(id); // bounds check
        MotivicElement m;
        m.registry_ = &reg;
        m.terms_[TermKey{{{id, 1}}, 0}] = 1;
        return m;
    }

    /// L - 1, the class of the torus G_m.
    static MotivicElement L_minus_one()
    {
        MotivicElement m;
        m.terms_[TermKey{{}, 1}] = 1;
        m.terms_[TermKey{{}, 0}] = -1;
        return m;
    }

    const TermMap& terms() const { return terms_; }
    const SymbolRegistry* registry() const { return registry_; }
    bool is_zero() const { return terms_.empty(); }

    bool operator==(const MotivicElement& o) const { return terms_ == o.terms_; }
    bool operator!=(const MotivicElement& o) const { return !(*this == o); }

    MotivicElement operator-() const
    {
        MotivicElement out;
        out.registry_ = registry_;
        for (const auto& [k, c] : terms_)
            out.terms_[k] = -c;
        return out;
    }

    MotivicElement& operator+=(const MotivicElement& o)
    {
        merge_registry(o);
        for (const auto& [k, c] : o.terms_) {
            auto it = terms_.find(k);
            if (it == terms_.end()) {
                terms_.emplace(k, c);
            } else {
                it->second += c;
                if (it->second == 0)
                    terms_.erase(it);
            }
        }
        return *this;
    }

    MotivicElement& operator-=(const MotivicElement& o) { return *this += -o; }

    friend MotivicElement operator+(MotivicElement a, const MotivicElement& b) { return a += b; }
    friend MotivicElement operator-(MotivicElement a, const MotivicElement& b) { return a -= b; }

    friend MotivicElement operator*(const MotivicElement& a, const MotivicElement& b)
    {
        MotivicElement out;
        out.registry_ = a.registry_;
        out.merge_registry(b);
        for (const auto& [ka, ca] : a.terms_) {
            for (const auto& [kb, cb] : b.terms_) {
                TermKey k{detail::merge_monomials(ka.syms, kb.syms), ka.lexp + kb.lexp};
                auto it = out.terms_.find(k);
                if (it == out.terms_.end()) {
                    out.terms_.emplace(std::move(k), ca * cb);
                } else {
                    it->second += ca * cb;
                    if (it->second == 0)
                        out.terms_.erase(it);
                }
            }
        }
        return out;
    }

    MotivicElement& operator*=(const MotivicElement& o) { return *this = *this * o; }

    /// Multiply by L^e.
    MotivicElement shifted(int e) const
    {
        MotivicElement out;
        out.registry_ = registry_;
        for (const auto& [k, c] : terms_)
            out.terms_[TermKey{k.syms, k.lexp + e}] = c;
        return out;
    }

    MotivicElement scaled(long long c) const
    {
        MotivicElement out;
        out.registry_ = registry_;
        if (c == 0)
            return out;
        for (const auto& [k, v] : terms_)
            out.terms_[k] = v * c;
        return out;
    }

    MotivicElement pow(int n) const
    {
        if (n < 0)
            throw validation_error("negative power of a general element");
        MotivicElement acc = one();
        for (int i = 0; i < n; ++i)
            acc = acc * *this;
        return acc;
    }

    /// Degree of one term: sum of symbol dimensions plus the L-exponent.
    long long term_degree(const TermKey& k) const
    {
        long long d = k.lexp;
        for (const auto& [id, e] : k.syms) {
            if (!registry_)
                throw validation_error("element carries symbols but no registry");
            d += static_cast<long long>(registry_->at(id).dim) * e;
        }
        return d;
    }

    /// Maximum term degree on the canonical form; empty for 0.
    std::optional<long long> virtual_dim() const
    {
        std::optional<long long> best;
        for (const auto& [k, c] : terms_) {
            long long d = term_degree(k);
            if (!best || d > *best)
                best = d;
        }
        return best;
    }

    /// Non-archimedean norm induced by the dimension filtration:
    /// 2^virtual_dim, and 0 for the zero element.
    Rat norm() const
    {
        auto vd = virtual_dim();
        if (!vd)
            return Rat(0);
        return detail::rat_pow(Rat(2), *vd);
    }

    /// Exact division by (L^i - 1); empty result when not divisible.
    std::optional<MotivicElement> divide_by_atom(int i) const
    {
        if (i < 1)
            throw validation_error("atom exponent must be >= 1");
        if (is_zero())
            return zero();
        // Split into Laurent polynomials in L, one per symbol monomial, and
        // divide each by (x^i - 1) via long division after shifting to x^0.
        std::map<SymbolMonomial, std::map<int, long long>> groups;
        for (const auto& [k, c] : terms_)
            groups[k.syms][k.lexp] = c;
        MotivicElement out;
        out.registry_ = registry_;
        for (auto& [mono, poly] : groups) {
            int shift = poly.begin()->first;
            int top = poly.rbegin()->first - shift;
            std::vector<long long> p(static_cast<std::size_t>(top) + 1, 0);
            for (const auto& [e, c] : poly)
                p[static_cast<std::size_t>(e - shift)] = c;
            // divide p by x^i - 1 from the top
            std::vector<long long> q;
            if (top < i) {
                return std::nullopt;
            }
            q.assign(static_cast<std::size_t>(top - i) + 1, 0);
            for (int d = top; d >= i; --d) {
                long long c = p[static_cast<std::size_t>(d)];
                if (c == 0)
                    continue;
                q[static_cast<std::size_t>(d - i)] = c;
                p[static_cast<std::size_t>(d)] = 0;
                p[static_cast<std::size_t>(d - i)] += c;
            }
            for (long long c : p)
                if (c != 0)
                    return std::nullopt;
            for (std::size_t d = 0; d < q.size(); ++d)
                if (q[d] != 0)
                    out.terms_[TermKey{mono, static_cast<int>(d) + shift}] = q[d];
        }
        return out;
    }

    /// Evaluate with L -> q and [S] -> counts[S]; a ring homomorphism.
    Rat specialize_counts(const Rat& q, const std::map<SymbolId, Rat>& counts) const
    {
        Rat acc(0);
        for (const auto& [k, c] : terms_) {
            Rat t(c);
            for (const auto& [id, e] : k.syms) {
                auto it = counts.find(id);
                if (it == counts.end()) {
                    std::string nm = registry_ ? registry_->at(id).name : std::to_string(id);
                    throw validation_error("no count supplied for symbol '" + nm + "'");
                }
                t *= detail::rat_pow(it->second, e);
            }
            if (q == 0 && k.lexp < 0)
                throw validation_error("specialization divides by zero (q = 0)");
            t *= detail::rat_pow(q, k.lexp);
            acc += t;
        }
        return acc;
    }

    /// Canonical rendering. Terms are grouped by symbol monomial; each
    /// group's Laurent polynomial in L is printed with its maximal
    /// (L - 1)-power factored out, groups sorted by (virtual degree desc,
    /// top L-exponent desc, symbol names lex).
    std::string to_string() const
    {
        if (terms_.empty())
            return "0";
        struct Group {
            SymbolMonomial mono;
            std::map<int, long long> poly;
            long long vdim = 0;
            int top = 0;
            std::string name_key;
        };
        std::map<SymbolMonomial, std::map<int, long long>> by_mono;
        for (const auto& [k, c] : terms_)
            by_mono[k.syms][k.lexp] = c;
        std::vector<Group> groups;
        for (auto& [mono, poly] : by_mono) {
            Group g;
            g.mono = mono;
            g.poly = poly;
            g.top = poly.rbegin()->first;
            long long symdim = 0;
            std::string nk;
            for (const auto& [id, e] : mono) {
                const auto& s = registry_->at(id);
                symdim += static_cast<long long>(s.dim) * e;
                nk += s.name;
                nk += '\x01';
                nk += std::to_string(e);
                nk += '\x01';
            }
            g.vdim = symdim + g.top;
            g.name_key = nk;
            groups.push_back(std::move(g));
        }
        std::sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) {
            if (a.vdim != b.vdim)
                return a.vdim > b.vdim;
            if (a.top != b.top)
                return a.top > b.top;
            return a.name_key < b.name_key;
        });
        std::ostringstream os;
        bool first = true;
        for (const auto& g : groups) {
            std::string piece = render_group(g.mono, g.poly);
            bool neg = piece.size() > 0 && piece[0] == '-';
            if (first) {
                os << piece;
                first = false;
            } else if (neg) {
                os << " - " << piece.substr(1);
            } else {
                os << " + " << piece;
            }
        }
        return os.str();
    }

private:
    void merge_registry(const MotivicElement& o)
    {
        if (!o.registry_)
            return;
        if (!registry_) {
            registry_ = o.registry_;
            return;
        }
        if (registry_ != o.registry_)
            throw validation_error("operands built over different symbol registries");
    }

    // Factor poly = (L-1)^k * rest with k maximal, render the pieces.
    std::string render_group(const SymbolMonomial& mono, std::map<int, long long> poly) const
    {
        int lm1 = 0;
        for (;;) {
            // divide by (L - 1) once if exact
            auto p = poly;
            int shift = p.begin()->first;
            int top = p.rbegin()->first - shift;
            if (top < 1)
                break;
            std::vector<long long> v(static_cast<std::size_t>(top) + 1, 0);
            for (const auto& [e, c] : p)
                v[static_cast<std::size_t>(e - shift)] = c;
            std::vector<long long> q(static_cast<std::size_t>(top), 0);
            for (int d = top; d >= 1; --d) {
                long long c = v[static_cast<std::size_t>(d)];
                if (c == 0)
                    continue;
                q[static_cast<std::size_t>(d - 1)] = c;
                v[static_cast<std::size_t>(d)] = 0;
                v[static_cast<std::size_t>(d - 1)] += c;
            }
            if (v[0] != 0)
                break;
            std::map<int, long long> qm;
            for (std::size_t d = 0; d < q.size(); ++d)
                if (q[d] != 0)
                    qm[static_cast<int>(d) + shift] = q[d];
            if (qm.empty())
                break;
            poly = std::move(qm);
            ++lm1;
        }

        std::vector<std::string> factors;
        long long lead = poly.rbegin()->second;
        bool negate = lead < 0;
        if (negate)
            for (auto& [e, c] : poly)
                c = -c;

        for (const auto& [id, e] : mono) {
            std::string f = "[" + registry_->at(id).name + "]";
            if (e != 1)
                f += "^" + std::to_string(e);
            factors.push_back(f);
        }
        if (lm1 == 1)
            factors.push_back("(L - 1)");
        else if (lm1 > 1)
            factors.push_back("(L - 1)^" + std::to_string(lm1));

        // remaining Laurent polynomial in L
        std::string body = render_lpoly(poly);
        bool body_trivial_one = (body == "1");
        if (!body_trivial_one) {
            if (poly.size() > 1)
                body = "(" + body + ")";
            factors.push_back(body);
        }
        if (factors.empty())
            factors.push_back("1");
        std::string out;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i)
                out += "*";
            out += factors[i];
        }
        return negate ? "-" + out : out;
    }

    static std::string render_lpoly(const std::map<int, long long>& poly)
    {
        std::ostringstream os;
        bool first = true;
        for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
            long long c = it->second;
            int e = it->first;
            std::string mag;
            long long ac = c < 0 ? -c : c;
            if (e == 0) {
                mag = std::to_string(ac);
            } else {
                std::string lp = e == 1 ? "L" : "L^" + std::to_string(e);
                mag = (ac == 1) ? lp : std::to_string(ac) + "*" + lp;
            }
            if (first) {
                os << (c < 0 ? "-" : "") << mag;
                first = false;
            } else {
                os << (c < 0 ? " - " : " + ") << mag;
            }
        }
        return os.str();
    }

    TermMap terms_;
    const SymbolRegistry* registry_ = nullptr;
};

} // namespace motivic

#endif
