#ifndef MOTIVIC_PRESBURGER_GF_HPP
#define MOTIVIC_PRESBURGER_GF_HPP

#include <optional>

#include <boost/multiprecision/cpp_int.hpp>

#include "motivic/presburger_qe.hpp"

namespace motivic {
namespace presburger {

using BigRat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Element of Z[X_1..X_s][(1 - X^c)^-1]: integer numerator polynomial and
/// a denominator multiset of exponent vectors c in N^s \ {0}.
struct IntegerRationalFunction {
    std::size_t nvars = 0;
    std::map<std::vector<int>, BigInt> num;
    std::vector<std::vector<int>> den; // sorted

    bool is_zero() const { return num.empty(); }

    std::string to_string() const
    {
        std::ostringstream os;
        if (num.empty()) {
            os << "0";
        } else {
            bool first = true;
            for (auto it = num.begin(); it != num.end(); ++it) {
                const auto& [e, c] = *it;
                std::string mono = monomial(e);
                BigInt a = c < 0 ? BigInt(-c) : c;
                std::string mag;
                if (mono.empty())
                    mag = a.str();
                else if (a == 1)
                    mag = mono;
                else
                    mag = a.str() + "*" + mono;
                if (first) {
                    os << (c < 0 ? "-" : "") << mag;
                    first = false;
                } else {
                    os << (c < 0 ? " - " : " + ") << mag;
                }
            }
        }
        if (den.empty())
            return os.str();
        std::string d;
        for (std::size_t i = 0; i < den.size(); ++i) {
            if (i)
                d += "*";
            std::string mono = monomial(den[i]);
            d += "(1 - " + (mono.empty() ? std::string("1") : mono) + ")";
        }
        if (den.size() > 1)
            d = "(" + d + ")";
        return "(" + os.str() + ") / " + d;
    }

    static std::string monomial(const std::vector<int>& e)
    {
        std::string s;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0)
                continue;
            if (!s.empty())
                s += "*";
            s += "X" + std::to_string(i + 1);
            if (e[i] != 1)
                s += "^" + std::to_string(e[i]);
        }
        return s;
    }
};

/// Truncated expansion of an IntegerRationalFunction to total degree <= N.
inline std::map<std::vector<int>, BigInt> expand_gf(const IntegerRationalFunction& f, int N)
{
    if (N < 0)
        throw validation_error("truncation bound must be >= 0");
    auto deg = [](const std::vector<int>& e) {
        int d = 0;
        for (int x : e)
            d += x;
        return d;
    };
    std::map<std::vector<int>, BigInt> cur;
    for (const auto& [e, c] : f.num)
        if (deg(e) <= N)
            cur[e] = c;
    for (const auto& atom : f.den) {
        std::map<std::vector<int>, BigInt> pending = std::move(cur);
        std::map<std::vector<int>, BigInt> acc;
        for (int g = 0; g <= N; ++g) {
            for (auto it = pending.begin(); it != pending.end();) {
                if (deg(it->first) == g) {
                    auto& slot = acc[it->first];
                    slot += it->second;
                    if (slot == 0)
                        acc.erase(it->first);
                    it = pending.erase(it);
                } else {
                    ++it;
                }
            }
            std::vector<std::pair<std::vector<int>, BigInt>> now;
            for (const auto& [e, c] : acc)
                if (deg(e) == g)
                    now.emplace_back(e, c);
            for (const auto& [e, c] : now) {
                std::vector<int> m(e.size());
                for (std::size_t i = 0; i < e.size(); ++i)
                    m[i] = e[i] + atom[i];
                if (deg(m) > N)
                    continue;
                auto& slot = pending[m];
                slot += c;
                if (slot == 0)
                    pending.erase(m);
            }
        }
        cur = std::move(acc);
    }
    return cur;
}

/// Presburger function given by affine representatives; must be
/// nonnegative on the summation set.
struct PresburgerFunctionSpec {
    std::vector<LinearForm> forms;
};

namespace gfdetail {

/// Multivariate polynomial with rational coefficients over a fixed slot
/// count; exponent keys over the slots.
struct QPoly {
    std::size_t slots = 0;
    std::map<std::vector<int>, BigRat> terms;

    static QPoly constant(std::size_t slots, const BigRat& c)
    {
        QPoly p;
        p.slots = slots;
        if (c != 0)
            p.terms[std::vector<int>(slots, 0)] = c;
        return p;
    }

    static QPoly variable(std::size_t slots, std::size_t slot)
    {
        QPoly p;
        p.slots = slots;
        std::vector<int> e(slots, 0);
        e[slot] = 1;
        p.terms[std::move(e)] = 1;
        return p;
    }

    static QPoly from_linear(std::size_t slots, const LinearForm& f)
    {
        QPoly p = constant(slots, f.constant);
        for (std::size_t i = 0; i < f.coeffs.size() && i < slots; ++i)
            if (f.coeffs[i] != 0)
                p = add(p, scale(variable(slots, i), f.coeffs[i]));
        return p;
    }

    bool is_constant() const
    {
        for (const auto& [e, c] : terms)
            for (int x : e)
                if (x != 0)
                    return false;
        return true;
    }

    BigRat constant_value() const
    {
        auto it = terms.find(std::vector<int>(slots, 0));
        return it == terms.end() ? BigRat(0) : it->second;
    }

    BigRat coeff_of_linear(std::size_t slot) const
    {
        std::vector<int> e(slots, 0);
        e[slot] = 1;
        auto it = terms.find(e);
        return it == terms.end() ? BigRat(0) : it->second;
    }

    bool depends_on(std::size_t slot) const
    {
        for (const auto& [e, c] : terms)
            if (e[slot] != 0)
                return true;
        return false;
    }

    int degree_in(std::size_t slot) const
    {
        int d = 0;
        for (const auto& [e, c] : terms)
            d = std::max(d, e[slot]);
        return d;
    }

    static QPoly add(const QPoly& a, const QPoly& b)
    {
        QPoly out = a;
        for (const auto& [e, c] : b.terms) {
            auto& slot = out.terms[e];
            slot += c;
            if (slot == 0)
                out.terms.erase(e);
        }
        return out;
    }

    static QPoly scale(const QPoly& a, const BigRat& k)
    {
        QPoly out;
        out.slots = a.slots;
        if (k == 0)
            return out;
        for (const auto& [e, c] : a.terms)
            out.terms[e] = c * k;
        return out;
    }

    static QPoly mul(const QPoly& a, const QPoly& b)
    {
        QPoly out;
        out.slots = a.slots;
        for (const auto& [ea, ca] : a.terms) {
            for (const auto& [eb, cb] : b.terms) {
                std::vector<int> e(a.slots);
                for (std::size_t i = 0; i < a.slots; ++i)
                    e[i] = ea[i] + eb[i];
                auto& slot = out.terms[e];
                slot += ca * cb;
                if (slot == 0)
                    out.terms.erase(e);
            }
        }
        return out;
    }

    static QPoly pow(const QPoly& a, int n)
    {
        QPoly acc = constant(a.slots, 1);
        for (int i = 0; i < n; ++i)
            acc = mul(acc, a);
        return acc;
    }

    /// Substitute slot := value (a polynomial), expanding powers.
    QPoly substituted(std::size_t slot, const QPoly& value) const
    {
        QPoly out;
        out.slots = slots;
        for (const auto& [e, c] : terms) {
            std::vector<int> rest = e;
            int d = rest[slot];
            rest[slot] = 0;
            QPoly piece;
            piece.slots = slots;
            piece.terms[rest] = c;
            if (d > 0)
                piece = mul(piece, pow(value, d));
            out = add(out, piece);
        }
        return out;
    }

    /// Coefficients of powers of one slot: result[j] has the slot removed.
    std::vector<QPoly> decompose(std::size_t slot) const
    {
        int d = degree_in(slot);
        std::vector<QPoly> out(static_cast<std::size_t>(d) + 1);
        for (auto& p : out)
            p.slots = slots;
        for (const auto& [e, c] : terms) {
            std::vector<int> rest = e;
            int j = rest[slot];
            rest[slot] = 0;
            auto& slotp = out[static_cast<std::size_t>(j)];
            auto& v = slotp.terms[rest];
            v += c;
            if (v == 0)
                slotp.terms.erase(rest);
        }
        return out;
    }
};

struct Lit {
    bool is_mod = false;
    LinearForm form;
    long long d = 0;
};

enum class LitFold { True, False, Open };

inline LitFold fold_ground(const Lit& l)
{
    if (!l.form.is_constant())
        return LitFold::Open;
    if (l.is_mod)
        return ((l.form.constant % l.d) + l.d) % l.d == 0 ? LitFold::True : LitFold::False;
    return l.form.constant >= 0 ? LitFold::True : LitFold::False;
}

/// sum_{k>=0} k^j z^k = N_j(z) / (1-z)^(j+1); returns the numerator
/// coefficients N_j = sum_i N[i] z^i via (z d/dz)^j applied to 1/(1-z).
inline std::vector<BigInt> eulerian_numerator(int j)
{
    std::vector<BigInt> num{1}; // numerator in z, denominator power p = 1
    int p = 1;
    for (int step = 0; step < j; ++step) {
        // d/dz [N/(1-z)^p] = (N'(1-z) + pN) / (1-z)^(p+1), then multiply by z
        std::vector<BigInt> dN(num.size() + 1, 0);
        for (std::size_t i = 1; i < num.size(); ++i) {
            dN[i] += BigInt(static_cast<long long>(i)) * num[i]; // N'(z)*1
            dN[i + 1] -= BigInt(static_cast<long long>(i)) * num[i]; // N'(z)*(-z)
        }
        for (std::size_t i = 0; i < num.size(); ++i)
            dN[i] += BigInt(p) * num[i];
        // multiply by z
        std::vector<BigInt> zN(dN.size() + 1, 0);
        for (std::size_t i = 0; i < dN.size(); ++i)
            zN[i + 1] = dN[i];
        while (!zN.empty() && zN.back() == 0)
            zN.pop_back();
        num = std::move(zN);
        ++p;
    }
    return num;
}

/// Faulhaber: sum_{k=0}^{K} k^j as a polynomial in K with rational
/// coefficients (index = power of K).
inline std::vector<BigRat> faulhaber(int j)
{
    static std::vector<std::vector<BigRat>> cache;
    for (int t = static_cast<int>(cache.size()); t <= j; ++t) {
        // (K+1)^(t+1) = sum_{u<=t} C(t+1,u) F_u(K)
        std::vector<BigRat> rhs(static_cast<std::size_t>(t) + 2, 0);
        // (K+1)^(t+1) coefficients
        std::vector<BigInt> binom(static_cast<std::size_t>(t) + 2, 0);
        binom[0] = 1;
        for (int row = 1; row <= t + 1; ++row)
            for (int col = row; col >= 1; --col)
                binom[static_cast<std::size_t>(col)] += binom[static_cast<std::size_t>(col - 1)];
        for (std::size_t u = 0; u < rhs.size(); ++u)
            rhs[u] = BigRat(binom[u]);
        // subtract C(t+1,u) F_u for u < t
        std::vector<BigInt> c(static_cast<std::size_t>(t) + 2, 0);
        c[0] = 1;
        for (int row = 1; row <= t + 1; ++row)
            for (int col = row; col >= 1; --col)
                c[static_cast<std::size_t>(col)] += c[static_cast<std::size_t>(col - 1)];
        for (int u = 0; u < t; ++u) {
            const auto& Fu = cache[static_cast<std::size_t>(u)];
            for (std::size_t i = 0; i < Fu.size(); ++i)
                rhs[i] -= BigRat(c[static_cast<std::size_t>(u)]) * Fu[i];
        }
        BigRat inv = BigRat(1) / BigRat(t + 1);
        for (auto& v : rhs)
            v *= inv;
        while (!rhs.empty() && rhs.back() == 0)
            rhs.pop_back();
        cache.push_back(std::move(rhs));
    }
    return cache[static_cast<std::size_t>(j)];
}

inline QPoly eval_univariate(const std::vector<BigRat>& coeffs, const QPoly& K)
{
    QPoly out = QPoly::constant(K.slots, 0);
    QPoly power = QPoly::constant(K.slots, 1);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] != 0)
            out = QPoly::add(out, QPoly::scale(power, coeffs[i]));
        if (i + 1 < coeffs.size())
            power = QPoly::mul(power, K);
    }
    return out;
}

struct RawTerm {
    BigRat weight;
    std::vector<int> expo;
    std::map<std::vector<int>, int> atoms;
};

struct CellState {
    std::vector<Lit> lits;
    std::vector<QPoly> expo;  // one affine form per output coordinate
    QPoly weight;
    std::map<std::vector<int>, int> atoms;
    std::vector<std::size_t> active;
    long long sign = 1;
};

class GfEngine {
public:
    GfEngine(std::size_t r, std::size_t s, long long budget = 2'000'000)
        : r_(r), s_(s), budget_(budget)
    {
    }

    void run(CellState st, std::vector<RawTerm>& out)
    {
        out_ = &out;
        process(std::move(st));
    }

private:
    void spend(long long n)
    {
        budget_ -= n;
        if (budget_ < 0)
            throw validation_error("generating-function cell budget exhausted");
    }

    bool lits_satisfiable(const std::vector<Lit>& lits)
    {
        std::vector<NodePtr> kids;
        std::size_t nv = r_;
        for (const auto& l : lits) {
            LinearForm f = l.form;
            nv = std::max(nv, f.nvars());
            kids.push_back(l.is_mod ? make_mod(f, l.d) : make_ge(f));
        }
        Formula f;
        f.node = make_and(std::move(kids));
        f.nvars = nv;
        return satisfiable(f, /*over_naturals=*/false);
    }

    // fold ground literals; returns false if the cell is empty
    static bool fold_lits(std::vector<Lit>& lits)
    {
        std::vector<Lit> kept;
        for (auto& l : lits) {
            switch (fold_ground(l)) {
            case LitFold::True:
                break;
            case LitFold::False:
                return false;
            case LitFold::Open:
                kept.push_back(std::move(l));
                break;
            }
        }
        lits = std::move(kept);
        return true;
    }

    void emit(const CellState& st)
    {
        RawTerm t;
        BigRat w = st.weight.constant_value() * st.sign;
        if (!st.weight.is_constant())
            throw validation_error("internal: non-constant weight at emission");
        if (w == 0)
            return;
        if (boost::multiprecision::denominator(w) != 1)
            throw validation_error("internal: fractional weight at emission");
        t.weight = w;
        t.expo.resize(s_);
        for (std::size_t k = 0; k < s_; ++k) {
            if (!st.expo[k].is_constant())
                throw validation_error("internal: non-constant exponent at emission");
            BigRat e = st.expo[k].constant_value();
            if (boost::multiprecision::denominator(e) != 1)
                throw validation_error("internal: fractional exponent at emission");
            BigInt ei = boost::multiprecision::numerator(e);
            if (ei < 0)
                throw divergence_error("phi takes a negative value on P");
            t.expo[k] = static_cast<int>(ei);
        }
        t.atoms = st.atoms;
        out_->push_back(std::move(t));
    }

    // choose the next variable: prefer sign-pure exponent columns
    std::size_t pick_var(const CellState& st)
    {
        auto column_sign = [&](std::size_t slot) {
            bool pos = false, neg = false;
            for (const auto& e : st.expo) {
                BigRat c = e.coeff_of_linear(slot);
                if (c > 0)
                    pos = true;
                if (c < 0)
                    neg = true;
            }
            if (pos && neg)
                return 3; // mixed
            if (!pos && !neg)
                return 2; // zero
            return neg ? 1 : 0; // pure
        };
        std::size_t best = st.active.back();
        int best_rank = 4;
        for (auto it = st.active.rbegin(); it != st.active.rend(); ++it) {
            int rank = column_sign(*it);
            if (rank < best_rank) {
                best_rank = rank;
                best = *it;
            }
        }
        return best;
    }

    void process(CellState st)
    {
        spend(1 + static_cast<long long>(st.lits.size()));
        if (!fold_lits(st.lits))
            return;
        if (st.weight.terms.empty())
            return;
        if (st.active.empty()) {
            if (!st.lits.empty())
                throw validation_error("internal: open literal with no active variables");
            emit(st);
            return;
        }
        std::size_t x = pick_var(st);
        eliminate(std::move(st), x);
    }

    void eliminate(CellState st, std::size_t x)
    {
        st.active.erase(std::find(st.active.begin(), st.active.end(), x));

        // residue substitution x := q*xh + rho clears moduli on x and the
        // denominators of the exponent column
        long long q = 1;
        for (const auto& l : st.lits)
            if (l.is_mod && l.form.coeff(x) != 0)
                q = std::lcm(q, l.d);
        for (const auto& e : st.expo) {
            BigRat c = e.coeff_of_linear(x);
            BigInt den = boost::multiprecision::denominator(c);
            q = std::lcm(q, static_cast<long long>(den));
        }
        for (long long rho = 0; rho < q; ++rho) {
            CellState br = st;
            for (auto& l : br.lits) {
                long long a = l.form.coeff(x);
                if (a == 0)
                    continue;
                l.form.resize(std::max(l.form.nvars(), x + 1));
                if (l.is_mod) {
                    // a*q*xh vanishes mod d since d | q
                    l.form.coeffs[x] = 0;
                    l.form.constant += a * rho;
                } else {
                    l.form.coeffs[x] = a * q;
                    l.form.constant += a * rho;
                }
            }
            QPoly xsub = QPoly::add(QPoly::scale(QPoly::variable(slots(), x), q),
                                    QPoly::constant(slots(), rho));
            for (auto& e : br.expo)
                e = e.substituted(x, xsub);
            br.weight = br.weight.substituted(x, xsub);
            if (!fold_lits(br.lits))
                continue;
            sum_over(std::move(br), x);
        }
    }

    std::size_t slots() const { return r_; }

    // After residue substitution: sum over xh with integer-coefficient GE
    // bounds and an integer exponent direction.
    void sum_over(CellState st, std::size_t x)
    {
        std::vector<std::size_t> lowers, uppers, others;
        for (std::size_t i = 0; i < st.lits.size(); ++i) {
            const Lit& l = st.lits[i];
            long long a = l.form.coeff(x);
            if (l.is_mod || a == 0)
                others.push_back(i);
            else if (a > 0)
                lowers.push_back(i);
            else
                uppers.push_back(i);
        }
        if (lowers.empty() && uppers.empty()) {
            // x unconstrained: split Z into [0, inf) and (-inf, -1]
            CellState up = st;
            Lit nonneg;
            nonneg.form = LinearForm(std::max<std::size_t>(slots(), x + 1));
            nonneg.form.coeffs[x] = 1;
            up.lits.push_back(nonneg);
            sum_over(std::move(up), x);
            CellState down = st;
            Lit neg;
            neg.form = LinearForm(std::max<std::size_t>(slots(), x + 1));
            neg.form.coeffs[x] = -1;
            neg.form.constant = -1;
            down.lits.push_back(neg);
            sum_over(std::move(down), x);
            return;
        }
        if (lowers.empty()) {
            // bounded above only: flip x := -x and retry
            CellState fl = flip_var(std::move(st), x);
            sum_over(std::move(fl), x);
            return;
        }
        // pick the greatest lower bound by branching on pairwise comparisons
        for (std::size_t pick = 0; pick < lowers.size(); ++pick) {
            CellState br = st;
            if (!add_argopt_literals(br, lowers, pick, /*max=*/true, x))
                continue;
            resolve_lower(std::move(br), x, lowers[pick], uppers);
        }
    }

    static CellState flip_var(CellState st, std::size_t x)
    {
        for (auto& l : st.lits) {
            if (l.form.coeff(x) != 0) {
                l.form.resize(std::max(l.form.nvars(), x + 1));
                l.form.coeffs[x] = -l.form.coeffs[x];
            }
        }
        QPoly neg = QPoly::scale(QPoly::variable(st.expo.empty() ? st.weight.slots : st.expo[0].slots, x), -1);
        for (auto& e : st.expo)
            e = e.substituted(x, neg);
        st.weight = st.weight.substituted(x, neg);
        return st;
    }

    /// Branch literals making the picked bound the first arg-max (or
    /// arg-min) among candidates: strict against earlier, weak against later.
    bool add_argopt_literals(CellState& br, const std::vector<std::size_t>& cand,
                             std::size_t pick, bool max, std::size_t x)
    {
        // bound value of literal i: -rest_i / a_i (max) or rest_i / |a_i| (min)
        auto bound_parts = [&](std::size_t idx, long long& a, LinearForm& rest) {
            const Lit& l = br.lits[idx];
            a = l.form.coeff(x);
            rest = l.form;
            rest.resize(std::max(rest.nvars(), x + 1));
            rest.coeffs[x] = 0;
        };
        long long ap;
        LinearForm rp;
        bound_parts(cand[pick], ap, rp);
        for (std::size_t i = 0; i < cand.size(); ++i) {
            if (i == pick)
                continue;
            long long ai;
            LinearForm ri;
            bound_parts(cand[i], ai, ri);
            // compare beta_pick ? beta_i where beta = -rest/a (a > 0, lower)
            // or beta = rest/|a| (a < 0, upper): cross-multiplied integer form
            LinearForm diff;
            if (max) {
                // -rp/ap >= -ri/ai  <=>  ri*ap - rp*ai >= 0   (ap, ai > 0)
                diff = ri.scaled(ap) - rp.scaled(ai);
            } else {
                // rp/|ap| <= ri/|ai|  <=>  ri*|ap| - rp*|ai| >= 0
                diff = ri.scaled(ap < 0 ? -ap : ap) - rp.scaled(ai < 0 ? -ai : ai);
            }
            if (i < pick)
                diff.constant -= 1; // strict against earlier candidates
            Lit l;
            l.form = std::move(diff);
            switch (fold_ground(l)) {
            case LitFold::False:
                return false;
            case LitFold::True:
                break;
            case LitFold::Open:
                br.lits.push_back(std::move(l));
                break;
            }
        }
        return true;
    }

    void resolve_lower(CellState st, std::size_t x, std::size_t lower_idx,
                       std::vector<std::size_t> uppers_in)
    {
        long long a = st.lits[lower_idx].form.coeff(x);
        LinearForm F = st.lits[lower_idx].form;
        F.resize(std::max(F.nvars(), x + 1));
        F.coeffs[x] = 0;
        // ceil(-F/a): branch on s = (-F) mod a
        for (long long s = 0; s < a; ++s) {
            CellState br = st;
            if (a > 1) {
                Lit congruence;
                congruence.is_mod = true;
                congruence.form = F;
                congruence.form.constant += s;
                congruence.d = a;
                switch (fold_ground(congruence)) {
                case LitFold::False:
                    continue;
                case LitFold::True:
                    break;
                case LitFold::Open:
                    br.lits.push_back(std::move(congruence));
                    break;
                }
            }
            // lower bound A = (-F - s)/a + (s > 0 ? 1 : 0), exact on branch
            QPoly A = QPoly::scale(QPoly::from_linear(slots(), -F), BigRat(1, a));
            A = QPoly::add(A, QPoly::constant(slots(), BigRat(-s, a) + (s > 0 ? 1 : 0)));
            resolve_upper(std::move(br), x, A, uppers_in, lower_idx);
        }
    }

    void resolve_upper(CellState st, std::size_t x, const QPoly& A,
                       const std::vector<std::size_t>& uppers, std::size_t lower_idx)
    {
        if (uppers.empty()) {
            CellState br = std::move(st);
            drop_x_lits(br, x);
            sum_ray(std::move(br), x, A);
            return;
        }
        for (std::size_t pick = 0; pick < uppers.size(); ++pick) {
            CellState br = st;
            if (!add_argopt_literals(br, uppers, pick, /*max=*/false, x))
                continue;
            long long a = br.lits[uppers[pick]].form.coeff(x); // a < 0
            LinearForm F = br.lits[uppers[pick]].form;
            F.resize(std::max(F.nvars(), x + 1));
            F.coeffs[x] = 0;
            long long aa = -a;
            // floor(F/aa): branch on s = F mod aa
            for (long long s = 0; s < aa; ++s) {
                CellState br2 = br;
                if (aa > 1) {
                    Lit congruence;
                    congruence.is_mod = true;
                    congruence.form = F;
                    congruence.form.constant -= s;
                    congruence.d = aa;
                    switch (fold_ground(congruence)) {
                    case LitFold::False:
                        continue;
                    case LitFold::True:
                        break;
                    case LitFold::Open:
                        br2.lits.push_back(std::move(congruence));
                        break;
                    }
                }
                QPoly B = QPoly::scale(QPoly::from_linear(slots(), F), BigRat(1, aa));
                B = QPoly::add(B, QPoly::constant(slots(), BigRat(-s, aa)));
                // nonempty range: B - A >= 0, cleared to integer coefficients
                QPoly span = QPoly::add(B, QPoly::scale(A, -1));
                Lit nonempty;
                bool known_nonempty = false;
                if (!make_integer_ge(span, nonempty)) {
                    continue; // constant negative span
                } else if (nonempty.form.is_constant() && nonempty.form.constant >= 0) {
                    known_nonempty = true;
                }
                if (!known_nonempty)
                    br2.lits.push_back(nonempty);
                drop_x_lits(br2, x);
                sum_segment(std::move(br2), x, A, span);
            }
        }
    }

    /// Convert a rational-affine polynomial >= 0 into an integer literal;
    /// returns false when it is a negative constant.
    static bool make_integer_ge(const QPoly& p, Lit& out)
    {
        BigInt den = 1;
        for (const auto& [e, c] : p.terms)
            den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(c));
        LinearForm f(p.slots);
        for (const auto& [e, c] : p.terms) {
            BigRat v = c * BigRat(den);
            long long val = static_cast<long long>(boost::multiprecision::numerator(v));
            std::size_t slot = 0;
            int deg = 0;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] != 0) {
                    slot = i;
                    deg += e[i];
                }
            }
            if (deg == 0)
                f.constant += val;
            else if (deg == 1)
                f.coeffs[slot] += val;
            else
                throw validation_error("internal: nonlinear bound form");
        }
        out = Lit{};
        out.form = std::move(f);
        if (out.form.is_constant() && out.form.constant < 0)
            return false;
        return true;
    }

    static void drop_x_lits(CellState& st, std::size_t x)
    {
        std::vector<Lit> kept;
        for (auto& l : st.lits)
            if (l.form.coeff(x) == 0)
                kept.push_back(std::move(l));
        st.lits = std::move(kept);
    }

    std::vector<BigRat> direction(const CellState& st, std::size_t x) const
    {
        std::vector<BigRat> w(s_);
        for (std::size_t k = 0; k < s_; ++k)
            w[k] = st.expo[k].coeff_of_linear(x);
        return w;
    }

    static int sign_class(const std::vector<BigRat>& w)
    {
        bool pos = false, neg = false;
        for (const auto& c : w) {
            if (c > 0)
                pos = true;
            if (c < 0)
                neg = true;
        }
        if (pos && neg)
            return 3;
        if (!pos && !neg)
            return 0;
        return neg ? 2 : 1;
    }

    std::vector<int> integer_direction(const std::vector<BigRat>& w) const
    {
        std::vector<int> out(s_);
        for (std::size_t k = 0; k < s_; ++k) {
            if (boost::multiprecision::denominator(w[k]) != 1)
                throw validation_error("internal: fractional exponent direction");
            out[k] = static_cast<int>(boost::multiprecision::numerator(w[k]));
        }
        return out;
    }

    /// sum over xh in {A, A+1, ...}
    void sum_ray(CellState st, std::size_t x, const QPoly& A)
    {
        // xh := A + k, k >= 0 in slot x
        QPoly sub = QPoly::add(A, QPoly::variable(slots(), x));
        for (auto& e : st.expo)
            e = e.substituted(x, sub);
        st.weight = st.weight.substituted(x, sub);
        std::vector<BigRat> w = direction(st, x);
        int cls = sign_class(w);
        if (cls == 0) {
            if (lits_satisfiable(st.lits))
                throw divergence_error("infinite fiber: a ray of P keeps phi constant");
            return;
        }
        if (cls == 2 || cls == 3) {
            if (lits_satisfiable(st.lits))
                throw divergence_error("phi decreases along an infinite ray of P");
            return;
        }
        emit_ray_terms(std::move(st), x, integer_direction(w));
    }

    /// Emit sum_{k>=0} weight(k) z^k with z = X^w over each weight degree.
    void emit_ray_terms(CellState st, std::size_t x, const std::vector<int>& w)
    {
        std::vector<QPoly> parts = st.weight.decompose(x);
        for (std::size_t j = 0; j < parts.size(); ++j) {
            if (parts[j].terms.empty())
                continue;
            std::vector<BigInt> N = eulerian_numerator(static_cast<int>(j));
            for (std::size_t i = 0; i < N.size(); ++i) {
                if (N[i] == 0)
                    continue;
                CellState br = st;
                br.weight = QPoly::scale(parts[j], BigRat(N[i]));
                QPoly iconst = QPoly::constant(slots(), BigRat(static_cast<long long>(i)));
                for (auto& e : br.expo)
                    e = e.substituted(x, iconst);
                br.atoms[w] += static_cast<int>(j) + 1;
                process(std::move(br));
            }
        }
    }

    /// sum over xh in [A, A + span], span >= 0 on the branch
    void sum_segment(CellState st, std::size_t x, const QPoly& A, const QPoly& span)
    {
        QPoly sub = QPoly::add(A, QPoly::variable(slots(), x));
        for (auto& e : st.expo)
            e = e.substituted(x, sub);
        st.weight = st.weight.substituted(x, sub);
        std::vector<BigRat> w = direction(st, x);
        int cls = sign_class(w);

        if (cls == 0) {
            // finite count: Faulhaber in K = span
            std::vector<QPoly> parts = st.weight.decompose(x);
            QPoly total = QPoly::constant(slots(), 0);
            for (std::size_t j = 0; j < parts.size(); ++j) {
                if (parts[j].terms.empty())
                    continue;
                QPoly fj = eval_univariate(faulhaber(static_cast<int>(j)), span);
                total = QPoly::add(total, QPoly::mul(parts[j], fj));
            }
            CellState br = std::move(st);
            br.weight = std::move(total);
            QPoly zero = QPoly::constant(slots(), 0);
            for (auto& e : br.expo)
                e = e.substituted(x, zero);
            process(std::move(br));
            return;
        }
        if (cls == 2) {
            // reverse the segment: k := span - k'
            QPoly rev = QPoly::add(span, QPoly::scale(QPoly::variable(slots(), x), -1));
            CellState br = std::move(st);
            for (auto& e : br.expo)
                e = e.substituted(x, rev);
            br.weight = br.weight.substituted(x, rev);
            sum_segment_nonneg(std::move(br), x, span);
            return;
        }
        if (cls == 3) {
            if (span.is_constant()) {
                BigRat kv = span.constant_value();
                BigInt kn = boost::multiprecision::numerator(kv);
                long long kmax = static_cast<long long>(kn);
                for (long long k = 0; k <= kmax; ++k) {
                    CellState br = st;
                    QPoly kc = QPoly::constant(slots(), BigRat(k));
                    for (auto& e : br.expo)
                        e = e.substituted(x, kc);
                    br.weight = br.weight.substituted(x, kc);
                    process(std::move(br));
                }
                return;
            }
            throw divergence_error(
                "mixed-sign exponent direction over a parameter-dependent range; "
                "phi is outside the supported affine family");
        }
        sum_segment_nonneg(std::move(st), x, span);
    }

    /// segment sum with direction >= 0: forward tails
    /// sum_{k=0}^{K} = sum_{k>=0} - sum_{k>=K+1}
    void sum_segment_nonneg(CellState st, std::size_t x, const QPoly& span)
    {
        std::vector<BigRat> w = direction(st, x);
        if (sign_class(w) == 0) {
            // can happen after reversal when weight lost the variable
            std::vector<QPoly> parts = st.weight.decompose(x);
            QPoly total = QPoly::constant(slots(), 0);
            for (std::size_t j = 0; j < parts.size(); ++j) {
                if (parts[j].terms.empty())
                    continue;
                QPoly fj = eval_univariate(faulhaber(static_cast<int>(j)), span);
                total = QPoly::add(total, QPoly::mul(parts[j], fj));
            }
            CellState br = std::move(st);
            br.weight = std::move(total);
            QPoly zero = QPoly::constant(slots(), 0);
            for (auto& e : br.expo)
                e = e.substituted(x, zero);
            process(std::move(br));
            return;
        }
        std::vector<int> wi = integer_direction(w);
        // head: full ray from 0
        CellState head = st;
        emit_ray_terms(std::move(head), x, wi);
        // tail: k := span + 1 + k', negated
        QPoly shift = QPoly::add(QPoly::add(span, QPoly::constant(slots(), 1)),
                                 QPoly::variable(slots(), x));
        CellState tail = std::move(st);
        for (auto& e : tail.expo)
            e = e.substituted(x, shift);
        tail.weight = tail.weight.substituted(x, shift);
        tail.sign = -tail.sign;
        emit_ray_terms(std::move(tail), x, wi);
    }

    std::size_t r_, s_;
    long long budget_;
    std::vector<RawTerm>* out_ = nullptr;
};

/// Shannon expansion of a quantifier-free formula into disjoint literal
/// conjunctions. NMOD literals are expanded into residue cells.
struct ShannonCell {
    std::vector<Lit> lits;
};

inline const Node* find_atom(const NodePtr& n)
{
    switch (n->kind) {
    case Kind::AtomGe:
    case Kind::AtomMod:
        return n.get();
    case Kind::Not:
    case Kind::And:
    case Kind::Or:
        for (const auto& k : n->kids)
            if (const Node* a = find_atom(k))
                return a;
        return nullptr;
    default:
        return nullptr;
    }
}

inline bool same_atom(const Node* a, const Node* b)
{
    return a->kind == b->kind && a->form == b->form && a->modulus == b->modulus;
}

inline NodePtr assign_atom(const NodePtr& n, const Node* atom, bool value)
{
    switch (n->kind) {
    case Kind::AtomGe:
    case Kind::AtomMod:
        if (same_atom(n.get(), atom))
            return make_bool(value);
        return n;
    case Kind::Not:
        return make_not(assign_atom(n->kids[0], atom, value));
    case Kind::And:
    case Kind::Or: {
        std::vector<NodePtr> kids;
        for (const auto& k : n->kids)
            kids.push_back(assign_atom(k, atom, value));
        return make_nary(n->kind, std::move(kids));
    }
    default:
        return n;
    }
}

inline void shannon_cells(const NodePtr& n, std::vector<Lit>& current,
                          std::vector<ShannonCell>& out, long long& budget)
{
    if (--budget < 0)
        throw validation_error("formula decomposition budget exhausted");
    if (n->kind == Kind::False)
        return;
    if (n->kind == Kind::True) {
        out.push_back(ShannonCell{current});
        return;
    }
    const Node* atom = find_atom(n);
    if (!atom)
        throw validation_error("internal: unexpected formula shape in decomposition");
    // positive branch
    {
        Lit l;
        l.is_mod = atom->kind == Kind::AtomMod;
        l.form = atom->form;
        l.d = atom->modulus;
        current.push_back(l);
        shannon_cells(assign_atom(n, atom, true), current, out, budget);
        current.pop_back();
    }
    // negative branch
    {
        if (atom->kind == Kind::AtomGe) {
            Lit l;
            l.form = -atom->form;
            l.form.constant -= 1;
            current.push_back(l);
            shannon_cells(assign_atom(n, atom, false), current, out, budget);
            current.pop_back();
        } else {
            // not (L = 0 mod d): one disjoint cell per nonzero residue
            for (long long rho = 1; rho < atom->modulus; ++rho) {
                Lit l;
                l.is_mod = true;
                l.form = atom->form;
                l.form.constant -= rho;
                l.d = atom->modulus;
                current.push_back(l);
                shannon_cells(assign_atom(n, atom, false), current, out, budget);
                current.pop_back();
            }
        }
    }
}

} // namespace gfdetail

/// Exact division of an integer polynomial by (1 - X^c).
inline std::optional<std::map<std::vector<int>, BigInt>>
gf_try_divide(const std::map<std::vector<int>, BigInt>& p, const std::vector<int>& c)
{
    auto deg = [](const std::vector<int>& e) {
        int d = 0;
        for (int x : e)
            d += x;
        return d;
    };
    auto less = [&](const std::vector<int>& x, const std::vector<int>& y) {
        int dx = deg(x), dy = deg(y);
        if (dx != dy)
            return dx < dy;
        return x < y;
    };
    std::map<std::vector<int>, BigInt, decltype(less)> work(less);
    for (const auto& [e, v] : p)
        work[e] = v;
    std::map<std::vector<int>, BigInt> quot;
    while (!work.empty()) {
        auto it = std::prev(work.end());
        std::vector<int> n = it->first;
        BigInt v = it->second;
        work.erase(it);
        std::vector<int> m(n.size());
        for (std::size_t i = 0; i < n.size(); ++i) {
            m[i] = n[i] - c[i];
            if (m[i] < 0)
                return std::nullopt;
        }
        BigInt q = -v;
        auto qt = quot.find(m);
        if (qt == quot.end())
            quot.emplace(m, q);
        else {
            qt->second += q;
            if (qt->second == 0)
                quot.erase(qt);
        }
        auto& slot = work[m];
        slot += v;
        if (slot == 0)
            work.erase(m);
    }
    return quot;
}

/// The rational generating function sum_{l in P} X^{phi(l)} of Lemme-style
/// shape: an element of Z[X][(1 - X^c)^-1]. P is taken inside N^r
/// (nonnegativity atoms are conjoined); quantifiers are eliminated first.
/// Throws divergence_error when a fiber is infinite or phi is negative
/// somewhere on P.
inline IntegerRationalFunction generating_function(const Formula& P_in,
                                                   const PresburgerFunctionSpec& phi)
{
    std::size_t r = P_in.nvars;
    for (const auto& f : phi.forms)
        r = std::max(r, f.nvars());
    std::size_t s = phi.forms.size();
    if (s == 0)
        throw validation_error("phi must have at least one coordinate");

    Formula P = eliminate_quantifiers(P_in);
    std::vector<NodePtr> conj{P.node};
    for (std::size_t j = 0; j < r; ++j)
        conj.push_back(make_ge(LinearForm::variable(r, j)));
    P.node = make_and(std::move(conj));
    P.nvars = r;

    // phi must be nonnegative on P
    for (const auto& f : phi.forms) {
        LinearForm neg = -f;
        neg.constant -= 1;
        neg.resize(r);
        Formula q;
        q.node = make_and({P.node, make_ge(neg)});
        q.nvars = r;
        if (satisfiable(q, /*over_naturals=*/false))
            throw divergence_error("phi takes a negative value on P");
    }

    // disjoint cells
    std::vector<gfdetail::ShannonCell> cells;
    {
        std::vector<gfdetail::Lit> current;
        long long budget = 200'000;
        gfdetail::shannon_cells(P.node, current, cells, budget);
    }

    std::vector<gfdetail::RawTerm> terms;
    for (const auto& cell : cells) {
        gfdetail::CellState st;
        st.lits = cell.lits;
        for (auto& l : st.lits)
            l.form.resize(r);
        st.weight = gfdetail::QPoly::constant(r, 1);
        for (const auto& f : phi.forms) {
            LinearForm g = f;
            g.resize(r);
            st.expo.push_back(gfdetail::QPoly::from_linear(r, g));
        }
        for (std::size_t j = 0; j < r; ++j)
            st.active.push_back(j);
        gfdetail::GfEngine engine(r, s);
        engine.run(std::move(st), terms);
    }

    // assemble over a common denominator
    std::map<std::vector<int>, int> common;
    for (const auto& t : terms)
        for (const auto& [c, mult] : t.atoms) {
            auto it = common.find(c);
            if (it == common.end())
                common.emplace(c, mult);
            else
                it->second = std::max(it->second, mult);
        }
    for (const auto& [c, mult] : common) {
        bool nonneg = true, nonzero = false;
        for (int v : c) {
            if (v < 0)
                nonneg = false;
            if (v != 0)
                nonzero = true;
        }
        if (!nonneg || !nonzero)
            throw divergence_error("generating function escaped Z[X][(1-X^c)^-1]");
    }

    IntegerRationalFunction out;
    out.nvars = s;
    auto mul_atom = [&](std::map<std::vector<int>, BigInt>& p, const std::vector<int>& c) {
        std::map<std::vector<int>, BigInt> shifted;
        for (const auto& [e, v] : p) {
            std::vector<int> m(e.size());
            for (std::size_t i = 0; i < e.size(); ++i)
                m[i] = e[i] + c[i];
            shifted[m] = v;
        }
        for (const auto& [e, v] : shifted) {
            auto& slot = p[e];
            slot -= v;
            if (slot == 0)
                p.erase(e);
        }
    };
    for (const auto& t : terms) {
        std::map<std::vector<int>, BigInt> piece;
        piece[t.expo] = boost::multiprecision::numerator(t.weight);
        for (const auto& [c, mult] : common) {
            int have = 0;
            auto it = t.atoms.find(c);
            if (it != t.atoms.end())
                have = it->second;
            for (int k = have; k < mult; ++k)
                mul_atom(piece, c);
        }
        for (const auto& [e, v] : piece) {
            auto& slot = out.num[e];
            slot += v;
            if (slot == 0)
                out.num.erase(e);
        }
    }
    for (const auto& [c, mult] : common)
        for (int k = 0; k < mult; ++k)
            out.den.push_back(c);
    std::sort(out.den.begin(), out.den.end());

    if (out.num.empty()) {
        out.den.clear();
        return out;
    }

    // best-effort cancellation of single atoms
    bool progress = true;
    while (progress && !out.den.empty()) {
        progress = false;
        for (auto it = out.den.begin(); it != out.den.end(); ++it) {
            auto q = gf_try_divide(out.num, *it);
            if (q) {
                out.num = std::move(*q);
                out.den.erase(it);
                progress = true;
                break;
            }
        }
    }
    return out;
}

} // namespace presburger
} // namespace motivic

#endif
