#ifndef MOTIVIC_SEMIALG_HPP
#define MOTIVIC_SEMIALG_HPP

#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "motivic/motivic_element.hpp" // Rat
#include "motivic/presburger.hpp"      // LinearForm

namespace motivic {
namespace semialg {

using presburger::LinearForm;

/// A truncated power series over Q: coefficients are known for degrees
/// below trunc. An absent trunc means the value is exact to all orders,
/// so the empty exact value is the certified zero of k[[t]].
struct PowerSeriesValue {
    std::map<int, Rat> coeffs;       // no stored zeros
    std::optional<int> trunc;        // exclusive; absent = exact

    static PowerSeriesValue exact_zero() { return PowerSeriesValue{}; }

    static PowerSeriesValue constant(const Rat& c)
    {
        PowerSeriesValue v;
        if (c != 0)
            v.coeffs[0] = c;
        return v;
    }

    static PowerSeriesValue t_power(int k)
    {
        PowerSeriesValue v;
        v.coeffs[k] = 1;
        return v;
    }

    bool exact() const { return !trunc.has_value(); }

    void set(int deg, const Rat& c)
    {
        if (c == 0)
            coeffs.erase(deg);
        else
            coeffs[deg] = c;
    }

    void drop_beyond_trunc()
    {
        if (!trunc)
            return;
        for (auto it = coeffs.begin(); it != coeffs.end();) {
            if (it->first >= *trunc)
                it = coeffs.erase(it);
            else
                ++it;
        }
    }

    /// Certified lower bound on ord_t: +infinity encoded as absent.
    std::optional<long long> ord_lower_bound() const
    {
        if (!coeffs.empty())
            return coeffs.begin()->first;
        if (trunc)
            return *trunc;
        return std::nullopt; // exact zero: ord is +infinity
    }
};

inline PowerSeriesValue add(const PowerSeriesValue& u, const PowerSeriesValue& v)
{
    PowerSeriesValue out;
    if (u.trunc && v.trunc)
        out.trunc = std::min(*u.trunc, *v.trunc);
    else if (u.trunc)
        out.trunc = u.trunc;
    else if (v.trunc)
        out.trunc = v.trunc;
    out.coeffs = u.coeffs;
    for (const auto& [d, c] : v.coeffs) {
        auto it = out.coeffs.find(d);
        if (it == out.coeffs.end()) {
            out.coeffs.emplace(d, c);
        } else {
            it->second += c;
            if (it->second == 0)
                out.coeffs.erase(it);
        }
    }
    out.drop_beyond_trunc();
    return out;
}

inline PowerSeriesValue scale(const PowerSeriesValue& u, const Rat& k)
{
    PowerSeriesValue out;
    out.trunc = u.trunc;
    if (k == 0) {
        // scaling by an exact constant zero gives the certified zero
        out.coeffs.clear();
        out.trunc.reset();
        return out;
    }
    for (const auto& [d, c] : u.coeffs)
        out.coeffs[d] = c * k;
    return out;
}

inline PowerSeriesValue mul(const PowerSeriesValue& u, const PowerSeriesValue& v)
{
    // certified zero absorbs everything
    if (u.exact() && u.coeffs.empty())
        return PowerSeriesValue::exact_zero();
    if (v.exact() && v.coeffs.empty())
        return PowerSeriesValue::exact_zero();
    PowerSeriesValue out;
    // effective truncation: min over (trunc of one factor + ord bound of the other)
    auto lb_u = u.ord_lower_bound(), lb_v = v.ord_lower_bound();
    std::optional<long long> t;
    if (u.trunc && lb_v)
        t = static_cast<long long>(*u.trunc) + *lb_v;
    if (v.trunc && lb_u) {
        long long t2 = static_cast<long long>(*v.trunc) + *lb_u;
        t = t ? std::min(*t, t2) : t2;
    }
    if (t)
        out.trunc = static_cast<int>(*t);
    for (const auto& [du, cu] : u.coeffs)
        for (const auto& [dv, cv] : v.coeffs) {
            int d = du + dv;
            auto it = out.coeffs.find(d);
            if (it == out.coeffs.end()) {
                out.coeffs.emplace(d, cu * cv);
            } else {
                it->second += cu * cv;
                if (it->second == 0)
                    out.coeffs.erase(it);
            }
        }
    out.drop_beyond_trunc();
    return out;
}

inline PowerSeriesValue pow(const PowerSeriesValue& u, int n)
{
    PowerSeriesValue acc = PowerSeriesValue::constant(1);
    for (int i = 0; i < n; ++i)
        acc = mul(acc, u);
    return acc;
}

/// ord_t of a value: an exact integer, +infinity, or indeterminate with a
/// certified lower bound when all stored coefficients vanish at finite
/// truncation.
struct OrdInfo {
    enum class State { Finite, Infinite, Indeterminate } state;
    long long value = 0;       // Finite
    long long lower_bound = 0; // Indeterminate
};

inline OrdInfo ord_t(const PowerSeriesValue& v)
{
    if (!v.coeffs.empty())
        return OrdInfo{OrdInfo::State::Finite, v.coeffs.begin()->first, 0};
    if (v.exact())
        return OrdInfo{OrdInfo::State::Infinite, 0, 0};
    return OrdInfo{OrdInfo::State::Indeterminate, 0, *v.trunc};
}

/// Angular component: the lowest nonzero coefficient; exactly 0 for the
/// certified zero; indeterminate when ord is.
inline std::optional<Rat> ac(const PowerSeriesValue& v)
{
    OrdInfo o = ord_t(v);
    switch (o.state) {
    case OrdInfo::State::Finite:
        return v.coeffs.begin()->second;
    case OrdInfo::State::Infinite:
        return Rat(0);
    case OrdInfo::State::Indeterminate:
        return std::nullopt;
    }
    return std::nullopt;
}

/// Kleene three-valued logic.
enum class Truth { False, True, Indeterminate };

inline Truth truth_and(Truth a, Truth b)
{
    if (a == Truth::False || b == Truth::False)
        return Truth::False;
    if (a == Truth::True && b == Truth::True)
        return Truth::True;
    return Truth::Indeterminate;
}

inline Truth truth_or(Truth a, Truth b)
{
    if (a == Truth::True || b == Truth::True)
        return Truth::True;
    if (a == Truth::False && b == Truth::False)
        return Truth::False;
    return Truth::Indeterminate;
}

inline Truth truth_not(Truth a)
{
    if (a == Truth::Indeterminate)
        return Truth::Indeterminate;
    return a == Truth::True ? Truth::False : Truth::True;
}

inline std::string truth_string(Truth t)
{
    switch (t) {
    case Truth::True:
        return "TRUE";
    case Truth::False:
        return "FALSE";
    default:
        return "INDETERMINATE";
    }
}

/// Polynomial over Q[t] in the series variables x1..xm.
struct TPolynomial {
    int nx = 0;
    // exponent vector over x -> polynomial in t (degree -> coefficient)
    std::map<std::vector<int>, std::map<int, Rat>> terms;

    PowerSeriesValue evaluate(const std::vector<PowerSeriesValue>& xs) const
    {
        if (static_cast<int>(xs.size()) < nx)
            throw validation_error("point arity mismatch");
        PowerSeriesValue acc = PowerSeriesValue::exact_zero();
        for (const auto& [e, tc] : terms) {
            PowerSeriesValue term;
            for (const auto& [d, c] : tc)
                term.set(d, c);
            PowerSeriesValue monom = term; // exact polynomial in t
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] > 0)
                    monom = mul(monom, pow(xs[i], e[i]));
            acc = add(acc, monom);
        }
        return acc;
    }

    /// Evaluate a coefficient polynomial at rational arguments
    /// (used for the SAL3 polynomial over angular components).
    Rat evaluate_rational(const std::vector<Rat>& ys) const
    {
        Rat acc(0);
        for (const auto& [e, tc] : terms) {
            Rat c(0);
            for (const auto& [d, cc] : tc) {
                if (d != 0)
                    throw validation_error("the SAL3 polynomial must not involve t");
                c = cc;
            }
            if (tc.empty())
                continue;
            Rat m = c;
            for (std::size_t i = 0; i < e.size(); ++i)
                for (int k = 0; k < e[i]; ++k)
                    m *= ys[i];
            acc += m;
        }
        return acc;
    }
};

enum class CondKind { Sal1, Sal2, Sal3, And, Or, Not };

struct CondNode;
using CondPtr = std::shared_ptr<const CondNode>;

/// Boolean tree over the three elementary semi-algebraic atoms.
struct CondNode {
    CondKind kind;
    // SAL1: ord(f1) >= ord(f2) + L; SAL2: ord(f1) === L mod d
    TPolynomial f1, f2;
    LinearForm L;
    long long d = 1;
    // SAL3: g(ac(fs[0]), ..., ac(fs[s-1])) = 0
    TPolynomial g;
    std::vector<TPolynomial> fs;
    std::vector<CondPtr> kids;
};

struct SemiAlgebraicCondition {
    CondPtr node;
    int nx = 0; // series variables
    int nl = 0; // integer parameters
};

namespace detail {

inline Truth eval_sal1(const OrdInfo& o1, const OrdInfo& o2, long long lval)
{
    // rhs = ord(f2) + L, with (+inf) + l = +inf
    if (o1.state == OrdInfo::State::Infinite)
        return Truth::True;
    if (o2.state == OrdInfo::State::Infinite)
        return o1.state == OrdInfo::State::Finite ? Truth::False : Truth::Indeterminate;
    if (o1.state == OrdInfo::State::Finite && o2.state == OrdInfo::State::Finite)
        return o1.value >= o2.value + lval ? Truth::True : Truth::False;
    if (o1.state == OrdInfo::State::Finite) {
        // o2 indeterminate in [lb, +inf]
        return o1.value < o2.lower_bound + lval ? Truth::False : Truth::Indeterminate;
    }
    if (o2.state == OrdInfo::State::Finite) {
        // o1 indeterminate in [lb, +inf]
        return o1.lower_bound >= o2.value + lval ? Truth::True : Truth::Indeterminate;
    }
    return Truth::Indeterminate;
}

inline Truth eval_sal2(const OrdInfo& o1, long long lval, long long d)
{
    if (o1.state == OrdInfo::State::Infinite)
        return Truth::True; // +inf = l mod d, for every l and d
    if (o1.state == OrdInfo::State::Indeterminate)
        return Truth::Indeterminate;
    long long v = (o1.value - lval) % d;
    return v == 0 ? Truth::True : Truth::False;
}

} // namespace detail

/// Kleene evaluation of a condition at m power-series values and r integers.
inline Truth evaluate_condition(const SemiAlgebraicCondition& cond,
                                const std::vector<PowerSeriesValue>& point,
                                const std::vector<long long>& ell)
{
    if (static_cast<int>(point.size()) < cond.nx)
        throw validation_error("condition needs " + std::to_string(cond.nx) + " series values");
    if (static_cast<int>(ell.size()) < cond.nl)
        throw validation_error("condition needs " + std::to_string(cond.nl) + " integer parameters");
    std::function<Truth(const CondPtr&)> rec = [&](const CondPtr& n) -> Truth {
        switch (n->kind) {
        case CondKind::Sal1: {
            OrdInfo o1 = ord_t(n->f1.evaluate(point));
            OrdInfo o2 = ord_t(n->f2.evaluate(point));
            return detail::eval_sal1(o1, o2, n->L.eval(ell));
        }
        case CondKind::Sal2: {
            OrdInfo o1 = ord_t(n->f1.evaluate(point));
            return detail::eval_sal2(o1, n->L.eval(ell), n->d);
        }
        case CondKind::Sal3: {
            std::vector<Rat> ys;
            for (const auto& f : n->fs) {
                auto a = ac(f.evaluate(point));
                if (!a)
                    return Truth::Indeterminate;
                ys.push_back(*a);
            }
            return n->g.evaluate_rational(ys) == 0 ? Truth::True : Truth::False;
        }
        case CondKind::And: {
            Truth t = Truth::True;
            for (const auto& k : n->kids)
                t = truth_and(t, rec(k));
            return t;
        }
        case CondKind::Or: {
            Truth t = Truth::False;
            for (const auto& k : n->kids)
                t = truth_or(t, rec(k));
            return t;
        }
        case CondKind::Not:
            return truth_not(rec(n->kids[0]));
        }
        return Truth::Indeterminate;
    };
    return rec(cond.node);
}

// ---------------------------------------------------------------------------
// Condition DSL:
//   cond  := or; or := and ('||' and)*; and := unary ('&&' unary)*
//   unary := '!' unary | '(' cond ')' | atom
//   atom  := 'ord(' poly ')' '>=' 'ord(' poly ')' ['+' linform]
//          | 'ord(' poly ')' '===' linform 'mod' int
//          | 'acpoly(' poly ';' poly (',' poly)* ')' '=' '0'
// Polynomials use t, x1..xm (y1..ys in the acpoly head), integer or p/q
// rational coefficients, operators + - * ^.
// ---------------------------------------------------------------------------

namespace detail {

class ConditionParser {
public:
    explicit ConditionParser(std::string text) : text_(std::move(text)) {}

    SemiAlgebraicCondition parse()
    {
        CondPtr n = parse_or();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected trailing input");
        SemiAlgebraicCondition c;
        c.node = n;
        c.nx = static_cast<int>(max_x_);
        c.nl = static_cast<int>(max_l_);
        return c;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, pos_ + 1); }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool eat(const std::string& tok)
    {
        skip_ws();
        if (text_.compare(pos_, tok.size(), tok) == 0) {
            if (std::isalpha(static_cast<unsigned char>(tok[0]))) {
                std::size_t end = pos_ + tok.size();
                if (end < text_.size() &&
                    (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
                    return false;
            }
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    CondPtr parse_or()
    {
        CondPtr n = parse_and();
        std::vector<CondPtr> kids{n};
        while (eat("||"))
            kids.push_back(parse_and());
        if (kids.size() == 1)
            return kids[0];
        auto out = std::make_shared<CondNode>();
        out->kind = CondKind::Or;
        out->kids = std::move(kids);
        return out;
    }

    CondPtr parse_and()
    {
        std::vector<CondPtr> kids{parse_unary()};
        while (eat("&&"))
            kids.push_back(parse_unary());
        if (kids.size() == 1)
            return kids[0];
        auto out = std::make_shared<CondNode>();
        out->kind = CondKind::And;
        out->kids = std::move(kids);
        return out;
    }

    CondPtr parse_unary()
    {
        skip_ws();
        if (eat("!")) {
            auto out = std::make_shared<CondNode>();
            out->kind = CondKind::Not;
            out->kids = {parse_unary()};
            return out;
        }
        std::size_t save = pos_;
        if (eat("(")) {
            CondPtr f = parse_or();
            skip_ws();
            if (!eat(")"))
                fail("expected ')'");
            return f;
        }
        pos_ = save;
        return parse_atom();
    }

    CondPtr parse_atom()
    {
        skip_ws();
        if (eat("ord")) {
            if (!eat("("))
                fail("expected '(' after ord");
            TPolynomial f1 = parse_poly(/*acpoly_head=*/false);
            if (!eat(")"))
                fail("expected ')'");
            skip_ws();
            if (eat(">=")) {
                if (!eat("ord") || !eat("("))
                    fail("expected ord( on the right of >=");
                TPolynomial f2 = parse_poly(false);
                if (!eat(")"))
                    fail("expected ')'");
                LinearForm L;
                if (eat("+"))
                    L = parse_linform();
                else
                    L = LinearForm(max_l_);
                auto out = std::make_shared<CondNode>();
                out->kind = CondKind::Sal1;
                out->f1 = std::move(f1);
                out->f2 = std::move(f2);
                out->L = std::move(L);
                return out;
            }
            if (eat("===")) {
                LinearForm L = parse_linform();
                if (!eat("mod"))
                    fail("expected 'mod'");
                long long d = parse_int();
                if (d < 1)
                    fail("modulus must be >= 1");
                auto out = std::make_shared<CondNode>();
                out->kind = CondKind::Sal2;
                out->f1 = std::move(f1);
                out->L = std::move(L);
                out->d = d;
                return out;
            }
            fail("expected '>=' or '===' after ord(...)");
        }
        if (eat("acpoly")) {
            if (!eat("("))
                fail("expected '(' after acpoly");
            TPolynomial g = parse_poly(/*acpoly_head=*/true);
            if (!eat(";"))
                fail("expected ';' separating the polynomial from its arguments");
            std::vector<TPolynomial> fs;
            fs.push_back(parse_poly(false));
            while (eat(","))
                fs.push_back(parse_poly(false));
            if (!eat(")"))
                fail("expected ')'");
            if (!eat("="))
                fail("expected '= 0'");
            long long z = parse_int();
            if (z != 0)
                fail("acpoly conditions compare against 0");
            if (g.nx > static_cast<int>(fs.size()))
                fail("acpoly head uses more slots than arguments given");
            auto out = std::make_shared<CondNode>();
            out->kind = CondKind::Sal3;
            out->g = std::move(g);
            out->fs = std::move(fs);
            return out;
        }
        fail("expected an atom: ord(...) or acpoly(...)");
    }

    long long parse_int()
    {
        skip_ws();
        bool neg = false;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
            neg = text_[pos_] == '-';
            ++pos_;
            skip_ws();
        }
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            fail("expected an integer");
        long long v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            v = v * 10 + (text_[pos_] - '0');
            ++pos_;
        }
        return neg ? -v : v;
    }

    Rat parse_rat()
    {
        long long num = parse_int();
        std::size_t save = pos_;
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '/') {
            ++pos_;
            long long den = parse_int();
            if (den == 0)
                fail("zero denominator");
            return Rat(num) / Rat(den);
        }
        pos_ = save;
        return Rat(num);
    }

    LinearForm parse_linform()
    {
        LinearForm acc(max_l_);
        bool neg = false;
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '-') {
            ++pos_;
            neg = true;
        }
        for (;;) {
            LinearForm term = parse_lin_term();
            acc = acc + (neg ? -term : term);
            skip_ws();
            if (eat("+")) {
                neg = false;
                continue;
            }
            if (pos_ < text_.size() && text_[pos_] == '-') {
                ++pos_;
                neg = true;
                continue;
            }
            break;
        }
        acc.resize(max_l_);
        return acc;
    }

    LinearForm parse_lin_term()
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == 'l' && pos_ + 1 < text_.size() &&
            std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
            std::size_t idx = parse_lvar();
            long long k = 1;
            std::size_t save = pos_;
            if (eat("*")) {
                skip_ws();
                if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    k = parse_int();
                else
                    pos_ = save;
            }
            LinearForm f(std::max(max_l_, idx + 1));
            f.coeffs[idx] = k;
            return f;
        }
        long long v = parse_int();
        if (eat("*")) {
            skip_ws();
            if (pos_ >= text_.size() || text_[pos_] != 'l')
                fail("expected a variable after '*'");
            std::size_t idx = parse_lvar();
            LinearForm f(std::max(max_l_, idx + 1));
            f.coeffs[idx] = v;
            return f;
        }
        LinearForm f(max_l_);
        f.constant = v;
        return f;
    }

    std::size_t parse_lvar()
    {
        // caller saw 'l'
        ++pos_;
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            fail("expected an index after 'l'");
        std::size_t idx = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            idx = idx * 10 + static_cast<std::size_t>(text_[pos_++] - '0');
        if (idx == 0)
            fail("variable indices start at 1");
        max_l_ = std::max(max_l_, idx);
        return idx - 1;
    }

    // Polynomial parsing: sums of products of powers of t, x<i> (or y<i> in
    // the acpoly head) and rational constants.
    TPolynomial parse_poly(bool acpoly_head)
    {
        TPolynomial p;
        bool negate = false;
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '-') {
            ++pos_;
            negate = true;
        }
        for (;;) {
            auto [e, tpoly] = parse_poly_term(acpoly_head);
            for (auto& [d, c] : tpoly) {
                if (negate)
                    c = -c;
                auto& slot = p.terms[e][d];
                slot += c;
                if (slot == 0) {
                    p.terms[e].erase(d);
                    if (p.terms[e].empty())
                        p.terms.erase(e);
                }
            }
            skip_ws();
            if (eat("+")) {
                negate = false;
            } else if (pos_ < text_.size() && text_[pos_] == '-') {
                ++pos_;
                negate = true;
            } else {
                break;
            }
        }
        p.nx = static_cast<int>(acpoly_head ? max_y_ : max_x_);
        normalize_arity(p);
        return p;
    }

    void normalize_arity(TPolynomial& p)
    {
        std::map<std::vector<int>, std::map<int, Rat>> fixed;
        for (auto& [e, tc] : p.terms) {
            std::vector<int> e2 = e;
            e2.resize(static_cast<std::size_t>(p.nx), 0);
            fixed[e2] = tc;
        }
        p.terms = std::move(fixed);
    }

    std::pair<std::vector<int>, std::map<int, Rat>> parse_poly_term(bool acpoly_head)
    {
        std::vector<int> e;
        int tdeg = 0;
        Rat coeff(1);
        bool any = false;
        for (;;) {
            skip_ws();
            if (pos_ < text_.size() &&
                (std::isdigit(static_cast<unsigned char>(text_[pos_])))) {
                coeff *= parse_rat();
                any = true;
            } else if (pos_ < text_.size() && text_[pos_] == 't' &&
                       !(pos_ + 1 < text_.size() &&
                         std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])))) {
                ++pos_;
                int k = parse_power();
                tdeg += k;
                any = true;
            } else if (pos_ < text_.size() && text_[pos_] == (acpoly_head ? 'y' : 'x') &&
                       pos_ + 1 < text_.size() &&
                       std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
                ++pos_;
                std::size_t idx = 0;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    idx = idx * 10 + static_cast<std::size_t>(text_[pos_++] - '0');
                if (idx == 0)
                    fail("variable indices start at 1");
                if (acpoly_head)
                    max_y_ = std::max(max_y_, idx);
                else
                    max_x_ = std::max(max_x_, idx);
                int k = parse_power();
                if (e.size() < idx)
                    e.resize(idx, 0);
                e[idx - 1] += k;
                any = true;
            } else {
                if (!any)
                    fail("expected a polynomial term");
                break;
            }
            std::size_t save = pos_;
            if (!eat("*")) {
                pos_ = save;
                break;
            }
        }
        std::map<int, Rat> tc;
        tc[tdeg] = coeff;
        return {std::move(e), std::move(tc)};
    }

    int parse_power()
    {
        std::size_t save = pos_;
        if (eat("^")) {
            long long k = parse_int();
            if (k < 0)
                fail("negative powers are not allowed");
            return static_cast<int>(k);
        }
        pos_ = save;
        return 1;
    }

    std::string text_;
    std::size_t pos_ = 0;
    std::size_t max_x_ = 0;
    std::size_t max_y_ = 0;
    std::size_t max_l_ = 0;
};

} // namespace detail

inline SemiAlgebraicCondition parse_condition(const std::string& text)
{
    return detail::ConditionParser(text).parse();
}

// Rendering (round-trip with the parser).

inline std::string poly_string(const TPolynomial& p, char var)
{
    if (p.terms.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, tc] : p.terms) {
        for (const auto& [d, c] : tc) {
            Rat a = c < 0 ? Rat(-c) : c;
            std::string piece;
            std::string mono;
            if (d > 0) {
                mono += "t";
                if (d > 1)
                    mono += "^" + std::to_string(d);
            }
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0)
                    continue;
                if (!mono.empty())
                    mono += "*";
                mono += var;
                mono += std::to_string(i + 1);
                if (e[i] > 1)
                    mono += "^" + std::to_string(e[i]);
            }
            std::ostringstream as;
            as << a;
            if (mono.empty())
                piece = as.str();
            else if (a == 1)
                piece = mono;
            else
                piece = as.str() + "*" + mono;
            if (first) {
                os << (c < 0 ? "-" : "") << piece;
                first = false;
            } else {
                os << (c < 0 ? " - " : " + ") << piece;
            }
        }
    }
    return os.str();
}

inline std::string to_string(const CondPtr& n)
{
    switch (n->kind) {
    case CondKind::Sal1: {
        std::string s = "ord(" + poly_string(n->f1, 'x') + ") >= ord(" + poly_string(n->f2, 'x') + ")";
        LinearForm zero(n->L.nvars());
        if (!(n->L == zero))
            s += " + " + n->L.to_string();
        return s;
    }
    case CondKind::Sal2:
        return "ord(" + poly_string(n->f1, 'x') + ") === " + n->L.to_string() + " mod " +
               std::to_string(n->d);
    case CondKind::Sal3: {
        std::string s = "acpoly(" + poly_string(n->g, 'y') + "; ";
        for (std::size_t i = 0; i < n->fs.size(); ++i) {
            if (i)
                s += ", ";
            s += poly_string(n->fs[i], 'x');
        }
        s += ") = 0";
        return s;
    }
    case CondKind::And:
    case CondKind::Or: {
        std::string sep = n->kind == CondKind::And ? " && " : " || ";
        std::string out;
        for (std::size_t i = 0; i < n->kids.size(); ++i) {
            if (i)
                out += sep;
            const auto& k = n->kids[i];
            bool wrap = k->kind == CondKind::And || k->kind == CondKind::Or;
            out += wrap ? "(" + to_string(k) + ")" : to_string(k);
        }
        return out;
    }
    case CondKind::Not:
        return "!(" + to_string(n->kids[0]) + ")";
    }
    return "";
}

inline std::string to_string(const SemiAlgebraicCondition& c) { return to_string(c.node); }

} // namespace semialg
} // namespace motivic

#endif
