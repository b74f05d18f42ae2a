#ifndef MOTIVIC_PRESBURGER_HPP
#define MOTIVIC_PRESBURGER_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "motivic/errors.hpp"

namespace motivic {
namespace presburger {

/// Integer affine form c_0 + sum c_i * l_i over variables l1..lr.
struct LinearForm {
    std::vector<long long> coeffs;
    long long constant = 0;

    LinearForm() = default;
    explicit LinearForm(std::size_t nvars, long long c = 0) : coeffs(nvars, 0), constant(c) {}

    static LinearForm variable(std::size_t nvars, std::size_t idx, long long scale = 1)
    {
        LinearForm f(nvars);
        f.coeffs[idx] = scale;
        return f;
    }

    std::size_t nvars() const { return coeffs.size(); }

    long long coeff(std::size_t i) const { return i < coeffs.size() ? coeffs[i] : 0; }

    void resize(std::size_t nvars) { coeffs.resize(nvars, 0); }

    LinearForm operator-() const
    {
        LinearForm f = *this;
        for (auto& c : f.coeffs)
            c = -c;
        f.constant = -f.constant;
        return f;
    }

    friend LinearForm operator+(LinearForm a, const LinearForm& b)
    {
        a.resize(std::max(a.nvars(), b.nvars()));
        for (std::size_t i = 0; i < b.coeffs.size(); ++i)
            a.coeffs[i] += b.coeffs[i];
        a.constant += b.constant;
        return a;
    }

    friend LinearForm operator-(const LinearForm& a, const LinearForm& b) { return a + (-b); }

    LinearForm scaled(long long k) const
    {
        LinearForm f = *this;
        for (auto& c : f.coeffs)
            c *= k;
        f.constant *= k;
        return f;
    }

    long long eval(const std::vector<long long>& point) const
    {
        long long v = constant;
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            v += coeffs[i] * (i < point.size() ? point[i] : 0);
        return v;
    }

    /// Substitute variable idx by another form (its idx-coefficient must not
    /// reference itself).
    LinearForm substituted(std::size_t idx, const LinearForm& value) const
    {
        LinearForm f = *this;
        long long k = f.coeffs[idx];
        f.coeffs[idx] = 0;
        return f + value.scaled(k);
    }

    bool is_constant() const
    {
        return std::all_of(coeffs.begin(), coeffs.end(), [](long long c) { return c == 0; });
    }

    bool operator==(const LinearForm& o) const
    {
        if (constant != o.constant)
            return false;
        std::size_t n = std::max(nvars(), o.nvars());
        for (std::size_t i = 0; i < n; ++i)
            if (coeff(i) != o.coeff(i))
                return false;
        return true;
    }

    std::string to_string() const
    {
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            long long c = coeffs[i];
            if (c == 0)
                continue;
            long long a = c < 0 ? -c : c;
            if (first) {
                if (c < 0)
                    os << "-";
                first = false;
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            if (a != 1)
                os << a << "*";
            os << "l" << (i + 1);
        }
        if (first) {
            os << constant;
        } else if (constant != 0) {
            os << (constant < 0 ? " - " : " + ") << (constant < 0 ? -constant : constant);
        }
        return os.str();
    }
};

enum class Kind { True, False, AtomGe, AtomMod, Not, And, Or, Exists };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Immutable formula tree. AtomGe is L >= 0; AtomMod is L = 0 mod d.
struct Node {
    Kind kind;
    LinearForm form;             // atoms
    long long modulus = 0;       // AtomMod
    std::size_t var = 0;         // Exists
    std::vector<NodePtr> kids;   // Not (1), And/Or (n), Exists (1)
};

inline NodePtr make_bool(bool b)
{
    auto n = std::make_shared<Node>();
    n->kind = b ? Kind::True : Kind::False;
    return n;
}

inline NodePtr make_ge(LinearForm f)
{
    if (f.is_constant())
        return make_bool(f.constant >= 0);
    auto n = std::make_shared<Node>();
    n->kind = Kind::AtomGe;
    n->form = std::move(f);
    return n;
}

inline NodePtr make_mod(LinearForm f, long long d)
{
    if (d < 1)
        throw validation_error("congruence modulus must be >= 1");
    if (d == 1)
        return make_bool(true);
    if (f.is_constant())
        return make_bool(((f.constant % d) + d) % d == 0);
    auto n = std::make_shared<Node>();
    n->kind = Kind::AtomMod;
    n->form = std::move(f);
    n->modulus = d;
    return n;
}

inline NodePtr make_not(NodePtr k)
{
    if (k->kind == Kind::True)
        return make_bool(false);
    if (k->kind == Kind::False)
        return make_bool(true);
    if (k->kind == Kind::Not)
        return k->kids[0];
    auto n = std::make_shared<Node>();
    n->kind = Kind::Not;
    n->kids = {std::move(k)};
    return n;
}

inline NodePtr make_nary(Kind kind, std::vector<NodePtr> kids)
{
    // flatten, fold neutral/absorbing constants
    std::vector<NodePtr> out;
    bool absorb = false;
    for (auto& k : kids) {
        if (k->kind == kind) {
            for (const auto& kk : k->kids)
                out.push_back(kk);
        } else if (k->kind == Kind::True) {
            if (kind == Kind::Or)
                absorb = true;
        } else if (k->kind == Kind::False) {
            if (kind == Kind::And)
                absorb = true;
        } else {
            out.push_back(std::move(k));
        }
    }
    if (absorb)
        return make_bool(kind == Kind::Or);
    if (out.empty())
        return make_bool(kind == Kind::And);
    if (out.size() == 1)
        return out[0];
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->kids = std::move(out);
    return n;
}

inline NodePtr make_and(std::vector<NodePtr> kids) { return make_nary(Kind::And, std::move(kids)); }
inline NodePtr make_or(std::vector<NodePtr> kids) { return make_nary(Kind::Or, std::move(kids)); }

inline NodePtr make_exists(std::size_t var, NodePtr body)
{
    if (body->kind == Kind::True || body->kind == Kind::False)
        return body;
    auto n = std::make_shared<Node>();
    n->kind = Kind::Exists;
    n->var = var;
    n->kids = {std::move(body)};
    return n;
}

/// A Presburger formula plus its ambient variable count. Variables are
/// identified by index everywhere; Exists binds an index.
struct Formula {
    NodePtr node;
    std::size_t nvars = 0;
};

inline void collect_free_vars(const NodePtr& n, std::set<std::size_t>& out,
                              std::set<std::size_t>& bound)
{
    switch (n->kind) {
    case Kind::True:
    case Kind::False:
        return;
    case Kind::AtomGe:
    case Kind::AtomMod:
        for (std::size_t i = 0; i < n->form.coeffs.size(); ++i)
            if (n->form.coeffs[i] != 0 && !bound.count(i))
                out.insert(i);
        return;
    case Kind::Not:
    case Kind::And:
    case Kind::Or:
        for (const auto& k : n->kids)
            collect_free_vars(k, out, bound);
        return;
    case Kind::Exists: {
        bound.insert(n->var);
        collect_free_vars(n->kids[0], out, bound);
        bound.erase(n->var);
        return;
    }
    }
}

inline std::set<std::size_t> free_vars(const Formula& f)
{
    std::set<std::size_t> out, bound;
    collect_free_vars(f.node, out, bound);
    return out;
}

inline bool is_quantifier_free(const NodePtr& n)
{
    if (n->kind == Kind::Exists)
        return false;
    for (const auto& k : n->kids)
        if (!is_quantifier_free(k))
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// Evaluation. Quantifiers are decided by bounded search: a witness, if one
// exists, lies within lcm-of-moduli of a bound boundary or of zero, so the
// candidate set below is complete. A budget guard rejects pathological
// nestings; run quantifier elimination first for those.
// ---------------------------------------------------------------------------

namespace detail {

struct EvalBudget {
    long long remaining = 20'000'000;
    void spend(long long n)
    {
        remaining -= n;
        if (remaining < 0)
            throw validation_error("quantifier search budget exhausted; eliminate quantifiers first");
    }
};

inline bool eval_node(const NodePtr& n, std::vector<long long>& point, EvalBudget& budget);

inline void collect_var_atoms(const NodePtr& n, std::size_t var,
                              std::vector<const Node*>& ge, long long& mod_lcm)
{
    switch (n->kind) {
    case Kind::AtomGe:
        if (n->form.coeff(var) != 0)
            ge.push_back(n.get());
        return;
    case Kind::AtomMod:
        if (n->form.coeff(var) != 0)
            mod_lcm = std::lcm(mod_lcm, n->modulus);
        return;
    case Kind::Not:
    case Kind::And:
    case Kind::Or:
        for (const auto& k : n->kids)
            collect_var_atoms(k, var, ge, mod_lcm);
        return;
    case Kind::Exists:
        // inner quantifier: still collect this var's atoms below it
        if (n->var != var)
            collect_var_atoms(n->kids[0], var, ge, mod_lcm);
        return;
    default:
        return;
    }
}

inline bool eval_exists(const Node* n, std::vector<long long>& point, EvalBudget& budget)
{
    std::size_t var = n->var;
    std::vector<const Node*> ge;
    long long M = 1;
    collect_var_atoms(n->kids[0], var, ge, M);
    // candidate windows: within 2M of each boundary and of zero
    std::set<long long> candidates;
    auto window = [&](long long center) {
        for (long long d = -2 * M; d <= 2 * M; ++d)
            candidates.insert(center + d);
    };
    window(0);
    for (const Node* g : ge) {
        long long a = g->form.coeff(var);
        LinearForm rest = g->form;
        rest.coeffs[var] = 0;
        long long r = rest.eval(point);
        // boundary of a*x + r >= 0
        long long num = -r;
        long long q = num / a;
        window(q);
        window(q + (num % a != 0 ? (a > 0 ? 1 : -1) : 0));
    }
    budget.spend(static_cast<long long>(candidates.size()));
    if (point.size() <= var)
        point.resize(var + 1, 0);
    long long saved = point[var];
    for (long long c : candidates) {
        point[var] = c;
        if (eval_node(n->kids[0], point, budget)) {
            point[var] = saved;
            return true;
        }
    }
    point[var] = saved;
    return false;
}

inline bool eval_node(const NodePtr& n, std::vector<long long>& point, EvalBudget& budget)
{
    budget.spend(1);
    switch (n->kind) {
    case Kind::True:
        return true;
    case Kind::False:
        return false;
    case Kind::AtomGe:
        return n->form.eval(point) >= 0;
    case Kind::AtomMod: {
        long long v = n->form.eval(point) % n->modulus;
        return v == 0;
    }
    case Kind::Not:
        return !eval_node(n->kids[0], point, budget);
    case Kind::And:
        for (const auto& k : n->kids)
            if (!eval_node(k, point, budget))
                return false;
        return true;
    case Kind::Or:
        for (const auto& k : n->kids)
            if (eval_node(k, point, budget))
                return true;
        return false;
    case Kind::Exists:
        return eval_exists(n.get(), point, budget);
    }
    return false;
}

} // namespace detail

/// Truth of f at an integer point (values indexed by variable).
inline bool evaluate(const Formula& f, const std::vector<long long>& point)
{
    std::vector<long long> p = point;
    p.resize(std::max(p.size(), f.nvars), 0);
    detail::EvalBudget budget;
    return detail::eval_node(f.node, p, budget);
}

/// All points of [0,B]^nvars satisfying a quantifier-free formula,
/// lexicographically sorted.
inline std::vector<std::vector<long long>> enumerate(const Formula& f, long long B)
{
    if (!is_quantifier_free(f.node))
        throw validation_error("enumerate requires a quantifier-free formula");
    if (B < 0)
        throw validation_error("box bound must be >= 0");
    std::vector<std::vector<long long>> out;
    std::vector<long long> p(f.nvars, 0);
    detail::EvalBudget budget;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == f.nvars) {
            if (detail::eval_node(f.node, p, budget))
                out.push_back(p);
            return;
        }
        for (long long v = 0; v <= B; ++v) {
            p[i] = v;
            rec(i + 1);
        }
        p[i] = 0;
    };
    rec(0);
    return out;
}

// ---------------------------------------------------------------------------
// Parser for the formula DSL:
//   formula := or-expr
//   or      := and ('||' and)*
//   and     := unary ('&&' unary)*
//   unary   := '!' unary | 'exists' var '.' unary | '(' formula ')' | atom
//   atom    := linexpr (('>='|'<='|'>'|'<'|'=') linexpr ['mod' int])
// Equalities without 'mod' desugar to a conjunction of two inequalities;
// congruences 'a = b mod d' become (P2) atoms.
// ---------------------------------------------------------------------------

namespace detail {

class FormulaParser {
public:
    explicit FormulaParser(std::string text) : text_(std::move(text)) {}

    Formula parse()
    {
        NodePtr n = parse_or();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected trailing input");
        Formula f;
        f.node = pad(n);
        f.nvars = max_var_;
        return f;
    }

    LinearForm parse_linear()
    {
        LinearForm f = parse_linexpr();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected trailing input");
        f.resize(max_var_);
        return f;
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
            // a keyword must not be a prefix of an identifier
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

    NodePtr parse_or()
    {
        std::vector<NodePtr> kids{parse_and()};
        while (eat("||"))
            kids.push_back(parse_and());
        return make_or(std::move(kids));
    }

    NodePtr parse_and()
    {
        std::vector<NodePtr> kids{parse_unary()};
        while (eat("&&"))
            kids.push_back(parse_unary());
        return make_and(std::move(kids));
    }

    NodePtr parse_unary()
    {
        skip_ws();
        if (eat("!"))
            return make_not(parse_unary());
        if (eat("exists")) {
            std::size_t var = parse_var();
            skip_ws();
            if (!eat("."))
                fail("expected '.' after quantified variable");
            if (bound_.count(var))
                fail("variable is already bound in an enclosing quantifier");
            bound_.insert(var);
            NodePtr body = parse_unary();
            bound_.erase(var);
            return make_exists(var, std::move(body));
        }
        skip_ws();
        std::size_t save = pos_;
        if (eat("(")) {
            // either a parenthesized formula or a parenthesized linear
            // expression starting an atom; try formula first
            std::size_t after = pos_;
            try {
                NodePtr f = parse_or();
                skip_ws();
                if (eat(")"))
                    return f;
            } catch (const parse_error&) {
                // fall through to atom
            }
            pos_ = save;
            (void)after;
        }
        return parse_atom();
    }

    std::size_t parse_var()
    {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != 'l')
            fail("expected a variable l1, l2, ...");
        std::size_t p = pos_ + 1;
        if (p >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[p])))
            fail("expected a variable index after 'l'");
        std::size_t idx = 0;
        while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
            idx = idx * 10 + static_cast<std::size_t>(text_[p] - '0');
            ++p;
        }
        if (idx == 0)
            fail("variable indices start at 1");
        pos_ = p;
        max_var_ = std::max(max_var_, idx);
        return idx - 1;
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

    // term := int ['*' var] | var ['*' int]
    LinearForm parse_term()
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == 'l' && pos_ + 1 < text_.size() &&
            std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
            std::size_t idx = parse_var();
            long long k = 1;
            std::size_t save = pos_;
            if (eat("*")) {
                skip_ws();
                if (pos_ < text_.size() &&
                    (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '-'))
                    k = parse_int();
                else
                    pos_ = save;
            }
            LinearForm f(max_var_);
            f.coeffs[idx] = k;
            return f;
        }
        long long v = parse_int();
        if (eat("*")) {
            std::size_t idx = parse_var();
            LinearForm f(max_var_);
            f.coeffs[idx] = v;
            return f;
        }
        LinearForm f(max_var_);
        f.constant = v;
        return f;
    }

    LinearForm parse_linexpr()
    {
        skip_ws();
        bool lead_neg = false;
        if (pos_ < text_.size() && text_[pos_] == '-') {
            // a leading sign applies to the first term, so that both "-l1"
            // and "-2*l1" parse; parse_term itself handles "-2"
            std::size_t save = pos_;
            ++pos_;
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == 'l')
                lead_neg = true;
            else
                pos_ = save;
        }
        LinearForm acc = parse_term();
        if (lead_neg)
            acc = -acc;
        for (;;) {
            skip_ws();
            if (eat("+")) {
                acc = acc + parse_term();
            } else if (pos_ < text_.size() && text_[pos_] == '-') {
                ++pos_;
                acc = acc - parse_term();
            } else {
                break;
            }
        }
        acc.resize(max_var_);
        return acc;
    }

    NodePtr parse_atom()
    {
        LinearForm lhs = parse_linexpr();
        skip_ws();
        enum { GE, LE, GT, LT, EQ } op;
        if (eat(">="))
            op = GE;
        else if (eat("<="))
            op = LE;
        else if (eat(">"))
            op = GT;
        else if (eat("<"))
            op = LT;
        else if (eat("==") || eat("="))
            op = EQ;
        else
            fail("expected a comparison operator");
        LinearForm rhs = parse_linexpr();
        LinearForm diff = lhs - rhs;
        if (op == EQ) {
            skip_ws();
            if (eat("mod")) {
                long long d = parse_int();
                if (d < 1)
                    fail("modulus must be >= 1");
                return make_mod(diff, d);
            }
            return make_and({make_ge(diff), make_ge(-diff)});
        }
        switch (op) {
        case GE:
            return make_ge(diff);
        case LE:
            return make_ge(-diff);
        case GT: {
            LinearForm f = diff;
            f.constant -= 1;
            return make_ge(f);
        }
        case LT: {
            LinearForm f = -diff;
            f.constant -= 1;
            return make_ge(f);
        }
        default:
            fail("unreachable");
        }
    }

    // normalize all stored forms to the final variable count
    NodePtr pad(const NodePtr& n)
    {
        switch (n->kind) {
        case Kind::AtomGe: {
            LinearForm f = n->form;
            f.resize(max_var_);
            return make_ge(std::move(f));
        }
        case Kind::AtomMod: {
            LinearForm f = n->form;
            f.resize(max_var_);
            return make_mod(std::move(f), n->modulus);
        }
        case Kind::Not:
            return make_not(pad(n->kids[0]));
        case Kind::And:
        case Kind::Or: {
            std::vector<NodePtr> kids;
            for (const auto& k : n->kids)
                kids.push_back(pad(k));
            return make_nary(n->kind, std::move(kids));
        }
        case Kind::Exists:
            return make_exists(n->var, pad(n->kids[0]));
        default:
            return n;
        }
    }

    std::string text_;
    std::size_t pos_ = 0;
    std::size_t max_var_ = 0;
    std::set<std::size_t> bound_;
};

} // namespace detail

inline Formula parse_formula(const std::string& text)
{
    return detail::FormulaParser(text).parse();
}

inline LinearForm parse_linear_form(const std::string& text)
{
    return detail::FormulaParser(text).parse_linear();
}

inline std::string to_string(const NodePtr& n)
{
    switch (n->kind) {
    case Kind::True:
        return "0 >= 0";
    case Kind::False:
        return "0 >= 1";
    case Kind::AtomGe:
        return n->form.to_string() + " >= 0";
    case Kind::AtomMod:
        return n->form.to_string() + " = 0 mod " + std::to_string(n->modulus);
    case Kind::Not:
        return "!(" + to_string(n->kids[0]) + ")";
    case Kind::And:
    case Kind::Or: {
        std::string sep = n->kind == Kind::And ? " && " : " || ";
        std::string out;
        for (std::size_t i = 0; i < n->kids.size(); ++i) {
            if (i)
                out += sep;
            const auto& k = n->kids[i];
            bool wrap = k->kind == Kind::And || k->kind == Kind::Or || k->kind == Kind::Exists;
            out += wrap ? "(" + to_string(k) + ")" : to_string(k);
        }
        return out;
    }
    case Kind::Exists:
        return "exists l" + std::to_string(n->var + 1) + " . (" + to_string(n->kids[0]) + ")";
    }
    return "";
}

inline std::string to_string(const Formula& f) { return to_string(f.node); }

} // namespace presburger
} // namespace motivic

#endif
