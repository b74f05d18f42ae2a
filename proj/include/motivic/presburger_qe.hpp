#ifndef MOTIVIC_PRESBURGER_QE_HPP
#define MOTIVIC_PRESBURGER_QE_HPP

#include <numeric>

#include "motivic/presburger.hpp"

namespace motivic {
namespace presburger {

namespace detail {

/// Negation-normal form; negation survives only directly above MOD atoms.
inline NodePtr nnf(const NodePtr& n, bool negated)
{
    switch (n->kind) {
    case Kind::True:
        return make_bool(!negated);
    case Kind::False:
        return make_bool(negated);
    case Kind::AtomGe: {
        if (!negated)
            return n;
        // !(L >= 0)  <=>  -L - 1 >= 0
        LinearForm f = -n->form;
        f.constant -= 1;
        return make_ge(std::move(f));
    }
    case Kind::AtomMod:
        return negated ? make_not(n) : n;
    case Kind::Not:
        return nnf(n->kids[0], !negated);
    case Kind::And:
    case Kind::Or: {
        std::vector<NodePtr> kids;
        for (const auto& k : n->kids)
            kids.push_back(nnf(k, negated));
        Kind kind = (n->kind == Kind::And) == !negated ? Kind::And : Kind::Or;
        return make_nary(kind, std::move(kids));
    }
    case Kind::Exists:
        if (negated)
            throw validation_error("cannot negate a quantifier during elimination");
        return make_exists(n->var, nnf(n->kids[0], false));
    }
    return n;
}

/// Rewrite every literal so the eliminated variable occurs with coefficient
/// +1 or -1 in GE literals and +1 in MOD literals, against y = delta * x.
inline NodePtr unify_coefficient(const NodePtr& n, std::size_t var, long long delta)
{
    switch (n->kind) {
    case Kind::AtomGe: {
        long long a = n->form.coeff(var);
        if (a == 0)
            return n;
        long long k = delta / (a < 0 ? -a : a);
        LinearForm f = n->form.scaled(k);
        f.coeffs[var] = a < 0 ? -1 : 1; // stands for -y or +y
        return make_ge(std::move(f));
    }
    case Kind::AtomMod: {
        long long a = n->form.coeff(var);
        if (a == 0)
            return n;
        long long k = delta / (a < 0 ? -a : a);
        LinearForm f = n->form.scaled(a < 0 ? -k : k);
        f.coeffs[var] = 1;
        return make_mod(std::move(f), n->modulus * k);
    }
    case Kind::Not:
        return make_not(unify_coefficient(n->kids[0], var, delta));
    case Kind::And:
    case Kind::Or: {
        std::vector<NodePtr> kids;
        for (const auto& k : n->kids)
            kids.push_back(unify_coefficient(k, var, delta));
        return make_nary(n->kind, std::move(kids));
    }
    default:
        return n;
    }
}

/// Substitute y := value into literals produced by unify_coefficient.
inline NodePtr substitute_unit_var(const NodePtr& n, std::size_t var, const LinearForm& value)
{
    switch (n->kind) {
    case Kind::AtomGe:
    case Kind::AtomMod: {
        long long a = n->form.coeff(var);
        if (a == 0)
            return n;
        LinearForm f = n->form.substituted(var, value);
        if (n->kind == Kind::AtomGe)
            return make_ge(std::move(f));
        return make_mod(std::move(f), n->modulus);
    }
    case Kind::Not:
        return make_not(substitute_unit_var(n->kids[0], var, value));
    case Kind::And:
    case Kind::Or: {
        std::vector<NodePtr> kids;
        for (const auto& k : n->kids)
            kids.push_back(substitute_unit_var(k, var, value));
        return make_nary(n->kind, std::move(kids));
    }
    default:
        return n;
    }
}

/// The minus-infinity projection: GE literals mentioning y become constant,
/// congruences keep y := j.
inline NodePtr minus_infinity(const NodePtr& n, std::size_t var, long long j)
{
    switch (n->kind) {
    case Kind::AtomGe: {
        long long a = n->form.coeff(var);
        if (a == 0)
            return n;
        return make_bool(a < 0); // +y: false far down, -y: true
    }
    case Kind::AtomMod: {
        if (n->form.coeff(var) == 0)
            return n;
        LinearForm j_form(n->form.nvars());
        j_form.constant = j;
        LinearForm f = n->form.substituted(var, j_form);
        return make_mod(std::move(f), n->modulus);
    }
    case Kind::Not:
        return make_not(minus_infinity(n->kids[0], var, j));
    case Kind::And:
    case Kind::Or: {
        std::vector<NodePtr> kids;
        for (const auto& k : n->kids)
            kids.push_back(minus_infinity(k, var, j));
        return make_nary(n->kind, std::move(kids));
    }
    default:
        return n;
    }
}

struct VarLiteralScan {
    long long coeff_lcm = 1;
    long long mod_lcm = 1;
    bool present = false;
};

inline void scan_var(const NodePtr& n, std::size_t var, VarLiteralScan& s)
{
    switch (n->kind) {
    case Kind::AtomGe:
    case Kind::AtomMod: {
        long long a = n->form.coeff(var);
        if (a != 0) {
            s.present = true;
            s.coeff_lcm = std::lcm(s.coeff_lcm, a < 0 ? -a : a);
        }
        return;
    }
    case Kind::Not:
    case Kind::And:
    case Kind::Or:
        for (const auto& k : n->kids)
            scan_var(k, var, s);
        return;
    default:
        return;
    }
}

inline void scan_moduli(const NodePtr& n, std::size_t var, long long& m)
{
    switch (n->kind) {
    case Kind::AtomMod:
        if (n->form.coeff(var) != 0)
            m = std::lcm(m, n->modulus);
        return;
    case Kind::Not:
    case Kind::And:
    case Kind::Or:
        for (const auto& k : n->kids)
            scan_moduli(k, var, m);
        return;
    default:
        return;
    }
}

/// Lower-bound terms: for each literal (+y + rho >= 0), the term -rho - 1.
inline void collect_lower_bounds(const NodePtr& n, std::size_t var, std::vector<LinearForm>& out)
{
    switch (n->kind) {
    case Kind::AtomGe: {
        long long a = n->form.coeff(var);
        if (a == 1) {
            LinearForm rho = n->form;
            rho.coeffs[var] = 0;
            LinearForm b = -rho;
            b.constant -= 1;
            out.push_back(std::move(b));
        }
        return;
    }
    case Kind::Not:
    case Kind::And:
    case Kind::Or:
        for (const auto& k : n->kids)
            collect_lower_bounds(k, var, out);
        return;
    default:
        return;
    }
}

/// One Cooper elimination step on a quantifier-free matrix.
inline NodePtr cooper_step(const NodePtr& matrix, std::size_t var)
{
    NodePtr f = nnf(matrix, false);
    VarLiteralScan scan;
    scan_var(f, var, scan);
    if (!scan.present)
        return f;
    long long delta = scan.coeff_lcm;
    NodePtr g = unify_coefficient(f, var, delta);
    // y = delta * x must satisfy y = 0 mod delta
    g = make_and({g, make_mod(LinearForm::variable(std::max(g->form.nvars(), var + 1), var), delta)});
    // the divisibility period
    long long M = delta;
    scan_moduli(g, var, M);
    if (M > 1'000'000)
        throw validation_error("quantifier elimination period exceeds the supported range");

    std::vector<LinearForm> bounds;
    collect_lower_bounds(g, var, bounds);
    std::sort(bounds.begin(), bounds.end(), [](const LinearForm& a, const LinearForm& b) {
        if (a.constant != b.constant)
            return a.constant < b.constant;
        return a.coeffs < b.coeffs;
    });
    bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());

    std::vector<NodePtr> disjuncts;
    for (long long j = 1; j <= M; ++j)
        disjuncts.push_back(minus_infinity(g, var, j));
    for (const auto& b : bounds) {
        for (long long j = 1; j <= M; ++j) {
            LinearForm value = b;
            value.constant += j;
            disjuncts.push_back(substitute_unit_var(g, var, value));
        }
    }
    return make_or(std::move(disjuncts));
}

inline NodePtr eliminate_node(const NodePtr& n)
{
    switch (n->kind) {
    case Kind::Not:
        return make_not(eliminate_node(n->kids[0]));
    case Kind::And:
    case Kind::Or: {
        std::vector<NodePtr> kids;
        for (const auto& k : n->kids)
            kids.push_back(eliminate_node(k));
        return make_nary(n->kind, std::move(kids));
    }
    case Kind::Exists: {
        NodePtr body = eliminate_node(n->kids[0]);
        return cooper_step(body, n->var);
    }
    default:
        return n;
    }
}

} // namespace detail

/// Cooper's algorithm: an equivalent quantifier-free formula over the same
/// free variables. Total.
inline Formula eliminate_quantifiers(const Formula& f)
{
    Formula out;
    out.node = detail::eliminate_node(f.node);
    out.nvars = f.nvars;
    return out;
}

/// Projection: eliminate one free variable existentially.
inline Formula project(const Formula& f, std::size_t var)
{
    if (var >= f.nvars)
        throw validation_error("projection variable out of range");
    auto fv = free_vars(f);
    if (!fv.count(var)) {
        // projecting a variable the formula does not mention is the identity
        Formula out = f;
        out.node = detail::eliminate_node(f.node);
        return out;
    }
    Formula out;
    out.node = detail::eliminate_node(make_exists(var, f.node));
    out.nvars = f.nvars;
    return out;
}

/// Decide a sentence, or satisfiability of a formula over N^r when
/// over_naturals is set (existentially closing all free variables).
inline bool satisfiable(const Formula& f, bool over_naturals = true)
{
    NodePtr n = f.node;
    for (std::size_t v : free_vars(f)) {
        if (over_naturals)
            n = make_and({n, make_ge(LinearForm::variable(f.nvars, v))});
        n = make_exists(v, n);
    }
    n = detail::eliminate_node(n);
    if (n->kind == Kind::True)
        return true;
    if (n->kind == Kind::False)
        return false;
    // ground formula with no free variables must fold to a constant
    std::vector<long long> empty;
    detail::EvalBudget budget;
    return detail::eval_node(n, empty, budget);
}

} // namespace presburger
} // namespace motivic

#endif
