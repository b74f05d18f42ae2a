#include <catch_amalgamated.hpp>

#include "motivic/rational_series.hpp"
#include "test_helpers.hpp"

using namespace motivic;

namespace {

LocalizedMotivicElement lpow(int e) { return LocalizedMotivicElement(MotivicElement::L_pow(e)); }

MotivicRationalFunction inv_atom(int nvars, int a, std::size_t var)
{
    // 1 / (1 - L^-a T_var)
    detail::TPoly num;
    num[ExpVec(static_cast<std::size_t>(nvars), 0)] = LocalizedMotivicElement::one();
    return MotivicRationalFunction(nvars, std::move(num),
                                   {TAtom(a, unit_vec(static_cast<std::size_t>(nvars), var))});
}

/// brute-force truncated convolution
TruncatedSeries convolve(const TruncatedSeries& a, const TruncatedSeries& b)
{
    TruncatedSeries out;
    out.nvars = a.nvars;
    out.bound = std::min(a.bound, b.bound);
    for (const auto& [n, cn] : a.coeffs)
        for (const auto& [m, cm] : b.coeffs) {
            ExpVec s(n.size());
            for (std::size_t i = 0; i < s.size(); ++i)
                s[i] = n[i] + m[i];
            if (total_degree(s) > out.bound)
                continue;
            LocalizedMotivicElement cur = out.at(s);
            cur += cn * cm;
            out.set(s, cur);
        }
    return out;
}

/// termwise substitution into a truncated expansion (requires every
/// substitution to raise total degree)
TruncatedSeries substitute_series(const TruncatedSeries& src,
                                  const std::vector<MotivicRationalFunction::Substitution>& subs,
                                  int target_vars, int N)
{
    TruncatedSeries out;
    out.nvars = target_vars;
    out.bound = N;
    for (const auto& [n, c] : src.coeffs) {
        long long shift = 0;
        ExpVec m(static_cast<std::size_t>(target_vars), 0);
        for (std::size_t j = 0; j < n.size(); ++j) {
            shift += static_cast<long long>(n[j]) * subs[j].c;
            for (int i = 0; i < target_vars; ++i)
                m[static_cast<std::size_t>(i)] += n[j] * subs[j].e[static_cast<std::size_t>(i)];
        }
        if (total_degree(m) > N)
            continue;
        LocalizedMotivicElement cur = out.at(m);
        cur += c * lpow(static_cast<int>(-shift));
        out.set(m, cur);
    }
    return out;
}

} // namespace

TEST_CASE("additive and multiplicative identities")
{
    MotivicRationalFunction f = inv_atom(1, 1, 0);
    CHECK((f + MotivicRationalFunction::zero(1)).equals(f));
    // (1 - L^-1 T)^-1 * (1 - L^-1 T) = 1
    detail::TPoly atom_poly;
    atom_poly[ExpVec{0}] = LocalizedMotivicElement::one();
    atom_poly[ExpVec{1}] = -lpow(-1);
    MotivicRationalFunction atom(1, std::move(atom_poly), {});
    MotivicRationalFunction prod = f * atom;
    CHECK(prod.equals(MotivicRationalFunction::one(1)));
    CHECK(prod.den().empty());

    SymbolRegistry reg;
    auto s = reg.declare("S", 1);
    LocalizedMotivicElement cs(MotivicElement::symbol_class(reg, s));
    MotivicRationalFunction scaled = f.scaled(cs);
    TruncatedSeries t = scaled.expand(3);
    for (const auto& [n, c] : t.coeffs)
        CHECK(c.equals(cs * lpow(-n[0])));
}

TEST_CASE("variable count mismatch")
{
    CHECK_THROWS_AS(inv_atom(1, 1, 0) + inv_atom(2, 1, 0), validation_error);
}

TEST_CASE("geometric expansion")
{
    TruncatedSeries t = inv_atom(1, 1, 0).expand(2);
    CHECK(t.at(ExpVec{0}).equals(LocalizedMotivicElement::one()));
    CHECK(t.at(ExpVec{1}).equals(lpow(-1)));
    CHECK(t.at(ExpVec{2}).equals(lpow(-2)));
    CHECK(t.coeffs.size() == 3);
}

TEST_CASE("the series of the geometric product lemma")
{
    // m = 1: L^-1 T / (1 - L^-1 T) expands to sum_{n>=1} L^-n T^n
    MotivicRationalFunction s1 = geometric_series_product(1, 1);
    TruncatedSeries t = s1.expand(5);
    CHECK(t.at(ExpVec{0}).is_zero());
    for (int n = 1; n <= 5; ++n)
        CHECK(t.at(ExpVec{n}).equals(lpow(-n)));

    // m = 2: numerator L^-2 T1 T2, atoms (1, e1), (1, e2)
    MotivicRationalFunction s2 = geometric_series_product(1, 2);
    REQUIRE(s2.den().size() == 2);
    CHECK(s2.num().size() == 1);
    TruncatedSeries t2 = s2.expand(6);
    for (int n1 = 0; n1 <= 6; ++n1)
        for (int n2 = 0; n2 + n1 <= 6; ++n2) {
            LocalizedMotivicElement want =
                (n1 >= 1 && n2 >= 1) ? lpow(-(n1 + n2)) : LocalizedMotivicElement::zero();
            CHECK(t2.at(ExpVec{n1, n2}).equals(want));
        }
}

TEST_CASE("expansion is a ring map")
{
    SymbolRegistry reg;
    reg.declare("A", 1);
    reg.declare("B", 0);
    testutil::ElementGen gen(reg, 2024);
    for (int trial = 0; trial < 20; ++trial) {
        // random small rational functions in two variables
        auto random_mrf = [&]() {
            detail::TPoly num;
            int terms = gen.pick(1, 3);
            for (int t = 0; t < terms; ++t) {
                ExpVec n{gen.pick(0, 2), gen.pick(0, 2)};
                num[n] = LocalizedMotivicElement(gen.element(2));
            }
            std::vector<TAtom> den;
            int atoms = gen.pick(0, 2);
            for (int t = 0; t < atoms; ++t) {
                ExpVec b{gen.pick(0, 1), gen.pick(0, 1)};
                if (total_degree(b) == 0)
                    b[static_cast<std::size_t>(gen.pick(0, 1))] = 1;
                den.emplace_back(gen.pick(0, 2), b);
            }
            return MotivicRationalFunction(2, std::move(num), std::move(den));
        };
        MotivicRationalFunction f = random_mrf(), g = random_mrf();
        int N = 5;
        TruncatedSeries sum = (f + g).expand(N);
        TruncatedSeries want_sum;
        want_sum.nvars = 2;
        want_sum.bound = N;
        for (const auto& [n, c] : f.expand(N).coeffs)
            want_sum.set(n, c);
        for (const auto& [n, c] : g.expand(N).coeffs) {
            LocalizedMotivicElement cur = want_sum.at(n);
            cur += c;
            want_sum.set(n, cur);
        }
        CHECK(sum.equals(want_sum));
        CHECK((f * g).expand(N).equals(convolve(f.expand(N), g.expand(N))));
    }
}

TEST_CASE("monomial substitution")
{
    MotivicRationalFunction f = inv_atom(1, 1, 0);

    // identity substitution
    std::vector<MotivicRationalFunction::Substitution> id(1);
    id[0].c = 0;
    id[0].e = ExpVec{1};
    CHECK(f.substitute_monomials(id, 1).equals(f));

    // T -> 1: (1 - L^-1 T)^-1 becomes L (L - 1)^-1
    std::vector<MotivicRationalFunction::Substitution> to_one(1);
    to_one[0].c = 0;
    to_one[0].e = ExpVec{};
    MotivicRationalFunction g = f.substitute_monomials(to_one, 0);
    LocalizedMotivicElement want(MotivicElement::L_pow(1), {1});
    CHECK(g.to_localized().equals(want));

    // T -> 1 applied to (1 - T)^-1 diverges
    MotivicRationalFunction h = inv_atom(1, 0, 0);
    CHECK_THROWS_AS(h.substitute_monomials(to_one, 0), divergence_error);
}

TEST_CASE("substitution commutes with expansion")
{
    SymbolRegistry reg;
    reg.declare("A", 1);
    testutil::ElementGen gen(reg, 555);
    for (int trial = 0; trial < 15; ++trial) {
        detail::TPoly num;
        for (int t = 0; t < 2; ++t)
            num[ExpVec{gen.pick(0, 1), gen.pick(0, 1)}] = LocalizedMotivicElement(gen.element(2));
        std::vector<TAtom> den;
        den.emplace_back(gen.pick(0, 2), ExpVec{1, 0});
        den.emplace_back(gen.pick(0, 2), ExpVec{0, 1});
        MotivicRationalFunction f(2, std::move(num), std::move(den));
        if (f.is_zero())
            continue;
        // substitutions that never lower total degree
        std::vector<MotivicRationalFunction::Substitution> subs(2);
        subs[0].c = gen.pick(0, 2);
        subs[0].e = ExpVec{1, gen.pick(0, 1)};
        subs[1].c = gen.pick(0, 2);
        subs[1].e = ExpVec{gen.pick(0, 1), 1};
        int N = 5;
        TruncatedSeries direct = f.substitute_monomials(subs, 2).expand(N);
        TruncatedSeries via_series = substitute_series(f.expand(N), subs, 2, N);
        CHECK(direct.equals(via_series));
    }
}

TEST_CASE("cancellation keeps expansions stable")
{
    MotivicRationalFunction f = geometric_series_product(1, 2);
    // multiply numerator and denominator by the same atom
    TAtom extra(2, ExpVec{1, 1});
    detail::TPoly atom_poly;
    atom_poly[ExpVec{0, 0}] = LocalizedMotivicElement::one();
    atom_poly[ExpVec{1, 1}] = -lpow(-2);
    MotivicRationalFunction atom_f(2, std::move(atom_poly), {});
    std::vector<TAtom> den = f.den();
    den.push_back(extra);
    MotivicRationalFunction g(2, (f * atom_f).num(), den);
    CHECK(g.equals(f));
    CHECK(g.expand(6).equals(f.expand(6)));
}

TEST_CASE("numeric specialization of an expansion converges")
{
    // f = product over 2 variables of L^-1 T_i / (1 - L^-1 T_i) at q = 2,
    // T_i = q^-3: closed value (1/16)^2 / (15/16)^2 = 1/225.
    MotivicRationalFunction f = geometric_series_product(1, 2);
    Rat q(2), t(1, 8);
    Rat closed = Rat(1, 225);
    auto partial = [&](int N) {
        Rat acc(0);
        for (const auto& [n, c] : f.expand(N).coeffs)
            acc += c.specialize_counts(q, {}) * motivic::detail::rat_pow(t, total_degree(n));
        return acc;
    };
    Rat e4 = closed - partial(4), e8 = closed - partial(8);
    if (e4 < 0)
        e4 = -e4;
    if (e8 < 0)
        e8 = -e8;
    CHECK(e8 < e4);
    // tail bound: terms at grade k are (k-1) * (1/16)^k
    Rat bound = Rat(10) * motivic::detail::rat_pow(Rat(1, 16), 9) / (Rat(1) - Rat(1, 8));
    CHECK(e8 <= bound);
}

TEST_CASE("rendering")
{
    MotivicRationalFunction f = geometric_series_product(1, 1);
    CHECK(f.to_string() == "(L^-1*T1) / (1 - L^-1*T1)");
    CHECK(MotivicRationalFunction::zero(2).to_string() == "0");
}
