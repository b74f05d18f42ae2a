#include <catch_amalgamated.hpp>

#include <random>

#include "motivic/semialg.hpp"

using namespace motivic;
using namespace motivic::semialg;

namespace {

PowerSeriesValue series(std::initializer_list<std::pair<int, Rat>> coeffs, int trunc)
{
    PowerSeriesValue v;
    v.trunc = trunc;
    for (const auto& [d, c] : coeffs)
        if (d < trunc)
            v.set(d, c);
    return v;
}

} // namespace

TEST_CASE("ord and angular component")
{
    PowerSeriesValue v = series({{2, 1}, {3, 1}}, 10);
    OrdInfo o = ord_t(v);
    CHECK(o.state == OrdInfo::State::Finite);
    CHECK(o.value == 2);

    PowerSeriesValue blank = series({}, 10);
    OrdInfo ob = ord_t(blank);
    CHECK(ob.state == OrdInfo::State::Indeterminate);
    CHECK(ob.lower_bound == 10);
    CHECK(!ac(blank).has_value());

    PowerSeriesValue c = PowerSeriesValue::constant(3);
    CHECK(ord_t(c).state == OrdInfo::State::Finite);
    CHECK(ord_t(c).value == 0);

    CHECK(ord_t(PowerSeriesValue::exact_zero()).state == OrdInfo::State::Infinite);
    CHECK(ac(PowerSeriesValue::exact_zero()) == Rat(0));

    PowerSeriesValue w = series({{3, 2}, {4, 1}}, 10);
    CHECK(ac(w) == Rat(2));
}

TEST_CASE("ord is additive on determinate products")
{
    std::mt19937_64 rng(99);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    for (int t = 0; t < 50; ++t) {
        PowerSeriesValue u, v;
        u.trunc = 12;
        v.trunc = 12;
        int ou = pick(0, 4), ov = pick(0, 4);
        u.set(ou, pick(1, 5));
        v.set(ov, pick(1, 5));
        for (int k = 0; k < 3; ++k) {
            u.set(ou + pick(1, 6), pick(-3, 3));
            v.set(ov + pick(1, 6), pick(-3, 3));
        }
        PowerSeriesValue p = mul(u, v);
        OrdInfo op = ord_t(p);
        REQUIRE(op.state == OrdInfo::State::Finite);
        CHECK(op.value == ou + ov);
    }
}

TEST_CASE("truncation tracking through products")
{
    // (t^3 + unknown above 5) * (t^2 + unknown above 5): coefficients of the
    // product are only certified below 5 + 2 = 7
    PowerSeriesValue u = series({{3, 1}}, 5);
    PowerSeriesValue v = series({{2, 1}}, 5);
    PowerSeriesValue p = mul(u, v);
    REQUIRE(p.trunc.has_value());
    CHECK(*p.trunc == 7);
    CHECK(ord_t(p).value == 5);
}

TEST_CASE("convention tests")
{
    // f1 the certified zero: ord = +infinity
    SemiAlgebraicCondition c1 = parse_condition("ord(x1) === l1 mod 3");
    for (long long l : {-5LL, 0LL, 2LL, 9LL})
        CHECK(evaluate_condition(c1, {PowerSeriesValue::exact_zero()}, {l}) == Truth::True);

    // (+infinity) + l = +infinity: ord(0) >= ord(0) + l holds for every l
    SemiAlgebraicCondition c2 = parse_condition("ord(x1) >= ord(x2) + l1");
    for (long long l : {-4LL, 0LL, 7LL})
        CHECK(evaluate_condition(
                  c2, {PowerSeriesValue::exact_zero(), PowerSeriesValue::exact_zero()}, {l}) ==
              Truth::True);

    // and nothing finite dominates +infinity
    SemiAlgebraicCondition c3 = parse_condition("ord(x1) >= ord(x2)");
    CHECK(evaluate_condition(c3, {series({{0, 1}}, 8), PowerSeriesValue::exact_zero()}, {}) ==
          Truth::False);
}

TEST_CASE("SAL atom examples")
{
    // ord(t^2) >= ord(t) + 1
    SemiAlgebraicCondition c = parse_condition("ord(t^2*x1) >= ord(t*x1) + l1");
    PowerSeriesValue one = series({{0, 1}}, 10);
    CHECK(evaluate_condition(c, {one}, {1}) == Truth::True);
    CHECK(evaluate_condition(c, {one}, {2}) == Truth::False);

    // SAL3: y1 - 1 vanishes at ac(1 + t) = 1
    SemiAlgebraicCondition c3 = parse_condition("acpoly(y1 - 1; x1) = 0");
    CHECK(evaluate_condition(c3, {series({{0, 1}, {1, 1}}, 10)}, {}) == Truth::True);
    CHECK(evaluate_condition(c3, {series({{0, 2}}, 10)}, {}) == Truth::False);
    CHECK(evaluate_condition(c3, {series({}, 10)}, {}) == Truth::Indeterminate);
}

TEST_CASE("parser round trips")
{
    for (const char* text : {
             "ord(x1^2 - t*x2) >= ord(x2) + l1 - 2*l2",
             "ord(3*t^2*x1) === l1 + 1 mod 4",
             "acpoly(y1^2 - y2; x1, x2 + t) = 0 && !(ord(x1) >= ord(x2))",
         }) {
        SemiAlgebraicCondition c = parse_condition(text);
        SemiAlgebraicCondition again = parse_condition(to_string(c));
        CHECK(to_string(c) == to_string(again));
    }
    CHECK_THROWS_AS(parse_condition("ord(x1) >="), parse_error);
    CHECK_THROWS_AS(parse_condition("acpoly(y1; x1) = 1"), parse_error);
}

TEST_CASE("f = 0 is expressible with congruences")
{
    // ord f === 0 mod 2 && ord f === 1 mod 2 holds exactly when ord f = +inf
    SemiAlgebraicCondition zero_cond =
        parse_condition("ord(x1) === 0 mod 2 && ord(x1) === 1 mod 2");
    CHECK(evaluate_condition(zero_cond, {PowerSeriesValue::exact_zero()}, {}) == Truth::True);
    CHECK(evaluate_condition(zero_cond, {series({{3, 1}}, 10)}, {}) == Truth::False);
    CHECK(evaluate_condition(zero_cond, {series({}, 10)}, {}) == Truth::Indeterminate);
}

TEST_CASE("monotone refinement")
{
    std::mt19937_64 rng(123);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

    auto random_condition = [&]() {
        // a small boolean combination over two series variables
        std::string atoms[5] = {
            "ord(x1) >= ord(x2) + l1",
            "ord(x1*x2) === l1 mod 2",
            "acpoly(y1 - 1; x1) = 0",
            "ord(x1 - x2) >= ord(t) + l1",
            "ord(t*x2) === 1 mod 3",
        };
        std::string a = atoms[pick(0, 4)], b = atoms[pick(0, 4)];
        std::string op = pick(0, 1) ? " && " : " || ";
        std::string s = pick(0, 1) ? a + op + b : "!(" + a + ")" + op + b;
        return parse_condition(s);
    };
    auto truncate = [](const PowerSeriesValue& full, int trunc) {
        PowerSeriesValue v;
        v.trunc = trunc;
        for (const auto& [d, c] : full.coeffs)
            if (d < trunc)
                v.set(d, c);
        return v;
    };

    int flips = 0;
    for (int trial = 0; trial < 100; ++trial) {
        SemiAlgebraicCondition c = random_condition();
        // an exact underlying pair of series, truncated at 4, 8, 16
        PowerSeriesValue fx, fy;
        for (int d = 0; d < 16; ++d) {
            if (pick(0, 3) == 0)
                fx.set(d, pick(-2, 2));
            if (pick(0, 3) == 0)
                fy.set(d, pick(-2, 2));
        }
        std::vector<long long> ell{pick(-2, 2)};
        Truth prev = Truth::Indeterminate;
        bool have_prev = false;
        for (int trunc : {4, 8, 16}) {
            Truth t = evaluate_condition(c, {truncate(fx, trunc), truncate(fy, trunc)}, ell);
            if (have_prev && prev != Truth::Indeterminate) {
                if (t != prev)
                    ++flips;
            }
            if (t != Truth::Indeterminate) {
                prev = t;
                have_prev = true;
            }
        }
    }
    CHECK(flips == 0);
}
