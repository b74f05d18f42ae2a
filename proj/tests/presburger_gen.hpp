#ifndef MOTIVIC_TESTS_PRESBURGER_GEN_HPP
#define MOTIVIC_TESTS_PRESBURGER_GEN_HPP

#include <functional>
#include <random>

#include "motivic/presburger_qe.hpp"

namespace testutil {

inline bool box_equivalent(const motivic::presburger::Formula& a,
                           const motivic::presburger::Formula& b, long long lo, long long hi)
{
    using namespace motivic::presburger;
    std::size_t r = std::max(a.nvars, b.nvars);
    std::vector<long long> point(r, 0);
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == r)
            return evaluate(a, point) == evaluate(b, point);
        for (long long v = lo; v <= hi; ++v) {
            point[i] = v;
            if (!rec(i + 1))
                return false;
        }
        point[i] = 0;
        return true;
    };
    return rec(0);
}

/// Random formulas with coefficients in [-4, 4] and moduli up to 6.
struct FormulaGen {
    std::mt19937_64 rng;
    std::size_t r;

    FormulaGen(std::uint64_t seed, std::size_t r_) : rng(seed), r(r_) {}

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

    motivic::presburger::LinearForm form()
    {
        motivic::presburger::LinearForm f(r);
        for (std::size_t i = 0; i < r; ++i)
            f.coeffs[i] = pick(-4, 4);
        f.constant = pick(-6, 6);
        return f;
    }

    motivic::presburger::NodePtr node(int depth)
    {
        using namespace motivic::presburger;
        int kind = depth == 0 ? pick(0, 1) : pick(0, 5);
        switch (kind) {
        case 0:
            return make_ge(form());
        case 1: {
            LinearForm f = form();
            bool zero = true;
            for (auto c : f.coeffs)
                if (c != 0)
                    zero = false;
            if (zero)
                f.coeffs[static_cast<std::size_t>(pick(0, static_cast<int>(r) - 1))] = 1;
            return make_mod(f, pick(2, 6));
        }
        case 2:
            return make_not(node(depth - 1));
        case 3:
            return make_and({node(depth - 1), node(depth - 1)});
        case 4:
            return make_or({node(depth - 1), node(depth - 1)});
        default:
            return make_and({node(depth - 1), make_ge(form())});
        }
    }

    motivic::presburger::Formula quantified(int quantifiers, int depth = 3)
    {
        using namespace motivic::presburger;
        Formula f;
        f.node = node(depth);
        f.nvars = r;
        std::vector<std::size_t> vars;
        for (std::size_t i = 0; i < r; ++i)
            vars.push_back(i);
        std::shuffle(vars.begin(), vars.end(), rng);
        for (int q = 0; q < quantifiers && q < static_cast<int>(r); ++q)
            f.node = make_exists(vars[static_cast<std::size_t>(q)], f.node);
        return f;
    }
};

} // namespace testutil

#endif
