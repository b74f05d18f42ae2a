#ifndef MOTIVIC_TEST_HELPERS_HPP
#define MOTIVIC_TEST_HELPERS_HPP

#include <memory>
#include <random>

#include "motivic/localized.hpp"
#include "motivic/specialization.hpp"

namespace testutil {

using namespace motivic;

/// Random elements over a fixed registry, for property checks.
class ElementGen {
public:
    ElementGen(const SymbolRegistry& reg, std::uint64_t seed) : reg_(reg), rng_(seed) {}

    MotivicElement element(int max_terms = 4)
    {
        MotivicElement e;
        int terms = pick(0, max_terms);
        for (int t = 0; t < terms; ++t) {
            MotivicElement m = MotivicElement::L_pow(pick(-3, 3), pick(-3, 3));
            int syms = pick(0, 2);
            for (int s = 0; s < syms; ++s) {
                SymbolId id = static_cast<SymbolId>(pick(0, static_cast<int>(reg_.size()) - 1));
                m = m * MotivicElement::symbol_class(reg_, id);
            }
            e += m;
        }
        return e;
    }

    LocalizedMotivicElement localized()
    {
        std::vector<int> den;
        int atoms = pick(0, 2);
        for (int t = 0; t < atoms; ++t)
            den.push_back(pick(1, 3));
        return LocalizedMotivicElement(element(), den);
    }

    int pick(int lo, int hi)
    {
        return std::uniform_int_distribution<int>(lo, hi)(rng_);
    }

    std::mt19937_64& rng() { return rng_; }

private:
    const SymbolRegistry& reg_;
    std::mt19937_64 rng_;
};

/// A random divisor together with the registry that owns its classes.
struct RandomSnc {
    std::unique_ptr<SymbolRegistry> reg;
    SncDivisorData data;
    int zeta_case = 0; // 1..4, the closed-form case the data falls in
};

/// Random SncDivisorData hitting one of the four closed-form cases
/// (m <= 4, d <= 3, r <= 3). force_case = 0 picks a case at random.
inline RandomSnc random_snc(std::mt19937_64& rng, int force_case = 0)
{
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    RandomSnc out;
    out.reg = std::make_unique<SymbolRegistry>();
    SncDivisorData& d = out.data;
    d.registry = out.reg.get();
    int zc = force_case ? force_case : pick(1, 4);
    out.zeta_case = zc;
    d.d = pick(1, 3);
    int isz = 0;
    switch (zc) {
    case 1:
        d.r = pick(1, 3);
        d.m = pick(0, 4);
        isz = 0;
        break;
    case 2:
        d.r = pick(2, 3);
        isz = pick(1, d.r - 1);
        d.m = pick(isz, 4);
        break;
    case 3:
        d.r = pick(1, 3);
        isz = d.r;
        d.m = pick(d.r + 1, std::max(d.r + 1, 4));
        break;
    case 4:
        d.r = pick(1, 3);
        isz = d.r;
        d.m = d.r;
        break;
    }
    // choose I as a random subset of {1..m} of size isz
    std::vector<int> all;
    for (int i = 1; i <= d.m; ++i)
        all.push_back(i);
    std::shuffle(all.begin(), all.end(), rng);
    for (int i = 0; i < isz; ++i)
        d.I.insert(all[static_cast<std::size_t>(i)]);
    // strata over admissible subsets
    int counter = 0;
    for (unsigned mask = 0; mask < (1u << d.m); ++mask) {
        std::set<int> J;
        int in_I = 0;
        for (int i = 0; i < d.m; ++i)
            if (mask & (1u << i)) {
                J.insert(i + 1);
                if (d.I.count(i + 1))
                    ++in_I;
            }
        if (in_I >= 2)
            continue;
        if (zc == 4 && J.size() == 1 && d.I.count(*J.begin()))
            continue; // filled below from the fiber classes
        if (pick(0, 9) < 8) {
            SymbolId id = out.reg->declare("S" + std::to_string(counter++), pick(0, d.d));
            d.strata.emplace(J, id);
        }
    }
    if (zc == 4) {
        for (int i : d.I) {
            SymbolId id = out.reg->declare("Y" + std::to_string(i), pick(0, d.d));
            d.fiber_classes.emplace(i, id);
            d.strata.emplace(std::set<int>{i}, id);
        }
    }
    return out;
}

/// Random point data consistent with the divisor; hits the three pointed
/// cases when the divisor allows them.
inline PointStratumData random_point(std::mt19937_64& rng, const SncDivisorData& d)
{
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    std::vector<int> horizontal;
    for (int i = 1; i <= d.m; ++i)
        if (!d.I.count(i))
            horizontal.push_back(i);
    PointStratumData pt;
    bool need_vertical = static_cast<int>(d.I.size()) == d.r; // every fiber part is vertical
    bool on_vertical = need_vertical || (!d.I.empty() && pick(0, 1) == 1);
    if (on_vertical) {
        std::vector<int> vert(d.I.begin(), d.I.end());
        int l = vert[static_cast<std::size_t>(pick(0, static_cast<int>(vert.size()) - 1))];
        pt.I_x.insert(l);
        pt.vertical_component = l;
    }
    std::shuffle(horizontal.begin(), horizontal.end(), rng);
    int extra = horizontal.empty() ? 0 : pick(pt.I_x.empty() ? 1 : 0, static_cast<int>(horizontal.size()));
    for (int i = 0; i < extra; ++i)
        pt.I_x.insert(horizontal[static_cast<std::size_t>(i)]);
    if (pt.I_x.empty()) {
        if (!horizontal.empty()) {
            pt.I_x.insert(horizontal[0]);
        } else {
            int l = *d.I.begin();
            pt.I_x.insert(l);
            pt.vertical_component = l;
        }
    }
    return pt;
}

/// Random resolution data (m, ell <= 3, nu_i <= 3, a_ij <= 3) with every
/// component hitting at least one target function.
struct RandomResolution {
    std::unique_ptr<SymbolRegistry> reg;
    ResolutionData res;
};

inline RandomResolution random_resolution(std::mt19937_64& rng)
{
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    RandomResolution out;
    for (;;) {
        RandomSnc snc = random_snc(rng, pick(1, 4));
        if (snc.data.m > 3 || snc.data.m == 0)
            continue;
        out.reg = std::move(snc.reg);
        out.res.base = snc.data;
        break;
    }
    int m = out.res.base.m;
    out.res.ell = pick(1, 3);
    for (int i = 0; i < m; ++i) {
        out.res.nu.push_back(pick(1, 3));
        std::vector<int> row;
        bool nonzero = false;
        for (int j = 0; j < out.res.ell; ++j) {
            int a = pick(0, 3);
            nonzero = nonzero || a != 0;
            row.push_back(a);
        }
        if (!nonzero)
            row[static_cast<std::size_t>(pick(0, out.res.ell - 1))] = pick(1, 3);
        out.res.A.push_back(std::move(row));
    }
    return out;
}

} // namespace testutil

#endif
