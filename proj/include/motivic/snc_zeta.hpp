#ifndef MOTIVIC_SNC_ZETA_HPP
#define MOTIVIC_SNC_ZETA_HPP

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "motivic/rational_series.hpp"

namespace motivic {

/// Multi-indices n in N^m; components are numbered 1..m throughout.
using MultiIndex = std::vector<int>;

inline std::set<int> support(const MultiIndex& n)
{
    std::set<int> J;
    for (std::size_t i = 0; i < n.size(); ++i)
        if (n[i] != 0)
            J.insert(static_cast<int>(i) + 1);
    return J;
}

/// Combinatorial data of a strict-normal-crossings divisor D in a smooth
/// scheme of relative dimension d: strata classes [D_J°] indexed by subsets
/// J of {1..m}, the set I of components contained in the special fiber, and
/// the classes [Y_i] of the fiber components carrying a vertical divisor.
/// Missing strata default to the zero class.
struct SncDivisorData {
    int d = 1;                      // relative dimension
    int m = 0;                      // divisor components
    int r = 1;                      // connected components of the special fiber
    std::set<int> I;                // vertical components (subset of 1..m)
    std::map<std::set<int>, SymbolId> strata;       // J -> [D_J°]; absent = zero class
    std::map<int, SymbolId> fiber_classes;          // i in I -> [Y_i]
    const SymbolRegistry* registry = nullptr;

    bool is_special_fiber() const { return m > 0 && static_cast<int>(I.size()) == m && static_cast<int>(I.size()) == r; }

    std::optional<SymbolId> stratum(const std::set<int>& J) const
    {
        auto it = strata.find(J);
        if (it == strata.end())
            return std::nullopt;
        return it->second;
    }

    void validate() const
    {
        if (!registry)
            throw validation_error("divisor data has no symbol registry");
        if (d < 1)
            throw validation_error("relative dimension d must be >= 1");
        if (m < 0)
            throw validation_error("component count m must be >= 0");
        if (r < 1)
            throw validation_error("the special fiber has r >= 1 connected components");
        if (static_cast<int>(I.size()) > r)
            throw validation_error("|I| <= r is violated: vertical components lie in distinct fiber components");
        if (static_cast<int>(I.size()) > m)
            throw validation_error("|I| <= m is violated");
        for (int i : I)
            if (i < 1 || i > m)
                throw validation_error("vertical component index out of range");
        for (const auto& [J, cls] : strata) {
            int in_I = 0;
            for (int j : J) {
                if (j < 1 || j > m)
                    throw validation_error("stratum subset index out of range");
                if (I.count(j))
                    ++in_I;
            }
            if (in_I >= 2)
                throw validation_error("stratum with two vertical components must be the zero class");
            if (registry->at(cls).dim > d)
                throw validation_error("stratum class '" + registry->at(cls).name + "' has dimension > d");
        }
        for (const auto& [i, cls] : fiber_classes) {
            if (!I.count(i))
                throw validation_error("fiber class given for a non-vertical component");
            if (registry->at(cls).dim > d)
                throw validation_error("fiber class '" + registry->at(cls).name + "' has dimension > d");
        }
        if (is_special_fiber()) {
            // D = Y: each D_i is a whole fiber component, so [D_i°] = [Y_i].
            for (int i : I) {
                auto it = fiber_classes.find(i);
                if (it == fiber_classes.end())
                    throw validation_error("D = Y requires a fiber class [Y_i] for every component");
                auto st = stratum({i});
                if (!st || *st != it->second)
                    throw validation_error("D = Y requires strata [D_i°] to equal the fiber classes [Y_i]");
            }
        }
    }
};

/// The stratum pattern of a closed point x of D: the set I_x of components
/// through x, and the vertical component among them when one exists.
struct PointStratumData {
    std::set<int> I_x;
    std::optional<int> vertical_component;

    void validate(const SncDivisorData& data) const
    {
        if (I_x.empty())
            throw validation_error("I_x must be nonempty (x lies on D)");
        for (int i : I_x)
            if (i < 1 || i > data.m)
                throw validation_error("I_x index out of range");
        std::set<int> common;
        for (int i : I_x)
            if (data.I.count(i))
                common.insert(i);
        if (common.size() > 1)
            throw validation_error("x lies on two vertical components; they are pairwise disjoint");
        if (vertical_component) {
            if (common.size() != 1 || *common.begin() != *vertical_component)
                throw validation_error("vertical_component must be the unique element of I_x and I");
        } else if (!common.empty()) {
            throw validation_error("x lies on a vertical component; vertical_component must name it");
        }
        // If |I| = r, every fiber component is a vertical divisor, so any
        // point of the special fiber lies on one.
        if (static_cast<int>(data.I.size()) == data.r && common.empty())
            throw validation_error("|I| = r forces x to lie on a vertical component");
    }

    std::optional<int> vertical(const SncDivisorData& data) const
    {
        for (int i : I_x)
            if (data.I.count(i))
                return i;
        return std::nullopt;
    }
};

/// The support pattern P_D: n fails it when a vertical component carries a
/// multiplicity outside {0,1}, when two vertical components both carry 1,
/// or when |I| = r and no vertical component carries 1.
inline bool property_P(const MultiIndex& n, const SncDivisorData& data)
{
    if (static_cast<int>(n.size()) != data.m)
        throw validation_error("multi-index length mismatch");
    int ones = 0;
    for (int i : data.I) {
        int ni = n[static_cast<std::size_t>(i - 1)];
        if (ni != 0 && ni != 1)
            return false;
        if (ni == 1)
            ++ones;
    }
    if (ones >= 2)
        return false;
    if (static_cast<int>(data.I.size()) == data.r && ones == 0)
        return false;
    return true;
}

/// Class of the cylinder of arcs with contact orders n along the components:
/// [D_J°] (L-1)^|J| L^{|n|(d-1)} when n satisfies P_D, and 0 otherwise.
inline MotivicElement cylinder_class(const MultiIndex& n, const SncDivisorData& data)
{
    if (!property_P(n, data))
        return MotivicElement::zero();
    std::set<int> J = support(n);
    auto cls = data.stratum(J);
    if (!cls)
        return MotivicElement::zero();
    MotivicElement out = MotivicElement::symbol_class(*data.registry, *cls);
    out *= MotivicElement::L_minus_one().pow(static_cast<int>(J.size()));
    int tot = total_degree(n);
    out = out.shifted(tot * (data.d - 1));
    return out;
}

/// Pointed variant: (L-1)^|I_x| L^{|n|(d-1)} when n satisfies P_D and its
/// support is exactly I_x, and 0 otherwise.
inline MotivicElement point_cylinder_class(const MultiIndex& n, const SncDivisorData& data,
                                           const PointStratumData& pt)
{
    if (static_cast<int>(n.size()) != data.m)
        throw validation_error("multi-index length mismatch");
    if (!property_P(n, data))
        return MotivicElement::zero();
    if (support(n) != pt.I_x)
        return MotivicElement::zero();
    MotivicElement out = MotivicElement::L_minus_one().pow(static_cast<int>(pt.I_x.size()));
    out = out.shifted(total_degree(n) * (data.d - 1));
    return out;
}

namespace detail {

inline void for_each_multi_index(int m, int N, const std::function<void(const MultiIndex&)>& fn)
{
    MultiIndex n(static_cast<std::size_t>(m), 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == m) {
            fn(n);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            n[static_cast<std::size_t>(pos)] = v;
            rec(pos + 1, left - v);
        }
        n[static_cast<std::size_t>(pos)] = 0;
    };
    rec(0, N);
}

} // namespace detail

/// Brute-force truncation of Z_D(T): coefficient of T^n is
/// cylinder_class(n) * L^{-|n| d} for all |n| <= N.
inline TruncatedSeries zeta_series_truncated(const SncDivisorData& data, int N)
{
    data.validate();
    if (N < 0)
        throw validation_error("truncation bound must be >= 0");
    TruncatedSeries out;
    out.nvars = data.m;
    out.bound = N;
    detail::for_each_multi_index(data.m, N, [&](const MultiIndex& n) {
        MotivicElement c = cylinder_class(n, data);
        if (c.is_zero())
            return;
        out.coeffs.emplace(n, LocalizedMotivicElement(c.shifted(-total_degree(n) * data.d)));
    });
    return out;
}

/// Same for the pointed series Z_{D,x}(T).
inline TruncatedSeries zeta_at_point_series_truncated(const SncDivisorData& data,
                                                      const PointStratumData& pt, int N)
{
    data.validate();
    pt.validate(data);
    if (N < 0)
        throw validation_error("truncation bound must be >= 0");
    TruncatedSeries out;
    out.nvars = data.m;
    out.bound = N;
    detail::for_each_multi_index(data.m, N, [&](const MultiIndex& n) {
        MotivicElement c = point_cylinder_class(n, data, pt);
        if (c.is_zero())
            return;
        out.coeffs.emplace(n, LocalizedMotivicElement(c.shifted(-total_degree(n) * data.d)));
    });
    return out;
}

namespace detail {

/// prod_{j in J} (L-1) L^-1 T_j / (1 - L^-1 T_j), as an m-variable function.
inline MotivicRationalFunction stratum_product(int m, const std::set<int>& J)
{
    ExpVec n(static_cast<std::size_t>(m), 0);
    std::vector<TAtom> den;
    for (int j : J) {
        n[static_cast<std::size_t>(j - 1)] = 1;
        den.emplace_back(1, unit_vec(static_cast<std::size_t>(m), static_cast<std::size_t>(j - 1)));
    }
    MotivicElement coeff = MotivicElement::L_minus_one().pow(static_cast<int>(J.size()))
                               .shifted(-static_cast<int>(J.size()));
    TPoly num;
    num[n] = LocalizedMotivicElement(coeff);
    return MotivicRationalFunction(m, std::move(num), std::move(den));
}

inline void for_each_subset(const std::vector<int>& pool,
                            const std::function<void(const std::set<int>&)>& fn)
{
    std::size_t k = pool.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        std::set<int> J;
        for (std::size_t i = 0; i < k; ++i)
            if (mask & (std::size_t{1} << i))
                J.insert(pool[i]);
        fn(J);
    }
}

} // namespace detail

/// Closed form of Z_D(T), by the four cases of the rationality statement.
inline MotivicRationalFunction zeta_closed_form(const SncDivisorData& data)
{
    data.validate();
    const int m = data.m;
    const SymbolRegistry& reg = *data.registry;

    std::vector<int> horizontal;
    for (int i = 1; i <= m; ++i)
        if (!data.I.count(i))
            horizontal.push_back(i);

    auto stratum_term = [&](const std::set<int>& J) -> MotivicRationalFunction {
        auto cls = data.stratum(J);
        if (!cls)
            return MotivicRationalFunction::zero(m);
        LocalizedMotivicElement c(MotivicElement::symbol_class(reg, *cls));
        return detail::stratum_product(m, J).scaled(c);
    };

    if (data.I.empty()) {
        // Z_D(T) = sum_J [D_J°] prod_{j in J} (L-1)L^-1 T_j / (1 - L^-1 T_j)
        MotivicRationalFunction out = MotivicRationalFunction::zero(m);
        detail::for_each_subset(horizontal, [&](const std::set<int>& J) { out += stratum_term(J); });
        return out;
    }

    if (data.is_special_fiber()) {
        // D = Y: Z_D(T) = (L-1)/L * sum_i [Y_i] T_i
        MotivicRationalFunction out = MotivicRationalFunction::zero(m);
        LocalizedMotivicElement lm1(MotivicElement::L_minus_one().shifted(-1));
        for (int i : data.I) {
            auto it = data.fiber_classes.find(i);
            if (it == data.fiber_classes.end())
                throw validation_error("D = Y case needs the fiber class [Y_" + std::to_string(i) + "]");
            LocalizedMotivicElement c(MotivicElement::symbol_class(reg, it->second));
            out += MotivicRationalFunction::monomial(
                m, unit_vec(static_cast<std::size_t>(m), static_cast<std::size_t>(i - 1)), c * lm1);
        }
        return out;
    }

    // |I| >= 1 and D != Y: the vertical sum, plus the horizontal sum unless |I| = r.
    MotivicRationalFunction out = MotivicRationalFunction::zero(m);
    LocalizedMotivicElement lm1(MotivicElement::L_minus_one().shifted(-1));
    for (int l : data.I) {
        MotivicRationalFunction part = MotivicRationalFunction::zero(m);
        detail::for_each_subset(horizontal, [&](const std::set<int>& J) {
            std::set<int> Jl = J;
            Jl.insert(l);
            auto cls = data.stratum(Jl);
            if (!cls)
                return;
            LocalizedMotivicElement c(MotivicElement::symbol_class(reg, *cls));
            part += detail::stratum_product(m, J).scaled(c);
        });
        ExpVec tl = unit_vec(static_cast<std::size_t>(m), static_cast<std::size_t>(l - 1));
        part *= MotivicRationalFunction::monomial(m, tl, lm1);
        out += part;
    }
    if (static_cast<int>(data.I.size()) < data.r) {
        detail::for_each_subset(horizontal, [&](const std::set<int>& J) { out += stratum_term(J); });
    }
    return out;
}

/// Closed form of the pointed series Z_{D,x}(T), by its three cases.
inline MotivicRationalFunction zeta_at_point_closed_form(const SncDivisorData& data,
                                                         const PointStratumData& pt)
{
    data.validate();
    pt.validate(data);
    const int m = data.m;
    LocalizedMotivicElement lm1(MotivicElement::L_minus_one().shifted(-1));
    auto vert = pt.vertical(data);

    if (data.is_special_fiber()) {
        int l = *vert;
        return MotivicRationalFunction::monomial(
            m, unit_vec(static_cast<std::size_t>(m), static_cast<std::size_t>(l - 1)), lm1);
    }
    if (!vert) {
        return detail::stratum_product(m, pt.I_x);
    }
    int l = *vert;
    std::set<int> rest = pt.I_x;
    rest.erase(l);
    MotivicRationalFunction out = detail::stratum_product(m, rest);
    out *= MotivicRationalFunction::monomial(
        m, unit_vec(static_cast<std::size_t>(m), static_cast<std::size_t>(l - 1)), lm1);
    return out;
}

} // namespace motivic

#endif
