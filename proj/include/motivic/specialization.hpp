#ifndef MOTIVIC_SPECIALIZATION_HPP
#define MOTIVIC_SPECIALIZATION_HPP

#include <string>
#include <vector>

#include "motivic/snc_zeta.hpp"

namespace motivic {

/// Resolution data for a tuple of functions f = (f_1..f_l): the SNC base
/// C_red with m components, jacobian orders nu_i - 1, and the multiplicity
/// a_{ij} of component i in the pullback of V(f_j).
struct ResolutionData {
    SncDivisorData base;
    std::vector<int> nu;             // size m, nu_i >= 1
    std::vector<std::vector<int>> A; // m rows, ell columns, a_{ij} >= 0
    int ell = 0;

    std::vector<std::string> validate() const
    {
        base.validate();
        std::vector<std::string> warnings;
        if (static_cast<int>(nu.size()) != base.m)
            throw validation_error("nu must have one entry per component");
        if (static_cast<int>(A.size()) != base.m)
            throw validation_error("A must have one row per component");
        if (ell < 0)
            throw validation_error("function count must be >= 0");
        for (int i = 0; i < base.m; ++i) {
            if (nu[static_cast<std::size_t>(i)] < 1)
                throw validation_error("nu_" + std::to_string(i + 1) + " must be >= 1");
            const auto& row = A[static_cast<std::size_t>(i)];
            if (static_cast<int>(row.size()) != ell)
                throw validation_error("row " + std::to_string(i + 1) + " of A has wrong length");
            long long tot = nu[static_cast<std::size_t>(i)] - 1;
            for (int a : row) {
                if (a < 0)
                    throw validation_error("multiplicities a_ij must be >= 0");
                tot += a;
            }
            if (tot == 0)
                warnings.push_back("component " + std::to_string(i + 1) +
                                   " carries no multiplicity (nu_i = 1 and zero row of A)");
        }
        return warnings;
    }
};

/// Volume data: the SNC base D_red, the multiplicities a_i of D_i in E and
/// the jacobian multiplicities b_i.
struct VolumeData {
    SncDivisorData base;
    std::vector<int> a; // a_i >= 1
    std::vector<int> b; // b_i >= 0

    void validate() const
    {
        base.validate();
        if (static_cast<int>(a.size()) != base.m || static_cast<int>(b.size()) != base.m)
            throw validation_error("a and b must have one entry per component");
        for (int v : a)
            if (v < 1)
                throw validation_error("multiplicities a_i must be >= 1");
        for (int v : b)
            if (v < 0)
                throw validation_error("jacobian multiplicities b_i must be >= 0");
    }
};

/// How the substituted exponents fold the relative dimension d. The proof of
/// the volume formula multiplies the exponent by d where the zeta-function
/// substitution does not; both readings are implemented.
enum class VolumeExponent { times_d, plain };

namespace detail {

inline void require_contributing_components(const ResolutionData& res)
{
    for (int i = 0; i < res.base.m; ++i) {
        bool zero_row = true;
        for (int a : res.A[static_cast<std::size_t>(i)])
            if (a != 0)
                zero_row = false;
        if (zero_row && res.nu[static_cast<std::size_t>(i)] == 1 && res.ell > 0)
            throw divergence_error("component " + std::to_string(i + 1) +
                                   " contributes a divergent geometric series (nu_i = 1, zero row of A)");
    }
}

} // namespace detail

/// Z(T,U) = Z_{C_red} with the component-i variable replaced by
/// U^{nu_i - 1} prod_j T_j^{a_ij}. Variables are ordered (T_1..T_l, U).
inline MotivicRationalFunction zeta_two_variable(const ResolutionData& res)
{
    res.validate();
    detail::require_contributing_components(res);
    MotivicRationalFunction zc = zeta_closed_form(res.base);
    std::vector<MotivicRationalFunction::Substitution> subs;
    int s = res.ell + 1;
    for (int i = 0; i < res.base.m; ++i) {
        MotivicRationalFunction::Substitution sub;
        sub.c = 0;
        sub.e.assign(static_cast<std::size_t>(s), 0);
        for (int j = 0; j < res.ell; ++j)
            sub.e[static_cast<std::size_t>(j)] = res.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        sub.e[static_cast<std::size_t>(res.ell)] = res.nu[static_cast<std::size_t>(i)] - 1;
        subs.push_back(std::move(sub));
    }
    return zc.substitute_monomials(subs, s);
}

/// Z_f(T) = Z(T, L^-1): the component-i variable becomes
/// L^{-(nu_i - 1)} prod_j T_j^{a_ij}.
inline MotivicRationalFunction zeta_f(const ResolutionData& res)
{
    res.validate();
    detail::require_contributing_components(res);
    MotivicRationalFunction zc = zeta_closed_form(res.base);
    std::vector<MotivicRationalFunction::Substitution> subs;
    for (int i = 0; i < res.base.m; ++i) {
        MotivicRationalFunction::Substitution sub;
        sub.c = res.nu[static_cast<std::size_t>(i)] - 1;
        sub.e.assign(static_cast<std::size_t>(res.ell), 0);
        for (int j = 0; j < res.ell; ++j)
            sub.e[static_cast<std::size_t>(j)] = res.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        subs.push_back(std::move(sub));
    }
    return zc.substitute_monomials(subs, res.ell);
}

/// Substitute U -> L^-1 in a (T_1..T_l, U)-variable function.
inline MotivicRationalFunction fold_u_variable(const MotivicRationalFunction& f)
{
    int s = f.nvars() - 1;
    if (s < 0)
        throw validation_error("function has no U variable");
    std::vector<MotivicRationalFunction::Substitution> subs;
    for (int j = 0; j < s; ++j) {
        MotivicRationalFunction::Substitution sub;
        sub.c = 0;
        sub.e = unit_vec(static_cast<std::size_t>(s), static_cast<std::size_t>(j));
        subs.push_back(std::move(sub));
    }
    MotivicRationalFunction::Substitution u;
    u.c = 1;
    u.e.assign(static_cast<std::size_t>(s), 0);
    subs.push_back(std::move(u));
    return f.substitute_monomials(subs, s);
}

/// The integral of L^{-mult_E} over Gr(X):
/// L^-d * Z_{D_red}(T_i -> L^{-(a_i + b_i - 1) d}), a T-free value in the
/// localized coefficient ring.
inline LocalizedMotivicElement motivic_volume_integral(const VolumeData& vol,
                                                       VolumeExponent mode = VolumeExponent::times_d)
{
    vol.validate();
    MotivicRationalFunction zc = zeta_closed_form(vol.base);
    std::vector<MotivicRationalFunction::Substitution> subs;
    for (int i = 0; i < vol.base.m; ++i) {
        int e = vol.a[static_cast<std::size_t>(i)] + vol.b[static_cast<std::size_t>(i)] - 1;
        if (mode == VolumeExponent::times_d)
            e *= vol.base.d;
        MotivicRationalFunction::Substitution sub;
        sub.c = e;
        sub.e.clear();
        subs.push_back(std::move(sub));
    }
    MotivicRationalFunction value = zc.substitute_monomials(subs, 0);
    return value.to_localized() * LocalizedMotivicElement(MotivicElement::L_pow(-vol.base.d));
}

/// Total motivic volume mu_X(Gr(X)) from jacobian-only resolution data,
/// via the volume integral with a_i = 1 and b_i = nu_i - 1.
inline LocalizedMotivicElement total_volume(const ResolutionData& res,
                                            VolumeExponent mode = VolumeExponent::times_d)
{
    if (res.ell != 0)
        throw validation_error("total volume takes jacobian-only data (no target functions)");
    res.validate();
    VolumeData vol;
    vol.base = res.base;
    vol.a.assign(static_cast<std::size_t>(res.base.m), 1);
    vol.b.resize(static_cast<std::size_t>(res.base.m));
    for (int i = 0; i < res.base.m; ++i)
        vol.b[static_cast<std::size_t>(i)] = res.nu[static_cast<std::size_t>(i)] - 1;
    return motivic_volume_integral(vol, mode);
}

} // namespace motivic

#endif
