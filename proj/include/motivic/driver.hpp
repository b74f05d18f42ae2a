#ifndef MOTIVIC_DRIVER_HPP
#define MOTIVIC_DRIVER_HPP

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "motivic/json_io.hpp"
#include "motivic/presburger_gf.hpp"

namespace motivic {
namespace cli {

constexpr int exit_ok = 0;
constexpr int exit_fail = 1;       // a check found a mismatch
constexpr int exit_validation = 2; // bad input
constexpr int exit_divergence = 3; // divergent substitution or series

namespace detail {

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw validation_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string exp_string(const ExpVec& n)
{
    std::string s = "(";
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (i)
            s += ",";
        s += std::to_string(n[i]);
    }
    return s + ")";
}

inline VolumeExponent parse_volume_exponent(const std::string& s)
{
    if (s == "times-d")
        return VolumeExponent::times_d;
    if (s == "plain")
        return VolumeExponent::plain;
    throw validation_error("--volume-exponent must be 'times-d' or 'plain'");
}

/// Deterministic pseudo-counts for specialization checks: a class of
/// dimension k counts as q^k.
inline std::map<SymbolId, Rat> default_counts(const SymbolRegistry& reg, const Rat& q)
{
    std::map<SymbolId, Rat> counts;
    for (SymbolId id = 0; id < reg.size(); ++id)
        counts[id] = motivic::detail::rat_pow(q, reg.at(id).dim);
    return counts;
}

// -- oracle comparisons usable both from the CLI and from tests ------------

struct CheckResult {
    bool pass = true;
    std::string message;
};

inline CheckResult check_zeta_snc(const SncDivisorData& data, int degree)
{
    MotivicRationalFunction closed = zeta_closed_form(data);
    TruncatedSeries lhs = closed.expand(degree);
    TruncatedSeries rhs = zeta_series_truncated(data, degree);
    if (lhs.equals(rhs))
        return {true, ""};
    auto diff = lhs.first_difference(rhs);
    std::string n = diff ? exp_string(*diff) : std::string("?");
    std::string lv = diff ? lhs.at(*diff).to_string() : "";
    std::string rv = diff ? rhs.at(*diff).to_string() : "";
    return {false, "first differing coefficient at T^" + n + ": closed form gives " + lv +
                       ", series gives " + rv};
}

inline CheckResult check_zeta_point(const SncDivisorData& data, const PointStratumData& pt,
                                    int degree)
{
    MotivicRationalFunction closed = zeta_at_point_closed_form(data, pt);
    TruncatedSeries lhs = closed.expand(degree);
    TruncatedSeries rhs = zeta_at_point_series_truncated(data, pt, degree);
    if (lhs.equals(rhs))
        return {true, ""};
    auto diff = lhs.first_difference(rhs);
    std::string n = diff ? exp_string(*diff) : std::string("?");
    std::string lv = diff ? lhs.at(*diff).to_string() : "";
    std::string rv = diff ? rhs.at(*diff).to_string() : "";
    return {false, "first differing coefficient at T^" + n + ": closed form gives " + lv +
                       ", series gives " + rv};
}

/// Direct enumeration of Z_f coefficients: the T^n coefficient sums the
/// base coefficients over the fiber A^t s = n weighted by L^{-(nu-1)|s|}.
inline TruncatedSeries zeta_f_series_by_enumeration(const ResolutionData& res, int degree)
{
    for (int i = 0; i < res.base.m; ++i) {
        bool zero_row = true;
        for (int v : res.A[static_cast<std::size_t>(i)])
            if (v != 0)
                zero_row = false;
        if (zero_row && res.ell > 0)
            throw validation_error("enumeration oracle needs every component to hit some function");
    }
    TruncatedSeries out;
    out.nvars = res.ell;
    out.bound = degree;
    // s_i is bounded by degree whenever row i is nonzero
    MultiIndex s(static_cast<std::size_t>(res.base.m), 0);
    std::function<void(int)> rec = [&](int pos) {
        if (pos == res.base.m) {
            ExpVec n(static_cast<std::size_t>(res.ell), 0);
            long long e = 0;
            for (int i = 0; i < res.base.m; ++i) {
                for (int jj = 0; jj < res.ell; ++jj)
                    n[static_cast<std::size_t>(jj)] +=
                        s[static_cast<std::size_t>(i)] * res.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(jj)];
                e += static_cast<long long>(res.nu[static_cast<std::size_t>(i)] - 1) *
                     s[static_cast<std::size_t>(i)];
            }
            if (total_degree(n) > degree)
                return;
            MotivicElement c = cylinder_class(s, res.base);
            if (c.is_zero())
                return;
            c = c.shifted(static_cast<int>(-total_degree(s) * res.base.d - e));
            LocalizedMotivicElement cur = out.at(n);
            cur += LocalizedMotivicElement(c);
            out.set(n, cur);
            return;
        }
        for (int v = 0; v <= degree; ++v) {
            s[static_cast<std::size_t>(pos)] = v;
            rec(pos + 1);
        }
        s[static_cast<std::size_t>(pos)] = 0;
    };
    rec(0);
    return out;
}

inline CheckResult check_zeta_resolve_two_path(const ResolutionData& res)
{
    MotivicRationalFunction direct = zeta_f(res);
    MotivicRationalFunction folded = fold_u_variable(zeta_two_variable(res));
    if (direct.equals(folded))
        return {true, ""};
    return {false, "Z_f(T) and Z(T, L^-1) differ as rational functions"};
}

inline CheckResult check_zeta_resolve_enumeration(const ResolutionData& res, int degree)
{
    TruncatedSeries lhs = zeta_f(res).expand(degree);
    TruncatedSeries rhs = zeta_f_series_by_enumeration(res, degree);
    if (lhs.equals(rhs))
        return {true, ""};
    auto diff = lhs.first_difference(rhs);
    std::string n = diff ? exp_string(*diff) : std::string("?");
    std::string lv = diff ? lhs.at(*diff).to_string() : "";
    std::string rv = diff ? rhs.at(*diff).to_string() : "";
    return {false, "first differing coefficient at T^" + n + ": closed form gives " + lv +
                       ", enumeration gives " + rv};
}

/// Volume check: the closed form specialized at q must agree with the
/// numeric partial sums of the substituted series within a geometric tail
/// bound. Exact rational arithmetic throughout.
inline CheckResult check_volume(const VolumeData& vol, VolumeExponent mode, const Rat& q, int N)
{
    LocalizedMotivicElement closed = motivic_volume_integral(vol, mode);
    auto counts = default_counts(*vol.base.registry, q);
    Rat closed_val = closed.specialize_counts(q, counts);

    // exponents of the substitution T_i -> L^-c_i
    std::vector<long long> c(static_cast<std::size_t>(vol.base.m));
    for (int i = 0; i < vol.base.m; ++i) {
        long long e = vol.a[static_cast<std::size_t>(i)] + vol.b[static_cast<std::size_t>(i)] - 1;
        if (mode == VolumeExponent::times_d)
            e *= vol.base.d;
        c[static_cast<std::size_t>(i)] = e;
    }
    // partial sum over |n| <= N of the specialized series, including L^-d
    Rat qinvd = motivic::detail::rat_pow(q, -vol.base.d);
    Rat partial(0);
    Rat cmax(0);
    MultiIndex n(static_cast<std::size_t>(vol.base.m), 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == vol.base.m) {
            MotivicElement cls = cylinder_class(n, vol.base);
            if (cls.is_zero())
                return;
            Rat coeff = LocalizedMotivicElement(cls.shifted(-total_degree(n) * vol.base.d))
                            .specialize_counts(q, counts);
            Rat term = coeff;
            for (int i = 0; i < vol.base.m; ++i)
                term *= motivic::detail::rat_pow(
                    motivic::detail::rat_pow(q, static_cast<long long>(-c[static_cast<std::size_t>(i)])),
                    n[static_cast<std::size_t>(i)]);
            partial += term;
            // track the largest per-grade magnitude for the tail constant
            Rat mag = term < 0 ? Rat(-term) : term;
            Rat rho_inv(1);
            for (int i = 0; i < vol.base.m; ++i)
                rho_inv *= motivic::detail::rat_pow(Rat(2), n[static_cast<std::size_t>(i)]);
            mag *= rho_inv; // compensate the decay so cmax bounds the prefactor
            if (mag > cmax)
                cmax = mag;
            return;
        }
        for (int v = 0; v <= left; ++v) {
            n[static_cast<std::size_t>(pos)] = v;
            rec(pos + 1, left - v);
        }
        n[static_cast<std::size_t>(pos)] = 0;
    };
    rec(0, N);
    partial *= qinvd;
    cmax *= qinvd < 0 ? Rat(-qinvd) : qinvd;

    // every term at |n| = k is bounded by cmax * rho^k with rho = max q^-(1+c_i)
    Rat rho(0);
    for (int i = 0; i < vol.base.m; ++i) {
        Rat x = motivic::detail::rat_pow(q, static_cast<long long>(-1 - c[static_cast<std::size_t>(i)]));
        if (x > rho)
            rho = x;
    }
    if (vol.base.m == 0)
        return closed_val == partial
                   ? CheckResult{true, ""}
                   : CheckResult{false, "empty divisor: volume must equal the single term"};
    if (rho >= Rat(1, 2))
        rho = Rat(1, 2); // q >= 2 and c_i >= 0 guarantee this
    // #\{|n| = k\} <= (k+1)^(m-1); ratio of consecutive grade bounds
    int m = vol.base.m;
    Rat ratio = rho;
    for (int t = 0; t < m - 1; ++t)
        ratio *= Rat(N + 3) / Rat(N + 2);
    if (ratio >= 1)
        return {false, "tail bound inconclusive; raise the degree"};
    Rat first = cmax;
    for (int t = 0; t < m - 1; ++t)
        first *= Rat(N + 2);
    first *= motivic::detail::rat_pow(rho, N + 1);
    Rat tail = first / (Rat(1) - ratio);
    Rat gap = closed_val - partial;
    if (gap < 0)
        gap = -gap;
    if (gap <= tail)
        return {true, ""};
    std::ostringstream os;
    os << "specialized gap " << gap << " exceeds the geometric tail bound " << tail << " at q = " << q;
    return {false, os.str()};
}

inline CheckResult check_presburger_gf(const presburger::Formula& P,
                                       const presburger::PresburgerFunctionSpec& phi, int degree,
                                       long long box)
{
    using namespace presburger;
    IntegerRationalFunction gf = generating_function(P, phi);
    auto got = expand_gf(gf, degree);
    // enumeration oracle over [0, box]^r
    Formula qf = eliminate_quantifiers(P);
    std::size_t r = qf.nvars;
    for (const auto& f : phi.forms)
        r = std::max(r, f.nvars());
    qf.nvars = r;
    std::map<std::vector<int>, BigInt> want;
    std::vector<long long> point(r, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == r) {
            if (!evaluate(qf, point))
                return;
            std::vector<int> e;
            int total = 0;
            for (const auto& f : phi.forms) {
                long long v = f.eval(point);
                if (v < 0)
                    throw validation_error("phi negative on an enumerated point");
                e.push_back(static_cast<int>(v));
                total += static_cast<int>(v);
            }
            if (total <= degree)
                ++want[e];
            return;
        }
        for (long long v = 0; v <= box; ++v) {
            point[i] = v;
            rec(i + 1);
        }
        point[i] = 0;
    };
    rec(0);
    if (got == want)
        return {true, ""};
    for (const auto& [e, cwant] : want) {
        auto it = got.find(e);
        BigInt cg = it == got.end() ? BigInt(0) : it->second;
        if (cg != cwant) {
            std::vector<int> ev = e;
            ExpVec xe(ev.begin(), ev.end());
            return {false, "coefficient at X^" + exp_string(xe) + ": expansion gives " + cg.str() +
                               ", enumeration gives " + cwant.str()};
        }
    }
    for (const auto& [e, cg] : got) {
        if (!want.count(e) && cg != 0) {
            std::vector<int> ev = e;
            ExpVec xe(ev.begin(), ev.end());
            return {false, "coefficient at X^" + exp_string(xe) + ": expansion gives " + cg.str() +
                               ", enumeration gives 0"};
        }
    }
    return {false, "expansions differ"};
}

} // namespace detail

/// The command-line surface. Returns the process exit code; results go to
/// `out`, diagnostics to `err`.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"motivic Igusa zeta functions, volumes and Presburger series"};
    app.require_subcommand(1);

    std::string input_path, condition_path, point_path, formula_text, phi_text, ell_text;
    std::string volume_exponent = "times-d";
    bool json_out = false;
    bool two_variable = false;
    int degree = 8;
    int gf_degree = 12;
    long long box = 48;
    int trunc = 16;

    auto* zeta_snc = app.add_subcommand("zeta-snc", "closed form of Z_D(T) from divisor data");
    zeta_snc->add_option("input", input_path, "JSON divisor document")->required();
    zeta_snc->add_flag("--json", json_out, "emit the internal representation as JSON");

    auto* zeta_point = app.add_subcommand("zeta-point", "closed form of Z_{D,x}(T)");
    zeta_point->add_option("input", input_path)->required();
    zeta_point->add_flag("--json", json_out);

    auto* zeta_resolve = app.add_subcommand("zeta-resolve", "Z_f(T) from resolution data");
    zeta_resolve->add_option("input", input_path)->required();
    zeta_resolve->add_flag("--json", json_out);
    zeta_resolve->add_flag("--two-variable", two_variable, "emit Z(T,U) instead of Z_f(T)");

    auto* volume = app.add_subcommand("volume", "motivic volume integral from volume data");
    volume->add_option("input", input_path)->required();
    volume->add_option("--volume-exponent", volume_exponent, "times-d (default) or plain");
    volume->add_flag("--json", json_out);

    auto* total = app.add_subcommand("total-volume", "total motivic volume from jacobian data");
    total->add_option("input", input_path)->required();
    total->add_option("--volume-exponent", volume_exponent);
    total->add_flag("--json", json_out);

    auto* qe = app.add_subcommand("presburger-qe", "eliminate quantifiers from a formula");
    qe->add_option("formula", formula_text)->required();

    auto* gf = app.add_subcommand("presburger-gf", "rational generating function of (P, phi)");
    gf->add_option("formula", formula_text)->required();
    gf->add_option("--phi", phi_text, "comma-separated affine forms")->required();
    gf->add_flag("--json", json_out);

    auto* sa = app.add_subcommand("semialg-eval", "evaluate a semi-algebraic condition");
    sa->add_option("--condition", condition_path)->required();
    sa->add_option("--point", point_path)->required();
    sa->add_option("--ell", ell_text, "comma-separated integers");
    sa->add_option("--trunc", trunc, "truncation order of the point values");

    auto* check = app.add_subcommand("check", "rebuild both sides of an oracle and compare");
    check->require_subcommand(1);
    auto* c_snc = check->add_subcommand("zeta-snc");
    c_snc->add_option("input", input_path)->required();
    c_snc->add_option("--degree", degree);
    auto* c_point = check->add_subcommand("zeta-point");
    c_point->add_option("input", input_path)->required();
    c_point->add_option("--degree", degree);
    auto* c_resolve = check->add_subcommand("zeta-resolve");
    c_resolve->add_option("input", input_path)->required();
    c_resolve->add_option("--degree", degree);
    auto* c_volume = check->add_subcommand("volume");
    c_volume->add_option("input", input_path)->required();
    c_volume->add_option("--degree", degree);
    c_volume->add_option("--volume-exponent", volume_exponent);
    auto* c_gf = check->add_subcommand("presburger-gf");
    c_gf->add_option("formula", formula_text)->required();
    c_gf->add_option("--phi", phi_text)->required();
    c_gf->add_option("--degree", gf_degree);
    c_gf->add_option("--box", box);

    std::vector<const char*> argv;
    argv.push_back("motzeta");
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help
            out << app.help();
            return exit_ok;
        }
        err << "error: " << e.what() << "\n";
        return exit_validation;
    }

    auto parse_ell = [&]() {
        std::vector<long long> ell;
        std::stringstream ss(ell_text);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty())
                ell.push_back(std::stoll(item));
        return ell;
    };
    auto parse_phi = [&]() {
        presburger::PresburgerFunctionSpec spec;
        std::stringstream ss(phi_text);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty())
                spec.forms.push_back(presburger::parse_linear_form(item));
        return spec;
    };

    try {
        if (zeta_snc->parsed()) {
            auto doc = io::load_snc_document(detail::read_file(input_path));
            MotivicRationalFunction f = zeta_closed_form(doc.data);
            if (json_out)
                out << io::to_json(f).dump(2) << "\n";
            else
                out << f.to_string() << "\n";
            return exit_ok;
        }
        if (zeta_point->parsed()) {
            auto doc = io::load_snc_document(detail::read_file(input_path));
            if (!doc.point)
                throw validation_error("input document has no 'point' object");
            MotivicRationalFunction f = zeta_at_point_closed_form(doc.data, *doc.point);
            if (json_out)
                out << io::to_json(f).dump(2) << "\n";
            else
                out << f.to_string() << "\n";
            return exit_ok;
        }
        if (zeta_resolve->parsed()) {
            auto doc = io::load_snc_document(detail::read_file(input_path));
            if (!doc.resolution)
                throw validation_error("input document has no resolution fields ('nu', 'A')");
            for (const auto& w : doc.resolution->validate())
                err << "warning: " << w << "\n";
            MotivicRationalFunction f =
                two_variable ? zeta_two_variable(*doc.resolution) : zeta_f(*doc.resolution);
            if (json_out)
                out << io::to_json(f).dump(2) << "\n";
            else
                out << f.to_string() << "\n";
            return exit_ok;
        }
        if (volume->parsed()) {
            auto doc = io::load_snc_document(detail::read_file(input_path));
            if (!doc.volume)
                throw validation_error("input document has no volume fields ('a', 'b')");
            auto v = motivic_volume_integral(*doc.volume,
                                             detail::parse_volume_exponent(volume_exponent));
            if (json_out)
                out << io::to_json(v).dump(2) << "\n";
            else
                out << v.to_string() << "\n";
            return exit_ok;
        }
        if (total->parsed()) {
            auto doc = io::load_snc_document(detail::read_file(input_path));
            if (!doc.resolution)
                throw validation_error("input document has no 'nu' field");
            if (doc.resolution->ell != 0)
                throw validation_error("total volume takes jacobian-only data (drop 'A')");
            auto v = total_volume(*doc.resolution, detail::parse_volume_exponent(volume_exponent));
            if (json_out)
                out << io::to_json(v).dump(2) << "\n";
            else
                out << v.to_string() << "\n";
            return exit_ok;
        }
        if (qe->parsed()) {
            auto f = presburger::parse_formula(formula_text);
            out << presburger::to_string(presburger::eliminate_quantifiers(f)) << "\n";
            return exit_ok;
        }
        if (gf->parsed()) {
            auto P = presburger::parse_formula(formula_text);
            auto f = presburger::generating_function(P, parse_phi());
            if (json_out)
                out << io::to_json(f).dump(2) << "\n";
            else
                out << f.to_string() << "\n";
            return exit_ok;
        }
        if (sa->parsed()) {
            auto cond = semialg::parse_condition(detail::read_file(condition_path));
            auto points = io::load_points(detail::read_file(point_path), trunc);
            auto ell = parse_ell();
            out << semialg::truth_string(semialg::evaluate_condition(cond, points, ell)) << "\n";
            return exit_ok;
        }
        if (check->parsed()) {
            std::vector<std::pair<std::string, detail::CheckResult>> results;
            if (c_snc->parsed()) {
                auto doc = io::load_snc_document(detail::read_file(input_path));
                results.emplace_back("zeta-snc oracle (degree " + std::to_string(degree) + ")",
                                     detail::check_zeta_snc(doc.data, degree));
            } else if (c_point->parsed()) {
                auto doc = io::load_snc_document(detail::read_file(input_path));
                if (!doc.point)
                    throw validation_error("input document has no 'point' object");
                results.emplace_back("zeta-point oracle (degree " + std::to_string(degree) + ")",
                                     detail::check_zeta_point(doc.data, *doc.point, degree));
            } else if (c_resolve->parsed()) {
                auto doc = io::load_snc_document(detail::read_file(input_path));
                if (!doc.resolution)
                    throw validation_error("input document has no resolution fields");
                results.emplace_back("zeta-resolve two-path",
                                     detail::check_zeta_resolve_two_path(*doc.resolution));
                results.emplace_back("zeta-resolve enumeration (degree " + std::to_string(degree) + ")",
                                     detail::check_zeta_resolve_enumeration(*doc.resolution, degree));
            } else if (c_volume->parsed()) {
                auto doc = io::load_snc_document(detail::read_file(input_path));
                if (!doc.volume)
                    throw validation_error("input document has no volume fields");
                for (long long qv : {2, 3, 5}) {
                    results.emplace_back(
                        "volume specialization q = " + std::to_string(qv),
                        detail::check_volume(*doc.volume, detail::parse_volume_exponent(volume_exponent),
                                             Rat(qv), degree < 12 ? 24 : degree));
                }
            } else if (c_gf->parsed()) {
                auto P = presburger::parse_formula(formula_text);
                results.emplace_back("presburger-gf enumeration (degree " + std::to_string(gf_degree) + ")",
                                     detail::check_presburger_gf(P, parse_phi(), gf_degree, box));
            }
            bool all = true;
            for (const auto& [name, res] : results) {
                out << (res.pass ? "PASS " : "FAIL ") << name << "\n";
                if (!res.pass) {
                    all = false;
                    out << "     " << res.message << "\n";
                }
            }
            return all ? exit_ok : exit_fail;
        }
    } catch (const parse_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const divergence_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_divergence;
    } catch (const validation_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    }
    err << "error: no command\n";
    return exit_validation;
}

} // namespace cli
} // namespace motivic

#endif
