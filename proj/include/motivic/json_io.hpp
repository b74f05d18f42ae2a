#ifndef MOTIVIC_JSON_IO_HPP
#define MOTIVIC_JSON_IO_HPP

#include <memory>
#include <string>

#include <json.hpp>

#include "motivic/presburger_gf.hpp"
#include "motivic/semialg.hpp"
#include "motivic/specialization.hpp"

namespace motivic {
namespace io {

using nlohmann::json;

/// A divisor document owns its symbol registry; the data points into it.
struct SncDocument {
    std::unique_ptr<SymbolRegistry> registry;
    SncDivisorData data;
    std::optional<PointStratumData> point;
    std::optional<ResolutionData> resolution;
    std::optional<VolumeData> volume;
};

namespace detail {

inline long long get_int(const json& j, const std::string& key)
{
    if (!j.contains(key))
        throw validation_error("missing field '" + key + "'");
    if (!j[key].is_number_integer())
        throw validation_error("field '" + key + "' must be an integer");
    return j[key].get<long long>();
}

inline SymbolId declare_or_check(SymbolRegistry& reg, const std::string& name, int dim)
{
    if (reg.contains(name)) {
        const auto& s = reg.at(name);
        if (s.dim != dim)
            throw validation_error("class '" + name + "' redeclared with a different dimension");
        return s.id;
    }
    return reg.declare(name, dim);
}

} // namespace detail

inline SncDocument parse_snc_document(const json& j)
{
    if (!j.is_object())
        throw validation_error("input document must be a JSON object");
    SncDocument doc;
    doc.registry = std::make_unique<SymbolRegistry>();
    SncDivisorData& d = doc.data;
    d.registry = doc.registry.get();
    d.d = static_cast<int>(detail::get_int(j, "d"));
    d.m = static_cast<int>(detail::get_int(j, "m"));
    d.r = static_cast<int>(detail::get_int(j, "r"));
    if (j.contains("I")) {
        if (!j["I"].is_array())
            throw validation_error("field 'I' must be an array of component indices");
        for (const auto& v : j["I"])
            d.I.insert(v.get<int>());
    }
    if (j.contains("strata")) {
        if (!j["strata"].is_array())
            throw validation_error("field 'strata' must be an array");
        for (const auto& entry : j["strata"]) {
            if (!entry.contains("J") || !entry["J"].is_array())
                throw validation_error("stratum entry needs a subset field 'J'");
            std::set<int> J;
            for (const auto& v : entry["J"])
                J.insert(v.get<int>());
            if (!entry.contains("class") || entry["class"].is_null())
                continue; // explicit zero class
            std::string name = entry["class"].get<std::string>();
            int dim = static_cast<int>(detail::get_int(entry, "dim"));
            SymbolId id = detail::declare_or_check(*doc.registry, name, dim);
            if (d.strata.count(J))
                throw validation_error("duplicate stratum entry");
            d.strata.emplace(std::move(J), id);
        }
    }
    if (j.contains("fiber_classes")) {
        if (!j["fiber_classes"].is_array())
            throw validation_error("field 'fiber_classes' must be an array");
        for (const auto& entry : j["fiber_classes"]) {
            int i = static_cast<int>(detail::get_int(entry, "i"));
            if (!entry.contains("class"))
                throw validation_error("fiber class entry needs 'class'");
            std::string name = entry["class"].get<std::string>();
            int dim = static_cast<int>(detail::get_int(entry, "dim"));
            SymbolId id = detail::declare_or_check(*doc.registry, name, dim);
            if (d.fiber_classes.count(i))
                throw validation_error("duplicate fiber class entry");
            d.fiber_classes.emplace(i, id);
        }
    }
    if (j.contains("point")) {
        const auto& p = j["point"];
        PointStratumData pt;
        if (!p.contains("I_x") || !p["I_x"].is_array())
            throw validation_error("point needs the component set 'I_x'");
        for (const auto& v : p["I_x"])
            pt.I_x.insert(v.get<int>());
        if (p.contains("vertical_component") && !p["vertical_component"].is_null())
            pt.vertical_component = p["vertical_component"].get<int>();
        doc.point = std::move(pt);
    }
    if (j.contains("nu")) {
        ResolutionData res;
        res.base = d;
        for (const auto& v : j["nu"])
            res.nu.push_back(v.get<int>());
        if (j.contains("A")) {
            for (const auto& row : j["A"]) {
                std::vector<int> r;
                for (const auto& v : row)
                    r.push_back(v.get<int>());
                res.A.push_back(std::move(r));
            }
            res.ell = res.A.empty() ? 0 : static_cast<int>(res.A.front().size());
        } else {
            res.A.assign(static_cast<std::size_t>(d.m), {});
            res.ell = 0;
        }
        doc.resolution = std::move(res);
    }
    if (j.contains("a") || j.contains("b")) {
        VolumeData vol;
        vol.base = d;
        if (j.contains("a"))
            for (const auto& v : j["a"])
                vol.a.push_back(v.get<int>());
        if (j.contains("b"))
            for (const auto& v : j["b"])
                vol.b.push_back(v.get<int>());
        else
            vol.b.assign(vol.a.size(), 0);
        doc.volume = std::move(vol);
    }
    return doc;
}

inline SncDocument load_snc_document(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw validation_error(std::string("invalid JSON: ") + e.what());
    }
    return parse_snc_document(j);
}

/// Semi-algebraic point file: a list of values, each either
/// {"zero": true} or {"coeffs": [[degree, numerator, denominator], ...]}.
/// A plain array is accepted as shorthand for the coeffs form.
inline std::vector<semialg::PowerSeriesValue> load_points(const std::string& text, int trunc)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw validation_error(std::string("invalid JSON: ") + e.what());
    }
    if (trunc < 1)
        throw validation_error("truncation order must be >= 1");
    const json* arr = &j;
    if (j.is_object() && j.contains("points"))
        arr = &j["points"];
    if (!arr->is_array())
        throw validation_error("point file must hold an array of values");
    std::vector<semialg::PowerSeriesValue> out;
    for (const auto& v : *arr) {
        semialg::PowerSeriesValue val;
        if (v.is_object() && v.contains("zero") && v["zero"].get<bool>()) {
            out.push_back(semialg::PowerSeriesValue::exact_zero());
            continue;
        }
        const json* coeffs = nullptr;
        if (v.is_array())
            coeffs = &v;
        else if (v.is_object() && v.contains("coeffs"))
            coeffs = &v["coeffs"];
        else
            throw validation_error("point value must be {\"zero\":true} or a coefficient list");
        val.trunc = trunc;
        for (const auto& triple : *coeffs) {
            if (!triple.is_array() || triple.size() != 3)
                throw validation_error("coefficients are [degree, numerator, denominator] triples");
            int deg = triple[0].get<int>();
            long long num = triple[1].get<long long>();
            long long den = triple[2].get<long long>();
            if (deg < 0)
                throw validation_error("coefficient degrees must be >= 0");
            if (den == 0)
                throw validation_error("coefficient denominator must be nonzero");
            if (deg < trunc && num != 0)
                val.set(deg, Rat(num) / Rat(den));
        }
        out.push_back(std::move(val));
    }
    return out;
}

/// Machine-readable rendering of the internal representation.
inline json to_json(const MotivicElement& e)
{
    json terms = json::array();
    for (const auto& [k, c] : e.terms()) {
        json syms = json::array();
        for (const auto& [id, exp] : k.syms)
            syms.push_back({{"class", e.registry()->at(id).name}, {"exp", exp}});
        terms.push_back({{"syms", syms}, {"L", k.lexp}, {"coeff", c}});
    }
    return json{{"terms", terms}};
}

inline json to_json(const LocalizedMotivicElement& e)
{
    return json{{"num", to_json(e.num())}, {"den", e.den()}};
}

inline json to_json(const MotivicRationalFunction& f)
{
    json num = json::array();
    for (const auto& [n, c] : f.num())
        num.push_back({{"T", n}, {"coeff", to_json(c)}});
    json den = json::array();
    for (const auto& at : f.den())
        den.push_back({{"a", at.a}, {"b", at.b}});
    return json{{"nvars", f.nvars()}, {"num", num}, {"den", den}};
}

inline json to_json(const presburger::IntegerRationalFunction& f)
{
    json num = json::array();
    for (const auto& [e, c] : f.num)
        num.push_back({{"X", e}, {"coeff", c.str()}});
    return json{{"nvars", f.nvars}, {"num", num}, {"den", f.den}};
}

} // namespace io
} // namespace motivic

#endif
