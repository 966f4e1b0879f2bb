#pragma once

#include <array>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cremona/mapcore.hpp"
#include "cremona/parser.hpp"

namespace cremona {

using Json = nlohmann::ordered_json;

/// On-disk description of a map: three forward and three inverse expression
/// strings over z1,z2,z3, optional parameter substitutions, optional hints
/// (base points and principal-curve polynomials, verified downstream).
struct MapFile {
    std::array<std::string, 3> forward;
    std::array<std::string, 3> inverse;
    std::map<std::string, std::string> parameters; // name -> rational literal
    std::vector<std::array<std::string, 3>> hint_base_points;
    std::vector<std::string> hint_principal_curves;
    std::vector<std::string> hint_inverse_principal_curves;
    std::optional<std::string> name;

    PolyParser::ParamTable param_table() const
    {
        PolyParser::ParamTable t;
        for (const auto& [k, v] : parameters)
            t.emplace(k, parse_rat(v));
        return t;
    }

    /// Parses both triples, checking per-triple homogeneity of one common
    /// degree, and builds the map.
    BiratMap instantiate(const PolyParser::ParamTable& overrides = {}) const
    {
        PolyParser::ParamTable t = param_table();
        for (const auto& [k, v] : overrides)
            t[k] = v;
        auto triple = [&](const std::array<std::string, 3>& exprs, const char* which) {
            Triple out;
            int deg = -1;
            for (int i = 0; i < 3; ++i) {
                out[static_cast<size_t>(i)] = parse_poly(exprs[static_cast<size_t>(i)], t);
                if (out[static_cast<size_t>(i)].is_zero())
                    throw Error(ErrorKind::NonHomogeneous,
                                std::string(which) + " component " + std::to_string(i + 1) +
                                    " is zero after substitution");
                if (deg < 0)
                    deg = out[static_cast<size_t>(i)].degree();
                else if (out[static_cast<size_t>(i)].degree() != deg)
                    throw Error(ErrorKind::NonHomogeneous,
                                std::string(which) + " triple mixes degrees " +
                                    std::to_string(deg) + " and " +
                                    std::to_string(out[static_cast<size_t>(i)].degree()));
            }
            return out;
        };
        return BiratMap(triple(forward, "forward"), triple(inverse, "inverse"));
    }

    std::vector<HomPoly> curve_hints(bool inverse_side = false) const
    {
        PolyParser::ParamTable t = param_table();
        std::vector<HomPoly> out;
        const auto& src = inverse_side ? hint_inverse_principal_curves : hint_principal_curves;
        for (const auto& s : src)
            out.push_back(parse_poly(s, t).canonicalized());
        return out;
    }

    static MapFile from_json(const Json& j)
    {
        MapFile f;
        if (j.contains("variables")) {
            auto v = j.at("variables").get<std::vector<std::string>>();
            if (v != std::vector<std::string>{"z1", "z2", "z3"})
                throw Error(ErrorKind::SyntaxError, "variables must be [\"z1\",\"z2\",\"z3\"]");
        }
        auto get3 = [&](const char* key) {
            auto arr = j.at(key).get<std::vector<std::string>>();
            if (arr.size() != 3)
                throw Error(ErrorKind::SyntaxError, std::string(key) + " must have 3 entries");
            return std::array<std::string, 3>{arr[0], arr[1], arr[2]};
        };
        f.forward = get3("forward");
        f.inverse = get3("inverse");
        if (j.contains("parameters"))
            for (const auto& [k, v] : j.at("parameters").items())
                f.parameters[k] = v.is_string() ? v.get<std::string>() : v.dump();
        if (j.contains("name"))
            f.name = j.at("name").get<std::string>();
        if (j.contains("hints")) {
            const auto& h = j.at("hints");
            if (h.contains("base_points"))
                for (const auto& bp : h.at("base_points")) {
                    auto arr = bp.get<std::vector<std::string>>();
                    if (arr.size() != 3)
                        throw Error(ErrorKind::SyntaxError, "hint point needs 3 coordinates");
                    f.hint_base_points.push_back({arr[0], arr[1], arr[2]});
                }
            if (h.contains("principal_curves"))
                f.hint_principal_curves =
                    h.at("principal_curves").get<std::vector<std::string>>();
            if (h.contains("inverse_principal_curves"))
                f.hint_inverse_principal_curves =
                    h.at("inverse_principal_curves").get<std::vector<std::string>>();
        }
        return f;
    }

    Json to_json() const
    {
        Json j;
        if (name)
            j["name"] = *name;
        j["variables"] = {"z1", "z2", "z3"};
        j["forward"] = forward;
        j["inverse"] = inverse;
        if (!parameters.empty()) {
            Json p = Json::object();
            for (const auto& [k, v] : parameters)
                p[k] = v;
            j["parameters"] = p;
        }
        if (!hint_base_points.empty() || !hint_principal_curves.empty() ||
            !hint_inverse_principal_curves.empty()) {
            Json h = Json::object();
            if (!hint_base_points.empty()) {
                Json pts = Json::array();
                for (const auto& p : hint_base_points)
                    pts.push_back({p[0], p[1], p[2]});
                h["base_points"] = pts;
            }
            if (!hint_principal_curves.empty())
                h["principal_curves"] = hint_principal_curves;
            if (!hint_inverse_principal_curves.empty())
                h["inverse_principal_curves"] = hint_inverse_principal_curves;
            j["hints"] = h;
        }
        return j;
    }

    static MapFile load(const std::string& path)
    {
        std::ifstream in(path);
        if (!in)
            throw Error(ErrorKind::SyntaxError, "cannot open map file '" + path + "'");
        Json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            throw Error(ErrorKind::SyntaxError,
                        "invalid JSON in '" + path + "': " + e.what());
        }
        return from_json(j);
    }

    void save(const std::string& path) const
    {
        std::ofstream out(path);
        if (!out)
            throw Error(ErrorKind::SyntaxError, "cannot write map file '" + path + "'");
        out << to_json().dump(2) << "\n";
    }
};

/// Canonical serialization of a map back into file form. The components are
/// printed exactly as the map stores them (triple-level canonical form: one
/// common scale, primitive integer coefficients), so serialization is
/// idempotent under parse/serialize round trips.
inline MapFile serialize_map(const BiratMap& m, std::optional<std::string> name = std::nullopt)
{
    MapFile f;
    f.name = std::move(name);
    for (int i = 0; i < 3; ++i) {
        f.forward[static_cast<size_t>(i)] = m.forward()[static_cast<size_t>(i)].to_string();
        f.inverse[static_cast<size_t>(i)] = m.inverse()[static_cast<size_t>(i)].to_string();
    }
    return f;
}

} // namespace cremona
