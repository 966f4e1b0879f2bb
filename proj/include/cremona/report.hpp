#pragma once

#include <sstream>

#include "cremona/pipeline.hpp"

namespace cremona {

inline const char* growth_class_name(GrowthClass c)
{
    switch (c) {
    case GrowthClass::Bounded: return "bounded";
    case GrowthClass::Polynomial: return "polynomial";
    case GrowthClass::Exponential: return "exponential";
    }
    return "?";
}

inline Json growth_to_json(const GrowthReport& g)
{
    Json j;
    j["class"] = growth_class_name(g.cls);
    if (g.cls != GrowthClass::Exponential)
        j["degree"] = g.poly_degree;
    j["delay"] = g.delay;
    Json cyc = Json::object();
    for (const auto& [n, m] : g.cyclotomic)
        cyc[std::to_string(n)] = m;
    j["cyclotomic_multiplicities"] = cyc;
    j["unit_factor"] = g.unit_factor.to_string("L");
    j["residual"] = g.residual.to_string("L");
    if (g.cls == GrowthClass::Exponential) {
        j["dominant_root_interval"] = {rat_to_string(g.root_lo), rat_to_string(g.root_hi)};
        j["dominant_root"] = Rat((g.root_lo + g.root_hi) / 2).get_d();
        j["entropy"] = g.entropy;
    }
    return j;
}

inline Json report_to_json(const AnalysisReport& r)
{
    Json j;
    j["map"] = r.map_name;
    j["degree"] = r.n;
    j["validation"] = Json{{"valid", r.valid}};
    if (!r.valid) {
        j["validation"]["error"] = r.validation_error;
        j["exit_code"] = r.exit_code;
        return j;
    }
    j["validation"]["cofactor_degree"] = r.cofactor_degree;

    j["base_geometry"] =
        Json{{"status", r.geometry == AnalysisReport::Geometry::Ok         ? "ordinary"
                        : r.geometry == AnalysisReport::Geometry::Degraded ? "incomplete"
                                                                           : "failed"}};
    if (!r.geometry_note.empty())
        j["base_geometry"]["note"] = r.geometry_note;
    if (r.base) {
        auto points = [](const std::vector<BasePoint>& pts) {
            Json a = Json::array();
            for (const auto& bp : pts) {
                Json p;
                p["point"] = {rat_to_string(bp.point[0]), rat_to_string(bp.point[1]),
                              rat_to_string(bp.point[2])};
                p["mult"] = bp.mult;
                a.push_back(p);
            }
            return a;
        };
        j["base_geometry"]["forward_points"] = points(r.base->fwd);
        j["base_geometry"]["inverse_points"] = points(r.base->inv);
        Json curves = Json::array();
        for (const auto& c : r.base->fwd_curves)
            curves.push_back(Json{{"poly", c.poly.to_string()},
                                  {"degree", c.degree},
                                  {"target", c.target + 1},
                                  {"components", c.components}});
        j["base_geometry"]["principal_curves"] = curves;
        j["base_geometry"]["char_matrix"] = r.base->matrix;
        j["base_geometry"]["cofactor_matches_curves"] = r.cofactor_matches_curves;
    }
    if (r.char_fwd) {
        j["characteristic"] = Json{{"n", r.char_fwd->n}, {"mults", r.char_fwd->mults}};
        j["characteristic_inverse"] = Json{{"n", r.char_inv->n}, {"mults", r.char_inv->mults}};
    }

    if (r.decomposition) {
        const auto& d = *r.decomposition;
        Json dec;
        dec["horizon"] = d.horizon;
        dec["sigma1"] = d.sigma1;
        Json pairs = Json::array();
        for (const auto& p : d.pairs)
            pairs.push_back(Json{{"alpha", p.alpha + 1}, {"beta", p.beta + 1}, {"m", p.m}});
        dec["pairs"] = pairs;
        auto classes = [](const std::vector<PointClass>& cs) {
            Json a = Json::array();
            for (auto c : cs)
                a.push_back(point_class_name(c));
            return a;
        };
        dec["forward_classes"] = classes(d.fwd_class);
        dec["inverse_classes"] = classes(d.inv_class);
        dec["anomalies"] = d.anomalies;
        dec["any_unresolved"] = d.any_unresolved;
        j["decomposition"] = dec;
    }

    if (r.secular_rec) {
        Json s;
        s["order"] = r.secular_rec->order;
        s["char_poly"] = r.secular_rec->char_poly.to_string("L");
        Json coeffs = Json::array();
        for (const auto& a : r.secular_rec->low_coefficients())
            coeffs.push_back(a.get_str());
        s["coefficients"] = coeffs;
        j["secular"] = s;
    }
    if (r.minimal_rec) {
        Json mrec;
        mrec["order"] = r.minimal_rec->order;
        mrec["char_poly"] = r.minimal_rec->char_poly.to_string("L");
        if (r.minimal_rec->monic()) {
            Json coeffs = Json::array();
            for (const auto& a : r.minimal_rec->low_coefficients())
                coeffs.push_back(a.get_str());
            mrec["coefficients"] = coeffs;
        }
        if (r.secular_rec)
            mrec["divides_secular"] = r.minimal_divides_secular;
        j["minimal_recurrence"] = mrec;
    }
    if (r.growth)
        j["growth"] = growth_to_json(*r.growth);
    if (r.closed) {
        Json c;
        c["exact"] = r.closed->exact;
        c["description"] = r.closed->description;
        j["closed_form"] = c;
    }

    Json dtab = Json::array();
    for (size_t k = 0; k < r.forward_values.size(); ++k)
        dtab.push_back(r.forward_values[k].get_str());
    j["d_table"] = dtab;
    if (!r.gamma_diagnostics.empty()) {
        Json g = Json::array();
        for (const auto& row : r.gamma_diagnostics) {
            Json jr = Json::array();
            for (const auto& v : row)
                jr.push_back(v.get_str());
            g.push_back(jr);
        }
        j["gamma_table"] = g;
    }
    Json otab = Json::array();
    for (long v : r.oracle.values)
        otab.push_back(v);
    j["oracle_degrees"] = otab;
    j["oracle"] = Json{{"hit_budget", r.oracle.hit_budget},
                       {"agreement_window", r.agreement_window},
                       {"agrees", r.oracle_agrees}};

    j["warnings"] = r.warnings;
    j["violations"] = r.violations;
    j["exit_code"] = r.exit_code;
    return j;
}

/// RFC-4180 degree table (CRLF line endings) for external plotting.
inline std::string degree_table_csv(const DegreeSequence& seq)
{
    std::ostringstream o;
    o << "k,d,log_d\r\n";
    for (size_t k = 0; k < seq.values.size(); ++k)
        o << k << "," << seq.values[k] << ","
          << std::log(static_cast<double>(seq.values[k])) << "\r\n";
    return o.str();
}

inline Json degree_table_json(const std::string& name, const DegreeSequence& seq, int budget)
{
    Json j;
    j["map"] = name;
    j["budget"] = budget;
    j["hit_budget"] = seq.hit_budget;
    Json rows = Json::array();
    for (size_t k = 0; k < seq.values.size(); ++k)
        rows.push_back(Json{{"k", k},
                            {"d", seq.values[k]},
                            {"log_d", std::log(static_cast<double>(seq.values[k]))}});
    j["degrees"] = rows;
    return j;
}

inline Json screen_to_json(const std::vector<Candidate>& rows, int n, int sigma1, int m_max,
                           int sigma = 3)
{
    Json j;
    j["n"] = n;
    j["sigma1"] = sigma1;
    j["m_max"] = m_max;
    j["parameter_space_dimension"] = 2 * sigma + 8 - 2 * sigma1;
    j["subvariety_codimension"] = 2 * sigma1;
    Json arr = Json::array();
    for (const auto& c : rows) {
        Json row;
        row["m"] = c.m_set;
        row["char_poly"] = c.char_poly.to_string("L");
        Json coeffs = Json::array();
        for (const auto& v : c.char_poly.coeffs())
            coeffs.push_back(v.get_str());
        row["char_poly_coeffs"] = coeffs;
        row["order_reduced"] = c.grouped;
        row["growth"] = growth_to_json(c.growth);
        arr.push_back(row);
    }
    j["candidates"] = arr;
    return j;
}

inline std::string screen_to_csv(const std::vector<Candidate>& rows)
{
    std::ostringstream o;
    o << "m_set,char_poly,class,degree_or_entropy\r\n";
    for (const auto& c : rows) {
        std::string ms;
        for (size_t i = 0; i < c.m_set.size(); ++i)
            ms += (i ? " " : "") + std::to_string(c.m_set[i]);
        o << "\"" << ms << "\",\"" << c.char_poly.to_string("L") << "\","
          << growth_class_name(c.growth.cls) << ",";
        if (c.growth.cls == GrowthClass::Exponential)
            o << c.growth.entropy;
        else
            o << c.growth.poly_degree;
        o << "\r\n";
    }
    return o.str();
}

inline std::string report_to_text(const AnalysisReport& r)
{
    std::ostringstream o;
    o << "map " << r.map_name << " (degree " << r.n << ")\n";
    if (!r.valid) {
        o << "  INVALID: " << r.validation_error << "\n";
        return o.str();
    }
    o << "  birational: yes (round-trip cofactor degree " << r.cofactor_degree << ")\n";
    if (r.char_fwd) {
        o << "  characteristic {" << r.char_fwd->n << ";";
        for (size_t i = 0; i < r.char_fwd->mults.size(); ++i)
            o << (i ? "," : " ") << r.char_fwd->mults[i];
        o << "}\n";
    }
    if (r.base) {
        o << "  forward F-points:";
        for (const auto& bp : r.base->fwd)
            o << " " << bp.point.to_string() << "^" << bp.mult;
        o << "\n  inverse F-points:";
        for (const auto& bp : r.base->inv)
            o << " " << bp.point.to_string() << "^" << bp.mult;
        o << "\n  char matrix:\n";
        for (const auto& row : r.base->matrix) {
            o << "   ";
            for (int v : row)
                o << " " << v;
            o << "\n";
        }
    } else {
        o << "  base geometry: " << r.geometry_note << "\n";
    }
    if (r.decomposition) {
        o << "  decomposition (horizon " << r.decomposition->horizon
          << "): sigma1=" << r.decomposition->sigma1 << " pairs";
        for (const auto& p : r.decomposition->pairs)
            o << " (" << p.alpha + 1 << "," << p.beta + 1 << ",m=" << p.m << ")";
        o << "\n    classes fwd:";
        for (auto c : r.decomposition->fwd_class)
            o << " " << point_class_name(c);
        o << " | inv:";
        for (auto c : r.decomposition->inv_class)
            o << " " << point_class_name(c);
        o << "\n";
        for (const auto& a : r.decomposition->anomalies)
            o << "    ANOMALY: " << a << "\n";
    }
    if (r.secular_rec)
        o << "  secular: det(Lambda) = " << r.secular_rec->char_poly.to_string("L")
          << "  (order " << r.secular_rec->order << ")\n";
    if (r.minimal_rec)
        o << "  minimal recurrence: " << r.minimal_rec->char_poly.to_string("L")
          << (r.secular_rec
                  ? std::string("  (divides secular: ") +
                        (r.minimal_divides_secular ? "yes" : "NO") + ")"
                  : std::string())
          << "\n";
    if (r.growth) {
        o << "  growth: " << growth_class_name(r.growth->cls);
        if (r.growth->cls == GrowthClass::Polynomial)
            o << " of degree " << r.growth->poly_degree;
        if (r.growth->cls == GrowthClass::Exponential)
            o << ", entropy " << r.growth->entropy << ", dominant root in ["
              << rat_to_string(r.growth->root_lo) << ", " << rat_to_string(r.growth->root_hi)
              << "]";
        o << "\n";
    }
    if (r.closed && r.closed->exact)
        o << "  closed form: d(k) = " << r.closed->description << "\n";
    o << "  d(k):";
    size_t show = std::min<size_t>(r.forward_values.size(), 16);
    for (size_t k = 0; k < show; ++k)
        o << " " << r.forward_values[k].get_str();
    if (r.forward_values.size() > show)
        o << " ...";
    o << "\n  oracle:";
    for (long v : r.oracle.values)
        o << " " << v;
    o << (r.oracle.hit_budget ? " (budget)" : "") << "\n";
    if (r.agreement_window >= 0)
        o << "  oracle/recursion agreement over " << r.agreement_window
          << " terms: " << (r.oracle_agrees ? "exact" : "MISMATCH") << "\n";
    for (const auto& w : r.warnings)
        o << "  warning: " << w << "\n";
    for (const auto& v : r.violations)
        o << "  VIOLATION: " << v << "\n";
    o << "  exit code " << r.exit_code << "\n";
    return o.str();
}

} // namespace cremona
