#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cremona/mapfile.hpp"
#include "cremona/oracle.hpp"
#include "cremona/recurrence.hpp"

namespace cremona {

struct AnalyzeOptions {
    int horizon = 50;
    int budget = 600;
    int oracle_kmax = 8;
    int forward_kmax = 60; // window of the cheap integer recursion
    bool diagnostics = false;
};

/// Full analysis result. `exit_code` follows the CLI convention:
/// 0 clean, 1 violation, 2 honest caveats (unresolved orbits within the
/// horizon, or dynamics derived from the degree oracle only because the
/// base geometry is not ordinary).
struct AnalysisReport {
    std::string map_name;
    int n = 0;

    bool valid = false;
    std::string validation_error;
    int cofactor_degree = 0;

    enum class Geometry { Ok, Degraded, Failed } geometry = Geometry::Failed;
    std::string geometry_note;
    std::optional<BaseData> base;
    std::optional<Characteristic> char_fwd, char_inv;
    bool cofactor_matches_curves = false;
    std::vector<std::string> warnings;

    std::optional<Decomposition> decomposition;
    std::optional<DynamicsData> dynamics;
    std::optional<Recurrence> secular_rec;
    std::vector<Int> forward_values;
    std::optional<ForwardTable> forward_table;

    DegreeSequence oracle;
    int agreement_window = -1; // -1: not compared; else # of agreeing terms
    bool oracle_agrees = false;

    std::vector<std::vector<Int>> gamma_diagnostics; // per-alpha, when requested

    std::optional<Recurrence> minimal_rec;
    bool minimal_divides_secular = false;
    std::optional<GrowthReport> growth;
    std::optional<ClosedForm> closed;
    std::vector<Int> closed_values;

    std::vector<std::string> violations;
    int exit_code = 1;
};

namespace detail {

inline void run_dynamics_from_sequence(AnalysisReport& rep, const std::vector<Int>& seq)
{
    if (seq.size() < 6)
        return;
    try {
        rep.minimal_rec = minimal_recurrence(seq);
    } catch (const Error& e) {
        rep.warnings.push_back(std::string("minimal recurrence: ") + e.what());
        return;
    }
    rep.growth = classify_growth(*rep.minimal_rec);
    try {
        rep.closed = closed_form(*rep.minimal_rec, seq);
    } catch (const Error& e) {
        rep.warnings.push_back(std::string("closed form: ") + e.what());
    }
}

} // namespace detail

/// The analysis pipeline: validate -> base points -> principal curves ->
/// characteristic matrix -> Noether suite -> decomposition -> secular
/// equation -> forward recursion -> degree oracle cross-check -> minimal
/// recurrence -> growth classification -> closed form. When the base
/// geometry is not ordinary the dynamics degrade to the oracle-only path
/// with an explicit caveat.
inline AnalysisReport analyze_map(const BiratMap& m, const AnalyzeOptions& opt,
                                  const std::vector<HomPoly>& fwd_hints = {},
                                  const std::vector<HomPoly>& inv_hints = {},
                                  const std::string& name = "map")
{
    AnalysisReport rep;
    rep.map_name = name;
    rep.n = m.degree();

    HomPoly cofactor;
    try {
        ValidationReport v = validate(m);
        rep.valid = true;
        rep.cofactor_degree = v.cofactor_degree;
        cofactor = v.cofactor;
    } catch (const Error& e) {
        rep.valid = false;
        rep.validation_error = e.what();
        rep.violations.push_back(e.what());
        rep.exit_code = 1;
        return rep;
    }

    BaseLocateResult fwd_loc = locate_base_points(m.forward());
    BaseLocateResult inv_loc = locate_base_points(m.inverse());
    rep.warnings.insert(rep.warnings.end(), fwd_loc.warnings.begin(), fwd_loc.warnings.end());
    rep.warnings.insert(rep.warnings.end(), inv_loc.warnings.begin(), inv_loc.warnings.end());

    bool ordinary =
        fwd_loc.status == BaseStatus::Complete && inv_loc.status == BaseStatus::Complete;
    if (ordinary) {
        try {
            BaseData base;
            base.fwd = fwd_loc.points;
            base.inv = inv_loc.points;
            base.fwd_curves = principal_curves(m, base.fwd, base.inv, fwd_hints);
            base.inv_curves = principal_curves(m.inverse_map(), base.inv, base.fwd, inv_hints);
            base.matrix = char_matrix(base.fwd, base.fwd_curves);
            base.matrix_inv = char_matrix(base.inv, base.inv_curves);
            for (size_t a = 0; a < base.fwd.size(); ++a)
                for (size_t b = 0; b < base.inv.size(); ++b)
                    if (base.matrix[a][b] != base.matrix_inv[b][a])
                        throw Error(ErrorKind::NoetherViolation,
                                    "characteristic-number symmetry fails at (" +
                                        std::to_string(a + 1) + "," + std::to_string(b + 1) +
                                        ")");
            NoetherData nd;
            nd.n = m.degree();
            for (const auto& bp : base.fwd)
                nd.fwd_mults.push_back(bp.mult);
            for (const auto& bp : base.inv)
                nd.inv_mults.push_back(bp.mult);
            nd.matrix = base.matrix;
            for (const auto& c : base.fwd_curves)
                nd.nu_fwd.push_back(c.components);
            for (const auto& c : base.inv_curves)
                nd.nu_inv.push_back(c.components);
            noether_verify(nd);
            rep.char_fwd = characteristic_of(base.fwd, m.degree());
            rep.char_inv = characteristic_of(base.inv, m.degree());
            // product of principal curves to their multiplicities vs the
            // round-trip cofactor
            HomPoly prod = HomPoly::constant(Rat(1));
            for (size_t b = 0; b < base.fwd_curves.size(); ++b)
                for (int i = 0; i < base.inv[b].mult; ++i)
                    prod = prod * base.fwd_curves[b].poly;
            rep.cofactor_matches_curves = prod.canonicalized() == cofactor.canonicalized();
            if (!rep.cofactor_matches_curves)
                rep.violations.push_back(
                    "product of principal curves does not match the round-trip cofactor");
            rep.base = std::move(base);
            rep.geometry = AnalysisReport::Geometry::Ok;
        } catch (const Error& e) {
            rep.geometry = AnalysisReport::Geometry::Failed;
            rep.geometry_note = e.what();
            rep.violations.push_back(e.what());
        }
    } else {
        rep.geometry = AnalysisReport::Geometry::Degraded;
        std::ostringstream note;
        note << "base geometry incomplete:";
        auto describe = [&](const char* side, const BaseLocateResult& r) {
            if (r.status == BaseStatus::Complete)
                return;
            note << " " << side << " side "
                 << (r.status == BaseStatus::InfinitelyNearSuspected
                         ? "suggests infinitely near points (conjugate the map and retry)"
                         : "left non-rational residual factors");
        };
        describe("forward", fwd_loc);
        describe("inverse", inv_loc);
        rep.geometry_note = note.str();
    }

    // decomposition + theorem dynamics only with ordinary geometry
    if (rep.geometry == AnalysisReport::Geometry::Ok) {
        Decomposition dec = decompose(m, *rep.base, opt.horizon);
        rep.dynamics = DynamicsData::from_analysis(m, *rep.base, dec);
        rep.decomposition = std::move(dec);
        rep.secular_rec = secular(*rep.dynamics);
        int kmax = std::max({opt.forward_kmax, 2 * rep.secular_rec->order + 6, 12});
        rep.forward_table = forward_d(*rep.dynamics, kmax);
        rep.forward_values = rep.forward_table->d;
        auto chk = recurrence_check(*rep.secular_rec, rep.forward_values);
        if (!chk.first)
            rep.violations.push_back("forward recursion violates the secular recurrence at k=" +
                                     std::to_string(chk.second));
        for (const auto& a : rep.decomposition->anomalies)
            rep.violations.push_back("orbit anomaly: " + a);
        if (opt.diagnostics)
            rep.gamma_diagnostics =
                forward_gamma_diagnostics(*rep.dynamics, *rep.base, *rep.forward_table);
    }

    // degree oracle
    rep.oracle = iterate_degrees_capped(m, opt.oracle_kmax, opt.budget);
    if (!rep.forward_values.empty()) {
        rep.oracle_agrees = true;
        rep.agreement_window = static_cast<int>(rep.oracle.values.size());
        for (size_t k = 0; k < rep.oracle.values.size(); ++k) {
            if (k >= rep.forward_values.size())
                break;
            if (Int(rep.oracle.values[k]) != rep.forward_values[k]) {
                rep.oracle_agrees = false;
                rep.violations.push_back(
                    "oracle degree disagrees with the forward recursion at k=" +
                    std::to_string(k) + " (" + std::to_string(rep.oracle.values[k]) + " vs " +
                    rep.forward_values[k].get_str() + ")");
                break;
            }
        }
    }

    // minimal recurrence / growth / closed form: from the forward table when
    // available, otherwise from the oracle sequence (degraded mode)
    if (!rep.forward_values.empty()) {
        detail::run_dynamics_from_sequence(rep, rep.forward_values);
    } else {
        std::vector<Int> seq;
        for (long v : rep.oracle.values)
            seq.emplace_back(v);
        detail::run_dynamics_from_sequence(rep, seq);
        if (rep.minimal_rec)
            rep.warnings.push_back(
                "dynamics derived from the degree oracle only (non-ordinary base geometry)");
    }
    if (rep.minimal_rec && rep.secular_rec)
        rep.minimal_divides_secular =
            rep.secular_rec->char_poly.divide_exact(rep.minimal_rec->char_poly).has_value();
    if (rep.minimal_rec && rep.closed && rep.closed->exact) {
        int upto = rep.forward_values.empty() ? static_cast<int>(rep.oracle.values.size()) - 1
                                              : static_cast<int>(rep.forward_values.size()) - 1;
        for (int k = 0; k <= upto; ++k)
            rep.closed_values.push_back(k < rep.closed->delay
                                            ? (rep.forward_values.empty()
                                                   ? Int(rep.oracle.values[static_cast<size_t>(k)])
                                                   : rep.forward_values[static_cast<size_t>(k)])
                                            : Int(rep.closed->eval(k).get_num()));
    }

    if (!rep.violations.empty())
        rep.exit_code = 1;
    else if (rep.geometry != AnalysisReport::Geometry::Ok ||
             (rep.decomposition && rep.decomposition->any_unresolved))
        rep.exit_code = 2;
    else
        rep.exit_code = 0;
    return rep;
}

inline AnalysisReport analyze_file(const MapFile& f, const AnalyzeOptions& opt)
{
    BiratMap m = f.instantiate();
    AnalysisReport rep = analyze_map(m, opt, f.curve_hints(false), f.curve_hints(true),
                                     f.name.value_or("map"));
    // base-point hints are verified, never trusted
    if (!f.hint_base_points.empty()) {
        PolyParser::ParamTable t = f.param_table();
        for (const auto& coords : f.hint_base_points) {
            ProjPoint p(parse_rat(coords[0]), parse_rat(coords[1]), parse_rat(coords[2]));
            auto v = eval_triple(m.forward(), p);
            if (sign(v[0]) != 0 || sign(v[1]) != 0 || sign(v[2]) != 0) {
                rep.warnings.push_back("hinted base point " + p.to_string() +
                                       " is not a common zero of the forward triple");
                continue;
            }
            if (rep.base) {
                bool found = false;
                for (const auto& bp : rep.base->fwd)
                    found = found || bp.point == p;
                if (!found)
                    rep.warnings.push_back("hinted base point " + p.to_string() +
                                           " was not located independently");
            }
        }
        (void)t;
    }
    return rep;
}

} // namespace cremona
