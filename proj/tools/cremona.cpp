#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cremona/report.hpp"

using namespace cremona;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitParse = 65;

std::ostream& open_output(std::ofstream& file, const std::string& path)
{
    if (path.empty() || path == "-")
        return std::cout;
    file.open(path);
    if (!file)
        throw Error(ErrorKind::SyntaxError, "cannot open output file '" + path + "'");
    return file;
}

PolyParser::ParamTable parse_overrides(const std::vector<std::string>& defs)
{
    PolyParser::ParamTable t;
    for (const auto& d : defs) {
        auto eq = d.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::SyntaxError, "expected name=value in --param '" + d + "'");
        t[d.substr(0, eq)] = parse_rat(d.substr(eq + 1));
    }
    return t;
}

int cmd_analyze(const std::string& path, const AnalyzeOptions& opt, bool as_json,
                const std::vector<std::string>& params, const std::string& out_path)
{
    MapFile f = MapFile::load(path);
    BiratMap m = f.instantiate(parse_overrides(params));
    AnalysisReport rep = analyze_map(m, opt, f.curve_hints(false), f.curve_hints(true),
                                     f.name.value_or(path));
    std::ofstream file;
    std::ostream& os = open_output(file, out_path);
    if (as_json)
        os << report_to_json(rep).dump(2) << "\n";
    else
        os << report_to_text(rep);
    return rep.exit_code;
}

int cmd_iterate(const std::string& path, int kmax, int budget, bool as_json,
                const std::vector<std::string>& params, const std::string& out_path)
{
    MapFile f = MapFile::load(path);
    BiratMap m = f.instantiate(parse_overrides(params));
    DegreeSequence seq = iterate_degrees_capped(m, kmax, budget);
    std::ofstream file;
    std::ostream& os = open_output(file, out_path);
    if (as_json)
        os << degree_table_json(f.name.value_or(path), seq, budget).dump(2) << "\n";
    else
        os << degree_table_csv(seq);
    if (seq.hit_budget) {
        std::cerr << "budget " << budget << " exceeded; last good k = "
                  << seq.values.size() - 1 << "\n";
        return 2;
    }
    return 0;
}

DynamicsData idata_from_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::SyntaxError, "cannot open i-data file '" + path + "'");
    Json j;
    in >> j;
    DynamicsData d;
    d.n = j.at("n").get<int>();
    d.i_fwd = j.at("i_fwd").get<std::vector<int>>();
    d.i_inv = j.at("i_inv").get<std::vector<int>>();
    d.i_cross = j.at("i_cross").get<std::vector<std::vector<int>>>();
    d.sigma1 = static_cast<int>(d.i_fwd.size());
    for (int i = 0; i < d.sigma1; ++i)
        d.pairs.push_back({i, i, 0});
    if (d.i_inv.size() != static_cast<size_t>(d.sigma1) ||
        d.i_cross.size() != static_cast<size_t>(d.sigma1))
        throw Error(ErrorKind::SyntaxError, "i-data arrays must all have sigma1 entries");
    return d;
}

int cmd_screen(int sigma1, int m_max, const std::string& idata_path, bool as_csv,
               const std::string& out_path)
{
    std::optional<DynamicsData> shape;
    if (!idata_path.empty())
        shape = idata_from_json(idata_path);
    auto rows = enumerate_candidates(sigma1, m_max, shape);
    std::ofstream file;
    std::ostream& os = open_output(file, out_path);
    int sigma = shape ? static_cast<int>(shape->i_fwd.size()) : 3;
    if (as_csv)
        os << screen_to_csv(rows);
    else
        os << screen_to_json(rows, shape ? shape->n : 2, sigma1, m_max, sigma).dump(2) << "\n";
    return 0;
}

int cmd_conjugate(const std::string& map_path, const std::string& v_path,
                  const std::string& out_path, const std::vector<std::string>& params)
{
    MapFile fm = MapFile::load(map_path);
    MapFile fv = MapFile::load(v_path);
    auto overrides = parse_overrides(params);
    BiratMap m = fm.instantiate(overrides);
    BiratMap v = fv.instantiate(overrides);
    BiratMap c = conjugate(m, v);
    MapFile out = serialize_map(c, fm.name ? std::optional<std::string>(*fm.name + "_conjugated")
                                           : std::nullopt);
    if (out_path.empty() || out_path == "-")
        std::cout << out.to_json().dump(2) << "\n";
    else
        out.save(out_path);
    return 0;
}

int cmd_verify(const std::string& path, const std::vector<std::string>& params, bool as_json,
               const std::string& out_path)
{
    MapFile f = MapFile::load(path);
    BiratMap m = f.instantiate(parse_overrides(params));
    AnalyzeOptions opt;
    opt.oracle_kmax = 0; // static geometry only
    AnalysisReport rep = analyze_map(m, opt, f.curve_hints(false), f.curve_hints(true),
                                     f.name.value_or(path));
    std::ofstream file;
    std::ostream& os = open_output(file, out_path);
    if (as_json) {
        Json j = report_to_json(rep);
        j.erase("d_table");
        j.erase("oracle_degrees");
        j.erase("oracle");
        os << j.dump(2) << "\n";
    } else {
        os << report_to_text(rep);
    }
    if (!rep.valid || !rep.violations.empty())
        return 1;
    return rep.geometry == AnalysisReport::Geometry::Ok ? 0 : 2;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"exact dynamics of birational plane maps"};
    app.require_subcommand(1);

    std::string map_path, v_path, out_path, idata_path;
    std::vector<std::string> params;
    bool json_out = false, csv_out = false, diagnostics = false;
    AnalyzeOptions opt;
    int kmax = 8;

    auto* analyze = app.add_subcommand("analyze", "full pipeline: geometry, decomposition, "
                                                  "difference equation, growth");
    analyze->add_option("map", map_path, "map JSON file")->required();
    analyze->add_option("--horizon", opt.horizon, "orbit horizon (default 50)");
    analyze->add_option("--budget", opt.budget, "raw degree cap for the oracle (default 600)");
    analyze->add_option("--kmax", opt.oracle_kmax, "oracle iterations (default 8)");
    analyze->add_option("--forward-kmax", opt.forward_kmax,
                        "window of the integer recursion (default 60)");
    analyze->add_flag("--json", json_out, "machine-readable report");
    analyze->add_flag("--diagnostics", diagnostics, "include unpaired gamma tables");
    analyze->add_option("--param", params, "override parameter, name=value");
    analyze->add_option("--out", out_path, "output file (default stdout)");

    auto* iterate = app.add_subcommand("iterate", "degree oracle only: k, d(k), log d(k)");
    iterate->add_option("map", map_path, "map JSON file")->required();
    iterate->add_option("--kmax", kmax, "iterations (default 8)");
    iterate->add_option("--budget", opt.budget, "raw degree cap (default 600)");
    iterate->add_flag("--json", json_out, "JSON instead of CSV");
    iterate->add_option("--param", params, "override parameter, name=value");
    iterate->add_option("--out", out_path, "output file (default stdout)");

    int sigma1 = 3, m_max = 5;
    auto* screen = app.add_subcommand("screen", "enumerate candidate integrable m-sets");
    screen->add_option("--sigma1", sigma1, "number of matched pairs (default 3)");
    screen->add_option("--m-max", m_max, "largest orbit length (default 5)");
    screen->add_option("--idata", idata_path, "custom i-data JSON (default: canonical n=2)");
    screen->add_flag("--csv", csv_out, "CSV instead of JSON");
    screen->add_option("--out", out_path, "output file (default stdout)");

    auto* conj = app.add_subcommand("conjugate", "replace a map by V^{-1} o map o V");
    conj->add_option("map", map_path, "map JSON file")->required();
    conj->add_option("v", v_path, "conjugating map V JSON file")->required();
    conj->add_option("--out", out_path, "output map file (default stdout)");
    conj->add_option("--param", params, "override parameter, name=value");

    auto* verify = app.add_subcommand("verify", "validate the map and its base geometry only");
    verify->add_option("map", map_path, "map JSON file")->required();
    verify->add_flag("--json", json_out, "machine-readable report");
    verify->add_option("--param", params, "override parameter, name=value");
    verify->add_option("--out", out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    opt.diagnostics = diagnostics;
    try {
        if (app.got_subcommand(analyze))
            return cmd_analyze(map_path, opt, json_out, params, out_path);
        if (app.got_subcommand(iterate))
            return cmd_iterate(map_path, kmax, opt.budget, json_out, params, out_path);
        if (app.got_subcommand(screen))
            return cmd_screen(sigma1, m_max, idata_path, csv_out, out_path);
        if (app.got_subcommand(conj))
            return cmd_conjugate(map_path, v_path, out_path, params);
        if (app.got_subcommand(verify))
            return cmd_verify(map_path, params, json_out, out_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
        case ErrorKind::SyntaxError:
        case ErrorKind::UnboundParameter:
        case ErrorKind::NonHomogeneous:
            return kExitParse;
        case ErrorKind::InfinitelyNearSuspected:
            std::cerr << "hint: build a conjugated map with ordinary F-points via the "
                         "'conjugate' subcommand and analyze that\n";
            return 1;
        default:
            return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
