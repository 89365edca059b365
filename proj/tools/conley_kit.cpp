// conley-kit: build and verify Conley pairs, unstable-manifold thickenings
// and Lusternik-Schnirelmann invariants for the built-in gradient flows.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "conleykit/conleykit.hpp"

namespace fs = std::filesystem;
using namespace conleykit;

namespace {

void load_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw Error("invalid-parameters", "cannot open config file " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("invalid-parameters", "bad config line '" + line + "'");
        std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        if (key == "surface")
            cfg.surface_desc = val;
        else if (key == "field")
            cfg.field_name = val;
        else if (key == "n")
            cfg.n = std::stoi(val);
        else if (key == "epsilon")
            cfg.epsilon = std::stod(val);
        else if (key == "tau")
            cfg.tau = std::stod(val);
        else if (key == "samples")
            cfg.samples = std::stoi(val);
        else if (key == "seed")
            cfg.seed = std::stoull(val);
        else if (key == "h")
            cfg.flow.h0 = std::stod(val);
        else if (key == "horizon")
            cfg.flow.horizon = std::stod(val);
        else if (key == "thicken_horizon")
            cfg.thicken.horizon = std::stod(val);
        else if (key == "out")
            cfg.out_dir = val;
        else
            throw Error("invalid-parameters", "unknown config key '" + key + "'");
    }
}

void emit(const Json& j, const RunConfig& cfg, const std::string& name) {
    std::string text = j.dump(2);
    std::cout << text << "\n";
    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        std::ofstream out(fs::path(cfg.out_dir) / (name + ".json"));
        out << text << "\n";
    }
}

std::vector<int> select_crits(const std::vector<CriticalPoint>& crits, const std::string& sel) {
    std::vector<int> ids;
    if (sel == "all") {
        for (auto& c : crits) ids.push_back(c.id);
    } else if (sel == "min") {
        ids.push_back(crits.front().id);
    } else if (sel == "max") {
        ids.push_back(crits.back().id);
    } else {
        int id = std::stoi(sel);
        if (id < 0 || id >= int(crits.size()))
            throw Error("invalid-parameters", "critical point index out of range");
        ids.push_back(id);
    }
    return ids;
}

Json header_json(const RunConfig& cfg) {
    Json j;
    j["schema"] = "conley-kit/1";
    j["config"] = config_json(cfg);
    j["rng"] = "splitmix64(seed=" + std::to_string(cfg.seed) + ")";
    return j;
}

int run_crit(const RunConfig& cfg) {
    Pipeline p;
    p.cfg = cfg;
    p.setup();
    Json j = header_json(cfg);
    if (p.is_rp2) throw Error("unsupported-combination", "rp2 has no field; use `homology`");
    Json cps = Json::array();
    for (auto& c : p.crits) cps.push_back(critical_point_json(c, p.mesh.dim));
    j["critical_points"] = cps;
    j["min_pairwise_distance"] = p.crit_stats.min_pairwise_distance;
    j["newton_failures"] = p.crit_stats.newton_failures;
    j["poincare_hopf"] = {{"sum", poincare_hopf_sum(p.crits)},
                          {"euler_characteristic", p.mesh.euler_characteristic()}};
    emit(j, cfg, "crit");
    if (!cfg.out_dir.empty()) {
        std::ofstream m(fs::path(cfg.out_dir) / "mesh.txt");
        export_mesh(p.mesh, m);
    }
    return 0;
}

int run_conley(const RunConfig& cfg, const std::string& sel) {
    Pipeline p;
    p.cfg = cfg;
    p.setup();
    auto ids = select_crits(p.crits, sel);
    LevelSweep sw = sweep_levels(p.field, p.mesh, cfg.tau, cfg.flow);
    Json j = header_json(cfg);
    Json arr = Json::array();
    SplitMix64 seeds(cfg.seed);
    bool pass = true;
    for (int id : ids) {
        ConleyPair pair =
            build_conley_pair(p.field, p.mesh, p.crits[id], cfg.epsilon, cfg.tau, cfg.flow, &sw);
        uint64_t s1 = seeds.next(), s2 = seeds.next();
        VerificationReport rep =
            verify_conley_pair(pair, p.field, p.mesh, p.crits, cfg.samples, s1, cfg.flow);
        int exits = 0;
        rep.no_reentry = no_reentry_check(pair, p.field, p.mesh, cfg.samples, s2, cfg.flow, &exits);
        rep.reentry_exiting_samples = exits;
        Json e;
        e["pair"] = pair_json(pair);
        e["verification"] = verification_json(rep);
        arr.push_back(e);
        pass = pass && rep.all_pass() && rep.no_reentry;
    }
    j["pairs"] = arr;
    j["pass"] = pass;
    emit(j, cfg, "conley");
    return pass ? 0 : 1;
}

int run_thicken(const RunConfig& cfg, const std::string& kind) {
    Pipeline p;
    p.cfg = cfg;
    p.setup();
    Json j = header_json(cfg);
    Json arr = Json::array();
    if (kind == "forward") {
        auto pairs = build_conley_pairs(p.field, p.mesh, p.crits, cfg.epsilon, cfg.tau, cfg.flow);
        for (auto& t : forward_thickenings(p.field, p.mesh, pairs, p.crits, cfg.thicken, cfg.flow))
            arr.push_back(thickening_json(t));
    } else if (kind == "ambient" || kind == "ambient-u") {
        ScalarField f = kind == "ambient" ? p.field : p.field.negated();
        auto crits = find_critical_points(f, p.mesh, cfg.tol_crit, cfg.tol_eig);
        Mesh mesh = build_mesh(f, cfg.n);
        auto pairs = build_conley_pairs(f, mesh, crits, cfg.epsilon, cfg.tau, cfg.flow);
        auto kindv =
            kind == "ambient" ? ThickeningKind::AmbientUStar : ThickeningKind::AmbientU;
        for (auto& t :
             ambient_thickenings(f, mesh, pairs, crits, cfg.thicken, cfg.flow, kindv))
            arr.push_back(thickening_json(t));
    } else {
        throw Error("invalid-parameters", "unknown thickening kind '" + kind + "'");
    }
    j["thickenings"] = arr;
    emit(j, cfg, "thicken");
    return 0;
}

int run_cover(const RunConfig& cfg) {
    Pipeline p;
    p.cfg = cfg;
    p.setup();
    p.run_conley();
    p.run_thicken();
    Json j = header_json(cfg);
    j["forward"] = cover_json(p.forward_cover);
    j["ambient"] = cover_json(p.ambient_cover);
    bool pass = p.forward_cover.pass && p.ambient_cover.pass;
    j["pass"] = pass;
    emit(j, cfg, "cover");
    return pass ? 0 : 1;
}

int run_homology(const RunConfig& cfg) {
    Pipeline p;
    p.cfg = cfg;
    p.setup();
    if (!p.is_rp2) {
        p.run_conley();
        p.run_thicken();
    }
    p.run_homology();
    Json j = header_json(cfg);
    j["betti"] = p.betti;
    j["cuplength"] = p.cupp;
    j["subordination"] = p.subchain.length;
    j["cat_lower"] = p.cat.lower;
    j["cat_upper"] = p.cat.upper;
    if (p.cat.exact) j["cat"] = p.cat.value;
    emit(j, cfg, "homology");
    if (!cfg.out_dir.empty()) {
        std::ofstream m(fs::path(cfg.out_dir) / "complex.txt");
        export_complex(p.complex(), m);
    }
    return 0;
}

int run_minimax(const RunConfig& cfg) {
    Pipeline p;
    p.cfg = cfg;
    p.setup();
    if (p.is_rp2) throw Error("unsupported-combination", "rp2 has no field; use `homology`");
    p.run_conley();
    p.run_thicken();
    p.run_homology();
    p.run_minimax();
    Json j = header_json(cfg);
    Json table = Json::array();
    for (std::size_t i = 0; i < p.kappas.size(); ++i) {
        Json row = minimax_json(p.kappas[i]);
        row["no_gap_s0"] = p.nogaps[i].s0;
        table.push_back(row);
        if (!cfg.out_dir.empty()) {
            fs::create_directories(cfg.out_dir);
            std::ofstream csv(fs::path(cfg.out_dir) /
                              ("no_gap_class_" + std::to_string(i) + ".csv"));
            export_no_gap_csv(p.nogaps[i], csv);
        }
    }
    j["classes"] = table;
    j["no_gap_ok"] = p.nogap_ok;
    bool pass = p.nogap_ok;
    for (auto& k : p.kappas) pass = pass && k.crit_id >= 0;
    j["pass"] = pass;
    emit(j, cfg, "minimax");
    return pass ? 0 : 1;
}

int run_report(const RunConfig& cfg) {
    auto p = run_pipeline(cfg);
    Json j = full_report(*p);
    emit(j, cfg, "report");
    return p->all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    cfg.field_name = "";
    cfg.n = 0;
    cfg.epsilon = 0;
    cfg.tau = 0;

    // config file first, flags override
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") {
            try {
                load_config_file(argv[i + 1], cfg);
            } catch (const Error& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 2;
            }
        }

    CLI::App app{"Conley pairs, thickenings and LS invariants for built-in gradient flows"};
    app.require_subcommand(1);
    std::string crit_sel = "all", kind = "forward", config_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--surface", cfg.surface_desc, "surface descriptor, e.g. torus:R=2,r=1");
        sub->add_option("--field", cfg.field_name,
                        "height | cos-theta | cubic-circle | double-well");
        sub->add_option("--n", cfg.n, "resolution (vertices per period)");
        sub->add_option("--epsilon", cfg.epsilon, "Conley pair epsilon");
        sub->add_option("--tau", cfg.tau, "Conley pair tau (>= 1)");
        sub->add_option("--samples", cfg.samples, "verification sample count");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--step", cfg.flow.h0, "initial integration step");
        sub->add_option("--horizon", cfg.flow.horizon, "integration horizon");
        sub->add_option("--thicken-horizon", cfg.thicken.horizon, "backward saturation horizon");
        sub->add_option("--out", cfg.out_dir, "output directory for JSON/CSV artifacts");
        sub->add_option("--config", config_path, "key=value config file (flags override)");
    };

    auto* crit = app.add_subcommand("crit", "list critical points");
    add_common(crit);
    auto* conley = app.add_subcommand("conley", "build and verify Conley pairs");
    add_common(conley);
    conley->add_option("--crit", crit_sel, "min | max | all | <index>");
    auto* thicken = app.add_subcommand("thicken", "build thickenings");
    add_common(thicken);
    thicken->add_option("--kind", kind, "forward | ambient | ambient-u");
    auto* cover = app.add_subcommand("cover", "verify thickening covers");
    add_common(cover);
    auto* homology = app.add_subcommand("homology", "Betti numbers, cuplength, subordination");
    add_common(homology);
    auto* minimax = app.add_subcommand("minimax", "minimax values and no-gap scans");
    add_common(minimax);
    auto* report = app.add_subcommand("report", "full inequality report");
    add_common(report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        apply_surface_defaults(cfg);
        if (crit->parsed()) return run_crit(cfg);
        if (conley->parsed()) return run_conley(cfg, crit_sel);
        if (thicken->parsed()) return run_thicken(cfg, kind);
        if (cover->parsed()) return run_cover(cfg);
        if (homology->parsed()) return run_homology(cfg);
        if (minimax->parsed()) return run_minimax(cfg);
        if (report->parsed()) return run_report(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
