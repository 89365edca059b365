#pragma once

#include <memory>

#include "json.hpp"

#include "conleykit/filtration.hpp"
#include "conleykit/thicken.hpp"

namespace conleykit {

using Json = nlohmann::json;

struct RunConfig {
    std::string surface_desc = "torus:R=2,r=1";
    std::string field_name = "height";
    int n = 96;
    double epsilon = 0.2;
    double tau = 2.0;
    FlowParams flow;
    ThickenParams thicken;
    int samples = 500;
    uint64_t seed = 7;
    double tol_crit = 1e-10;
    double tol_eig = 1e-6;
    std::string out_dir;

    void validate() const {
        if (n <= 0 || epsilon <= 0 || tau < 1 || samples <= 0 || flow.h0 <= 0 ||
            flow.horizon <= 0)
            throw Error("invalid-parameters", "all numeric configuration fields must be positive");
    }
};

/// Surface-dependent defaults for fields the user left unset.
inline void apply_surface_defaults(RunConfig& cfg) {
    Surface s = parse_surface(cfg.surface_desc);
    if (cfg.field_name.empty()) {
        cfg.field_name = s.dim == 1 ? "cos-theta" : "height";
    }
    if (cfg.n == 0) cfg.n = s.kind == SurfaceKind::Circle ? 1024 : 64;
    if (cfg.epsilon == 0) cfg.epsilon = s.kind == SurfaceKind::Circle ? 0.2 : 0.45;
    if (cfg.tau == 0) cfg.tau = s.kind == SurfaceKind::Sphere ? 1.5 : 2.0;
}

inline Json config_json(const RunConfig& cfg) {
    Json j;
    j["surface"] = cfg.surface_desc;
    j["field"] = cfg.field_name;
    j["n"] = cfg.n;
    j["epsilon"] = cfg.epsilon;
    j["tau"] = cfg.tau;
    j["samples"] = cfg.samples;
    j["seed"] = cfg.seed;
    j["h"] = cfg.flow.h0;
    j["h_min"] = cfg.flow.h_min;
    j["delta_conv"] = cfg.flow.delta_conv;
    j["horizon"] = cfg.flow.horizon;
    j["thicken_horizon"] = cfg.thicken.horizon;
    j["safety"] = cfg.thicken.safety;
    j["tol_crit"] = cfg.tol_crit;
    j["tol_eig"] = cfg.tol_eig;
    j["threads"] = thread_budget();
    return j;
}

inline Json critical_point_json(const CriticalPoint& c, int dim) {
    Json j;
    j["id"] = c.id;
    j["x"] = dim == 1 ? Json::array({c.x[0]}) : Json::array({c.x[0], c.x[1]});
    j["value"] = c.value;
    j["grad_norm"] = c.grad_norm;
    j["classification"] =
        c.cls == CritClass::Nondegenerate ? "nondegenerate" : "degenerate-isolated";
    j["morse_index"] = c.morse_index;
    j["hessian_eigenvalues"] =
        dim == 1 ? Json::array({c.hess_eigenvalues[0]})
                 : Json::array({c.hess_eigenvalues[0], c.hess_eigenvalues[1]});
    return j;
}

inline Json pair_json(const ConleyPair& p) {
    Json j;
    j["critical_point"] = p.crit_id;
    j["c"] = p.c;
    j["epsilon"] = p.epsilon;
    j["tau"] = p.tau;
    j["N"] = p.N;
    j["L"] = p.L;
    j["Nplus"] = p.Nplus;
    j["Nzero"] = p.Nzero;
    j["Nminus"] = p.Nminus;
    return j;
}

inline Json verification_json(const VerificationReport& r) {
    auto axiom = [](const AxiomOutcome& a) {
        Json j;
        j["pass"] = a.pass;
        j["checked"] = a.checked;
        j["counterexamples"] = a.counterexamples;
        j["borderline_excluded"] = a.borderline_excluded;
        j["non_exiting"] = a.non_exiting;
        return j;
    };
    Json j;
    j["axiom_i"] = r.axiom_i;
    j["axiom_ii"] = r.axiom_ii;
    j["axiom_iii"] = axiom(r.axiom_iii);
    j["axiom_iv"] = axiom(r.axiom_iv);
    j["no_reentry"] = r.no_reentry;
    j["reentry_exiting_samples"] = r.reentry_exiting_samples;
    j["samples"] = r.samples;
    j["seed"] = r.seed;
    j["epsilon"] = r.epsilon;
    j["tau"] = r.tau;
    j["pass"] = r.all_pass() && r.no_reentry;
    return j;
}

inline Json thickening_json(const Thickening& t) {
    Json j;
    j["critical_point"] = t.crit_id;
    j["kind"] = to_string(t.kind);
    j["T"] = t.T;
    j["calT"] = t.calT;
    j["vertices"] = t.vertices;
    return j;
}

inline Json cover_json(const CoverReport& c) {
    Json j;
    j["uncovered"] = c.uncovered;
    j["same_level_disjoint"] = c.same_level_disjoint;
    j["member_reduced_betti"] = c.member_reduced_betti;
    j["contractible_all"] = c.contractible_all;
    j["pass"] = c.pass;
    return j;
}

inline Json minimax_json(const MinimaxResult& m) {
    Json j;
    j["degree"] = m.degree;
    j["kappa"] = m.kappa;
    j["kappa_via_js"] = m.kappa_via_js;
    j["critical_point"] = m.crit_id;
    j["critical_value"] = m.crit_value;
    j["tol_match"] = m.tol_match;
    j["rep_max_f"] = m.rep_max_f;
    return j;
}

/// Full pipeline state for one configuration.  Non-movable (the filtration
/// holds internal pointers); construct through run_pipeline.
struct Pipeline {
    RunConfig cfg;
    Surface surface;
    bool is_rp2 = false;
    ScalarField field;
    Mesh mesh;

    std::vector<CriticalPoint> crits;
    CriticalSearchStats crit_stats;

    std::vector<ConleyPair> pairs;
    std::vector<VerificationReport> verifications;
    std::vector<char> reentry_ok;
    std::vector<int> reentry_exits;

    std::vector<Thickening> forward;
    CoverReport forward_cover;
    std::vector<Thickening> ambient;
    CoverReport ambient_cover;

    std::unique_ptr<Filtration> filt;        // field case
    SimplicialComplexGF2 bare_cx;            // rp2 case
    RelativeHomology bare_rh;
    Cohomology bare_coh;

    std::array<int, 3> betti{};
    int cupp = 0;
    SubordinationChain subchain;
    CatBounds cat;

    std::vector<HomologyClass> classes;
    std::vector<MinimaxResult> kappas;
    std::vector<NoGapResult> nogaps;
    bool nogap_ok = true;
    std::vector<RefinedMinimax> refined;

    bool conley_pass = false;
    bool chain_pass = false;
    bool morse_applicable = false;
    bool morse_pass = false;
    bool all_pass = false;

    Pipeline() = default;
    Pipeline(const Pipeline&) = delete;
    Pipeline& operator=(const Pipeline&) = delete;

    void setup() {
        cfg.validate();
        surface = parse_surface(cfg.surface_desc);
        is_rp2 = surface.kind == SurfaceKind::Rp2Triangulation;
        if (is_rp2) {
            ScalarField dummy;
            dummy.surface = surface;
            mesh = build_mesh(dummy, cfg.n);
            return;
        }
        field = builtin_field(cfg.field_name, surface);
        mesh = build_mesh(field, cfg.n);
        crits = find_critical_points(field, mesh, cfg.tol_crit, cfg.tol_eig, &crit_stats);
    }

    void run_conley() {
        if (is_rp2) return;
        pairs = build_conley_pairs(field, mesh, crits, cfg.epsilon, cfg.tau, cfg.flow);
        SplitMix64 seeds(cfg.seed);
        conley_pass = true;
        for (auto& p : pairs) {
            uint64_t s1 = seeds.next(), s2 = seeds.next();
            verifications.push_back(
                verify_conley_pair(p, field, mesh, crits, cfg.samples, s1, cfg.flow));
            int exits = 0;
            bool ok = no_reentry_check(p, field, mesh, cfg.samples, s2, cfg.flow, &exits);
            verifications.back().no_reentry = ok;
            verifications.back().reentry_exiting_samples = exits;
            reentry_ok.push_back(ok);
            reentry_exits.push_back(exits);
            conley_pass = conley_pass && verifications.back().all_pass() && ok;
        }
    }

    void run_thicken() {
        if (is_rp2) return;
        forward = forward_thickenings(field, mesh, pairs, crits, cfg.thicken, cfg.flow);
        std::vector<double> fw_levels;
        for (auto& p : pairs) fw_levels.push_back(p.c);
        forward_cover = verify_cover(forward, mesh, fw_levels);

        ambient = ambient_thickenings(field, mesh, pairs, crits, cfg.thicken, cfg.flow);
        std::vector<double> amb_levels;
        for (auto& t : ambient)
            for (auto& p : pairs)
                if (p.crit_id == t.crit_id) amb_levels.push_back(p.c);
        ambient_cover = verify_cover(ambient, mesh, amb_levels);
    }

    const SimplicialComplexGF2& complex() const { return is_rp2 ? bare_cx : filt->cx; }
    const RelativeHomology& rel_homology() const { return is_rp2 ? bare_rh : filt->rel; }
    const Cohomology& cohomology() const { return is_rp2 ? bare_coh : filt->coh; }

    void run_homology() {
        if (is_rp2) {
            bare_cx = complex_of(mesh);
            bare_rh.build(bare_cx);
            bare_coh.build(bare_cx, bare_rh);
        } else {
            double lo = crits.front().value - 0.5, hi = crits.back().value + 0.5;
            filt = std::make_unique<Filtration>();
            filt->build(mesh, lo, hi);
        }
        const auto& rh = rel_homology();
        betti = {rh.betti(0), rh.betti(1), rh.betti(2)};
        cupp = cuplength(complex(), cohomology());
        subchain = subordination_chain(complex(), rel_homology(), cohomology());

        const std::vector<std::vector<int>>* cover = nullptr;
        std::vector<std::vector<int>> cover_sets;
        if (!is_rp2 && forward_cover.pass) {
            for (auto& t : forward) cover_sets.push_back(t.vertices);
            cover = &cover_sets;
        }
        cat = cat_bounds(mesh, cupp, cover);
    }

    void run_minimax() {
        if (is_rp2) return;
        for (int k = 0; k <= mesh.dim; ++k)
            for (auto& c : filt->basis(k)) classes.push_back(c);
        for (auto& c : classes) {
            kappas.push_back(kappa(c, *filt, crits));
            try {
                nogaps.push_back(no_gap_interval(c, *filt));
            } catch (const Error&) {
                nogap_ok = false;
                nogaps.push_back({});
            }
        }
        for (std::size_t i = 0; i + 1 < subchain.classes.size(); ++i)
            refined.push_back(refined_minimax(subchain.classes[i], subchain.classes[i + 1],
                                              subchain.omegas[i], *filt, crits));
    }

    void run_inequalities() {
        int sub = subchain.length;
        if (is_rp2) {
            chain_pass = cat.exact && cat.value > cupp && cupp == sub;
            morse_applicable = false;
            all_pass = chain_pass;
            return;
        }
        int crit_count = int(crits.size());
        int amb_ub = int(ambient.size());
        chain_pass = ambient_cover.pass && cat.exact && crit_count >= amb_ub &&
                     amb_ub >= cat.value && cat.value > cupp && cupp == sub;

        morse_applicable = true;
        for (auto& c : crits)
            if (c.cls != CritClass::Nondegenerate) morse_applicable = false;
        if (morse_applicable) {
            int dim_h = betti[0] + betti[1] + betti[2];
            morse_pass = crit_count >= dim_h && dim_h >= 1 + sub;
        }

        bool refined_ok = !refined.empty();
        for (auto& r : refined) refined_ok = refined_ok && r.strict && r.distinct_points;
        bool kappa_ok = true;
        for (auto& k : kappas)
            kappa_ok = kappa_ok && k.crit_id >= 0 && k.kappa == k.kappa_via_js;

        all_pass = conley_pass && forward_cover.pass && ambient_cover.pass && chain_pass &&
                   (!morse_applicable || morse_pass) && nogap_ok && kappa_ok && refined_ok;
    }

    void run_all() {
        setup();
        run_conley();
        run_thicken();
        run_homology();
        run_minimax();
        run_inequalities();
    }
};

inline std::unique_ptr<Pipeline> run_pipeline(const RunConfig& cfg) {
    auto p = std::make_unique<Pipeline>();
    p->cfg = cfg;
    p->run_all();
    return p;
}

inline Json inequality_json(const Pipeline& p) {
    Json j;
    int sub = p.subchain.length;
    if (p.is_rp2) {
        j["cat"] = p.cat.value;
        j["cupp"] = p.cupp;
        j["sub"] = sub;
        j["line"] = std::to_string(p.cat.value) + " > " + std::to_string(p.cupp) + " = " +
                    std::to_string(sub);
        j["pass"] = p.chain_pass;
        // values recorded in the literature for the projective plane
        j["reference"] = {{"cat", 3}, {"cupp_gf2", 2}, {"dim_H_gf2", 3}};
        return j;
    }
    int crit_count = int(p.crits.size());
    int amb_ub = int(p.ambient.size());
    Json chain;
    chain["crit_count"] = crit_count;
    chain["cat_amb_upper"] = amb_ub;
    chain["cat"] = p.cat.exact ? Json(p.cat.value)
                               : Json::array({p.cat.lower, p.cat.upper});
    chain["cupp"] = p.cupp;
    chain["sub"] = sub;
    chain["ambient_cover_pass"] = p.ambient_cover.pass;
    chain["line"] = std::to_string(crit_count) + " >= " + std::to_string(amb_ub) +
                    " >= " + std::to_string(p.cat.value) + " > " + std::to_string(p.cupp) +
                    " = " + std::to_string(sub);
    chain["pass"] = p.chain_pass;
    j["chain"] = chain;

    Json morse;
    morse["applicable"] = p.morse_applicable;
    if (p.morse_applicable) {
        int dim_h = p.betti[0] + p.betti[1] + p.betti[2];
        morse["crit_count"] = crit_count;
        morse["dim_H"] = dim_h;
        morse["one_plus_sub"] = 1 + sub;
        morse["line"] = std::to_string(crit_count) + " >= " + std::to_string(dim_h) +
                        " >= " + std::to_string(1 + sub);
        morse["pass"] = p.morse_pass;
    }
    j["morse"] = morse;
    return j;
}

inline Json full_report(const Pipeline& p) {
    Json j;
    j["schema"] = "conley-kit/1";
    j["config"] = config_json(p.cfg);
    j["rng"] = "splitmix64(seed=" + std::to_string(p.cfg.seed) + ")";
    j["surface"] = surface_descriptor(p.surface);
    j["mesh"] = {{"vertices", p.mesh.vertex_count()},
                 {"edges", p.mesh.edges.size()},
                 {"faces", p.mesh.tris.size()},
                 {"euler_characteristic", p.mesh.euler_characteristic()}};

    Json hom;
    hom["betti"] = p.betti;
    hom["cuplength"] = p.cupp;
    hom["subordination"] = p.subchain.length;
    Json chain_degrees = Json::array();
    for (auto& c : p.subchain.classes) chain_degrees.push_back(c.degree);
    hom["subordination_chain_degrees"] = chain_degrees;
    hom["cat_lower"] = p.cat.lower;
    hom["cat_upper"] = p.cat.upper;
    if (p.cat.exact) hom["cat"] = p.cat.value;
    j["homology"] = hom;

    if (!p.is_rp2) {
        Json cps = Json::array();
        for (auto& c : p.crits) cps.push_back(critical_point_json(c, p.mesh.dim));
        j["critical_points"] = cps;
        j["min_pairwise_critical_distance"] = p.crit_stats.min_pairwise_distance;

        Json conley;
        Json vers = Json::array();
        for (std::size_t i = 0; i < p.verifications.size(); ++i) {
            Json v = verification_json(p.verifications[i]);
            v["critical_point"] = p.pairs[i].crit_id;
            v["N_size"] = p.pairs[i].N.size();
            v["L_size"] = p.pairs[i].L.size();
            vers.push_back(v);
        }
        conley["verifications"] = vers;
        conley["pass"] = p.conley_pass;
        j["conley"] = conley;

        Json covers;
        covers["forward"] = cover_json(p.forward_cover);
        Json amb = cover_json(p.ambient_cover);
        Json times = Json::array();
        for (auto& t : p.ambient)
            times.push_back({{"critical_point", t.crit_id}, {"T", t.T}, {"calT", t.calT}});
        amb["times"] = times;
        covers["ambient"] = amb;
        j["covers"] = covers;

        Json mm;
        Json table = Json::array();
        for (std::size_t i = 0; i < p.kappas.size(); ++i) {
            Json row = minimax_json(p.kappas[i]);
            if (i < p.nogaps.size() && !p.nogaps[i].scan_s.empty()) {
                row["no_gap_s0"] = p.nogaps[i].s0;
                row["no_gap_closed"] = p.nogaps[i].closed;
            }
            int cid = p.kappas[i].crit_id;
            if (cid >= 0)
                row["morse_index_match"] = p.crits[cid].morse_index == p.kappas[i].degree;
            table.push_back(row);
        }
        mm["classes"] = table;
        mm["no_gap_ok"] = p.nogap_ok;
        Json ref = Json::array();
        for (auto& r : p.refined) {
            Json e;
            e["kappa_lower"] = r.lower.kappa;
            e["kappa_upper"] = r.upper.kappa;
            e["strict"] = r.strict;
            e["distinct_points"] = r.distinct_points;
            ref.push_back(e);
        }
        mm["refined_chain"] = ref;
        j["minimax"] = mm;
    }

    j["inequalities"] = inequality_json(p);
    j["pass"] = p.all_pass;
    return j;
}

}  // namespace conleykit
