#pragma once

#include "conleykit/flow.hpp"

namespace conleykit {

/// Conley pair (N, L) of an isolated critical point, realized as vertex sets
/// on the mesh graph.  N is the x-component of the two defining level
/// predicates, L the subset reaching level c - eps by time 2 tau.
struct ConleyPair {
    int crit_id = -1;
    Vec2 x{};
    double c = 0, epsilon = 0, tau = 0;

    std::vector<int> N, L, Nplus, Nzero, Nminus, interior;
    std::vector<char> inN, inL, inInterior, inNminus;
};

/// f(phi_tau v) and f(phi_2tau v) for every mesh vertex; shared by all pairs
/// built with the same tau.  Vertices whose integration fails near a chart
/// singularity get NaN (they never satisfy a predicate).
struct LevelSweep {
    double tau = 0;
    std::vector<double> ftau, f2tau;
};

/// f is monotone along the flow, so once a trajectory falls below
/// `stop_level` both predicate outcomes are decided and integration stops.
inline LevelSweep sweep_levels(const ScalarField& field, const Mesh& mesh, double tau,
                               const FlowParams& prm = {}, double f_cutoff = kPosInf,
                               double stop_level = kNegInf) {
    LevelSweep sw;
    sw.tau = tau;
    double nan = std::numeric_limits<double>::quiet_NaN();
    sw.ftau.assign(mesh.vertex_count(), nan);
    sw.f2tau.assign(mesh.vertex_count(), nan);
    parallel_for(mesh.vertex_count(), [&](std::size_t v) {
        if (mesh.fval[v] > f_cutoff) return;
        try {
            Vec2 u = mesh.param[v];
            double t = 0, h = prm.h0, fcur = mesh.fval[v];
            while (t < tau) {
                t += detail::adaptive_step(field, u, h, 1, tau - t, prm);
                fcur = field.f(u);
                if (fcur < stop_level) {
                    sw.ftau[v] = sw.f2tau[v] = fcur;
                    return;
                }
            }
            sw.ftau[v] = fcur;
            while (t < 2 * tau) {
                t += detail::adaptive_step(field, u, h, 1, 2 * tau - t, prm);
                fcur = field.f(u);
                if (fcur < stop_level) break;
            }
            sw.f2tau[v] = fcur;
        } catch (const Error&) {
            sw.ftau[v] = sw.f2tau[v] = nan;
        }
    });
    return sw;
}

inline ConleyPair build_conley_pair(const ScalarField& field, const Mesh& mesh,
                                    const CriticalPoint& x, double eps, double tau,
                                    const FlowParams& prm = {},
                                    const LevelSweep* precomputed = nullptr) {
    if (!(eps > 0)) throw Error("invalid-parameters", "epsilon must be positive");
    if (!(tau >= 1)) throw Error("invalid-parameters", "tau must be >= 1");
    double c = x.value;
    double tol = prm.tol_level;

    // regularity of c +- eps: min ||grad f|| over the vertices straddling
    // each level (an incident edge crosses it) must stay above threshold.
    // An empty band is regular: the level set misses the surface.
    for (double level : {c - eps, c + eps}) {
        double min_grad = 1e300;
        for (int v = 0; v < mesh.vertex_count(); ++v) {
            bool straddles = mesh.fval[v] == level;
            for (int w : mesh.nbr[v])
                if ((mesh.fval[v] - level) * (mesh.fval[w] - level) <= 0) straddles = true;
            if (straddles) min_grad = std::min(min_grad, field.grad_norm(mesh.param[v]));
        }
        if (min_grad < 1e-3)
            throw Error("nonregular-epsilon",
                        "level " + std::to_string(level) + " fails the regularity check");
    }

    LevelSweep local;
    const LevelSweep* sw = precomputed;
    if (!sw || sw->tau != tau) {
        // only sublevel candidates can satisfy the predicates, and a
        // trajectory below c - eps has decided both of them
        local = sweep_levels(field, mesh, tau, prm, c + eps + tol, c - eps - tol);
        sw = &local;
    }

    auto predicate = [&](int v) {
        return mesh.fval[v] <= c + eps + tol && sw->ftau[v] >= c - eps - tol;
    };

    ConleyPair pair;
    pair.crit_id = x.id;
    pair.x = x.x;
    pair.c = c;
    pair.epsilon = eps;
    pair.tau = tau;

    int xv = mesh.nearest_vertex(x.x, field.surface);
    if (!predicate(xv)) throw Error("empty-N", "predicate fails at the critical vertex");

    std::vector<char> pred(mesh.vertex_count(), 0);
    for (int v = 0; v < mesh.vertex_count(); ++v) pred[v] = predicate(v);
    std::vector<int> comp;
    graph_components(mesh, pred, comp);
    int keep = comp[xv];

    pair.inN.assign(mesh.vertex_count(), 0);
    for (int v = 0; v < mesh.vertex_count(); ++v)
        if (pred[v] && comp[v] == keep) pair.inN[v] = 1;

    pair.inL.assign(mesh.vertex_count(), 0);
    pair.inInterior.assign(mesh.vertex_count(), 0);
    pair.inNminus.assign(mesh.vertex_count(), 0);
    std::vector<char> plus(mesh.vertex_count(), 0), zero(mesh.vertex_count(), 0);

    for (int v = 0; v < mesh.vertex_count(); ++v) {
        if (!pair.inN[v]) continue;
        if (sw->f2tau[v] <= c - eps + tol) pair.inL[v] = 1;
        bool fail_upper = false, fail_exit = false, boundary = false;
        for (int w : mesh.nbr[v]) {
            if (pair.inN[w]) continue;
            boundary = true;
            if (mesh.fval[w] > c + eps + tol)
                fail_upper = true;  // neighbor beyond the upper level set
            else
                fail_exit = true;  // candidate failing the flow condition (NaN included)
        }
        if (!boundary) {
            pair.inInterior[v] = 1;
        } else if (fail_upper && fail_exit) {
            zero[v] = 1;
        } else if (fail_upper) {
            plus[v] = 1;
        } else {
            pair.inNminus[v] = 1;
        }
    }

    for (int v = 0; v < mesh.vertex_count(); ++v) {
        if (pair.inN[v]) pair.N.push_back(v);
        if (pair.inL[v]) pair.L.push_back(v);
        if (pair.inInterior[v]) pair.interior.push_back(v);
        if (plus[v]) pair.Nplus.push_back(v);
        if (zero[v]) pair.Nzero.push_back(v);
        if (pair.inNminus[v]) pair.Nminus.push_back(v);
    }
    return pair;
}

/// Pairs for every critical point with common (eps, tau); one flow sweep.
inline std::vector<ConleyPair> build_conley_pairs(const ScalarField& field, const Mesh& mesh,
                                                  const std::vector<CriticalPoint>& crits,
                                                  double eps, double tau,
                                                  const FlowParams& prm = {}) {
    LevelSweep sw = sweep_levels(field, mesh, tau, prm);
    std::vector<ConleyPair> pairs;
    for (auto& c : crits) pairs.push_back(build_conley_pair(field, mesh, c, eps, tau, prm, &sw));
    return pairs;
}

enum class Membership { Inside, Outside, Borderline };

/// Nearest-vertex membership with a one-edge guard band: a point whose
/// nearest vertex sits on the set's edge (a neighbor disagrees) is
/// Borderline and excluded from axiom statistics.
inline Membership vertex_set_membership(const Mesh& mesh, const Surface& s,
                                        const std::vector<char>& mask, Vec2 p) {
    int v = mesh.nearest_vertex(p, s);
    bool inside = mask[v];
    for (int w : mesh.nbr[v])
        if (bool(mask[w]) != inside) return Membership::Borderline;
    return inside ? Membership::Inside : Membership::Outside;
}

/// Plain nearest-vertex membership (no guard band), optionally widened by
/// one edge: used where a region realization, not a statistic, is needed.
inline bool nearest_in(const Mesh& mesh, const Surface& s, const std::vector<char>& mask, Vec2 p,
                       bool widen = false) {
    int v = mesh.nearest_vertex(p, s);
    if (mask[v]) return true;
    if (!widen) return false;
    for (int w : mesh.nbr[v])
        if (mask[w]) return true;
    return false;
}

struct AxiomOutcome {
    bool pass = true;
    int checked = 0;
    int counterexamples = 0;
    int borderline_excluded = 0;
    int non_exiting = 0;
    std::vector<Vec2> witnesses;
};

struct VerificationReport {
    bool axiom_i = false, axiom_ii = false;
    AxiomOutcome axiom_iii, axiom_iv;
    bool no_reentry = true;
    int reentry_exiting_samples = 0;
    std::vector<Vec2> reentry_witnesses;
    int samples = 0;
    uint64_t seed = 0;
    double epsilon = 0, tau = 0;
    bool all_pass() const {
        return axiom_i && axiom_ii && axiom_iii.pass && axiom_iv.pass;
    }
};

namespace detail {

inline std::vector<Vec2> sample_vertex_points(const Mesh& mesh, const std::vector<int>& verts,
                                              int m, SplitMix64& rng) {
    std::vector<Vec2> pts;
    if (verts.empty()) return pts;
    pts.reserve(m);
    for (int i = 0; i < m; ++i) pts.push_back(mesh.param[verts[rng.uniform_int(int(verts.size()))]]);
    return pts;
}

}  // namespace detail

/// Statistical check of Definition (i)-(iv) on m seeded trajectory samples.
/// Failures are report entries, never exceptions.
inline VerificationReport verify_conley_pair(const ConleyPair& pair, const ScalarField& field,
                                             const Mesh& mesh,
                                             const std::vector<CriticalPoint>& crits, int m,
                                             uint64_t seed, const FlowParams& prm = {}) {
    VerificationReport rep;
    rep.samples = m;
    rep.seed = seed;
    rep.epsilon = pair.epsilon;
    rep.tau = pair.tau;
    const Surface& s = field.surface;

    int xv = mesh.nearest_vertex(pair.x, s);
    rep.axiom_i = pair.inInterior[xv] && !pair.inL[xv];

    rep.axiom_ii = true;
    for (auto& c : crits) {
        if (c.id == pair.crit_id) continue;
        if (pair.inN[mesh.nearest_vertex(c.x, s)]) rep.axiom_ii = false;
    }

    SplitMix64 rng(seed);
    auto l_samples = detail::sample_vertex_points(mesh, pair.L, m, rng);
    auto n_samples = detail::sample_vertex_points(mesh, pair.N, m, rng);

    // (iii) positive invariance of L in N
    struct Out3 { int kind = 0; Vec2 w{}; };  // 0 clean, 1 borderline, 2 counterexample
    std::vector<Out3> out3(l_samples.size());
    parallel_for(l_samples.size(), [&](std::size_t i) {
        bool borderline = false;
        detail::flow_visit(field, l_samples[i], 1, prm.horizon, prm, [&](double, Vec2 u) {
            if (field.grad_norm(u) < prm.delta_conv) return false;  // converged inside N
            Membership mN = vertex_set_membership(mesh, s, pair.inN, u);
            if (mN == Membership::Outside) return false;
            Membership mL = vertex_set_membership(mesh, s, pair.inL, u);
            if (mN == Membership::Inside && mL == Membership::Outside) {
                out3[i] = {2, u};
                return false;
            }
            if (mN == Membership::Borderline || mL == Membership::Borderline) borderline = true;
            return true;
        });
        if (out3[i].kind == 0 && borderline) out3[i].kind = 1;
    });
    for (std::size_t i = 0; i < out3.size(); ++i) {
        if (out3[i].kind == 2) {
            ++rep.axiom_iii.counterexamples;
            if (rep.axiom_iii.witnesses.size() < 8) rep.axiom_iii.witnesses.push_back(out3[i].w);
        } else if (out3[i].kind == 1) {
            ++rep.axiom_iii.borderline_excluded;
        } else {
            ++rep.axiom_iii.checked;
        }
    }
    rep.axiom_iii.pass = rep.axiom_iii.counterexamples == 0;

    // (iv) every trajectory that leaves N passed through L first
    struct Out4 { int kind = 0; Vec2 w{}; };  // 0 clean, 1 borderline, 2 cex, 3 non-exit
    std::vector<Out4> out4(n_samples.size());
    parallel_for(n_samples.size(), [&](std::size_t i) {
        bool saw_L = false, saw_borderline_L = false, exited = false;
        detail::flow_visit(field, n_samples[i], 1, prm.horizon, prm, [&](double, Vec2 u) {
            if (field.grad_norm(u) < prm.delta_conv) return false;  // converged inside N
            Membership mN = vertex_set_membership(mesh, s, pair.inN, u);
            if (mN == Membership::Outside) {
                exited = true;
                return false;
            }
            Membership mL = vertex_set_membership(mesh, s, pair.inL, u);
            if (mL == Membership::Inside) saw_L = true;
            if (mL == Membership::Borderline) saw_borderline_L = true;
            return true;
        });
        if (!exited)
            out4[i].kind = 3;
        else if (saw_L)
            out4[i].kind = 0;
        else if (saw_borderline_L)
            out4[i].kind = 1;
        else
            out4[i] = {2, n_samples[i]};
    });
    for (std::size_t i = 0; i < out4.size(); ++i) {
        switch (out4[i].kind) {
            case 0: ++rep.axiom_iv.checked; break;
            case 1: ++rep.axiom_iv.borderline_excluded; break;
            case 3: ++rep.axiom_iv.non_exiting; break;
            default:
                ++rep.axiom_iv.counterexamples;
                if (rep.axiom_iv.witnesses.size() < 8) rep.axiom_iv.witnesses.push_back(out4[i].w);
        }
    }
    rep.axiom_iv.pass = rep.axiom_iv.counterexamples == 0;
    return rep;
}

/// Remark-style no-re-entry check: once a sampled trajectory solidly leaves
/// N, the two defining predicates never hold simultaneously again.  Checks
/// stop once f drops below c - eps (monotonicity makes re-entry impossible).
inline bool no_reentry_check(const ConleyPair& pair, const ScalarField& field, const Mesh& mesh,
                             int m, uint64_t seed, const FlowParams& prm,
                             int* exiting_samples = nullptr,
                             std::vector<Vec2>* witnesses = nullptr) {
    const Surface& s = field.surface;
    SplitMix64 rng(seed);
    auto samples = detail::sample_vertex_points(mesh, pair.N, m, rng);
    double c = pair.c, eps = pair.epsilon, tau = pair.tau;

    std::vector<int> exited(samples.size(), 0);
    std::vector<int> reentered(samples.size(), 0);
    std::vector<Vec2> where(samples.size());
    parallel_for(samples.size(), [&](std::size_t i) {
        bool out = false;
        double last_check = -1.0;
        detail::flow_visit(field, samples[i], 1, prm.horizon, prm, [&](double t, Vec2 u) {
            if (!out) {
                if (field.grad_norm(u) < prm.delta_conv) return false;  // never exits
                if (vertex_set_membership(mesh, s, pair.inN, u) == Membership::Outside) {
                    out = true;
                    exited[i] = 1;
                    last_check = t;
                }
                return true;
            }
            double fv = field.f(u);
            if (fv < c - eps - prm.tol_level) return false;  // below N forever
            if (t - last_check < 0.05) return true;
            last_check = t;
            if (fv <= c + eps && field.f(advance(field, u, tau, prm)) >= c - eps) {
                reentered[i] = 1;
                where[i] = u;
                return false;
            }
            return true;
        });
    });

    bool ok = true;
    int nexit = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        nexit += exited[i];
        if (reentered[i]) {
            ok = false;
            if (witnesses && witnesses->size() < 8) witnesses->push_back(where[i]);
        }
    }
    if (exiting_samples) *exiting_samples = nexit;
    return ok;
}

struct ShrinkResult {
    bool ok = false;
    double epsilon = 0, tau = 0;
    int smallest_N = -1;  // vertices of the smallest N achieved on failure
    ConleyPair pair;
};

/// Halving search on eps paired with doubling on tau until N fits inside the
/// vertex neighborhood U.  Budget: eps >= 1e-4, tau <= 64.
inline ShrinkResult shrink_into(const ScalarField& field, const Mesh& mesh,
                                const CriticalPoint& x, const std::vector<char>& U,
                                double eps0 = 0.2, double tau0 = 2.0,
                                const FlowParams& prm = {}) {
    int xv = mesh.nearest_vertex(x.x, field.surface);
    if (!U[xv]) throw Error("invalid-parameters", "U does not contain the critical vertex");

    ShrinkResult res;
    double eps = eps0, tau = tau0;
    while (eps >= 1e-4) {
        try {
            ConleyPair pair = build_conley_pair(field, mesh, x, eps, tau, prm);
            bool inside = true;
            for (int v : pair.N)
                if (!U[v]) { inside = false; break; }
            if (res.smallest_N < 0 || int(pair.N.size()) < res.smallest_N)
                res.smallest_N = int(pair.N.size());
            if (inside) {
                res.ok = true;
                res.epsilon = eps;
                res.tau = tau;
                res.pair = std::move(pair);
                return res;
            }
        } catch (const Error& e) {
            if (e.code != "nonregular-epsilon" && e.code != "empty-N") throw;
        }
        eps /= 2;
        tau = std::min(2 * tau, 64.0);
    }
    return res;  // search-exhausted: ok = false, smallest_N reported
}

}  // namespace conleykit
