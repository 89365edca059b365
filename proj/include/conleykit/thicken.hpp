#pragma once

#include "conleykit/conley.hpp"
#include "conleykit/homology.hpp"

namespace conleykit {

enum class ThickeningKind { ForwardW, AmbientUStar, AmbientU };

inline const char* to_string(ThickeningKind k) {
    switch (k) {
        case ThickeningKind::ForwardW: return "forward-W";
        case ThickeningKind::AmbientUStar: return "ambient-U-star";
        case ThickeningKind::AmbientU: return "ambient-U";
    }
    return "?";
}

struct Thickening {
    int crit_id = -1;
    ThickeningKind kind = ThickeningKind::ForwardW;
    double T = 0;     // backward preimage time (ambient kinds)
    double calT = 0;  // per-level entrance bound actually used
    double horizon = 0;
    std::vector<int> vertices;
    std::vector<char> mask;
    int truncated = 0;  // vertices whose sweep hit the horizon or failed
};

struct ThickenParams {
    double horizon = 100.0;     // backward saturation horizon
    double conv_radius = 0.02;  // embedded radius: trajectory converged to a critical point
    double safety = 1.25;       // factor on the sampled entrance-time supremum
};

namespace detail {

/// Nearest critical point within the convergence radius, -1 if none.
inline int near_crit(const Surface& s, const std::vector<CriticalPoint>& crits, Vec2 u,
                     double radius) {
    Vec3 p = s.chart(u);
    for (auto& c : crits)
        if (dist(s.chart(c.x), p) < radius) return c.id;
    return -1;
}

}  // namespace detail

/// Forward exhaustion of the block interiors: one backward sweep marks, for
/// every pair at once, the vertices whose backward trajectory enters the
/// interior (or converges to the pair's critical point).
inline std::vector<Thickening> forward_thickenings(const ScalarField& field, const Mesh& mesh,
                                                   const std::vector<ConleyPair>& pairs,
                                                   const std::vector<CriticalPoint>& crits,
                                                   const ThickenParams& tp = {},
                                                   const FlowParams& prm = {}) {
    const Surface& s = field.surface;
    int np = int(pairs.size());
    std::vector<Thickening> ths(np);
    for (int i = 0; i < np; ++i) {
        ths[i].crit_id = pairs[i].crit_id;
        ths[i].kind = ThickeningKind::ForwardW;
        ths[i].horizon = tp.horizon;
        ths[i].mask.assign(mesh.vertex_count(), 0);
    }

    std::vector<char> truncated(mesh.vertex_count(), 0);
    std::vector<std::vector<char>> entered(np,
                                           std::vector<char>(mesh.vertex_count(), 0));
    parallel_for(mesh.vertex_count(), [&](std::size_t v) {
        int remaining = 0;
        for (int i = 0; i < np; ++i) {
            if (pairs[i].inInterior[v])
                entered[i][v] = 1;
            else
                ++remaining;
        }
        if (remaining == 0) return;
        try {
            bool hit_horizon = true;
            detail::flow_visit(field, mesh.param[v], -1, tp.horizon, prm, [&](double, Vec2 u) {
                int nv = mesh.nearest_vertex(u, s);
                for (int i = 0; i < np; ++i)
                    if (!entered[i][v] && pairs[i].inInterior[nv]) {
                        entered[i][v] = 1;
                        --remaining;
                    }
                if (remaining == 0) {
                    hit_horizon = false;
                    return false;
                }
                int cid = detail::near_crit(s, crits, u, tp.conv_radius);
                if (cid >= 0) {
                    for (int i = 0; i < np; ++i)
                        if (pairs[i].crit_id == cid) entered[i][v] = 1;
                    hit_horizon = false;
                    return false;
                }
                return true;
            });
            if (hit_horizon) truncated[v] = 1;
        } catch (const Error&) {
            truncated[v] = 1;
        }
    });

    for (int i = 0; i < np; ++i) {
        for (int v = 0; v < mesh.vertex_count(); ++v) {
            if (entered[i][v]) {
                ths[i].mask[v] = 1;
                ths[i].vertices.push_back(v);
            }
            ths[i].truncated += truncated[v];
        }
    }
    return ths;
}

inline Thickening forward_thickening(const ScalarField& field, const Mesh& mesh,
                                     const ConleyPair& pair,
                                     const std::vector<CriticalPoint>& crits,
                                     double horizon = 100.0, const FlowParams& prm = {},
                                     double conv_radius = 0.02) {
    ThickenParams tp;
    tp.horizon = horizon;
    tp.conv_radius = conv_radius;
    return forward_thickenings(field, mesh, {pair}, crits, tp, prm)[0];
}

/// Backward arrival time at the exit locus: the carrier of N^- is
/// phi_tau^{-1}{f = c - eps}, so its crossing is the c - eps level crossing
/// shifted by -tau.  Returns the (negative) time T(p).
inline double exit_locus_arrival(const ScalarField& field, const ConleyPair& pair, Vec2 p,
                                 const FlowParams& prm = {}) {
    double level = pair.c - pair.epsilon;
    int dir = field.f(p) > level ? 1 : -1;
    double s_star = arrival_time(field, p, level, dir, prm);
    return s_star - pair.tau;
}

/// The deformation h(lambda, p) of the forward thickening onto its block:
/// identity on N, flow to the exit locus at lambda = 1 elsewhere.
inline Vec2 retraction_homotopy(const ScalarField& field, const Mesh& mesh, const Thickening& th,
                                const ConleyPair& pair, double lambda, Vec2 p,
                                const FlowParams& prm = {}) {
    if (th.kind != ThickeningKind::ForwardW)
        throw Error("invalid-parameters", "retraction applies to forward thickenings");
    const Surface& s = field.surface;
    if (!nearest_in(mesh, s, th.mask, p, /*widen=*/true))
        throw Error("invalid-parameters", "point outside the thickening region");
    if (nearest_in(mesh, s, pair.inN, p)) return p;

    double T;
    try {
        T = exit_locus_arrival(field, pair, p, prm);
    } catch (const Error& e) {
        throw Error("arrival-failure", std::string("no exit-locus crossing: ") + e.what());
    }
    if (T >= 0) throw Error("arrival-failure", "arrival time is not negative");
    Vec2 q = advance(field, p, T, prm);
    if (!nearest_in(mesh, s, pair.inNminus, q, /*widen=*/true))
        throw Error("arrival-failure", "crossing point misses the exit locus vertices");
    if (lambda == 0) return p;
    return advance(field, p, lambda * T, prm);
}

struct EntranceBound {
    double value = 1.0;  // 1 + sup of sampled backward entrance times
    double sup = 0.0;
    int samples = 0;
    int failures = 0;  // backward-limit failures (skipped, flagged)
};

/// T_i = 1 + sup over the entrance locus of the backward time to the exit
/// locus of each point's asymptotic origin; sup over the empty set is 0
/// (local maxima).
inline EntranceBound entrance_time_bound(const ScalarField& field, const Mesh& mesh,
                                         const std::vector<ConleyPair>& pairs, int i,
                                         const std::vector<CriticalPoint>& crits,
                                         const FlowParams& prm = {}) {
    EntranceBound eb;
    const ConleyPair& pair = pairs[i];
    eb.samples = int(pair.Nplus.size());
    std::vector<double> times(pair.Nplus.size(), -1.0);
    parallel_for(pair.Nplus.size(), [&](std::size_t k) {
        Vec2 p = mesh.param[pair.Nplus[k]];
        LimitResult lim = backward_limit(field, p, crits, prm.delta_conv, prm.horizon, prm);
        if (!lim.converged) return;
        const ConleyPair* origin = nullptr;
        for (auto& q : pairs)
            if (q.crit_id == lim.crit_id) origin = &q;
        if (!origin || origin->crit_id == pair.crit_id) return;
        double level = origin->c - origin->epsilon;
        if (field.f(p) >= level) return;
        try {
            double s_star = arrival_time(field, p, level, -1, prm);
            times[k] = origin->tau - s_star;
        } catch (const Error&) {
        }
    });
    for (double t : times) {
        if (t < 0)
            ++eb.failures;
        else
            eb.sup = std::max(eb.sup, t);
    }
    eb.failures = eb.samples == 0 ? 0 : eb.failures;
    eb.value = 1.0 + eb.sup;
    return eb;
}

/// Ambient thickenings U_i^* = phi_{T_i}^{-1}(interior N_i) with the
/// descending recursion T_i = calT_i + T_{i+1} over levels c_1 <= ... <= c_l.
/// calT carries the safety factor on the sampled supremum.
inline std::vector<Thickening> ambient_thickenings(const ScalarField& field, const Mesh& mesh,
                                                   const std::vector<ConleyPair>& pairs,
                                                   const std::vector<CriticalPoint>& crits,
                                                   const ThickenParams& tp = {},
                                                   const FlowParams& prm = {},
                                                   ThickeningKind kind = ThickeningKind::AmbientUStar) {
    int np = int(pairs.size());
    std::vector<int> order(np);
    for (int i = 0; i < np; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        if (pairs[x].c != pairs[y].c) return pairs[x].c < pairs[y].c;
        return pairs[x].crit_id < pairs[y].crit_id;
    });

    std::vector<double> calT(np, 0), T(np, 0);
    for (int i = 0; i < np; ++i) {
        EntranceBound eb = entrance_time_bound(field, mesh, pairs, order[i], crits, prm);
        calT[i] = 1.0 + tp.safety * eb.sup;
    }
    double acc = 0;
    for (int i = np - 1; i >= 0; --i) {
        T[i] = calT[i] + acc;
        acc = T[i];
    }

    std::vector<Thickening> ths(np);
    std::vector<double> checkpoints;  // ascending: T[np-1] < ... < T[0]
    for (int i = np - 1; i >= 0; --i) checkpoints.push_back(T[i]);

    for (int i = 0; i < np; ++i) {
        ths[i].crit_id = pairs[order[i]].crit_id;
        ths[i].kind = kind;
        ths[i].T = T[i];
        ths[i].calT = calT[i];
        ths[i].mask.assign(mesh.vertex_count(), 0);
    }

    std::vector<std::vector<char>> hit(np, std::vector<char>(mesh.vertex_count(), 0));
    std::vector<char> failed(mesh.vertex_count(), 0);
    parallel_for(mesh.vertex_count(), [&](std::size_t v) {
        try {
            auto pts = advance_checkpoints(field, mesh.param[v], checkpoints, prm);
            for (int i = 0; i < np; ++i) {
                Vec2 at = pts[np - 1 - i];  // checkpoint for T[i]
                if (nearest_in(mesh, field.surface, pairs[order[i]].inInterior, at))
                    hit[i][v] = 1;
            }
        } catch (const Error&) {
            failed[v] = 1;
        }
    });
    for (int i = 0; i < np; ++i)
        for (int v = 0; v < mesh.vertex_count(); ++v) {
            if (hit[i][v]) {
                ths[i].mask[v] = 1;
                ths[i].vertices.push_back(v);
            }
            ths[i].truncated += failed[v];
        }
    return ths;
}

struct CoverReport {
    std::vector<int> owner;  // lowest covering thickening index, -1 uncovered
    int uncovered = 0;
    bool same_level_disjoint = true;
    std::vector<std::array<int, 3>> member_reduced_betti;
    bool contractible_all = true;
    bool pass = false;
};

/// Cover verdict: union covers every vertex, same-level members pairwise
/// disjoint, and each member passes the homological contractibility proxy.
inline CoverReport verify_cover(const std::vector<Thickening>& ths, const Mesh& mesh,
                                const std::vector<double>& levels, double level_tol = 1e-9) {
    CoverReport rep;
    rep.owner.assign(mesh.vertex_count(), -1);
    for (int v = 0; v < mesh.vertex_count(); ++v)
        for (std::size_t i = 0; i < ths.size(); ++i)
            if (ths[i].mask[v]) {
                rep.owner[v] = int(i);
                break;
            }
    for (int v = 0; v < mesh.vertex_count(); ++v)
        if (rep.owner[v] < 0) ++rep.uncovered;

    for (std::size_t i = 0; i < ths.size(); ++i)
        for (std::size_t j = i + 1; j < ths.size(); ++j) {
            if (std::fabs(levels[i] - levels[j]) > level_tol) continue;
            for (int v = 0; v < mesh.vertex_count(); ++v)
                if (ths[i].mask[v] && ths[j].mask[v]) {
                    rep.same_level_disjoint = false;
                    break;
                }
        }

    for (auto& th : ths) {
        auto rb = reduced_betti(mesh, th.mask);
        rep.member_reduced_betti.push_back(rb);
        if (rb[0] != 0 || rb[1] != 0 || rb[2] != 0) rep.contractible_all = false;
    }
    rep.pass = rep.uncovered == 0 && rep.same_level_disjoint && rep.contractible_all;
    return rep;
}

}  // namespace conleykit
