#pragma once

#include "conleykit/mesh.hpp"

namespace conleykit {

enum class CritClass { Nondegenerate, DegenerateIsolated };

struct CriticalPoint {
    int id = -1;
    Vec2 x{};                       // canonical chart coordinates
    double value = 0;               // c = f(x)
    double grad_norm = 0;
    CritClass cls = CritClass::Nondegenerate;
    int morse_index = 0;            // negative pencil eigenvalues
    std::array<double, 2> hess_eigenvalues{};  // of (Hess f, g), ascending
};

struct CriticalSearchStats {
    int seeds = 0;
    int newton_failures = 0;        // reported, not fatal
    double min_pairwise_distance = 0;
};

namespace detail {

/// Newton iteration on df = 0 in chart coordinates.  Near a degenerate
/// root the step degenerates to root-halving, which still converges; the
/// loop runs past tol_crit toward the machine floor so that the Hessian at
/// the returned point reflects the root itself, not the stopping shell.
inline bool newton_refine(const ScalarField& field, Vec2& u, double tol_crit) {
    Vec2 best = u;
    double best_g = field.grad_norm(u);
    for (int it = 0; it < 200 && best_g > 1e-15; ++it) {
        Vec2 d = field.df(u);
        Mat2 h = field.d2f(u);
        Vec2 step;
        if (field.dim() == 1) {
            if (h.a == 0.0) break;
            step = {d[0] / h.a, 0.0};
        } else {
            double det = h.det();
            if (std::fabs(det) < 1e-14) break;
            step = {(h.d * d[0] - h.b * d[1]) / det, (h.a * d[1] - h.b * d[0]) / det};
        }
        if (!std::isfinite(step[0]) || !std::isfinite(step[1]) || norm(step) > 1.0) break;
        u = u - step;
        double g = field.grad_norm(u);
        if (!std::isfinite(g)) break;
        if (g < best_g) {
            best_g = g;
            best = u;
        }
    }
    u = best;
    return best_g <= tol_crit;
}

}  // namespace detail

/// Newton search for critical points, seeded from mesh cells where the chart
/// gradient components change sign and from vertices that are local minima
/// of ||grad f||.  Results deduplicated within one mesh edge length and
/// sorted by value.
inline std::vector<CriticalPoint> find_critical_points(const ScalarField& field, const Mesh& mesh,
                                                       double tol_crit = 1e-10,
                                                       double tol_eig = 1e-6,
                                                       CriticalSearchStats* stats = nullptr) {
    const Surface& s = field.surface;
    std::vector<Vec2> seeds;

    auto cell_seed = [&](const int* verts, int count) {
        for (int comp = 0; comp < field.dim(); ++comp) {
            double lo = 1e300, hi = -1e300;
            for (int k = 0; k < count; ++k) {
                double g = field.df(mesh.param[verts[k]])[comp];
                lo = std::min(lo, g);
                hi = std::max(hi, g);
            }
            if (lo > 0 || hi < 0) return;
        }
        if (s.kind == SurfaceKind::Sphere) {
            Vec3 b{0, 0, 0};
            for (int k = 0; k < count; ++k)
                for (int j = 0; j < 3; ++j) b[j] += mesh.pos[verts[k]][j] / count;
            double sc = s.rho / norm(b);
            double v = std::acos(std::min(1.0, std::max(-1.0, sc * b[0] / s.rho)));
            seeds.push_back(s.canonical({std::atan2(b[2], b[1]), v}));
        } else {
            Vec2 base = mesh.param[verts[0]];
            Vec2 acc{0, 0};
            for (int k = 1; k < count; ++k) {
                acc[0] += wrap_delta(mesh.param[verts[k]][0] - base[0]);
                acc[1] += wrap_delta(mesh.param[verts[k]][1] - base[1]);
            }
            seeds.push_back(s.canonical(base + (1.0 / count) * acc));
        }
    };

    if (mesh.dim == 2)
        for (auto& t : mesh.tris) cell_seed(t.data(), 3);
    else
        for (auto& e : mesh.edges) cell_seed(e.data(), 2);

    for (int v = 0; v < mesh.vertex_count(); ++v) {
        double g = field.grad_norm(mesh.param[v]);
        bool local_min = true;
        for (int w : mesh.nbr[v])
            if (field.grad_norm(mesh.param[w]) < g) { local_min = false; break; }
        if (local_min) seeds.push_back(mesh.param[v]);
    }

    int failures = 0;
    std::vector<CriticalPoint> found;
    for (Vec2 seed : seeds) {
        Vec2 u = seed;
        if (!detail::newton_refine(field, u, tol_crit)) { ++failures; continue; }
        u = s.canonical(u);
        if (s.dim == 2) {
            // chart-pole artifact guard: formal df can vanish where the
            // chart itself degenerates; criticality is not certifiable there
            Mat2 g = s.metric(u);
            double tr = g.a + g.d;
            if (g.det() <= 1e-12 * tr * tr) { ++failures; continue; }
        }
        Vec3 p = s.chart(u);
        bool dup = false;
        for (auto& c : found)
            if (dist(s.chart(c.x), p) <= mesh.max_edge_len) { dup = true; break; }
        if (dup) continue;

        CriticalPoint c;
        c.x = u;
        c.value = field.f(u);
        c.grad_norm = field.grad_norm(u);
        Mat2 h = field.d2f(u);
        if (field.dim() == 1) {
            double lambda = h.a / s.metric(u).a;
            c.hess_eigenvalues = {lambda, 0.0};
            c.cls = std::fabs(lambda) > tol_eig ? CritClass::Nondegenerate
                                                : CritClass::DegenerateIsolated;
            c.morse_index = lambda < -tol_eig ? 1 : 0;
        } else {
            auto eig = Mat2::pencil_eigenvalues(h, s.metric(u));
            c.hess_eigenvalues = eig;
            bool nondeg = std::fabs(eig[0]) > tol_eig && std::fabs(eig[1]) > tol_eig;
            c.cls = nondeg ? CritClass::Nondegenerate : CritClass::DegenerateIsolated;
            c.morse_index = int(eig[0] < -tol_eig) + int(eig[1] < -tol_eig);
        }
        found.push_back(c);
    }

    std::sort(found.begin(), found.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        if (a.value != b.value) return a.value < b.value;
        if (a.x[0] != b.x[0]) return a.x[0] < b.x[0];
        return a.x[1] < b.x[1];
    });
    for (std::size_t i = 0; i < found.size(); ++i) found[i].id = int(i);

    if (stats) {
        stats->seeds = int(seeds.size());
        stats->newton_failures = failures;
        stats->min_pairwise_distance = 1e300;
        for (std::size_t i = 0; i < found.size(); ++i)
            for (std::size_t j = i + 1; j < found.size(); ++j)
                stats->min_pairwise_distance =
                    std::min(stats->min_pairwise_distance,
                             dist(s.chart(found[i].x), s.chart(found[j].x)));
        if (found.size() < 2) stats->min_pairwise_distance = 0;
    }
    return found;
}

/// Index of the critical point nearest to chart point u (embedded metric),
/// or -1 if none is within `radius`.
inline int match_critical_point(const std::vector<CriticalPoint>& crits, const Surface& s, Vec2 u,
                                double radius) {
    Vec3 p = s.chart(u);
    int best = -1;
    double bd = radius;
    for (auto& c : crits) {
        double d = dist(s.chart(c.x), p);
        if (d <= bd) { bd = d; best = c.id; }
    }
    return best;
}

/// Poincare-Hopf sum over critical points of (-1)^index.
inline int poincare_hopf_sum(const std::vector<CriticalPoint>& crits) {
    int sum = 0;
    for (auto& c : crits) sum += (c.morse_index % 2 == 0) ? 1 : -1;
    return sum;
}

}  // namespace conleykit
