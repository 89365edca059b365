#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <unordered_map>

#include "conleykit/field.hpp"

namespace conleykit {

/// Triangulated sampling of a surface together with vertex f values.
/// Vertices carry canonical chart parameters (rp2: none, zeros).
struct Mesh {
    SurfaceKind kind = SurfaceKind::Circle;
    int dim = 1;
    int n = 0;  // resolution parameter (vertices per period)

    std::vector<Vec2> param;
    std::vector<Vec3> pos;
    std::vector<double> fval;
    std::vector<std::array<int, 3>> tris;   // dim == 2
    std::vector<std::array<int, 2>> edges;  // unique, sorted pairs
    std::vector<std::vector<int>> nbr;

    double max_edge_len = 0;    // embedded
    double max_edge_f_gap = 0;  // max |f(a) - f(b)| over edges

    // sphere nearest-vertex lookup
    double grid_cell = 0;
    std::unordered_map<int64_t, std::vector<int>> grid;

    int vertex_count() const { return int(param.size()); }

    int euler_characteristic() const {
        int V = vertex_count(), E = int(edges.size()), F = int(tris.size());
        return dim == 1 ? V - E : V - E + F;
    }

    int torus_index(int iu, int iv) const { return ((iv % n + n) % n) * n + ((iu % n + n) % n); }

    int64_t cell_key(const Vec3& p) const {
        auto q = [&](double x) { return int64_t(std::floor(x / grid_cell)) + 512; };
        return (q(p[0]) << 40) | (q(p[1]) << 20) | q(p[2]);
    }

    /// Nearest mesh vertex to a chart point.  O(1) for grid meshes, hashed
    /// 3d cells for the icosphere.
    int nearest_vertex(Vec2 u, const Surface& s) const {
        Vec2 c = s.canonical(u);
        switch (kind) {
            case SurfaceKind::Circle:
                return int(std::lround(c[0] / (kTwoPi / n))) % n;
            case SurfaceKind::Torus: {
                int iu = int(std::lround(c[0] / (kTwoPi / n)));
                int iv = int(std::lround(c[1] / (kTwoPi / n)));
                return torus_index(iu, iv);
            }
            case SurfaceKind::Sphere: {
                Vec3 p = s.chart(c);
                int best = -1;
                double bd = 1e300;
                for (int ring = 1; ring <= 3 && best < 0; ring += 2) {
                    for (int dx = -ring; dx <= ring; ++dx)
                        for (int dy = -ring; dy <= ring; ++dy)
                            for (int dz = -ring; dz <= ring; ++dz) {
                                Vec3 q{p[0] + dx * grid_cell, p[1] + dy * grid_cell,
                                       p[2] + dz * grid_cell};
                                auto it = grid.find(cell_key(q));
                                if (it == grid.end()) continue;
                                for (int v : it->second) {
                                    double d = dist(pos[v], p);
                                    if (d < bd) { bd = d; best = v; }
                                }
                            }
                }
                if (best < 0) {  // extremely coarse mesh fallback
                    for (int v = 0; v < vertex_count(); ++v) {
                        double d = dist(pos[v], p);
                        if (d < bd) { bd = d; best = v; }
                    }
                }
                return best;
            }
            case SurfaceKind::Rp2Triangulation:
                throw Error("unsupported-combination", "rp2 mesh has no chart lookup");
        }
        return -1;
    }

    bool connected() const {
        if (vertex_count() == 0) return false;
        std::vector<char> seen(vertex_count(), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : nbr[v])
                if (!seen[w]) { seen[w] = 1; ++count; stack.push_back(w); }
        }
        return count == vertex_count();
    }
};

namespace detail {

inline void finish_mesh(Mesh& m) {
    std::map<std::pair<int, int>, int> edge_set;
    auto add_edge = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        edge_set.emplace(std::make_pair(a, b), 0);
    };
    if (m.dim == 2) {
        for (auto& t : m.tris) {
            add_edge(t[0], t[1]);
            add_edge(t[1], t[2]);
            add_edge(t[0], t[2]);
        }
        m.edges.clear();
        for (auto& [e, _] : edge_set) m.edges.push_back({e.first, e.second});
    }
    m.nbr.assign(m.vertex_count(), {});
    for (auto& e : m.edges) {
        m.nbr[e[0]].push_back(e[1]);
        m.nbr[e[1]].push_back(e[0]);
    }
    for (auto& v : m.nbr) std::sort(v.begin(), v.end());
    m.max_edge_len = 0;
    m.max_edge_f_gap = 0;
    for (auto& e : m.edges) {
        m.max_edge_len = std::max(m.max_edge_len, dist(m.pos[e[0]], m.pos[e[1]]));
        m.max_edge_f_gap = std::max(m.max_edge_f_gap, std::fabs(m.fval[e[0]] - m.fval[e[1]]));
    }
}

inline void build_sphere_grid(Mesh& m) {
    m.grid_cell = std::max(m.max_edge_len, 1e-6);
    m.grid.clear();
    for (int v = 0; v < m.vertex_count(); ++v) m.grid[m.cell_key(m.pos[v])].push_back(v);
}

/// Icosphere: subdivided icosahedron projected to radius rho.
inline Mesh icosphere(const ScalarField& field, int level, int n) {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> verts = {
        {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
        {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
        {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
    // rotate about z so no vertex or midpoint lands on the +-x chart poles
    // (z coordinates, hence the height field, are untouched)
    const double ca = std::cos(0.4), sa = std::sin(0.4);
    for (auto& v : verts) v = {ca * v[0] - sa * v[1], sa * v[0] + ca * v[1], v[2]};
    std::vector<std::array<int, 3>> faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    double rho = field.surface.rho;
    auto project = [&](Vec3 p) {
        double s = rho / norm(p);
        return Vec3{s * p[0], s * p[1], s * p[2]};
    };
    for (auto& v : verts) v = project(v);
    for (int l = 0; l < level; ++l) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            Vec3 p{(verts[a][0] + verts[b][0]) / 2, (verts[a][1] + verts[b][1]) / 2,
                   (verts[a][2] + verts[b][2]) / 2};
            verts.push_back(project(p));
            int id = int(verts.size()) - 1;
            midpoint.emplace(key, id);
            return id;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(faces.size() * 4);
        for (auto& f : faces) {
            int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }

    Mesh m;
    m.kind = SurfaceKind::Sphere;
    m.dim = 2;
    m.n = n;
    m.pos = verts;
    m.tris = faces;
    m.param.resize(verts.size());
    m.fval.resize(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i) {
        const Vec3& p = verts[i];
        double v = std::acos(std::min(1.0, std::max(-1.0, p[0] / rho)));
        double u = std::atan2(p[2], p[1]);
        m.param[i] = field.surface.canonical({u, v});
        m.fval[i] = field.f(m.param[i]);
    }
    finish_mesh(m);
    build_sphere_grid(m);
    return m;
}

}  // namespace detail

/// Minimal 6-vertex triangulation of RP^2 (all 15 edges of K6, 10 faces),
/// optionally barycentrically subdivided.  Homology-only: no chart, f = 0.
inline Mesh build_rp2_mesh(int subdivisions = 0) {
    Mesh m;
    m.kind = SurfaceKind::Rp2Triangulation;
    m.dim = 2;
    m.n = 6;
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> icosa = {{-1, phi, 0}, {1, phi, 0}, {0, -1, phi},
                               {0, 1, phi},  {phi, 0, -1}, {phi, 0, 1}};
    for (auto& p : icosa) {
        double s = 1.0 / norm(p);
        m.pos.push_back({s * p[0], s * p[1], s * p[2]});
    }
    m.param.assign(6, Vec2{0, 0});
    m.fval.assign(6, 0.0);
    m.tris = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 1, 5},
              {1, 2, 4}, {2, 3, 5}, {3, 4, 1}, {4, 5, 2}, {5, 1, 3}};

    for (int s = 0; s < subdivisions; ++s) {
        std::map<std::pair<int, int>, int> edge_vertex;
        auto midpoint = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto it = edge_vertex.find(key);
            if (it != edge_vertex.end()) return it->second;
            m.pos.push_back({(m.pos[a][0] + m.pos[b][0]) / 2, (m.pos[a][1] + m.pos[b][1]) / 2,
                             (m.pos[a][2] + m.pos[b][2]) / 2});
            m.param.push_back({0, 0});
            m.fval.push_back(0.0);
            int id = int(m.pos.size()) - 1;
            edge_vertex.emplace(key, id);
            return id;
        };
        std::vector<std::array<int, 3>> next;
        for (auto& t : m.tris) {
            m.pos.push_back({(m.pos[t[0]][0] + m.pos[t[1]][0] + m.pos[t[2]][0]) / 3,
                             (m.pos[t[0]][1] + m.pos[t[1]][1] + m.pos[t[2]][1]) / 3,
                             (m.pos[t[0]][2] + m.pos[t[1]][2] + m.pos[t[2]][2]) / 3});
            m.param.push_back({0, 0});
            m.fval.push_back(0.0);
            int c = int(m.pos.size()) - 1;
            int ab = midpoint(t[0], t[1]), bc = midpoint(t[1], t[2]), ca = midpoint(t[2], t[0]);
            next.push_back({t[0], ab, c});
            next.push_back({ab, t[1], c});
            next.push_back({t[1], bc, c});
            next.push_back({bc, t[2], c});
            next.push_back({t[2], ca, c});
            next.push_back({ca, t[0], c});
        }
        m.tris = std::move(next);
    }
    detail::finish_mesh(m);
    return m;
}

/// Sample a field's surface at resolution n (vertices per period).
/// Periodic identification is exact: no duplicate seam vertices.
inline Mesh build_mesh(const ScalarField& field, int n) {
    if (field.surface.kind != SurfaceKind::Rp2Triangulation && n < 8)
        throw Error("resolution-too-small", "need n >= 8, got n = " + std::to_string(n));
    const Surface& s = field.surface;
    Mesh m;
    m.kind = s.kind;
    m.dim = s.dim;
    m.n = n;
    switch (s.kind) {
        case SurfaceKind::Circle: {
            for (int i = 0; i < n; ++i) {
                Vec2 u{kTwoPi * i / n, 0.0};
                m.param.push_back(u);
                m.pos.push_back(s.chart(u));
                m.fval.push_back(field.f(u));
            }
            for (int i = 0; i < n; ++i) m.edges.push_back({i, (i + 1) % n});
            for (auto& e : m.edges)
                if (e[0] > e[1]) std::swap(e[0], e[1]);
            std::sort(m.edges.begin(), m.edges.end());
            detail::finish_mesh(m);
            break;
        }
        case SurfaceKind::Torus: {
            for (int iv = 0; iv < n; ++iv)
                for (int iu = 0; iu < n; ++iu) {
                    Vec2 u{kTwoPi * iu / n, kTwoPi * iv / n};
                    m.param.push_back(u);
                    m.pos.push_back(s.chart(u));
                    m.fval.push_back(field.f(u));
                }
            for (int iv = 0; iv < n; ++iv)
                for (int iu = 0; iu < n; ++iu) {
                    int a = m.torus_index(iu, iv), b = m.torus_index(iu + 1, iv);
                    int c = m.torus_index(iu + 1, iv + 1), d = m.torus_index(iu, iv + 1);
                    m.tris.push_back({a, b, c});
                    m.tris.push_back({a, c, d});
                }
            detail::finish_mesh(m);
            break;
        }
        case SurfaceKind::Sphere: {
            int level = std::max(1, int(std::floor(std::log2(double(n)))) - 2);
            m = detail::icosphere(field, level, n);
            break;
        }
        case SurfaceKind::Rp2Triangulation: {
            int sub = n >= 32 ? 2 : (n >= 16 ? 1 : 0);
            m = build_rp2_mesh(sub);
            m.n = n;
            break;
        }
    }
    return m;
}

/// Plain-text mesh export: "V E F" header, V vertex lines "u v x y z f",
/// then F cell lines of 0-based vertex indices (edges for 1d meshes).
inline void export_mesh(const Mesh& m, std::ostream& os) {
    int F = m.dim == 2 ? int(m.tris.size()) : int(m.edges.size());
    os << m.vertex_count() << " " << m.edges.size() << " " << F << "\n";
    for (int i = 0; i < m.vertex_count(); ++i) {
        os << m.param[i][0] << " " << m.param[i][1] << " " << m.pos[i][0] << " " << m.pos[i][1]
           << " " << m.pos[i][2] << " " << m.fval[i] << "\n";
    }
    if (m.dim == 2)
        for (auto& t : m.tris) os << t[0] << " " << t[1] << " " << t[2] << "\n";
    else
        for (auto& e : m.edges) os << e[0] << " " << e[1] << "\n";
}

/// Connected components of the subgraph induced by `mask`; returns
/// component id per vertex (-1 outside), and the component count.
inline int graph_components(const Mesh& m, const std::vector<char>& mask,
                            std::vector<int>& comp) {
    comp.assign(m.vertex_count(), -1);
    int nc = 0;
    for (int v0 = 0; v0 < m.vertex_count(); ++v0) {
        if (!mask[v0] || comp[v0] >= 0) continue;
        std::vector<int> stack{v0};
        comp[v0] = nc;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : m.nbr[v])
                if (mask[w] && comp[w] < 0) { comp[w] = nc; stack.push_back(w); }
        }
        ++nc;
    }
    return nc;
}

}  // namespace conleykit
