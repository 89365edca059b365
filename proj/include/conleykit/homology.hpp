#pragma once

#include <limits>
#include <unordered_map>

#include "conleykit/gf2.hpp"
#include "conleykit/mesh.hpp"

namespace conleykit {

/// GF(2) chain complex of a (relative) simplicial pair.  Simplices are
/// stored in canonical order (lexicographic in the global vertex order);
/// `val` is the lower-star value (max vertex f), `inA` marks the quotiented
/// subcomplex of a relative pair.
struct SimplicialComplexGF2 {
    int dim = 0;
    int nverts = 0;

    struct Level {
        std::vector<std::array<int, 3>> simp;
        std::vector<double> val;
        std::vector<char> inA;
        std::unordered_map<int64_t, int> lookup;
    };
    std::array<Level, 3> lv;

    int64_t encode(const std::array<int, 3>& s) const {
        int64_t base = nverts + 1;
        return ((int64_t(s[0] + 1) * base) + (s[1] + 1)) * base + (s[2] + 1);
    }

    int find(int k, std::array<int, 3> s) const {
        auto it = lv[k].lookup.find(encode(s));
        return it == lv[k].lookup.end() ? -1 : it->second;
    }

    int count(int k) const { return k <= dim ? int(lv[k].simp.size()) : 0; }

    /// Canonical ids of the (k-1)-faces of simplex (k, i); -1 for faces
    /// outside the complex (cannot happen for full subcomplexes).
    std::array<int, 3> faces(int k, int i) const {
        const auto& s = lv[k].simp[i];
        if (k == 1)
            return {find(0, {s[0], -1, -1}), find(0, {s[1], -1, -1}), -1};
        return {find(1, {s[1], s[2], -1}), find(1, {s[0], s[2], -1}), find(1, {s[0], s[1], -1})};
    }
};

struct ComplexWindow {
    const std::vector<char>* total = nullptr;  // vertex mask
    const std::vector<char>* A = nullptr;      // vertex mask, must lie inside total
    double a = kNegInf;                        // simplices with value <= a join A
    double b = kPosInf;                        // simplices with value > b are dropped
};

/// Build the (relative) complex of a mesh restricted to a vertex subset
/// and/or a sublevel window.  Only full subcomplexes arise, so A is a
/// subcomplex by construction; A escaping the total set is rejected.
inline SimplicialComplexGF2 complex_of(const Mesh& mesh, const ComplexWindow& win = {}) {
    if (win.total && win.A)
        for (int v = 0; v < mesh.vertex_count(); ++v)
            if ((*win.A)[v] && !(*win.total)[v])
                throw Error("not-a-subcomplex", "A is not contained in the total subset");

    SimplicialComplexGF2 cx;
    cx.dim = mesh.dim;
    cx.nverts = mesh.vertex_count();

    auto vertex_in = [&](int v) {
        return (!win.total || (*win.total)[v]) && mesh.fval[v] <= win.b;
    };
    auto vertex_inA = [&](int v) { return win.A && (*win.A)[v]; };

    auto add = [&](int k, std::array<int, 3> s, int nv) {
        double value = kNegInf;
        bool all_in = true, all_A = win.A != nullptr;
        for (int j = 0; j < nv; ++j) {
            if (!vertex_in(s[j])) all_in = false;
            if (!vertex_inA(s[j])) all_A = false;
            value = std::max(value, mesh.fval[s[j]]);
        }
        if (!all_in) return;
        auto& L = cx.lv[k];
        L.simp.push_back(s);
        L.val.push_back(value);
        L.inA.push_back(char(all_A || value <= win.a));
    };

    for (int v = 0; v < mesh.vertex_count(); ++v) add(0, {v, -1, -1}, 1);
    for (auto e : mesh.edges) add(1, {e[0], e[1], -1}, 2);
    for (auto t : mesh.tris) {
        std::array<int, 3> s = t;
        std::sort(s.begin(), s.end());
        add(2, s, 3);
    }

    for (int k = 0; k <= cx.dim; ++k) {
        auto& L = cx.lv[k];
        std::vector<int> order(L.simp.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
        std::sort(order.begin(), order.end(),
                  [&](int x, int y) { return L.simp[x] < L.simp[y]; });
        SimplicialComplexGF2::Level next;
        for (int i : order) {
            next.simp.push_back(L.simp[i]);
            next.val.push_back(L.val[i]);
            next.inA.push_back(L.inA[i]);
        }
        L = std::move(next);
        for (std::size_t i = 0; i < L.simp.size(); ++i) L.lookup[cx.encode(L.simp[i])] = int(i);
    }
    return cx;
}

inline BitVec chain_of(const SimplicialComplexGF2& cx, int k, const std::vector<int>& ids) {
    BitVec z(cx.count(k));
    for (int i : ids) z.flip(i);
    return z;
}

/// <cochain, chain> over GF(2).
inline bool evaluate(const BitVec& cochain, const BitVec& chain) {
    int parity = 0;
    for (std::size_t k = 0; k < cochain.w.size(); ++k)
        parity ^= __builtin_popcountll(cochain.w[k] & chain.w[k]) & 1;
    return parity;
}

/// Front-face / back-face cup product in the global vertex order.
inline BitVec cup(const SimplicialComplexGF2& cx, int p, const BitVec& alpha, int q,
                  const BitVec& beta) {
    if (p + q > cx.dim) throw Error("degree-overflow", "cup degree exceeds complex dimension");
    int m = p + q;
    BitVec out(cx.count(m));
    for (int i = 0; i < cx.count(m); ++i) {
        const auto& s = cx.lv[m].simp[i];
        std::array<int, 3> front{-1, -1, -1}, back{-1, -1, -1};
        for (int j = 0; j <= p; ++j) front[j] = s[j];
        for (int j = 0; j <= q; ++j) back[j] = s[p + j];
        int fi = cx.find(p, front), bi = cx.find(q, back);
        if (fi >= 0 && bi >= 0 && alpha.test(fi) && beta.test(bi)) out.flip(i);
    }
    return out;
}

/// Cap product: the cochain eats the back face, the front face survives.
/// With this convention (a cup b) cap z = a cap (b cap z) exactly at chain
/// level over GF(2).  A-supported front faces are dropped (relative cap).
inline BitVec cap(const SimplicialComplexGF2& cx, int p, const BitVec& omega, int m,
                  const BitVec& z, bool relative = true) {
    if (m - p < 0) throw Error("degree-underflow", "cap degree below zero");
    int r = m - p;
    BitVec out(cx.count(r));
    for (int i : z.ones()) {
        const auto& s = cx.lv[m].simp[i];
        std::array<int, 3> front{-1, -1, -1}, back{-1, -1, -1};
        for (int j = 0; j <= r; ++j) front[j] = s[j];
        for (int j = 0; j <= p; ++j) back[j] = s[r + j];
        int fi = cx.find(r, front), bi = cx.find(p, back);
        if (fi < 0 || bi < 0) continue;
        if (!omega.test(bi)) continue;
        if (relative && cx.lv[r].inA[fi]) continue;
        out.flip(fi);
    }
    return out;
}

inline BitVec unit_cocycle(const SimplicialComplexGF2& cx) {
    BitVec one(cx.count(0));
    for (int i = 0; i < cx.count(0); ++i) one.set(i);
    return one;
}

/// Reductions of the (relative) pair in lower-star filtration order: the
/// substrate for Betti numbers, homology bases and minimax queries.
struct RelativeHomology {
    const SimplicialComplexGF2* cx = nullptr;

    std::array<std::vector<int>, 3> pos2can;
    std::array<std::vector<int>, 3> can2pos;
    std::array<std::vector<double>, 3> posval;

    struct Red {
        std::vector<BitVec> R, V;
        std::vector<int> low_to_col;
    };
    std::array<Red, 3> red;  // red[k] reduces boundary_k, k >= 1
    std::array<std::vector<char>, 3> positive, essential;

    void build(const SimplicialComplexGF2& complex, bool ignore_A = false) {
        cx = &complex;
        for (int k = 0; k <= cx->dim; ++k) {
            auto& L = cx->lv[k];
            std::vector<int> act;
            for (int i = 0; i < cx->count(k); ++i)
                if (ignore_A || !L.inA[i]) act.push_back(i);
            std::stable_sort(act.begin(), act.end(),
                             [&](int x, int y) { return L.val[x] < L.val[y]; });
            pos2can[k] = act;
            can2pos[k].assign(cx->count(k), -1);
            posval[k].resize(act.size());
            for (std::size_t p = 0; p < act.size(); ++p) {
                can2pos[k][act[p]] = int(p);
                posval[k][p] = L.val[act[p]];
            }
        }
        for (int k = 1; k <= cx->dim; ++k) {
            int rows = int(pos2can[k - 1].size());
            auto& r = red[k];
            r.R.assign(pos2can[k].size(), BitVec(rows));
            for (std::size_t j = 0; j < pos2can[k].size(); ++j) {
                for (int f : cx->faces(k, pos2can[k][j])) {
                    if (f < 0) continue;
                    int rp = can2pos[k - 1][f];
                    if (rp >= 0) r.R[j].flip(rp);
                }
            }
            reduce_columns(r.R, rows, &r.V, &r.low_to_col);
        }
        for (int k = 0; k <= cx->dim; ++k) {
            int nk = int(pos2can[k].size());
            positive[k].assign(nk, 1);
            if (k >= 1)
                for (int j = 0; j < nk; ++j) positive[k][j] = red[k].R[j].none();
            essential[k] = positive[k];
            if (k < cx->dim && !red[k + 1].low_to_col.empty())
                for (int j = 0; j < nk; ++j)
                    if (red[k + 1].low_to_col[j] >= 0) essential[k][j] = 0;
        }
    }

    int betti(int k) const {
        if (k > cx->dim || k < 0) return 0;
        int b = 0;
        for (char e : essential[k]) b += e;
        return b;
    }

    /// Cycle created at position j (V column for k >= 1, unit vector else).
    BitVec cycle_at(int k, int j) const {
        if (k == 0) {
            BitVec z(int(pos2can[0].size()));
            z.set(j);
            return z;
        }
        return red[k].V[j];
    }

    BitVec to_positions(int k, const BitVec& canonical) const {
        BitVec z(int(pos2can[k].size()));
        for (int i : canonical.ones()) {
            int p = can2pos[k][i];
            if (p >= 0) z.flip(p);
        }
        return z;
    }

    BitVec to_canonical(int k, const BitVec& pos_chain) const {
        BitVec z(cx->count(k));
        for (int p : pos_chain.ones()) z.flip(pos2can[k][p]);
        return z;
    }

    /// Is the (position-coordinate) chain a relative boundary?
    bool is_boundary(int k, BitVec z) const {
        if (k >= cx->dim) return z.none();
        const Red& r = red[k + 1];
        for (;;) {
            int l = z.low();
            if (l < 0) return true;
            int col = r.low_to_col[l];
            if (col < 0) return false;
            z ^= r.R[col];
        }
    }

    bool is_relative_cycle(int k, const BitVec& z_pos) const {
        if (k == 0) return true;
        BitVec b(int(pos2can[k - 1].size()));
        for (int p : z_pos.ones()) {
            for (int f : cx->faces(k, pos2can[k][p])) {
                if (f < 0) continue;
                int rp = can2pos[k - 1][f];
                if (rp >= 0) b.flip(rp);
            }
        }
        return b.none();
    }

    /// Largest birth value among the essential classes needed to express
    /// the cycle: the least sublevel the class "comes from".
    double max_birth_value(int k, BitVec z) const {
        double birth = kNegInf;
        for (;;) {
            int l = z.low();
            if (l < 0) break;
            int col = (k < cx->dim) ? red[k + 1].low_to_col[l] : -1;
            if (col >= 0) {
                z ^= red[k + 1].R[col];
            } else if (positive[k][l]) {
                birth = std::max(birth, posval[k][l]);
                z ^= cycle_at(k, l);
            } else {
                throw Error("class-not-in-complex", "chain is not a relative cycle");
            }
        }
        return birth;
    }

    /// j^s test: does the class die into H(M^b, M^s)?  Top-down elimination
    /// of the part of the cycle above level s by reduced boundaries.
    bool dies_at(int k, BitVec z, double s) const {
        for (;;) {
            int l = z.low();
            if (l < 0 || posval[k][l] <= s) return true;
            int col = (k < cx->dim) ? red[k + 1].low_to_col[l] : -1;
            if (col < 0) return false;
            z ^= red[k + 1].R[col];
        }
    }
};

struct HomologyClass {
    int degree = 0;
    BitVec chain;  // canonical coordinates
    double birth = kNegInf;
};

/// Persistence-compatible basis of H_k(X, A): essential cycle classes in
/// birth order, so distinct classes carry distinct minimax levels.
inline std::vector<HomologyClass> homology_basis(const RelativeHomology& rh, int k) {
    std::vector<HomologyClass> out;
    if (k > rh.cx->dim) return out;
    for (std::size_t j = 0; j < rh.essential[k].size(); ++j) {
        if (!rh.essential[k][j]) continue;
        HomologyClass c;
        c.degree = k;
        c.chain = rh.to_canonical(k, rh.cycle_at(k, int(j)));
        c.birth = rh.posval[k][j];
        out.push_back(std::move(c));
    }
    return out;
}

struct CohomologyClass {
    int degree = 0;
    BitVec cochain;  // canonical coordinates
};

/// Cohomology of the absolute complex (the window, A ignored).  Classes are
/// decided through the evaluation pairing against an absolute homology
/// basis, which is perfect over a field.
struct Cohomology {
    const SimplicialComplexGF2* cx = nullptr;
    std::array<std::vector<HomologyClass>, 3> hb;  // absolute homology bases
    RelativeHomology::Red mid;                     // delta_1 reduction when dim == 2
    bool has_mid = false;

    void build(const SimplicialComplexGF2& complex, const RelativeHomology& absolute) {
        cx = &complex;
        for (int k = 0; k <= cx->dim; ++k) hb[k] = homology_basis(absolute, k);
        if (cx->dim == 2) {
            int rows = cx->count(2);
            mid.R.assign(cx->count(1), BitVec(rows));
            for (int j = 0; j < cx->count(2); ++j)
                for (int f : cx->faces(2, j))
                    if (f >= 0) mid.R[f].flip(j);
            reduce_columns(mid.R, rows, &mid.V, &mid.low_to_col);
            has_mid = true;
        }
    }

    BitVec coboundary(int k, const BitVec& w) const {
        BitVec out(cx->count(k + 1));
        for (int j = 0; j < cx->count(k + 1); ++j) {
            int parity = 0;
            for (int f : cx->faces(k + 1, j))
                if (f >= 0 && w.test(f)) parity ^= 1;
            if (parity) out.flip(j);
        }
        return out;
    }

    bool is_cocycle(int k, const BitVec& w) const {
        return k >= cx->dim || coboundary(k, w).none();
    }

    /// Zero test for a cocycle's cohomology class via the evaluation pairing.
    bool is_zero_class(int k, const BitVec& w) const {
        for (auto& c : hb[k])
            if (evaluate(w, c.chain)) return false;
        return true;
    }

    bool cohomologous(int k, const BitVec& x, const BitVec& y) const {
        BitVec d = x;
        d ^= y;
        return is_zero_class(k, d);
    }

    /// Basis of H^k: cocycles whose evaluation vectors span the dual of the
    /// homology basis.
    std::vector<CohomologyClass> basis(int k) const {
        std::vector<CohomologyClass> out;
        int m = k <= cx->dim ? int(hb[k].size()) : 0;
        if (m == 0) return out;

        std::vector<BitVec> span;  // reduced evaluation vectors of chosen cocycles
        auto try_add = [&](const BitVec& w) {
            BitVec ev(m);
            for (int i = 0; i < m; ++i)
                if (evaluate(w, hb[k][i].chain)) ev.set(i);
            bool changed = true;
            while (changed && !ev.none()) {
                changed = false;
                for (auto& s : span)
                    if (s.low() == ev.low()) {
                        ev ^= s;
                        changed = true;
                        break;
                    }
            }
            if (ev.none()) return false;
            span.push_back(ev);
            out.push_back({k, w});
            return true;
        };

        if (k == 0) {
            // component indicator cochains
            std::vector<std::vector<int>> adj(cx->count(0));
            for (int e = 0; e < cx->count(1); ++e) {
                auto& s = cx->lv[1].simp[e];
                int v1 = cx->find(0, {s[0], -1, -1}), v2 = cx->find(0, {s[1], -1, -1});
                if (v1 >= 0 && v2 >= 0) {
                    adj[v1].push_back(v2);
                    adj[v2].push_back(v1);
                }
            }
            std::vector<int> comp(cx->count(0), -1);
            int nc = 0;
            for (int v0 = 0; v0 < cx->count(0); ++v0) {
                if (comp[v0] >= 0) continue;
                std::vector<int> stack{v0};
                comp[v0] = nc;
                while (!stack.empty()) {
                    int v = stack.back();
                    stack.pop_back();
                    for (int other : adj[v])
                        if (comp[other] < 0) {
                            comp[other] = nc;
                            stack.push_back(other);
                        }
                }
                ++nc;
            }
            for (int c = 0; c < nc && int(out.size()) < m; ++c) {
                BitVec w(cx->count(0));
                for (int v = 0; v < cx->count(0); ++v)
                    if (comp[v] == c) w.set(v);
                try_add(w);
            }
        } else if (k == cx->dim) {
            for (int i = 0; i < cx->count(k) && int(out.size()) < m; ++i) {
                BitVec w(cx->count(k));
                w.set(i);
                try_add(w);
            }
        } else {  // k == 1, dim == 2: positives of the delta_1 reduction
            for (std::size_t j = 0; j < mid.R.size() && int(out.size()) < m; ++j)
                if (mid.R[j].none()) try_add(mid.V[j]);
        }
        return out;
    }
};

/// Betti numbers over GF(2) of a mesh complex (or a vertex subset).
inline std::array<int, 3> betti_numbers(const Mesh& mesh,
                                        const std::vector<char>* subset = nullptr) {
    ComplexWindow win;
    win.total = subset;
    auto cx = complex_of(mesh, win);
    RelativeHomology rh;
    rh.build(cx);
    return {rh.betti(0), rh.betti(1), rh.betti(2)};
}

/// Reduced Betti numbers (contractibility proxy): all zero is necessary for
/// a nullhomotopic candidate.
inline std::array<int, 3> reduced_betti(const Mesh& mesh, const std::vector<char>& subset) {
    bool any = false;
    for (char c : subset) any |= bool(c);
    if (!any) return {0, 0, 0};
    auto b = betti_numbers(mesh, &subset);
    b[0] -= 1;
    return b;
}

/// Largest k with a nonzero cup product of k positive-degree classes,
/// pruned by total degree <= dim.
inline int cuplength(const SimplicialComplexGF2& cx, const Cohomology& coh) {
    if (coh.hb[0].size() != 1)
        throw Error("invalid-parameters", "cuplength requires a connected complex");
    struct Item {
        int degree;
        BitVec w;
    };
    std::vector<Item> gens;
    for (int p = 1; p <= cx.dim; ++p)
        for (auto& c : coh.basis(p)) gens.push_back({p, c.cochain});
    if (gens.empty()) return 0;

    std::vector<Item> frontier(gens.begin(), gens.end());
    int best = 1;
    for (int len = 2; len <= cx.dim; ++len) {
        std::vector<Item> next;
        for (auto& f : frontier)
            for (auto& g : gens) {
                if (f.degree + g.degree > cx.dim) continue;
                BitVec prod = cup(cx, f.degree, f.w, g.degree, g.w);
                if (!coh.is_zero_class(f.degree + g.degree, prod))
                    next.push_back({f.degree + g.degree, std::move(prod)});
            }
        if (next.empty()) break;
        best = len;
        frontier = std::move(next);
    }
    return best;
}

struct SubordinationChain {
    int length = 0;                      // the subordination number
    std::vector<HomologyClass> classes;  // b_1 < ... < b_{length+1}, ascending degree
    std::vector<CohomologyClass> omegas; // omegas[i] cap classes[i+1] ~ classes[i]
};

/// Longest chain b_1 < ... < b_{k+1} of subordinated homology basis
/// classes, with the witnessing cocycles.  The witness omega is searched
/// over the GF(2) coefficient space of the H^p basis.
inline SubordinationChain subordination_chain(const SimplicialComplexGF2& cx,
                                              const RelativeHomology& rh,
                                              const Cohomology& coh) {
    std::vector<HomologyClass> nodes;
    for (int k = 0; k <= cx.dim; ++k)
        for (auto& c : homology_basis(rh, k)) nodes.push_back(c);

    std::array<std::vector<CohomologyClass>, 3> cobasis;
    for (int p = 1; p <= cx.dim; ++p) cobasis[p] = coh.basis(p);

    auto subordinated = [&](const HomologyClass& lo, const HomologyClass& hi,
                            CohomologyClass* witness) {
        int p = hi.degree - lo.degree;
        if (p <= 0 || p > cx.dim) return false;
        auto& omegas = cobasis[p];
        if (omegas.empty()) return false;
        int m = int(omegas.size());
        std::vector<BitVec> caps;
        for (auto& w : omegas) caps.push_back(cap(cx, p, w.cochain, hi.degree, hi.chain));
        for (int mask = 1; mask < (1 << m); ++mask) {
            BitVec acc(cx.count(lo.degree));
            BitVec w(cx.count(p));
            for (int i = 0; i < m; ++i)
                if (mask & (1 << i)) {
                    acc ^= caps[i];
                    w ^= omegas[i].cochain;
                }
            acc ^= lo.chain;
            if (rh.is_boundary(lo.degree, rh.to_positions(lo.degree, acc))) {
                if (witness) *witness = {p, w};
                return true;
            }
        }
        return false;
    };

    int nn = int(nodes.size());
    std::vector<std::vector<std::pair<int, CohomologyClass>>> succ(nn);
    for (int i = 0; i < nn; ++i)
        for (int j = 0; j < nn; ++j) {
            if (nodes[i].degree >= nodes[j].degree) continue;
            CohomologyClass w;
            if (subordinated(nodes[i], nodes[j], &w)) succ[i].push_back({j, w});
        }

    std::vector<int> depth(nn, 1), prev(nn, -1), order(nn);
    std::vector<CohomologyClass> prev_omega(nn);
    for (int i = 0; i < nn; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return nodes[x].degree < nodes[y].degree; });
    for (int i : order)
        for (auto& [j, w] : succ[i])
            if (depth[i] + 1 > depth[j]) {
                depth[j] = depth[i] + 1;
                prev[j] = i;
                prev_omega[j] = w;
            }

    SubordinationChain out;
    int best_at = -1;
    for (int i = 0; i < nn; ++i)
        if (depth[i] - 1 > out.length) {
            out.length = depth[i] - 1;
            best_at = i;
        }
    for (int i = best_at; i >= 0; i = prev[i]) {
        out.classes.push_back(nodes[i]);
        if (prev[i] >= 0) out.omegas.push_back(prev_omega[i]);
    }
    std::reverse(out.classes.begin(), out.classes.end());
    std::reverse(out.omegas.begin(), out.omegas.end());
    return out;
}

inline int subordination_number(const SimplicialComplexGF2& cx, const RelativeHomology& rh,
                                const Cohomology& coh) {
    return subordination_chain(cx, rh, coh).length;
}

struct CatBounds {
    int lower = 0, upper = 0;
    bool exact = false;
    int value = 0;  // meaningful when exact
};

/// cat bounds: cuplength + 1 from below, min(1 + dim, categorical cover
/// size) from above.  A supplied cover must pass the contractibility proxy
/// and cover every vertex.
inline CatBounds cat_bounds(const Mesh& mesh, int cupp,
                            const std::vector<std::vector<int>>* cover = nullptr) {
    CatBounds cb;
    cb.lower = cupp + 1;
    cb.upper = 1 + mesh.dim;
    if (cover) {
        std::vector<char> covered(mesh.vertex_count(), 0);
        for (auto& member : *cover) {
            std::vector<char> mask(mesh.vertex_count(), 0);
            for (int v : member) {
                mask[v] = 1;
                covered[v] = 1;
            }
            auto rb = reduced_betti(mesh, mask);
            if (rb[0] != 0 || rb[1] != 0 || rb[2] != 0)
                throw Error("invalid-cover", "a cover member fails the contractibility proxy");
        }
        for (char c : covered)
            if (!c) throw Error("invalid-cover", "cover union misses vertices");
        cb.upper = std::min(cb.upper, int(cover->size()));
    }
    if (cb.lower > cb.upper)
        throw Error("invalid-cover", "lower category bound exceeds upper bound");
    cb.exact = cb.lower == cb.upper;
    cb.value = cb.lower;
    return cb;
}

/// Sparse export of the boundary matrices as text triples "k row col".
inline void export_complex(const SimplicialComplexGF2& cx, std::ostream& os) {
    for (int k = 1; k <= cx.dim; ++k)
        for (int j = 0; j < cx.count(k); ++j)
            for (int f : cx.faces(k, j))
                if (f >= 0) os << k << " " << f << " " << j << "\n";
}

}  // namespace conleykit
