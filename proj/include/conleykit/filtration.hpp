#pragma once

#include "conleykit/critical.hpp"
#include "conleykit/homology.hpp"

namespace conleykit {

/// Sublevel filtration of a mesh complex between regular thresholds a < b:
/// the relative pair (M^b, M^a) in lower-star order, plus the absolute
/// cohomology of M^b.  Non-movable: reductions hold pointers into cx.
struct Filtration {
    const Mesh* mesh = nullptr;
    double a = kNegInf, b = kPosInf;
    SimplicialComplexGF2 cx;
    RelativeHomology rel;   // pair (M^b, M^a)
    RelativeHomology abs;   // absolute M^b (A ignored); built only when A nonempty
    bool A_empty = true;
    Cohomology coh;         // cohomology of M^b
    std::vector<double> thresholds;  // sorted distinct active simplex values

    Filtration() = default;
    Filtration(const Filtration&) = delete;
    Filtration& operator=(const Filtration&) = delete;

    void build(const Mesh& m, double a_, double b_) {
        if (!(a_ < b_)) throw Error("invalid-parameters", "need a < b");
        mesh = &m;
        a = a_;
        b = b_;
        ComplexWindow win;
        win.a = a;
        win.b = b;
        cx = complex_of(m, win);
        rel.build(cx);
        A_empty = true;
        for (int k = 0; k <= cx.dim; ++k)
            for (char f : cx.lv[k].inA) A_empty &= !f;
        if (!A_empty) abs.build(cx, /*ignore_A=*/true);
        coh.build(cx, absolute());
        thresholds.push_back(a);  // j^a is the identity: never in the zero set
        for (int k = 0; k <= cx.dim; ++k)
            for (double v : rel.posval[k]) thresholds.push_back(v);
        std::sort(thresholds.begin(), thresholds.end());
        thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
        thresholds.push_back(b);  // H(M^b, M^b) vanishes: always in the zero set
    }

    const RelativeHomology& absolute() const { return A_empty ? rel : abs; }

    std::vector<HomologyClass> basis(int k) const { return homology_basis(rel, k); }

    double default_tol_match() const { return 2.0 * mesh->max_edge_f_gap; }
};

struct MinimaxResult {
    int degree = 0;
    double kappa = 0;         // least s the class comes from, via reduction expansion
    double kappa_via_js = 0;  // least s with j^s(class) = 0, via threshold search
    int crit_id = -1;
    double crit_value = 0;
    double tol_match = 0;
    double rep_max_f = 0;  // max f over the stored representative's support
};

/// Minimax value of a relative homology class (Birkhoff/LS minimax).  Both
/// characterizations are computed and must agree; the realizing critical
/// point is the critical value nearest kappa within tol_match.
inline MinimaxResult kappa(const HomologyClass& cls, const Filtration& filt,
                           const std::vector<CriticalPoint>& crits, double tol_match = -1) {
    int k = cls.degree;
    BitVec z = filt.rel.to_positions(k, cls.chain);
    if (!filt.rel.is_relative_cycle(k, z))
        throw Error("class-not-in-complex", "representative is not a relative cycle");
    if (filt.rel.is_boundary(k, z))
        throw Error("trivial-class", "class vanishes in the relative complex");

    MinimaxResult res;
    res.degree = k;
    res.tol_match = tol_match > 0 ? tol_match : filt.default_tol_match();
    res.kappa = filt.rel.max_birth_value(k, z);

    // least threshold with j^s = 0 (no-gap lemma justifies the bisection;
    // the full scan lives in no_gap_interval)
    int lo = 0, hi = int(filt.thresholds.size()) - 1;
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (filt.rel.dies_at(k, z, filt.thresholds[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    res.kappa_via_js = filt.thresholds[lo];

    res.rep_max_f = kNegInf;
    for (int p : z.ones()) res.rep_max_f = std::max(res.rep_max_f, filt.rel.posval[k][p]);

    double best = res.tol_match;
    for (auto& c : crits) {
        double d = std::fabs(c.value - res.kappa);
        if (d <= best) {
            best = d;
            res.crit_id = c.id;
            res.crit_value = c.value;
        }
    }
    return res;
}

struct NoGapResult {
    double s0 = 0;
    bool closed = true;  // attained at a filtration threshold
    std::vector<double> scan_s;
    std::vector<char> scan_is_zero;
};

/// Scan every filtration threshold and verify the zero set of j^s is
/// up-closed.  A gap would falsify the discretization: hard failure.
inline NoGapResult no_gap_interval(const HomologyClass& cls, const Filtration& filt) {
    int k = cls.degree;
    BitVec z = filt.rel.to_positions(k, cls.chain);
    if (filt.rel.is_boundary(k, z))
        throw Error("trivial-class", "class vanishes in the relative complex");

    NoGapResult res;
    bool seen_zero = false;
    for (double s : filt.thresholds) {
        bool zero = filt.rel.dies_at(k, z, s);
        if (seen_zero && !zero)
            throw Error("gap-detected", "zero set of j^s is not an interval");
        if (zero && !seen_zero) {
            seen_zero = true;
            res.s0 = s;
        }
        res.scan_s.push_back(s);
        res.scan_is_zero.push_back(zero);
    }
    if (!seen_zero) throw Error("gap-detected", "class never dies, even at b");
    return res;
}

inline void export_no_gap_csv(const NoGapResult& ng, std::ostream& os) {
    os << "s,is_zero\n";
    for (std::size_t i = 0; i < ng.scan_s.size(); ++i)
        os << ng.scan_s[i] << "," << int(ng.scan_is_zero[i]) << "\n";
}

struct RefinedMinimax {
    MinimaxResult lower, upper;
    bool strict = false;
    bool distinct_points = false;
};

/// LS refined minimax for a subordinated pair a_cls = omega cap b_cls:
/// kappa(a) <= kappa(b) always; strict with distinct realizing critical
/// points when all critical points are isolated.
inline RefinedMinimax refined_minimax(const HomologyClass& a_cls, const HomologyClass& b_cls,
                                      const CohomologyClass& omega, const Filtration& filt,
                                      const std::vector<CriticalPoint>& crits) {
    if (omega.degree <= 0)
        throw Error("not-subordinated", "omega must have positive degree");
    if (!filt.coh.is_cocycle(omega.degree, omega.cochain))
        throw Error("not-subordinated", "omega is not a cocycle");
    BitVec capped = cap(filt.cx, omega.degree, omega.cochain, b_cls.degree, b_cls.chain, true);
    if (capped.n != a_cls.chain.n)
        throw Error("not-subordinated", "degree mismatch between omega cap b and a");
    BitVec diff = capped;
    diff ^= a_cls.chain;
    if (!filt.rel.is_boundary(a_cls.degree, filt.rel.to_positions(a_cls.degree, diff)))
        throw Error("not-subordinated", "omega cap b is not homologous to a");

    RefinedMinimax res;
    res.lower = kappa(a_cls, filt, crits);
    res.upper = kappa(b_cls, filt, crits);
    res.strict = res.lower.kappa < res.upper.kappa;
    res.distinct_points = res.lower.crit_id >= 0 && res.upper.crit_id >= 0 &&
                          res.lower.crit_id != res.upper.crit_id;
    return res;
}

}  // namespace conleykit
