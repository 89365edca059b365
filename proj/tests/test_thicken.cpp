#include "catch_amalgamated.hpp"

#include "conleykit/conleykit.hpp"

using namespace conleykit;
using Catch::Approx;

namespace {

struct ThickenSetup {
    Surface s;
    ScalarField f;
    Mesh mesh;
    std::vector<CriticalPoint> crits;
    std::vector<ConleyPair> pairs;
    ThickenSetup(const char* sd, const char* fd, int n, double eps, double tau)
        : s(parse_surface(sd)), f(builtin_field(fd, s)), mesh(build_mesh(f, n)),
          crits(find_critical_points(f, mesh)),
          pairs(build_conley_pairs(f, mesh, crits, eps, tau)) {}
    std::vector<double> levels() const {
        std::vector<double> lv;
        for (auto& p : pairs) lv.push_back(p.c);
        return lv;
    }
};

ThickenSetup& torus64() {
    static ThickenSetup t("torus:R=2,r=1", "height", 64, 0.45, 2.0);
    return t;
}

ThickenSetup& circle_cos() {
    static ThickenSetup c("circle", "cos-theta", 1024, 0.2, 2.0);
    return c;
}

std::vector<Thickening>& torus_forward() {
    static std::vector<Thickening> ths =
        forward_thickenings(torus64().f, torus64().mesh, torus64().pairs, torus64().crits);
    return ths;
}

}  // namespace

TEST_CASE("forward thickening of a minimum equals the block interior") {
    auto& T = torus64();
    const Thickening& w_min = torus_forward()[0];
    REQUIRE(w_min.vertices == T.pairs[0].interior);
}

TEST_CASE("forward thickening of the maximum is dense away from separatrices") {
    auto& T = torus64();
    const Thickening& w_max = torus_forward()[3];
    REQUIRE(w_max.vertices.size() >= std::size_t(0.95 * T.mesh.vertex_count()));
    // the complement is exactly the grid-aligned invariant circles (the
    // unstable manifolds of the saddles) plus the minimum itself
    for (int v = 0; v < T.mesh.vertex_count(); ++v) {
        bool on_unstable_circle = std::fabs(wrap_delta(T.mesh.param[v][1] - kPi)) < 1e-9;
        bool on_unstable_meridian = std::fabs(wrap_delta(T.mesh.param[v][0] - 3 * kPi / 2)) < 1e-9;
        REQUIRE(bool(w_max.mask[v]) == !(on_unstable_circle || on_unstable_meridian));
    }
}

TEST_CASE("circle: the maximum's thickening misses only an arc at the minimum") {
    auto& C = circle_cos();
    auto ths = forward_thickenings(C.f, C.mesh, C.pairs, C.crits);
    const Thickening& w_max = ths[1];
    REQUIRE(w_max.vertices.size() > std::size_t(0.95 * C.mesh.vertex_count()));
    for (int v = 0; v < C.mesh.vertex_count(); ++v)
        if (!w_max.mask[v]) REQUIRE(std::fabs(wrap_delta(C.mesh.param[v][0] - kPi)) < 0.05);
}

TEST_CASE("block interiors are contained in their thickenings") {
    auto& T = torus64();
    for (std::size_t i = 0; i < T.pairs.size(); ++i)
        for (int v : T.pairs[i].interior) REQUIRE(torus_forward()[i].mask[v]);
}

TEST_CASE("forward thickenings are forward invariant") {
    auto& T = torus64();
    SplitMix64 rng(77);
    for (std::size_t i = 0; i < T.pairs.size(); ++i) {
        const Thickening& th = torus_forward()[i];
        for (int k = 0; k < 20; ++k) {
            Vec2 p = T.mesh.param[th.vertices[rng.uniform_int(int(th.vertices.size()))]];
            for (double t : {1.0, 3.0, 5.0})
                REQUIRE(nearest_in(T.mesh, T.s, th.mask, advance(T.f, p, t), true));
        }
    }
}

TEST_CASE("forward cover: all vertices, all members contractible") {
    auto& T = torus64();
    CoverReport rep = verify_cover(torus_forward(), T.mesh, T.levels());
    REQUIRE(rep.uncovered == 0);
    REQUIRE(rep.same_level_disjoint);
    for (auto& b : rep.member_reduced_betti) REQUIRE(b == std::array<int, 3>{0, 0, 0});
    REQUIRE(rep.pass);
}

TEST_CASE("a single thickening does not cover") {
    auto& T = torus64();
    std::vector<Thickening> only_max = {torus_forward()[3]};
    CoverReport rep = verify_cover(only_max, T.mesh, {T.pairs[3].c});
    REQUIRE(rep.uncovered > 0);
    REQUIRE(!rep.pass);
}

TEST_CASE("retraction: identity at lambda 0, lands in N at lambda 1") {
    auto& T = torus64();
    const Thickening& w_max = torus_forward()[3];
    const ConleyPair& pair = T.pairs[3];
    SplitMix64 rng(123);
    int tested = 0;
    while (tested < 100) {
        int v = w_max.vertices[rng.uniform_int(int(w_max.vertices.size()))];
        Vec2 p = T.mesh.param[v];
        if (nearest_in(T.mesh, T.s, pair.inN, p)) continue;  // sample W \ N
        ++tested;
        Vec2 p0 = retraction_homotopy(T.f, T.mesh, w_max, pair, 0.0, p);
        REQUIRE(p0[0] == p[0]);
        REQUIRE(p0[1] == p[1]);
        Vec2 p1 = retraction_homotopy(T.f, T.mesh, w_max, pair, 1.0, p);
        REQUIRE(nearest_in(T.mesh, T.s, pair.inN, p1, /*widen=*/true));
    }
}

TEST_CASE("retraction is near-identity close to the exit locus") {
    auto& T = torus64();
    const Thickening& w_max = torus_forward()[3];
    const ConleyPair& pair = T.pairs[3];
    // start just outside N, a short flow ahead of an exit-locus vertex
    int nv = pair.Nminus[pair.Nminus.size() / 2];
    Vec2 p = advance(T.f, T.mesh.param[nv], 0.02);
    if (!nearest_in(T.mesh, T.s, pair.inN, p)) {
        double d = 1e300;
        for (int v : pair.Nminus) d = std::min(d, dist(T.s.chart(p), T.mesh.pos[v]));
        for (double lam : {0.25, 0.5, 0.75, 1.0}) {
            Vec2 h = retraction_homotopy(T.f, T.mesh, w_max, pair, lam, p);
            REQUIRE(dist(T.s.chart(h), T.s.chart(p)) <= 10 * d);
        }
    }
}

TEST_CASE("entrance time bound: empty entrance locus gives 1") {
    auto& T = torus64();
    EntranceBound eb = entrance_time_bound(T.f, T.mesh, T.pairs, 3, T.crits);
    REQUIRE(T.pairs[3].Nplus.empty());
    REQUIRE(eb.value == 1.0);
    REQUIRE(eb.samples == 0);
}

TEST_CASE("entrance time bound on the torus minimum is finite and >= 1") {
    auto& T = torus64();
    EntranceBound eb = entrance_time_bound(T.f, T.mesh, T.pairs, 0, T.crits);
    REQUIRE(eb.samples > 0);
    REQUIRE(eb.failures == 0);
    REQUIRE(eb.value >= 1.0);
    REQUIRE(eb.value < 50.0);
}

TEST_CASE("circle entrance time matches the analytic transit") {
    auto& C = circle_cos();
    EntranceBound eb = entrance_time_bound(C.f, C.mesh, C.pairs, 0, C.crits);
    REQUIRE(eb.samples == 2);
    REQUIRE(eb.failures == 0);
    // flow tan(theta(t)/2) = e^t tan(theta_0/2); the exit-locus carrier of
    // the maximum pair sits where f(phi_tau q) = c_max - eps
    double tau = C.pairs[1].tau, eps = C.pairs[1].epsilon;
    double theta_c = std::acos(1.0 - eps);
    double theta_q = 2 * std::atan(std::exp(-tau) * std::tan(theta_c / 2));
    double sup = 0;
    for (int v : C.pairs[0].Nplus) {
        double theta_v = std::fabs(wrap_delta(C.mesh.param[v][0]));
        sup = std::max(sup, std::log(std::tan(theta_v / 2) / std::tan(theta_q / 2)));
    }
    REQUIRE(eb.value == Approx(1.0 + sup).margin(1e-3));
}

TEST_CASE("ambient thickenings on the circle") {
    auto& C = circle_cos();
    auto amb = ambient_thickenings(C.f, C.mesh, C.pairs, C.crits);
    REQUIRE(amb.size() == 2);
    const Thickening& u_min = amb[0];  // ascending level order
    const Thickening& u_max = amb[1];
    REQUIRE(u_max.crit_id == C.crits[1].id);
    // preimage under phi_T shrinks toward the maximum: U*_max inside its block
    for (int v : u_max.vertices) REQUIRE(C.pairs[1].inN[v]);
    REQUIRE(u_max.vertices.size() < C.pairs[1].interior.size());
    // and strictly grows the minimum's block
    for (int v : C.pairs[0].interior) REQUIRE(u_min.mask[v]);
    REQUIRE(u_min.vertices.size() > C.pairs[0].N.size());
    CoverReport rep = verify_cover(amb, C.mesh, {C.pairs[0].c, C.pairs[1].c});
    REQUIRE(rep.uncovered == 0);
    REQUIRE(rep.pass);
}

TEST_CASE("ambient recursion identity T_i - T_{i+1} = calT_i >= 1") {
    auto& T = torus64();
    auto amb = ambient_thickenings(T.f, T.mesh, T.pairs, T.crits);
    REQUIRE(amb.size() == 4);
    for (std::size_t i = 0; i < amb.size(); ++i) {
        double next = i + 1 < amb.size() ? amb[i + 1].T : 0.0;
        REQUIRE(amb[i].T - next == Approx(amb[i].calT).margin(1e-12));
        REQUIRE(amb[i].calT >= 1.0);
        // each critical vertex belongs to its own ambient thickening
        int xv = T.mesh.nearest_vertex(T.crits[amb[i].crit_id].x, T.s);
        REQUIRE(amb[i].mask[xv]);
    }
    CoverReport rep = verify_cover(amb, T.mesh, T.levels());
    REQUIRE(rep.uncovered == 0);
    REQUIRE(rep.pass);
}

TEST_CASE("same-level thickenings are disjoint on the double well") {
    ThickenSetup D("circle", "double-well", 2048, 0.45, 1.0);
    REQUIRE(D.crits.size() == 4);
    REQUIRE(D.crits[0].value == Approx(-1.0));
    REQUIRE(D.crits[1].value == Approx(-1.0));
    REQUIRE(D.crits[2].value == Approx(1.0));
    REQUIRE(D.crits[3].value == Approx(1.0));

    auto amb = ambient_thickenings(D.f, D.mesh, D.pairs, D.crits);
    CoverReport arep = verify_cover(amb, D.mesh, D.levels());
    REQUIRE(arep.same_level_disjoint);
    REQUIRE(arep.uncovered == 0);

    auto fw = forward_thickenings(D.f, D.mesh, D.pairs, D.crits);
    CoverReport frep = verify_cover(fw, D.mesh, D.levels());
    REQUIRE(frep.same_level_disjoint);
    REQUIRE(frep.uncovered == 0);
}

TEST_CASE("sphere: two thickenings cover, matching cat = 2") {
    ThickenSetup S("sphere:rho=1", "height", 64, 0.45, 1.5);
    auto fw = forward_thickenings(S.f, S.mesh, S.pairs, S.crits);
    CoverReport rep = verify_cover(fw, S.mesh, S.levels());
    REQUIRE(rep.pass);
    std::vector<std::vector<int>> cover;
    for (auto& t : fw) cover.push_back(t.vertices);
    SimplicialComplexGF2 cx = complex_of(S.mesh);
    RelativeHomology rh;
    rh.build(cx);
    Cohomology coh;
    coh.build(cx, rh);
    CatBounds cb = cat_bounds(S.mesh, cuplength(cx, coh), &cover);
    REQUIRE(cb.exact);
    REQUIRE(cb.value == 2);
}

TEST_CASE("the U_i variant runs on the negated field") {
    // on -f the maxima become minima; the ambient machinery is unchanged
    auto& C = circle_cos();
    ScalarField g = C.f.negated();
    auto gcrits = find_critical_points(g, C.mesh);
    REQUIRE(gcrits.size() == 2);
    REQUIRE(gcrits[0].value == Approx(-1.0));
    auto gpairs = build_conley_pairs(g, C.mesh, gcrits, 0.2, 2.0);
    auto amb = ambient_thickenings(g, C.mesh, gpairs, gcrits, {}, {}, ThickeningKind::AmbientU);
    std::vector<double> lv;
    for (auto& t : amb)
        for (auto& p : gpairs)
            if (p.crit_id == t.crit_id) lv.push_back(p.c);
    CoverReport rep = verify_cover(amb, C.mesh, lv);
    REQUIRE(rep.uncovered == 0);
    REQUIRE(amb[0].kind == ThickeningKind::AmbientU);
}

TEST_CASE("thickening json export") {
    auto& T = torus64();
    Json j = thickening_json(torus_forward()[0]);
    REQUIRE(j["critical_point"] == T.pairs[0].crit_id);
    REQUIRE(j["kind"] == "forward-W");
    REQUIRE(j["vertices"].size() == torus_forward()[0].vertices.size());
    REQUIRE(j.contains("T"));
    REQUIRE(j.contains("calT"));
}
