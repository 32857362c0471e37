#include "test_main.hpp"
#include "gen.hpp"

#include "liouville/cells.hpp"

#include <cmath>

using namespace lv;

namespace {

double area_of(const FundamentalPolygon& P, bool hyperbolic) {
    Quad2DOptions opt;
    opt.abs_tol = 1e-10;
    opt.max_cells = 20000;
    auto r = integrate2d<double>(P.quadrature_region(), [hyperbolic](cplx z) {
        return hyperbolic ? 1.0 / (z.imag() * z.imag()) : 1.0;
    }, opt);
    return r.value;
}

bool equal(const Ledger& a, const Ledger& b) { return ledgers_equal(a, b); }

Ledger neg(const Ledger& a) { return Ledger{} - a; }

}  // namespace

TEST_CASE("paths") {
    gen::Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        cplx a = rng.upper(2.0, 0.1, 2.0), b = rng.upper(2.0, 0.1, 2.0);
        Path g = Path::geodesic(a, b);
        CHECK(std::abs(g.start() - a) < 1e-12);
        CHECK(std::abs(g.end() - b) < 1e-12);
        // points of a geodesic satisfy the triangle equality
        cplx m = g.at(0.37);
        CHECK(std::abs(hyperbolic_distance(a, m) + hyperbolic_distance(m, b) - hyperbolic_distance(a, b)) < 1e-8);
        cplx h = hyperbolic_midpoint(a, b);
        CHECK(std::abs(hyperbolic_distance(a, h) - hyperbolic_distance(h, b)) < 1e-9);

        MoebiusMap M = rng.moebius();
        Path t = g.transformed(M).mirror().reversed();
        for (double s : {0.1, 0.5, 0.9}) {
            CHECK(std::abs(t.at(s) - std::conj(M(g.at(1.0 - s)))) < 1e-9 * std::max(1.0, std::abs(t.at(s))));
            double e = 1e-6;
            cplx fd = (t.at(s + e) - t.at(s - e)) / (2.0 * e);
            CHECK(std::abs(fd - t.deriv(s)) < 1e-5 * std::max(1.0, std::abs(fd)));
        }
        // translating a mirrored path equals mirroring the conjugate-translated path
        Path u = g.mirror().transformed(M);
        CHECK(std::abs(u.at(0.3) - M(std::conj(g.at(0.3)))) < 1e-9 * std::max(1.0, std::abs(u.at(0.3))));
    }
    Path v = Path::geodesic({1.0, 0.5}, {1.0, 2.0});
    CHECK(v.vertical);
    CHECK(std::abs(hyperbolic_midpoint({1.0, 0.5}, {1.0, 2.0}) - cplx(1.0, 1.0)) < 1e-12);
}

TEST_CASE("cell comparison and translation") {
    Path p = Path::geodesic({-1.0, 1.0}, {1.0, 2.0});
    auto a = make_arc(p, "x");
    auto b = make_arc(p.reversed(), "y");
    CHECK(compare_cells(*a, *b) == -1);
    CHECK(compare_cells(*a, *a) == 1);
    MoebiusMap g(2.0, 1.0, 1.0, 1.0);
    auto ga = translate(g, a);
    CHECK(compare_cells(*ga, *make_arc(Path::geodesic(g(p.start()), g(p.end())), "z")) == 1);
    auto gi = translate(g.inverse(), ga);
    CHECK(compare_cells(*gi, *a) == 1);

    auto c = make_circle({0.0, 0.0}, 1.0, true, "c");
    auto fl = translate(MoebiusMap(0.0, 1.0, -1.0, 0.0), c);  // z -> -1/z reverses the unit circle
    CHECK(compare_cells(*fl, *c) == -1);
    auto sh = translate(MoebiusMap::translation(cplx(5.0, 1.0)), c);
    CHECK(compare_cells(*sh, *make_circle({5.0, 1.0}, 1.0, true, "d")) == 1);

    Ledger L;
    L.add(a, {g}, 2);
    L.add(b, {g}, 2);
    CHECK(L.is_zero());
    Ledger M;
    M.add(a, {MoebiusMap::identity()}, 1);
    CHECK(M.is_zero());
}

TEST_CASE("group boundary squares to zero") {
    gen::Rng rng(9);
    auto pt = make_point({0.3, 0.7}, "x");
    for (int i = 0; i < 20; ++i) {
        Ledger x;
        x.add(pt, {rng.real_moebius(), rng.real_moebius(), rng.real_moebius()}, 1);
        x.add(pt, {rng.real_moebius(), rng.real_moebius()}, -2);
        CHECK(boundary_group(boundary_group(x)).is_zero());
    }
}

TEST_CASE("polygon geometry") {
    for (int g : {2, 3}) {
        auto P = build_polygon(build_fuchsian(g));
        CHECK(vertex_relation_residual(P) < 1e-10);
        CHECK(edges_simple(P));
        double sum = 0.0;
        for (double a : vertex_angles(P)) {
            CHECK(std::abs(a - 2.0 * pi / (4 * g)) < 1e-9);
            sum += a;
        }
        CHECK(std::abs(sum - 2.0 * pi) < 1e-9);
        CHECK(P.contains(P.interior));
        double area = area_of(P, true);
        CHECK(std::abs(area / (4.0 * pi * (g - 1)) - 1.0) < 1e-6);
        // generators push the centre out of the domain
        for (const auto& m : P.group.generators) {
            CHECK(!P.contains(m(P.interior)));
            CHECK(!P.contains(m.inverse()(P.interior)));
        }
        // vertical sections agree with membership
        gen::Rng rng(g);
        for (int i = 0; i < 200; ++i) {
            double x = rng.uniform(P.x_min(), P.x_max());
            double y = rng.uniform(0.0, 1.0);
            bool in = false;
            for (auto I : P.vertical_section(x)) in = in || (y > I[0] && y < I[1]);
            CHECK(in == P.contains({x, y}));
        }
    }
}

TEST_CASE("alternative domain") {
    auto P = build_polygon(build_fuchsian(2));
    cplx shift = 0.1 * P.vertices[0].imag() * cplx(1.0, 0.5);
    auto Q = alternative_domain(P, shift);
    CHECK(vertex_relation_residual(Q) < 1e-10);
    CHECK(edges_simple(Q));
    CHECK(std::abs(area_of(Q, true) / (4.0 * pi) - 1.0) < 1e-6);
    double sum = 0.0;
    for (double a : vertex_angles(Q)) sum += a;
    CHECK(std::abs(sum - 2.0 * pi) < 1e-9);
}

TEST_CASE("two-dimensional chains") {
    for (int g : {2, 3}) {
        auto P = build_polygon(build_fuchsian(g));
        double p = default_basepoint(P);
        auto C = chains_2d(P, p);
        CHECK(C.L.size() == size_t(2 * g));
        CHECK(C.V.size() == size_t(4 * g - 1));
        CHECK(equal(boundary_cells(C.F), boundary_group(C.L)));
        CHECK(equal(boundary_cells(C.L), boundary_group(C.V)));
        CHECK(equal(boundary_cells(C.W), C.V - C.U));
        CHECK(total_boundary(C.sigma()).is_zero());
        auto M = mirror_chains(C);
        CHECK(total_boundary(M.sigma()).is_zero());
    }
    auto Q = alternative_domain(build_polygon(build_fuchsian(2)), {0.01, 0.02});
    auto C = chains_2d(Q, default_basepoint(Q));
    CHECK(total_boundary(C.sigma()).is_zero());
}

TEST_CASE("Fuchsian three-dimensional region") {
    for (int g : {2, 3}) {
        auto T = region3d(build_polygon(build_fuchsian(g)));
        CHECK(boundary_cells(boundary_cells(T.R)).is_zero());
        Ledger chain = T.R - T.S + T.E;
        CHECK(equal(total_boundary(chain), neg(T.sigma)));
        CHECK(T.walls.size() == size_t(4 * g));
        for (size_t i = 0; i < T.walls.size(); ++i) {
            const Wall& w = T.walls[i];
            const Wall& o = T.walls[w.partner];
            CHECK(T.walls[o.partner].center == w.center);
            for (double s : {0.2, 0.5, 0.8}) {
                cplx z = w.pairing(w.edge.at(s));
                CHECK(std::abs(std::abs(z - o.center) - o.radius) < 1e-9 * o.radius);
            }
        }
        gen::Rng rng(70 + g);
        const auto& P = T.polygon;
        int inside = 0;
        for (int i = 0; i < 400; ++i) {
            HPoint3 Z{{rng.uniform(P.x_min(), P.x_max()), rng.uniform(-0.5, 0.5)}, rng.uniform(0.01, 1.0)};
            if (!T.contains(Z)) continue;
            ++inside;
            for (const auto& m : P.group.generators) {
                CHECK(!T.contains(act3d(m, Z).point));
                CHECK(!T.contains(act3d(m.inverse(), Z).point));
            }
        }
        CHECK(inside > 20);
    }
    auto Q = region3d(alternative_domain(build_polygon(build_fuchsian(2)), {0.01, 0.02}));
    CHECK(equal(total_boundary(Q.R - Q.S + Q.E), neg(Q.sigma)));
}

TEST_CASE("Schottky domain and region") {
    auto G = conjugate_infinity_to_limit_set(build_schottky(default_schottky_pairs()));
    auto P = build_polygon(G);
    CHECK(P.contains(P.interior));
    double exact = 0.0;
    for (const auto& D : G.disks) exact += (D.exterior ? 1.0 : -1.0) * pi * D.radius * D.radius;
    CHECK(std::abs(area_of(P, false) / exact - 1.0) < 1e-8);
    for (int k = 1; k <= 2; ++k) {
        auto img = translate(G.schottky(k), P.edge("C", k).cell);
        CHECK(compare_cells(*img, *P.edge("Cp", k).cell) == -1);
    }
    auto C = chains_2d(P, 0.0);
    CHECK(equal(boundary_cells(C.F), boundary_group(C.L)));
    CHECK(total_boundary(C.sigma()).is_zero());
    auto T = region3d(P);
    CHECK(equal(total_boundary(T.R - T.S + T.E), neg(T.sigma)));
    gen::Rng rng(5);
    for (int i = 0; i < 300; ++i) {
        HPoint3 Z{P.interior + rng.point(2.0), rng.uniform(0.01, 2.0)};
        if (!T.contains(Z)) continue;
        for (const auto& m : G.generators) {
            CHECK(!T.contains(act3d(m, Z).point));
            CHECK(!T.contains(act3d(m.inverse(), Z).point));
        }
    }
}
