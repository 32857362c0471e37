#include "test_main.hpp"
#include "gen.hpp"

#include "liouville/group.hpp"

#include <cmath>

using namespace lv;

TEST_CASE("Fuchsian construction: relation, reality, orientation") {
    for (int g : {2, 3}) {
        MarkedGroup G = build_fuchsian(g);
        CHECK(G.generators.size() == size_t(2 * g));
        CHECK(G.vertices.size() == size_t(4 * g));
        CHECK(G.relation().distance(MoebiusMap::identity()) < 1e-10);
        for (const auto& m : G.generators) {
            for (cplx e : {m.a, m.b, m.c, m.d}) CHECK(e.imag() == 0.0);
            CHECK(classify(m).tag == MapTag::hyperbolic);
        }
        gen::Rng rng(30 + g);
        for (int k = 0; k < 100; ++k) {
            cplx z = rng.upper(3.0, 0.01, 3.0);
            for (const auto& m : G.generators) CHECK(m(z).imag() > 0.0);
        }
        for (cplx v : G.vertices) CHECK(v.imag() > 0.0);
    }
}

TEST_CASE("normalized marking") {
    MarkedGroup G = build_fuchsian(2);
    auto ca = classify(G.alpha(1));
    REQUIRE(ca.fixed_points.size() == 2);
    CHECK(!ca.fixed_points[0].infinite);
    CHECK(std::abs(ca.fixed_points[0].z) < 1e-10);
    CHECK(ca.fixed_points[1].infinite);
    CHECK(std::abs(G.alpha(1).c) < 1e-12);
    CHECK(std::abs(G.alpha(1).b) < 1e-12);
    double lambda = (G.alpha(1).a / G.alpha(1).d).real();
    CHECK(lambda > 0.0);
    CHECK(lambda < 1.0);
    auto cb = classify(G.beta(1));
    CHECK(std::abs(cb.fixed_points[0].z + 1.0) < 1e-10);

    MarkedGroup N = normalize(G);
    CHECK(N.normalization.distance(G.normalization) < 1e-10);
}

TEST_CASE("normalize undoes a translation") {
    MarkedGroup G = build_fuchsian(2);
    MarkedGroup S = conjugate(G, MoebiusMap::translation(5.0));
    MarkedGroup B = normalize(S);
    for (size_t i = 0; i < G.generators.size(); ++i) {
        double scale = std::max({1.0, std::abs(G.generators[i].a), std::abs(G.generators[i].c), std::abs(G.generators[i].d)});
        CHECK(B.generators[i].distance(G.generators[i]) < 1e-10 * scale);
    }
    for (size_t i = 0; i < G.vertices.size(); ++i) CHECK(std::abs(B.vertices[i] - G.vertices[i]) < 1e-10);
}

TEST_CASE("vertex relations of the marked polygon") {
    for (int g : {2, 3}) {
        MarkedGroup G = build_fuchsian(g);
        const int n = 4 * g;
        auto v = [&](int j) { return G.vertices[((j % n) + n) % n]; };
        for (int k = 1; k <= g; ++k) {
            int o = 4 * (k - 1);
            cplx a0 = v(o), a1 = v(o + 1), b0 = v(o + 4), b1 = v(o + 3);
            CHECK(std::abs(G.alpha(k).inverse()(a0) - b1) < 1e-10);
            CHECK(std::abs(G.beta(k).inverse()(b0) - a1) < 1e-10);
            CHECK(std::abs(G.commutator(k)(b0) - v(o)) < 1e-10);
            CHECK(std::abs(G.alpha(k)(v(o + 3)) - v(o)) < 1e-10);
            CHECK(std::abs(G.alpha(k)(v(o + 2)) - v(o + 1)) < 1e-10);
            CHECK(std::abs(G.beta(k)(v(o + 1)) - v(o + 4)) < 1e-10);
            CHECK(std::abs(G.beta(k)(v(o + 2)) - v(o + 3)) < 1e-10);
        }
    }
}

TEST_CASE("Schottky construction") {
    CHECK_THROWS_AS(build_schottky({{-2.0, 2.0, 0.5, 0.5}}), ValidationError);
    CHECK_THROWS_AS(build_schottky({{-2.0, 2.0, 0.5, 0.5}, {-2.5, 6.0, 0.5, 0.5}}), ValidationError);

    auto pairs = default_schottky_pairs();
    MarkedGroup G = build_schottky(pairs);
    REQUIRE(G.generators.size() == 2);
    for (int k = 1; k <= 2; ++k) {
        const auto& p = pairs[k - 1];
        auto c = classify(G.schottky(k));
        CHECK((c.tag == MapTag::loxodromic || c.tag == MapTag::hyperbolic));
        CHECK(std::abs(c.fixed_points[0].z - p.c2) < p.r2);
        CHECK(std::abs(c.fixed_points[1].z - p.c1) < p.r1);
        for (int j = 0; j < 100; ++j) {
            cplx u = std::polar(1.0, 2.0 * pi * (j + 0.25) / 100.0);
            cplx on = G.schottky(k)(p.c1 + p.r1 * u);
            CHECK(std::abs(std::abs(on - p.c2) - p.r2) < 1e-12);
            cplx out = G.schottky(k)(p.c1 + 1.01 * p.r1 * u);
            CHECK(std::abs(out - p.c2) < p.r2);
        }
    }
    for (const auto& w : enumerate(G, 4)) {
        if (w.letters.empty()) continue;
        auto t = classify(w.element).tag;
        CHECK((t == MapTag::loxodromic || t == MapTag::hyperbolic));
    }
}

TEST_CASE("enumeration counts and inverse closure") {
    MarkedGroup S = build_schottky(default_schottky_pairs());
    CHECK(enumerate(S, 1).size() == 5);
    CHECK(enumerate(S, 2).size() == 17);
    CHECK(enumerate(S, 3).size() == 53);
    auto words = enumerate(S, 3);
    CHECK(words[0].letters.empty());

    MarkedGroup F = build_fuchsian(2);
    auto fw = enumerate(F, 4);
    CHECK(enumerate(F, 2).size() == 65);
    CHECK(fw.size() < size_t(1 + 8 + 56 + 392 + 2744));

    for (auto* list : {&words, &fw}) {
        ElementIndex idx;
        for (size_t i = 0; i < list->size(); ++i) idx.insert((*list)[i].element, int(i));
        for (const auto& w : *list) CHECK(idx.find(w.element.inverse()) >= 0);
        for (const auto& w : *list) {
            MoebiusMap m;
            for (int l : w.letters) m = m * letter_matrix(list == &words ? S : F, l);
            CHECK(m.distance(w.element) < 1e-12);
        }
    }
}

TEST_CASE("conjugating infinity into the limit set") {
    MarkedGroup F = build_fuchsian(2);
    MarkedGroup F2 = conjugate_infinity_to_limit_set(F);
    CHECK(F2.normalization.distance(F.normalization) < 1e-15);

    MarkedGroup S = build_schottky(default_schottky_pairs());
    MarkedGroup T = conjugate_infinity_to_limit_set(S);
    auto c = classify(T.schottky(1));
    CHECK(c.fixed_points[0].infinite);
    CHECK(std::abs(c.fixed_points[1].z) < 1e-10);
    for (size_t i = 0; i < S.generators.size(); ++i) {
        cplx t1 = S.generators[i].trace(), t2 = T.generators[i].trace();
        CHECK(std::min(std::abs(t1 - t2), std::abs(t1 + t2)) < 1e-12 * std::max(1.0, std::abs(t1)));
    }
    // the paired disks move with the group: gamma_k still maps C_k onto C'_k
    for (int k = 1; k <= 2; ++k) {
        const Disk& D = T.disks[2 * (k - 1)];
        const Disk& Dp = T.disks[2 * (k - 1) + 1];
        for (int j = 0; j < 16; ++j) {
            cplx z = D.center + std::polar(D.radius, 2.0 * pi * j / 16.0);
            cplx w = T.schottky(k)(z);
            CHECK(std::abs(std::abs(w - Dp.center) - Dp.radius) < 1e-9 * Dp.radius);
        }
    }
    CHECK(T.disks[1].exterior);
    CHECK(!T.disks[0].exterior);
}
