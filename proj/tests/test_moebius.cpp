#include "test_main.hpp"
#include "gen.hpp"

#include <cmath>

using namespace lv;

namespace {

HolomorphicSampler chain(const HolomorphicSampler& f, const HolomorphicSampler& g) {
    return {[=](cplx z) { return f.f(g.f(z)); },
            [=](cplx z) { return f.d1(g.f(z)) * g.d1(z); },
            [=](cplx z) {
                cplx w = g.f(z), g1 = g.d1(z);
                return f.d2(w) * g1 * g1 + f.d1(w) * g.d2(z);
            },
            [=](cplx z) {
                cplx w = g.f(z), g1 = g.d1(z), g2 = g.d2(z);
                return f.d3(w) * g1 * g1 * g1 + 3.0 * f.d2(w) * g1 * g2 + f.d1(w) * g.d3(z);
            }};
}

HolomorphicSampler cubic(cplx alpha) {
    return {[=](cplx z) { return z * z * z + alpha * z; }, [=](cplx z) { return 3.0 * z * z + alpha; },
            [](cplx z) { return 6.0 * z; }, [](cplx) { return cplx(6.0); }};
}

}  // namespace

TEST_CASE("normalization fixes the determinant and the sign") {
    gen::Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        MoebiusMap m = rng.moebius();
        CHECK(std::abs(m.det() - 1.0) < 1e-12);
        cplx first = std::abs(m.a) > 0 ? m.a : m.b;
        CHECK((first.real() > 0.0 || (first.real() == 0.0 && first.imag() > 0.0)));
        MoebiusMap e = compose(m, m.inverse());
        CHECK(e.distance(MoebiusMap::identity()) < 1e-12);
    }
    MoebiusMap flip(-1.0, 0.0, 0.0, -1.0);
    CHECK(flip.a == cplx(1.0));
}

TEST_CASE("compose") {
    gen::Rng rng(12);
    MoebiusMap g = rng.moebius();
    CHECK(compose(g, MoebiusMap::identity()).distance(g) == 0.0);
    MoebiusMap t = compose(MoebiusMap::translation(1.0), MoebiusMap::translation(2.0));
    CHECK(t.distance(MoebiusMap::translation(3.0)) < 1e-15);
    MoebiusMap h = rng.moebius();
    cplx z(0.3, -0.7);
    CHECK(std::abs((g * h)(z) - g(h(z))) < 1e-12);
}

TEST_CASE("apply, derivative and log-derivative ratio") {
    MoebiusMap dil = MoebiusMap::dilation(2.0);
    CHECK(std::abs(dil(3.0) - 6.0) < 1e-15);
    CHECK(std::abs(dil.deriv(3.0) - 2.0) < 1e-15);
    CHECK(dil.log_deriv_ratio(3.0) == cplx(0.0));

    MoebiusMap inv(0.0, -1.0, 1.0, 0.0);
    cplx i(0.0, 1.0);
    CHECK(std::abs(inv(i) - i) < 1e-15);
    CHECK(std::abs(std::abs(inv.deriv(i)) - 1.0) < 1e-15);
    cplx z(0.4, 1.3);
    CHECK(std::abs(inv.log_deriv_ratio(z) - (-2.0 / z)) < 1e-14);

    CHECK(inv.apply(SpherePoint::at(0.0)).infinite);
    CHECK(std::abs(inv.apply(SpherePoint::inf()).z) < 1e-15);
    CHECK_THROWS_AS(inv(0.0), DomainError);

    gen::Rng rng(13);
    for (int k = 0; k < 50; ++k) {
        MoebiusMap g = rng.moebius();
        cplx w = rng.point(1.5);
        cplx h = 1e-4;
        cplx fd = (g(w + h) - g(w - h)) / (2.0 * h);
        CHECK(std::abs(fd - g.deriv(w)) < 1e-6 * (1.0 + std::abs(fd)));
    }
}

TEST_CASE("Schwarzian of Moebius maps vanishes") {
    gen::Rng rng(14);
    for (int k = 0; k < 50; ++k) {
        MoebiusMap g = rng.moebius();
        cplx z = rng.point(1.0);
        CHECK(std::abs(schwarzian(sampler_of(g), z)) < 1e-12);
    }
}

TEST_CASE("Schwarzian of z^3 at 1") {
    HolomorphicSampler f = cubic(0.0);
    CHECK(std::abs(schwarzian(f, 1.0) - cplx(-4.0)) < 1e-14);
    HolomorphicSampler numeric{f.f, {}, {}, {}};
    CHECK(std::abs(schwarzian(numeric, 1.0) - cplx(-4.0)) < 1e-9);
}

TEST_CASE("Schwarzian cocycle under composition") {
    gen::Rng rng(15);
    int checked = 0;
    while (checked < 100) {
        HolomorphicSampler f = chain(sampler_of(rng.moebius()), cubic(rng.point(1.0)));
        HolomorphicSampler g = sampler_of(rng.moebius());
        cplx z = rng.point(1.0);
        cplx g1 = g.d1(z);
        cplx lhs, rhs;
        try {
            lhs = schwarzian(chain(f, g), z);
            rhs = schwarzian(f, g.f(z)) * g1 * g1 + schwarzian(g, z);
        } catch (const std::exception&) {
            continue;
        }
        double scale = 1.0 + std::abs(lhs);
        if (scale > 1e6) continue;  // near a critical point of the cubic
        CHECK(std::abs(lhs - rhs) < 1e-9 * scale);
        ++checked;
    }
}

TEST_CASE("act3d elementary cases") {
    auto r = act3d(MoebiusMap::translation(1.0), {cplx(0.2, 0.3), 0.7});
    CHECK(std::abs(r.point.z - cplx(1.2, 0.3)) < 1e-15);
    CHECK(r.point.t == doctest::Approx(0.7));
    CHECK(r.jacobian == doctest::Approx(1.0));
    auto s = act3d(MoebiusMap(0.0, -1.0, 1.0, 0.0), {0.0, 1.0});
    CHECK(std::abs(s.point.z) < 1e-15);
    CHECK(s.point.t == doctest::Approx(1.0));
    CHECK(s.jacobian == doctest::Approx(1.0));
}

TEST_CASE("act3d is a group action with multiplicative Jacobian") {
    gen::Rng rng(16);
    for (int k = 0; k < 100; ++k) {
        MoebiusMap g1 = rng.moebius(), g2 = rng.moebius();
        HPoint3 Z = rng.hpoint();
        auto a = act3d(g2, Z);
        auto b = act3d(g1, a.point);
        auto c = act3d(g1 * g2, Z);
        CHECK(a.point.t > 0.0);
        CHECK(a.jacobian > 0.0);
        CHECK(std::abs(c.jacobian - b.jacobian * a.jacobian) < 1e-12 * c.jacobian);
        CHECK(std::abs(c.point.z - b.point.z) < 1e-11 * (1.0 + std::abs(c.point.z)));
        CHECK(std::abs(c.point.t - b.point.t) < 1e-11 * (1.0 + c.point.t));
    }
}

TEST_CASE("act3d approaches the boundary action quadratically") {
    gen::Rng rng(17);
    for (int k = 0; k < 10; ++k) {
        MoebiusMap g = rng.moebius();
        cplx z = rng.point(1.0);
        double err[3];
        double ts[3] = {1e-2, 1e-3, 1e-4};
        for (int j = 0; j < 3; ++j) err[j] = std::abs(act3d(g, {z, ts[j]}).point.z - g(z));
        double slope = (std::log(err[2]) - std::log(err[0])) / (std::log(ts[2]) - std::log(ts[0]));
        CHECK(std::abs(slope - 2.0) < 0.1);
    }
}

TEST_CASE("act3d derivative formulas match finite differences") {
    gen::Rng rng(18);
    for (int k = 0; k < 50; ++k) {
        MoebiusMap g = rng.moebius();
        HPoint3 Z = rng.hpoint();
        auto D = act3d_derivatives(g, Z);
        double h = 1e-6;
        auto at = [&](cplx dz, double dt) { return act3d(g, {Z.z + dz, Z.t + dt}).point; };
        cplx zx = (at(h, 0).z - at(-h, 0).z) / (2 * h);
        cplx zy = (at(cplx(0, h), 0).z - at(cplx(0, -h), 0).z) / (2 * h);
        cplx zt = (at(0, h).z - at(0, -h).z) / (2 * h);
        double tx = (at(h, 0).t - at(-h, 0).t) / (2 * h);
        double ty = (at(cplx(0, h), 0).t - at(cplx(0, -h), 0).t) / (2 * h);
        double tt = (at(0, h).t - at(0, -h).t) / (2 * h);
        cplx dz = 0.5 * (zx - cplx(0, 1) * zy), dzb = 0.5 * (zx + cplx(0, 1) * zy);
        cplx tz = 0.5 * (tx - cplx(0, 1) * ty);
        auto close = [](cplx a, cplx b) { return std::abs(a - b) <= 1e-6 * std::max(1.0, std::abs(b)); };
        CHECK(close(D.dz_dz, dz));
        CHECK(close(D.dz_dzbar, dzb));
        CHECK(close(D.dz_dt, zt));
        CHECK(close(D.dt_dz, tz));
        CHECK(close(D.dt_dt, tt));
    }
}

TEST_CASE("classify") {
    auto c = classify(MoebiusMap::dilation(4.0));
    CHECK(c.tag == MapTag::hyperbolic);
    REQUIRE(c.fixed_points.size() == 2);
    CHECK(c.fixed_points[0].infinite);
    CHECK(std::abs(c.fixed_points[1].z) < 1e-15);
    CHECK(std::abs(c.multiplier - 4.0) < 1e-12);

    auto p = classify(MoebiusMap::translation(1.0));
    CHECK(p.tag == MapTag::parabolic);
    REQUIRE(p.fixed_points.size() == 1);
    CHECK(p.fixed_points[0].infinite);

    CHECK(classify(MoebiusMap::identity()).tag == MapTag::identity);
    CHECK(classify(MoebiusMap(std::cos(0.3), -std::sin(0.3), std::sin(0.3), std::cos(0.3))).tag == MapTag::elliptic);
    auto l = classify(MoebiusMap::dilation(cplx(2.0, 1.0)));
    CHECK(l.tag == MapTag::loxodromic);
    CHECK(std::abs(std::abs(l.multiplier) - 1.0) > 0.1);

    gen::Rng rng(19);
    for (int k = 0; k < 50; ++k) {
        MoebiusMap g = rng.moebius();
        auto cl = classify(g);
        if (cl.tag != MapTag::loxodromic && cl.tag != MapTag::hyperbolic) continue;
        for (const auto& f : cl.fixed_points) {
            if (f.infinite) continue;
            CHECK(std::abs(g(f.z) - f.z) < 1e-9 * (1.0 + std::abs(f.z)));
        }
        if (!cl.fixed_points[0].infinite) CHECK(std::abs(g.deriv(cl.fixed_points[0].z)) < 1.0);
    }
}

TEST_CASE("array round trip") {
    gen::Rng rng(20);
    MoebiusMap g = rng.moebius();
    CHECK(MoebiusMap::from_array(g.to_array()).distance(g) < 1e-15);
}
