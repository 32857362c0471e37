#include "test_main.hpp"
#include "gen.hpp"

#include "liouville/field.hpp"

#include <cmath>

using namespace lv;

namespace {

// finite-difference Laplacian / 4 of phi
double fd_zzbar(const ConformalField& f, cplx z, double h) {
    double c = f.sample(z).phi;
    double s = f.sample(z + h).phi + f.sample(z - h).phi + f.sample(z + cplx(0, h)).phi + f.sample(z - cplx(0, h)).phi;
    return (s - 4.0 * c) / (4.0 * h * h);
}

cplx fd_z(const ConformalField& f, cplx z, double h) {
    double px = (f.sample(z + h).phi - f.sample(z - h).phi) / (2.0 * h);
    double py = (f.sample(z + cplx(0, h)).phi - f.sample(z - cplx(0, h)).phi) / (2.0 * h);
    return 0.5 * cplx(px, -py);
}

MarkedGroup schottky_group() { return conjugate_infinity_to_limit_set(build_schottky(default_schottky_pairs())); }

}  // namespace

TEST_CASE("hyperbolic field") {
    auto f = hyperbolic_field();
    CHECK(std::abs(f->sample({0.0, 1.0}).phi) < 1e-15);
    gen::Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        cplx z = rng.upper(3.0, 0.05, 3.0);
        if (i % 2) z = std::conj(z);
        auto s = f->sample(z);
        CHECK(std::abs(std::norm(s.phi_z) - s.density()) < 1e-12 * s.density());
        CHECK(std::abs(s.curvature() + 1.0) < 1e-13);
    }
    CHECK_THROWS_AS(f->sample(2.0), DomainError);

    auto G = build_fuchsian(2);
    auto P = build_polygon(G);
    CHECK(automorphy_residual(*f, G, domain_samples(P, 40)) < 1e-11);
}

TEST_CASE("spherical metric from the trivial group") {
    MarkedGroup triv;
    triv.kind = GroupKind::schottky;
    triv.genus = 0;
    auto f = poincare_series_field(triv, 3);
    gen::Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        cplx z = rng.point(3.0);
        auto s = f->sample(z);
        CHECK(std::abs(s.density() - 1.0 / std::pow(1.0 + std::norm(z), 2)) < 1e-13);
        CHECK(std::abs(s.curvature() - 4.0) < 1e-11);
    }
}

TEST_CASE("Poincare series field on a Schottky group") {
    auto G = schottky_group();
    auto P = build_polygon(G);
    auto samples = domain_samples(P, 40);
    CHECK_THROWS_AS(poincare_series_field(G, 2), ValidationError);
    CHECK_THROWS_AS(poincare_series_field(build_fuchsian(2), 5), ValidationError);

    double prev = 1e300;
    int first_ok = 0;
    for (int N = 3; N <= 9; ++N) {
        FieldPtr f;
        try {
            f = poincare_series_field(G, N);
        } catch (const DomainError&) {
            continue;
        }
        if (!first_ok) first_ok = N;
        double r = automorphy_residual(*f, G, samples);
        // decreasing until the rounding floor of the log
        if (prev > 1e-10) CHECK(r < prev);
        CHECK(r <= 10.0 * f->tail_bound() + 1e-11);
        prev = r;
    }
    REQUIRE(first_ok > 0);
    CHECK(prev < 1e-6);

    // derivatives against finite differences; the series is not flat, so curvature is not constant
    auto f = poincare_series_field(G, 8);
    for (cplx z : domain_samples(P, 12)) {
        auto s = f->sample(z);
        double h = 1e-4 * std::max(1.0, std::abs(z));
        CHECK(std::abs(fd_z(*f, z, h) - s.phi_z) < 1e-6 * std::max(1.0, std::abs(s.phi_z)));
        CHECK(std::abs(fd_zzbar(*f, z, h) - s.phi_zzbar) < 1e-4 * std::max(1.0, std::abs(s.phi_zzbar)));
    }
}

TEST_CASE("invariant bumps") {
    for (int genus : {2, 3}) {
        auto G = build_fuchsian(genus);
        auto P = build_polygon(G);
        auto B = invariant_bump(P, P.interior, 0.3);
        CHECK(std::abs(B->sample(P.interior).s - 1.0) < 1e-14);
        CHECK(std::abs(B->sample(std::conj(P.interior)).s - 1.0) < 1e-14);

        gen::Rng rng(11 + genus);
        std::vector<cplx> pts;
        for (int i = 0; i < 60; ++i) {
            // points near the center so the bump is not identically zero there
            double r = rng.uniform(0.0, 0.28), a = rng.uniform(0.0, 2.0 * pi);
            cplx w = P.interior;
            cplx p = cplx(w.real(), w.imag() * std::cosh(r)) + std::polar(w.imag() * std::sinh(r), a);
            pts.push_back(p);
        }
        CHECK(invariance_residual(*B, G, pts) < 1e-9);

        // chain rule through the side pairings agrees with finite differences at a translate
        auto f = perturb(hyperbolic_field(), B, 0.4);
        for (const auto& g : G.generators) {
            cplx z = g(pts[3]);
            auto s = f->sample(z);
            double h = 1e-5 * z.imag();
            CHECK(std::abs(fd_z(*f, z, h) - s.phi_z) < 1e-5 * std::max(1.0, std::abs(s.phi_z)));
            CHECK(std::abs(fd_zzbar(*f, z, h) - s.phi_zzbar) < 1e-3 * std::max(1.0, std::abs(s.phi_zzbar)));
        }
        CHECK(automorphy_residual(*f, G, pts) < 1e-9);

        CHECK_THROWS_AS(invariant_bump(P, P.interior, 5.0), ValidationError);
        CHECK_THROWS_AS(invariant_bump(P, P.interior, -1.0), ValidationError);
    }

    auto G = schottky_group();
    auto P = build_polygon(G);
    cplx c = domain_samples(P, 40)[0];
    double w = 1e300;
    for (const auto& D : G.disks) w = std::min(w, std::abs(std::abs(c - D.center) - D.radius));
    auto B = invariant_bump(P, c, 0.5 * w);
    CHECK(std::abs(B->sample(c).s - 1.0) < 1e-14);
    std::vector<cplx> pts;
    for (int i = 0; i < 12; ++i) pts.push_back(c + std::polar(0.3 * w, 0.5 * i));
    CHECK(invariance_residual(*B, G, pts) < 1e-9);
}
