#include "suites.hpp"

#include "liouville/holography.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cli {

using namespace lv;

namespace {

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
    cplx point(double r) { return {uniform(-r, r), uniform(-r, r)}; }
    MoebiusMap moebius() {
        for (;;) {
            cplx a = point(2), b = point(2), c = point(2), d = point(2);
            if (std::abs(a * d - b * c) > 0.2) return {a, b, c, d};
        }
    }
    MoebiusMap real_moebius() {
        for (;;) {
            double a = uniform(-2, 2), b = uniform(-2, 2), c = uniform(-2, 2), d = uniform(-2, 2);
            if (a * d - b * c > 0.2) return {a, b, c, d};
        }
    }
    HPoint3 hpoint() { return {point(2.0), uniform(0.1, 3.0)}; }
};

SuiteResult finish(std::string name, int n, double worst, double tol) {
    return {std::move(name), n, worst, tol, worst < tol};
}

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

double form_gap(const OneForm& a, const OneForm& b) { return std::abs(a.dz - b.dz) + std::abs(a.dzbar - b.dzbar); }
double form_size(const OneForm& a) { return std::abs(a.dz) + std::abs(a.dzbar); }

const FundamentalPolygon& genus2() {
    static const FundamentalPolygon P = build_polygon(build_fuchsian(2));
    return P;
}

cplx point_in(const FundamentalPolygon& P, Rng& rng) {
    double ymax = 0.0;
    for (cplx v : P.vertices) ymax = std::max(ymax, v.imag());
    for (;;) {
        cplx z(rng.uniform(P.x_min(), P.x_max()), rng.uniform(0.0, 2.0 * ymax));
        if (P.contains(z)) return z;
    }
}

}  // namespace

SuiteResult schwarzian_cocycle(std::uint64_t seed) {
    Rng rng(seed);
    int n = 0;
    double worst = 0.0;
    while (n < 100) {
        HolomorphicSampler f = chain(sampler_of(rng.moebius()), cubic(rng.point(1.0)));
        HolomorphicSampler g = sampler_of(rng.moebius());
        cplx z = rng.point(1.0);
        cplx lhs, rhs;
        try {
            lhs = schwarzian(chain(f, g), z);
            cplx g1 = g.d1(z);
            rhs = schwarzian(f, g.f(z)) * g1 * g1 + schwarzian(g, z);
        } catch (const CriticalPointError&) {
            continue;
        }
        double scale = 1.0 + std::abs(lhs);
        if (scale > 1e6) continue;  // next to a critical point of the cubic
        worst = std::max(worst, std::abs(lhs - rhs) / scale);
        ++n;
    }
    return finish("schwarzian_cocycle", n, worst, 1e-9);
}

SuiteResult schwarzian_of_moebius(std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        MoebiusMap g = rng.moebius();
        worst = std::max(worst, std::abs(schwarzian(sampler_of(g), rng.point(1.0))));
    }
    return finish("schwarzian_of_moebius", 50, worst, 1e-12);
}

SuiteResult jacobian_multiplicativity(std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        MoebiusMap g1 = rng.moebius(), g2 = rng.moebius();
        HPoint3 Z = rng.hpoint();
        auto a = act3d(g2, Z);
        auto b = act3d(g1, a.point);
        auto c = act3d(g1 * g2, Z);
        worst = std::max(worst, std::abs(c.jacobian - b.jacobian * a.jacobian) / c.jacobian);
    }
    return finish("jacobian_multiplicativity", 100, worst, 1e-12);
}

SuiteResult theta_coboundary(std::uint64_t seed) {
    Rng rng(seed);
    auto f = hyperbolic_field();
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        MoebiusMap g1 = rng.real_moebius(), g2 = rng.real_moebius();
        cplx z(rng.uniform(-2, 2), rng.uniform(0.2, 2.0));
        auto th = [&](const MoebiusMap& g, cplx w) { return theta_check_form(f->sample(w), g, w); };
        MoebiusMap h = g1.inverse();
        OneForm d = pull_back(th(g2, h(z)), h, z) - th(g1 * g2, z) + th(g1, z);
        OneForm u = u_check_form(g1, g2, z);
        worst = std::max(worst, form_gap(d, u) / std::max(1.0, form_size(u)));
    }
    return finish("theta_check_coboundary", 100, worst, 1e-9);
}

SuiteResult u_closed(std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        MoebiusMap g1 = rng.real_moebius(), g2 = rng.real_moebius();
        cplx c(rng.uniform(-1, 1), rng.uniform(0.5, 1.5));
        auto r = integrate_form(Path::circle(c, 0.2, true), [&](cplx z) { return u_check_form(g1, g2, z); });
        worst = std::max(worst, std::abs(r.value));
    }
    return finish("u_check_closed", 10, worst, 1e-9);
}

SuiteResult w2_coboundary(std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        MoebiusMap g = rng.moebius();
        HPoint3 Z = rng.hpoint();
        MoebiusMap h = g.inverse();
        Act3Derivatives d = act3d_derivatives(h, Z);
        double t1 = act3d(h, Z).point.t;
        double oracle = -0.5 * (std::norm(d.dz_dz) - std::norm(d.dz_dzbar)) / (t1 * t1) + 0.5 / (Z.t * Z.t);
        worst = std::max(worst, std::abs(delta_w2_slice(g, Z) - oracle) / (1.0 + std::abs(oracle)));
    }
    return finish("w2_coboundary", 100, worst, 1e-9);
}

SuiteResult hyperbolic_automorphy(std::uint64_t seed) {
    Rng rng(seed);
    const auto& P = genus2();
    std::vector<cplx> pts;
    for (int i = 0; i < 50; ++i) pts.push_back(point_in(P, rng));
    double r = automorphy_residual(*hyperbolic_field(), P.group, pts);
    return finish("hyperbolic_automorphy", 50, r, 1e-10);
}

SuiteResult epstein_equivariance(std::uint64_t seed) {
    Rng rng(seed);
    const auto& P = genus2();
    auto f = hyperbolic_field();
    double worst = 0.0;
    int n = 0;
    for (int i = 0; i < 20; ++i) {
        cplx w = point_in(P, rng);
        double eps = rng.uniform(0.01, 0.3);
        for (const auto& m : P.group.generators)
            for (const MoebiusMap& g : {m, m.inverse()}) {
                HPoint3 a = epstein_map(*f, g(w), eps);
                HPoint3 b = act3d(g, epstein_map(*f, w, eps)).point;
                worst = std::max(worst, (std::abs(a.z - b.z) + std::abs(a.t - b.t)) / (std::abs(a.z) + a.t));
                ++n;
            }
    }
    return finish("epstein_equivariance", n, worst, 1e-8);
}

SuiteResult kappa_pairing() {
    double worst = 0.0;
    for (int genus : {2, 3}) {
        auto P = build_polygon(build_fuchsian(genus));
        cplx k = varkappa_pairing(P, chains_2d(P, default_basepoint(P))) / cplx(0.0, 4.0 * pi);
        worst = std::max(worst, std::abs(k - double(2 - 2 * genus)));
    }
    return finish("kappa_pairing", 2, worst, 1e-6);
}

SuiteResult chain_ledgers() {
    std::vector<FundamentalPolygon> polys{build_polygon(build_fuchsian(2)), build_polygon(build_fuchsian(3)),
                                          build_polygon(conjugate_infinity_to_limit_set(build_schottky(default_schottky_pairs())))};
    int failures = 0, checks = 0;
    auto expect = [&](bool ok) {
        ++checks;
        if (!ok) ++failures;
    };
    for (const auto& P : polys) {
        auto C = chains_2d(P, P.kind == GroupKind::fuchsian ? default_basepoint(P) : 0.0);
        expect(ledgers_equal(boundary_cells(C.F), boundary_group(C.L)));
        expect(total_boundary(C.sigma()).is_zero());
        auto T = region3d(P);
        expect(ledgers_equal(total_boundary(T.R - T.S + T.E), Ledger{} - T.sigma));
        expect(boundary_cells(boundary_cells(T.R)).is_zero());
    }
    SuiteResult r{"chain_ledgers", checks, double(failures), 0.0, failures == 0};
    return r;
}

std::vector<SuiteResult> identity_suites(std::uint64_t seed) {
    return {schwarzian_cocycle(seed),     schwarzian_of_moebius(seed + 1), jacobian_multiplicativity(seed + 2),
            theta_coboundary(seed + 3),   u_closed(seed + 4),              w2_coboundary(seed + 5),
            hyperbolic_automorphy(seed + 6), epstein_equivariance(seed + 7), kappa_pairing(),
            chain_ledgers()};
}

}  // namespace cli
