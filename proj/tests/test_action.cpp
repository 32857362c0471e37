#include "test_main.hpp"
#include "gen.hpp"

#include "liouville/action.hpp"

#include <cmath>

using namespace lv;

namespace {

double form_gap(const OneForm& a, const OneForm& b) { return std::abs(a.dz - b.dz) + std::abs(a.dzbar - b.dzbar); }
double form_size(const OneForm& a) { return std::abs(a.dz) + std::abs(a.dzbar); }

// (g1 . w)(z) = ((g1^{-1})^* w)(z)
OneForm act(const MoebiusMap& g1, const std::function<OneForm(cplx)>& w, cplx z) {
    MoebiusMap h = g1.inverse();
    return pull_back(w(h(z)), h, z);
}

RadialRegion disk(cplx c, double r) {
    RadialRegion reg;
    reg.chart = [c](cplx zeta) { return c + zeta; };
    reg.jacobian = [](cplx) { return 1.0; };
    reg.radial = [r](double, std::vector<std::array<double, 2>>& out) { out.push_back({0.0, r}); };
    return reg;
}

}  // namespace

TEST_CASE("bulk density") {
    auto f = hyperbolic_field();
    CHECK(std::abs(omega_density(*f, {0.0, 1.0}) - 2.0) < 1e-15);
    CHECK(std::abs(omega_density(*f, {0.0, 2.0}) - 0.5) < 1e-15);
    gen::Rng rng(1);
    for (int i = 0; i < 20; ++i) {
        cplx z = rng.upper(2.0, 0.1, 2.0);
        CHECK(omega_density(*f, z) >= f->sample(z).density());
    }
}

TEST_CASE("group coboundaries of theta") {
    auto f = hyperbolic_field();
    gen::Rng rng(2);
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
        MoebiusMap g1 = rng.real_moebius(), g2 = rng.real_moebius();
        cplx z = rng.upper(2.0, 0.2, 2.0);
        for (bool check : {false, true}) {
            auto th = [&](const MoebiusMap& g) {
                return [&f, g, check](cplx w) {
                    return check ? theta_check_form(f->sample(w), g, w) : theta_form(f->sample(w), g, w);
                };
            };
            OneForm d = act(g1, th(g2), z) - th(g1 * g2)(z) + th(g1)(z);
            OneForm u = check ? u_check_form(g1, g2, z) : u_form(g1, g2, z);
            CHECK(form_gap(d, u) < 1e-9 * std::max(1.0, form_size(u)));
        }
        ++checked;
    }
    CHECK(checked == 200);

    // identity in the first slot
    MoebiusMap g = rng.real_moebius();
    CHECK(form_size(u_form(MoebiusMap::identity(), g, {0.3, 1.0})) < 1e-15);
    // affine elements have no kappa correction
    MoebiusMap dil = MoebiusMap::dilation(3.0);
    cplx z(0.2, 0.7);
    CHECK(form_size(theta_check_form(f->sample(z), dil, z)) == 0.0);
    CHECK(form_size(varkappa_form(dil, z)) == 0.0);
}

TEST_CASE("u is closed") {
    gen::Rng rng(4);
    for (int i = 0; i < 10; ++i) {
        MoebiusMap g1 = rng.real_moebius(), g2 = rng.real_moebius();
        cplx c = rng.upper(1.0, 0.5, 1.5);
        Path loop = Path::circle(c, 0.2, true);
        auto r = integrate_form(loop, [&](cplx z) { return u_check_form(g1, g2, z); });
        CHECK(std::abs(r.value) < 1e-9);
    }
}

TEST_CASE("group coboundary of omega is exact") {
    auto G = build_fuchsian(2);
    auto P = build_polygon(G);
    auto f = perturb(hyperbolic_field(), invariant_bump(P, P.interior, 0.5), 0.7);
    // a disk overlapping the bump support, and a generator moving it away
    cplx c = P.interior + cplx(0.05, 0.02);
    double r = 0.25 * c.imag();
    for (const auto& g : G.generators) {
        MoebiusMap h = g.inverse();
        Quad2DOptions q;
        q.abs_tol = 1e-11;
        q.max_cells = 20000;
        auto lhs = integrate2d<double>(disk(c, r), [&](cplx z) {
            return omega_density(*f, h(z)) * std::norm(h.deriv(z)) - omega_density(*f, z);
        }, q);
        auto rhs = integrate_form(Path::circle(c, r, true), [&](cplx z) { return theta_form(f->sample(z), g, z); });
        // the 2-form density multiplies dz ^ dzbar = -2i dx dy
        cplx left = cplx(0.0, -2.0) * lhs.value;
        CHECK(std::abs(left - rhs.value) < 1e-8);
    }
}

TEST_CASE("integration constants") {
    MoebiusMap g1 = MoebiusMap::translation(4.0);  // g1^{-1} p = p - 4
    MoebiusMap g2(1.0, 0.0, 1.0, 1.0);              // g2(inf) = 1, c = 1
    double p = 3.0;
    CHECK(std::abs(eta(p, g1, g2) - cplx(0.0, -4.0 * pi * 2.0 * std::log(2.0))) < 1e-14);
    CHECK(std::abs(eta(-2.0, g1.inverse(), g2) - cplx(0.0, 4.0 * pi * 2.0 * std::log(2.0))) < 1e-14);
    CHECK(std::abs(eta(5.0, g1.inverse(), g2)) == 0.0);
    CHECK(std::abs(eta(p, g1, MoebiusMap::translation(2.0))) == 0.0);
}

TEST_CASE("kappa pairing") {
    for (int genus : {2, 3}) {
        auto P = build_polygon(build_fuchsian(genus));
        auto C = chains_2d(P, default_basepoint(P));
        cplx k = varkappa_pairing(P, C) / cplx(0.0, 4.0 * pi);
        CHECK(std::abs(k - double(2 - 2 * genus)) < 1e-6);
    }
}

TEST_CASE("classical action of the hyperbolic metric") {
    auto P = build_polygon(build_fuchsian(2));
    auto f = hyperbolic_field();
    ActionOptions o;
    auto up = evaluate_action(P, *f, o);
    CHECK(std::abs(up.total - 8.0 * pi) < 1e-5 * 8.0 * pi);
    CHECK(std::abs(up.total - up.bulk) < 1e-5);
    CHECK(std::abs(up.area - 4.0 * pi) < 1e-8);
    CHECK(up.imag_residue < 1e-8);
    CHECK(std::abs(up.total - (up.bulk + up.edge + up.path)) < 1e-12);

    auto eta_route = evaluate_action_eta(P, *f, o);
    CHECK(std::abs(eta_route.total - up.total) < 1e-7);

    o.component = Component::both;
    auto both = evaluate_action(P, *f, o);
    CHECK(std::abs(both.total - 16.0 * pi) < 1e-5 * 16.0 * pi);
    o.lower_mode = LowerMode::independent;
    auto ind = evaluate_action(P, *f, o);
    CHECK(std::abs(ind.total - both.total) < 1e-7);
}

TEST_CASE("independence of basepoint and domain") {
    auto G = build_fuchsian(2);
    auto P = build_polygon(G);
    auto f = perturb(hyperbolic_field(), invariant_bump(P, P.interior, 0.4), 0.3);
    ActionOptions o;
    auto base = evaluate_action(P, *f, o);
    double p0 = default_basepoint(P);
    o.basepoint = p0 + 0.01;
    auto moved = evaluate_action(P, *f, o);
    CHECK(std::abs(moved.total - base.total) < 1e-7);

    ActionOptions lo;
    lo.component = Component::lower;
    auto mirror = evaluate_action(P, *f, lo);
    lo.lower_mode = LowerMode::independent;
    auto ind = evaluate_action(P, *f, lo);
    CHECK(std::abs(mirror.total - ind.total) < 1e-7);

    auto Q = alternative_domain(P, cplx(0.03, 0.02));
    auto other = evaluate_action(Q, *f, ActionOptions{});
    CHECK(std::abs(other.total - base.total) < 1e-6);
}

TEST_CASE("first variation is the bulk increment") {
    auto P = build_polygon(build_fuchsian(2));
    auto phi = hyperbolic_field();
    auto s1 = invariant_bump(P, P.interior, 0.5);
    auto s2 = invariant_bump(P, P.interior + cplx(0.1, 0.05), 0.3);
    auto base = perturb(phi, s2, 0.2);
    auto S0 = evaluate_action(P, *base).total;
    for (double t : {0.3, -0.5}) {
        auto moved = perturb(base, s1, t);
        double direct = evaluate_action(P, *moved).total - S0;
        double inc = variation_increment(P, *base, *s1, t);
        CHECK(std::abs(direct - inc) < 1e-6);
    }
}

TEST_CASE("Schottky action and the classical functional") {
    auto G = conjugate_infinity_to_limit_set(build_schottky(default_schottky_pairs()));
    auto P = build_polygon(G);
    auto f = poincare_series_field(G, 5);
    auto S = evaluate_action(P, *f);
    auto K = classic_schottky_action(P, *f);
    // the translates of the domain fill the sphere up to the null limit set
    CHECK(std::abs(S.area - pi) < 1e-8);
    CHECK(S.imag_residue < 1e-8);
    CHECK(std::abs(S.bulk - K.bulk) < 1e-12);
    CHECK(std::abs((S.total - K.total) - 4.0 * pi * (2 * G.genus - 2) * std::log(2.0)) < 1e-8);
}
