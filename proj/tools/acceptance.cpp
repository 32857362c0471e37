// One line per acceptance criterion, PASS or FAIL. Tolerances and time limits are fixed here.

#include "suites.hpp"

#include "liouville/holography.hpp"
#include "liouville/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

using namespace lv;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

int failures = 0;

void criterion(int n, double limit_s, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("threw: ") + e.what()};
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = s < limit_s;
    bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("criterion %2d: %s  %s  [%.2f s, limit %.0f s%s]\n", n, pass ? "PASS" : "FAIL", o.detail.c_str(), s,
                limit_s, in_time ? "" : ", too slow");
    std::fflush(stdout);
}

const double log2v = std::log(2.0);
const std::uint64_t seed = 7;

const FundamentalPolygon& fuchsian2() {
    static const FundamentalPolygon P = build_polygon(build_fuchsian(2));
    return P;
}

const FundamentalPolygon& schottky2() {
    static const FundamentalPolygon P =
        build_polygon(conjugate_infinity_to_limit_set(build_schottky(default_schottky_pairs())));
    return P;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) mx += std::log(x[i]), my += std::log(y[i]);
    mx /= x.size();
    my /= y.size();
    double num = 0, den = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        num += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        den += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return num / den;
}

}  // namespace

int main() {
    criterion(1, 1, [] {
        auto a = cli::schwarzian_cocycle(seed);
        auto b = cli::schwarzian_of_moebius(seed + 1);
        return Outcome{a.max_residual < 1e-9 && b.max_residual < 1e-12,
                       fmt("cocycle residual %.2e over %g triples, Moebius %.2e over %g maps", a.max_residual,
                           a.samples, b.max_residual, b.samples)};
    });

    criterion(2, 1, [] {
        auto a = cli::jacobian_multiplicativity(seed + 2);
        return Outcome{a.max_residual < 1e-12, fmt("Jacobian residual %.2e over %g triples", a.max_residual, a.samples)};
    });

    criterion(3, 10, [] {
        double A = domain_area(fuchsian2(), *hyperbolic_field());
        double rel = std::abs(A / (4 * pi) - 1);
        return Outcome{rel < 1e-6, fmt("area %.9f vs 4 pi, relative error %.2e", A, rel)};
    });

    criterion(4, 10, [] {
        double worst = 0.0;
        std::string d;
        for (int g : {2, 3}) {
            auto P = build_polygon(build_fuchsian(g));
            cplx k = varkappa_pairing(P, chains_2d(P, default_basepoint(P))) / cplx(0.0, 4 * pi);
            worst = std::max(worst, std::abs(k - double(2 - 2 * g)));
            d += fmt("g=%g: %.9f%+.1ei  ", g, k.real(), k.imag());
        }
        return Outcome{worst < 1e-6, d + fmt("max deviation %.2e", worst)};
    });

    criterion(5, 60, [] {
        auto f = hyperbolic_field();
        ActionOptions o;
        double up = evaluate_action(fuchsian2(), *f, o).total;
        o.component = Component::both;
        double both = evaluate_action(fuchsian2(), *f, o).total;
        double r1 = std::abs(up / (8 * pi) - 1), r2 = std::abs(both / (16 * pi) - 1);
        return Outcome{r1 < 1e-5 && r2 < 1e-5,
                       fmt("per surface %.9f (rel %.1e), both %.9f (rel %.1e)", up, r1, both, r2)};
    });

    criterion(6, 120, [] {
        const auto& P = fuchsian2();
        auto f = perturb(hyperbolic_field(), invariant_bump(P, P.interior, 0.4), 0.3);
        ActionOptions o;
        double base = evaluate_action(P, *f, o).total;
        o.basepoint = default_basepoint(P) + 0.01;
        double moved = evaluate_action(P, *f, o).total;
        double other = evaluate_action(alternative_domain(P, cplx(0.03, 0.02)), *f).total;
        double dp = std::abs(moved - base), dF = std::abs(other - base);
        return Outcome{dp < 1e-6 && dF < 1e-6, fmt("S = %.9f, basepoint shift %.1e, domain change %.1e", base, dp, dF)};
    });

    criterion(7, 120, [] {
        const auto& P = fuchsian2();
        auto phi = hyperbolic_field();
        std::mt19937_64 eng(seed);
        auto U = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); };
        auto bump = [&]() -> InvariantPtr {
            for (;;) {
                cplx c = P.interior + P.interior.imag() * cplx(U(-0.2, 0.2), U(-0.2, 0.2));
                try {
                    return invariant_bump(P, c, U(0.2, 0.5));
                } catch (const ValidationError&) {
                }
            }
        };
        double worst = 0.0;
        for (int k = 0; k < 5; ++k) {
            auto base = perturb(phi, bump(), U(-0.4, 0.4));
            auto sigma = bump();
            double t = U(-0.5, 0.5);
            double direct = evaluate_action(P, *perturb(base, sigma, t)).total - evaluate_action(P, *base).total;
            worst = std::max(worst, std::abs(direct - variation_increment(P, *base, *sigma, t)));
        }
        auto B = bump_basis(P, 16);
        double gnorm = 0.0;
        for (double x : gradient(P, *phi, B)) gnorm = std::max(gnorm, std::abs(x));
        double S0 = evaluate_action(P, *phi).total, h = 1e-2, worst_h = 0.0;
        for (int j : {0, 9}) {
            double H = hessian_form(P, *phi, *B.functions[j]);
            double d2 = (evaluate_action(P, *perturb(phi, B.functions[j], h)).total +
                         evaluate_action(P, *perturb(phi, B.functions[j], -h)).total - 2 * S0) / (h * h);
            worst_h = std::max(worst_h, std::abs(d2 - H) / H);
        }
        return Outcome{worst < 1e-6 && gnorm < 1e-8 && worst_h < 1e-4,
                       fmt("variation residual %.1e, gradient at phi_hyp %.1e, Hessian vs differences %.1e", worst,
                           gnorm, worst_h)};
    });

    const double E_fuchsian = 8 * pi * (1 - 2 * log2v);
    double E_epstein_fuchsian = 0.0;
    criterion(8, 900, [&] {
        CutoffSpec s;
        s.eps = {0.1, 0.05, 0.025};
        auto r = regularized_action(fuchsian2(), *hyperbolic_field(), s);
        E_epstein_fuchsian = r.E;
        double eE = std::abs(r.E / E_fuchsian - 1);
        double eS = std::abs(r.slope / (-8 * pi) - 1);
        return Outcome{eE < 0.01 && eS < 0.02,
                       fmt("E = %.6f vs %.5f (rel %.1e); ", r.E, E_fuchsian, eE) +
                           fmt("log-slope %.6f vs -8 pi = %.6f (rel %.2f)", r.slope, -8 * pi, eS)};
    });

    CutoffSpec schottky_eps;
    schottky_eps.eps = {0.004, 0.002, 0.001};
    HolographyOptions schottky_opt;
    schottky_opt.tol = 1e-4;
    auto poincare = poincare_series_field(schottky2().group, 5);
    double E_epstein_schottky = 0.0;
    criterion(9, 1200, [&] {
        auto r = regularized_action(schottky2(), *poincare, schottky_eps, schottky_opt);
        E_epstein_schottky = r.E;
        return Outcome{r.residual < 0.02, fmt("E = %.6f, S - A - 4 pi (2g-2) log 2 = %.6f, relative gap %.1e", r.E,
                                              r.action.predicted, r.residual)};
    });

    criterion(10, 1800, [&] {
        CutoffSpec s;
        s.mode = CutoffMode::naive;
        s.eps = {0.1, 0.05, 0.025};
        double nf = regularized_action(fuchsian2(), *hyperbolic_field(), s, {}, false).E;
        CutoffSpec t = schottky_eps;
        t.mode = CutoffMode::naive;
        double ns = regularized_action(schottky2(), *poincare, t, schottky_opt, false).E;
        double df = std::abs(nf / E_epstein_fuchsian - 1), ds = std::abs(ns / E_epstein_schottky - 1);
        return Outcome{df < 5e-3 && ds < 5e-3,
                       fmt("Fuchsian naive %.6f vs Epstein %.6f (rel %.1e)", nf, E_epstein_fuchsian, df) +
                           fmt("; Schottky naive %.6f vs Epstein %.6f (rel %.1e)", ns, E_epstein_schottky, ds)};
    });

    criterion(11, 60, [&] {
        const auto& PF = fuchsian2();
        auto fp = perturb(hyperbolic_field(), invariant_bump(PF, PF.interior, 0.5), 0.2);
        std::vector<std::pair<FieldPtr, cplx>> cases;
        for (cplx w : domain_samples(schottky2(), 5)) cases.push_back({poincare, w});
        for (cplx w : domain_samples(PF, 5)) cases.push_back({fp, w});
        double worst2 = 0.0, worst3 = 0.0;
        for (const auto& [f, w] : cases) {
            std::vector<double> eps{4e-3, 2e-3, 1e-3}, dz, dt;
            for (double e : eps) {
                HPoint3 Q = epstein_map(*f, w, e);
                dz.push_back(std::abs(Q.z - w));
                dt.push_back(std::abs(Q.t - e * std::exp(-0.5 * f->sample(w).phi)));
            }
            worst2 = std::max(worst2, std::abs(loglog_slope(eps, dz) - 2));
            worst3 = std::max(worst3, std::abs(loglog_slope(eps, dt) - 3));
        }
        return Outcome{worst2 < 0.2 && worst3 < 0.2,
                       fmt("max |order - 2| for z: %.4f, max |order - 3| for t: %.4f over %g points", worst2, worst3,
                           double(cases.size()))};
    });

    criterion(12, 600, [] {
        const auto& P = fuchsian2();
        auto B = bump_basis(P, 16);
        auto sol = minimize(P, perturb(hyperbolic_field(), B.functions[0], 0.3), B);
        const auto& r = sol.report;
        double excess = r.final_action - 8 * pi;
        double drop = r.start_curvature_defect / r.final_curvature_defect;
        bool ok = r.converged && r.gradient_norms.back() < 1e-6 && excess <= r.projection_residual && drop >= 100;
        return Outcome{ok, fmt("gradient %.1e, action - 8 pi = %.1e vs projection residual %.1e, max|K+1| drop %.0fx",
                               r.gradient_norms.back(), excess, r.projection_residual, drop)};
    });

    criterion(13, 1, [] {
        auto r = cli::chain_ledgers();
        return Outcome{r.pass, fmt("%g of %g symbolic boundary identities fail", r.max_residual, r.samples)};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
