#include "test_main.hpp"

#include "liouville/solver.hpp"

#include <cmath>

using namespace lv;

namespace {

struct Setup {
    FundamentalPolygon P = build_polygon(build_fuchsian(2));
    VariationalBasis B = bump_basis(P, 16);
    FieldPtr hyp = hyperbolic_field();
};

const Setup& setup() {
    static const Setup s;
    return s;
}

class Zero : public InvariantFunction {
public:
    InvariantSample sample(cplx) const override { return {}; }
};

double action(const FundamentalPolygon& P, const FieldPtr& f) { return evaluate_action(P, *f).total; }

}  // namespace

TEST_CASE("bump basis") {
    const Setup& s = setup();
    REQUIRE(s.B.size() == 16);
    CHECK(std::isfinite(s.B.gram_condition));
    CHECK(s.B.gram_condition < 1e6);
    for (int j = 0; j < s.B.size(); ++j) CHECK(std::abs(s.B.functions[j]->sample(s.B.centers[j]).s - 1.0) < 1e-14);
}

TEST_CASE("gradient and second variation") {
    const Setup& s = setup();
    auto g = gradient(s.P, *s.hyp, s.B);
    for (double x : g) CHECK(std::abs(x) < 1e-8);

    // central differences of the full action away from the critical point
    auto f = perturb(s.hyp, s.B.functions[0], 0.2);
    auto gf = gradient(s.P, *f, s.B);
    const double h = 1e-3;
    for (int j : {0, 5}) {
        double fd = (action(s.P, perturb(f, s.B.functions[j], h)) - action(s.P, perturb(f, s.B.functions[j], -h))) / (2 * h);
        CHECK(std::abs(fd - gf[j]) < 1e-5);
    }
    // the gradient grows along the bump
    CHECK(gf[0] > 0.0);

    const double t = 1e-2;
    double S0 = action(s.P, s.hyp);
    for (int j : {0, 9}) {
        double H = hessian_form(s.P, *s.hyp, *s.B.functions[j]);
        CHECK(H > 0.0);
        double d2 = (action(s.P, perturb(s.hyp, s.B.functions[j], t)) + action(s.P, perturb(s.hyp, s.B.functions[j], -t)) - 2 * S0) / (t * t);
        CHECK(std::abs(d2 - H) < 1e-4 * H);
    }
    auto M = hessian_matrix(s.P, *s.hyp, s.B);
    CHECK(std::abs(M[0][0] - hessian_form(s.P, *s.hyp, *s.B.functions[0])) < 1e-7);
    CHECK(hessian_form(s.P, *s.hyp, Zero()) == 0.0);
}

TEST_CASE("descent to the hyperbolic metric") {
    const Setup& s = setup();
    auto trivial = minimize(s.P, s.hyp, s.B);
    CHECK(trivial.report.iterations == 0);
    CHECK(std::abs(trivial.report.final_action - 8.0 * pi) < 1e-5 * 8.0 * pi);

    auto start = perturb(s.hyp, s.B.functions[0], 0.3);
    auto sol = minimize(s.P, start, s.B);
    const auto& r = sol.report;
    CHECK(r.converged);
    CHECK(r.gradient_norms.back() < 1e-6);
    CHECK(r.final_curvature_defect * 100.0 <= r.start_curvature_defect);
    CHECK(r.final_curvature_defect < 1e-3);
    CHECK(r.final_action - 8.0 * pi <= r.projection_residual);
    for (double m : r.increment_mismatch) CHECK(m < 1e-6);
    for (size_t k = 1; k < r.actions.size(); ++k) CHECK(r.actions[k] <= r.actions[k - 1] + 1e-12);
    for (double e : r.hessian_eigenvalues) CHECK(e > 0.0);
    CHECK(std::abs(r.coefficients[0] + 0.3) < 1e-6);
}

TEST_CASE("two starts reach the same field") {
    const Setup& s = setup();
    auto a = minimize(s.P, perturb(s.hyp, s.B.functions[0], 0.3), s.B);
    std::vector<double> c(s.B.size(), 0.0);
    c[3] = -0.2;
    c[11] = 0.15;
    auto b = minimize(s.P, perturb(s.hyp, s.B.functions, c), s.B);
    REQUIRE(a.report.converged);
    REQUIRE(b.report.converged);
    double worst = 0.0;
    for (cplx z : domain_samples(s.P, 200)) worst = std::max(worst, std::abs(a.field->sample(z).phi - b.field->sample(z).phi));
    for (cplx z : s.B.centers) worst = std::max(worst, std::abs(a.field->sample(z).phi - b.field->sample(z).phi));
    // both are within the gradient tolerance of the same critical point; the Hessian is bounded below
    CHECK(worst < 1e-5);
}
