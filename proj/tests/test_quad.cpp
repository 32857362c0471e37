#include "test_main.hpp"

#include "liouville/quad.hpp"

#include <cmath>

using namespace lv;

TEST_CASE("one-dimensional rules") {
    QuadOptions opt;
    opt.abs_tol = 1e-13;
    auto e = integrate1d<double>([](double x) { return std::exp(x); }, 0.0, 1.0, opt);
    CHECK(e.converged);
    CHECK(std::abs(e.value - (std::exp(1.0) - 1.0)) < 1e-13);

    auto kink = integrate1d<double>([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, opt, {0.3});
    CHECK(kink.cells == 2);
    CHECK(std::abs(kink.value - (0.045 + 0.245)) < 1e-14);

    QuadOptions sig = opt;
    sig.sigmoid_order = 2;
    auto root = integrate1d<double>([](double x) { return std::sqrt(x); }, 0.0, 1.0, sig);
    CHECK(std::abs(root.value - 2.0 / 3.0) < 1e-12);
    CHECK(root.cells < 40);

    auto c = integrate1d<cplx>([](double x) { return std::polar(1.0, x); }, 0.0, pi, opt);
    CHECK(std::abs(c.value - cplx(0.0, 2.0)) < 1e-13);
}

TEST_CASE("budget exhaustion is reported") {
    QuadOptions opt;
    opt.abs_tol = 1e-15;
    opt.max_cells = 5;
    auto r = integrate1d<double>([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, opt);
    CHECK(!r.converged);
}

TEST_CASE("two-dimensional polar rule on straight polygons") {
    std::vector<cplx> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    auto reg = straight_polygon_region({0.4, 0.55}, sq);
    Quad2DOptions opt;
    opt.abs_tol = 1e-11;
    auto area = integrate2d<double>(reg, [](cplx) { return 1.0; }, opt);
    CHECK(std::abs(area.value - 1.0) < 1e-11);
    auto mom = integrate2d<double>(reg, [](cplx z) { return z.real() * z.real() * z.imag(); }, opt);
    CHECK(std::abs(mom.value - 1.0 / 6.0) < 1e-11);

    std::vector<cplx> tri{{0, 0}, {2, 0}, {0, 1}};
    auto t = integrate2d<double>(straight_polygon_region({0.5, 0.3}, tri), [](cplx) { return 1.0; }, opt);
    CHECK(std::abs(t.value - 1.0) < 1e-11);
}

TEST_CASE("columns in the upper half-space") {
    std::vector<cplx> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    auto reg = straight_polygon_region({0.5, 0.5}, sq);
    Quad3DOptions opt;
    opt.plane.abs_tol = 1e-11;
    opt.column.abs_tol = 1e-12;
    auto one = [](cplx) { return 1.0; };
    auto inf = [](cplx) { return std::numeric_limits<double>::infinity(); };

    auto v = integrate3d(reg, one, inf, {}, opt);
    CHECK(std::abs(v.value - 0.5) < 1e-11);

    // the same column by quadrature in 1/t
    auto w = integrate3d(reg, one, inf, [](cplx, double t) { return 1.0 / (t * t * t); }, opt);
    CHECK(std::abs(w.value - 0.5) < 1e-10);

    // a varying floor: integral of 1/(2 t0^2) with t0 = 1 + x
    auto lo = [](cplx z) { return 1.0 + z.real(); };
    auto c = integrate3d(reg, lo, inf, {}, opt);
    CHECK(std::abs(c.value - 0.25) < 1e-11);

    // a finite ceiling removes 1/(2 t1^2)
    auto d = integrate3d(reg, one, [](cplx) { return 2.0; }, {}, opt);
    CHECK(std::abs(d.value - (0.5 - 0.125)) < 1e-11);

    // a floor outside the region is reported
    auto below = [](cplx, double t) { return t > 2.0; };
    CHECK_THROWS_AS(integrate3d(reg, one, inf, {}, opt, below), DomainError);
}
