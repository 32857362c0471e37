#pragma once

#include "liouville/moebius.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <queue>
#include <vector>

namespace lv {

template <class T>
struct QuadResult {
    T value{};
    double abs_error = 0.0;
    int cells = 0;
    bool converged = true;
};

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;
    int max_cells = 4000;
    // u -> u^m / (u^m + (1-u)^m) on every initial panel; clusters nodes at the panel ends
    int sigmoid_order = 0;
};

inline double qnorm(double x) { return std::abs(x); }
inline double qnorm(cplx x) { return std::abs(x); }
template <size_t N>
double qnorm(const std::array<double, N>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}
template <size_t N>
std::array<double, N> operator+(std::array<double, N> a, const std::array<double, N>& b) {
    for (size_t i = 0; i < N; ++i) a[i] += b[i];
    return a;
}
template <size_t N>
std::array<double, N> operator-(std::array<double, N> a, const std::array<double, N>& b) {
    for (size_t i = 0; i < N; ++i) a[i] -= b[i];
    return a;
}
template <size_t N>
std::array<double, N> operator*(double s, std::array<double, N> a) {
    for (auto& x : a) x *= s;
    return a;
}

namespace detail {

struct GK15 {
    std::array<double, 8> x;   // Kronrod nodes, x[0] = 0
    std::array<double, 8> wk;  // Kronrod weights
    std::array<double, 4> wg;  // Gauss weights on x[0], x[2], x[4], x[6]
};

const GK15& gk15();

template <class T>
T pairwise_sum(const std::vector<T>& v, size_t lo, size_t hi) {
    if (hi - lo == 1) return v[lo];
    if (hi - lo == 2) return v[lo] + v[lo + 1];
    size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

}  // namespace detail

// Adaptive Gauss-Kronrod (7/15) integration with a global error queue. Panels are
// summed pairwise in order of position, so results depend only on the inputs.
template <class T, class F>
QuadResult<T> integrate1d(F&& f, double a, double b, const QuadOptions& opt, std::vector<double> breaks = {}) {
    struct Panel {
        double lo, hi;
        T val;
        double err;
    };
    const auto& g = detail::gk15();
    const int m = opt.sigmoid_order;

    auto eval_panel = [&](double lo, double hi, double plo, double phi) {
        // lo/hi: sub-interval in the sigmoid variable of the initial panel [plo, phi]
        double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        T k{}, gs{};
        for (int i = 0; i < 8; ++i) {
            for (int s : {-1, 1}) {
                if (i == 0 && s == 1) continue;
                double u = c + s * h * g.x[i];
                double x, jac;
                if (m > 0) {
                    double v = (u - plo) / (phi - plo);
                    double p = std::pow(v, m), q = std::pow(1.0 - v, m);
                    double sv = p / (p + q);
                    double dv = m * std::pow(v * (1.0 - v), m - 1) / ((p + q) * (p + q));
                    x = plo + (phi - plo) * sv;
                    jac = dv;
                } else {
                    x = u;
                    jac = 1.0;
                }
                T fx = (jac == 0.0) ? T{} : T(jac * f(x));
                k = k + g.wk[i] * fx;
                if (i % 2 == 0) gs = gs + g.wg[i / 2] * fx;
            }
        }
        k = h * k;
        gs = h * gs;
        return Panel{lo, hi, k, qnorm(k - gs)};
    };

    breaks.push_back(a);
    breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> pts;
    for (double x : breaks)
        if (x >= a && x <= b && (pts.empty() || x > pts.back())) pts.push_back(x);

    struct Item {
        Panel p;
        double plo, phi;
    };
    auto cmp = [](const Item& x, const Item& y) {
        if (x.p.err != y.p.err) return x.p.err < y.p.err;
        return x.p.lo > y.p.lo;
    };
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> queue(cmp);
    T total{};
    double err = 0.0;
    int cells = 0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        Item it{eval_panel(pts[i], pts[i + 1], pts[i], pts[i + 1]), pts[i], pts[i + 1]};
        total = total + it.p.val;
        err += it.p.err;
        queue.push(it);
        ++cells;
    }
    QuadResult<T> res;
    while (!queue.empty()) {
        double tol = std::max(opt.abs_tol, opt.rel_tol * qnorm(total));
        if (err <= tol) break;
        if (cells >= opt.max_cells) {
            res.converged = false;
            break;
        }
        Item it = queue.top();
        double mid = 0.5 * (it.p.lo + it.p.hi);
        if (!(mid > it.p.lo && mid < it.p.hi)) {
            res.converged = false;
            break;
        }
        queue.pop();
        Item l{eval_panel(it.p.lo, mid, it.plo, it.phi), it.plo, it.phi};
        Item r{eval_panel(mid, it.p.hi, it.plo, it.phi), it.plo, it.phi};
        total = total + (l.p.val + r.p.val) - it.p.val;
        err += l.p.err + r.p.err - it.p.err;
        queue.push(l);
        queue.push(r);
        ++cells;
    }
    std::vector<Item> items;
    items.reserve(queue.size());
    while (!queue.empty()) {
        items.push_back(queue.top());
        queue.pop();
    }
    std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) { return x.p.lo < y.p.lo; });
    std::vector<T> vals;
    double e = 0.0;
    for (const auto& it : items) {
        vals.push_back(it.p.val);
        e += it.p.err;
    }
    res.value = vals.empty() ? T{} : detail::pairwise_sum(vals, 0, vals.size());
    res.abs_error = e;
    res.cells = cells;
    return res;
}

// A planar region described in polar coordinates of a chart zeta -> z, zeta = r e^{i psi}:
// for each angle the set of radii inside the region is a union of intervals.
struct RadialRegion {
    std::function<cplx(cplx)> chart;
    std::function<double(cplx)> jacobian;  // |chart'(zeta)|^2
    std::vector<double> angle_breaks;      // sorted, within [0, 2 pi]
    std::function<void(double, std::vector<std::array<double, 2>>&)> radial;
    int angle_sigmoid = 0;
    int radial_sigmoid = 0;
};

struct Quad2DOptions {
    double abs_tol = 1e-9;
    double rel_tol = 0.0;
    int max_cells = 4000;
    double inner_fraction = 0.02;
};

template <class T, class F>
QuadResult<T> integrate2d(const RadialRegion& reg, F&& f, const Quad2DOptions& opt) {
    int inner_cells = 0;
    bool inner_ok = true;
    QuadOptions inner;
    inner.abs_tol = opt.abs_tol * opt.inner_fraction / (2.0 * pi);
    inner.rel_tol = opt.rel_tol * opt.inner_fraction;
    inner.max_cells = opt.max_cells;
    inner.sigmoid_order = reg.radial_sigmoid;
    std::vector<std::array<double, 2>> iv;
    auto column = [&](double psi) -> T {
        iv.clear();
        reg.radial(psi, iv);
        std::vector<std::array<double, 2>> local = iv;
        cplx u = std::polar(1.0, psi);
        T acc{};
        for (const auto& I : local) {
            if (!(I[1] > I[0])) continue;
            auto r = integrate1d<T>(
                [&](double rr) -> T {
                    cplx zeta = rr * u;
                    return (rr * reg.jacobian(zeta)) * f(reg.chart(zeta));
                },
                I[0], I[1], inner);
            inner_cells += r.cells;
            inner_ok = inner_ok && r.converged;
            acc = acc + r.value;
        }
        return acc;
    };
    QuadOptions outer;
    outer.abs_tol = opt.abs_tol;
    outer.rel_tol = opt.rel_tol;
    outer.max_cells = opt.max_cells;
    outer.sigmoid_order = reg.angle_sigmoid;
    std::vector<double> br = reg.angle_breaks;
    double lo = 0.0, hi = 2.0 * pi;
    if (!br.empty()) {
        lo = br.front();
        hi = lo + 2.0 * pi;
        br.push_back(hi);
    }
    auto res = integrate1d<T>(column, lo, hi, outer, br);
    res.cells += inner_cells;
    res.converged = res.converged && inner_ok;
    return res;
}

struct Quad3DOptions {
    Quad2DOptions plane;
    QuadOptions column;
};

// Integral over {(z, t) : z in base, lower(z) <= t <= upper(z)} of f(z, t) dx dy dt. upper may be
// +infinity. With f empty the kernel is t^-3 and each column is done in closed form; otherwise the
// column is integrated in s = 1/t. When contains is given, a column whose lower end lies outside
// the region is reported as an error.
QuadResult<double> integrate3d(const RadialRegion& base, const std::function<double(cplx)>& lower,
                               const std::function<double(cplx)>& upper,
                               const std::function<double(cplx, double)>& f, const Quad3DOptions& opt,
                               const std::function<bool(cplx, double)>& contains = {});

// Region bounded by a polygon that is star-shaped with respect to center; straight edges.
RadialRegion straight_polygon_region(cplx center, const std::vector<cplx>& vertices);

}  // namespace lv
