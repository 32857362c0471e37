#include "liouville/quad.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <limits>
#include <stdexcept>

namespace lv {

namespace detail {

const GK15& gk15() {
    static const GK15 table = [] {
        GK15 t;
        const auto& x = boost::math::quadrature::gauss_kronrod<double, 15>::abscissa();
        const auto& wk = boost::math::quadrature::gauss_kronrod<double, 15>::weights();
        const auto& wg = boost::math::quadrature::gauss<double, 7>::weights();
        for (int i = 0; i < 8; ++i) {
            t.x[i] = x[i];
            t.wk[i] = wk[i];
        }
        for (int i = 0; i < 4; ++i) t.wg[i] = wg[i];
        return t;
    }();
    return table;
}

}  // namespace detail

RadialRegion straight_polygon_region(cplx center, const std::vector<cplx>& vertices) {
    RadialRegion reg;
    reg.chart = [center](cplx zeta) { return center + zeta; };
    reg.jacobian = [](cplx) { return 1.0; };
    std::vector<double> ang;
    for (cplx v : vertices) {
        double a = std::arg(v - center);
        if (a < 0) a += 2.0 * pi;
        ang.push_back(a);
    }
    reg.angle_breaks = ang;
    std::sort(reg.angle_breaks.begin(), reg.angle_breaks.end());
    reg.radial = [center, vertices](double psi, std::vector<std::array<double, 2>>& out) {
        cplx u = std::polar(1.0, psi);
        double best = 0.0;
        const size_t n = vertices.size();
        for (size_t i = 0; i < n; ++i) {
            cplx p = vertices[i] - center, q = vertices[(i + 1) % n] - center;
            // solve r u = p + s (q - p)
            cplx e = q - p;
            double den = u.real() * (-e.imag()) - u.imag() * (-e.real());
            if (std::abs(den) < 1e-300) continue;
            double r = (p.real() * (-e.imag()) - p.imag() * (-e.real())) / den;
            double s = (u.real() * p.imag() - u.imag() * p.real()) / den;
            if (r > 0 && s >= -1e-12 && s <= 1 + 1e-12) best = std::max(best, r);
        }
        out.push_back({0.0, best});
    };
    return reg;
}

QuadResult<double> integrate3d(const RadialRegion& base, const std::function<double(cplx)>& lower,
                               const std::function<double(cplx)>& upper,
                               const std::function<double(cplx, double)>& f, const Quad3DOptions& opt,
                               const std::function<bool(cplx, double)>& contains) {
    bool ok = true;
    auto r = integrate2d<double>(base, [&](cplx z) {
        double lo = lower(z), hi = upper(z);
        if (!(lo > 0.0)) throw DomainError("lower surface must stay above the plane");
        if (!(hi > lo)) return 0.0;
        if (contains && !contains(z, lo * (1.0 + 1e-12))) throw DomainError("lower surface leaves the region over a column");
        if (!f) {
            double top = std::isinf(hi) ? 0.0 : 0.5 / (hi * hi);
            return 0.5 / (lo * lo) - top;
        }
        // t = 1/s, dt = ds / s^2
        double s_lo = std::isinf(hi) ? 0.0 : 1.0 / hi, s_hi = 1.0 / lo;
        auto c = integrate1d<double>([&](double s) { return s > 0.0 ? f(z, 1.0 / s) / (s * s) : 0.0; }, s_lo, s_hi,
                                     opt.column);
        ok = ok && c.converged;
        return c.value;
    }, opt.plane);
    r.converged = r.converged && ok;
    return r;
}

}  // namespace lv
