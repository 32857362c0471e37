#include "liouville/holography.hpp"

#include "liouville/parallel.hpp"

#include <Eigen/Dense>
#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <sstream>

namespace lv {

namespace {

using Vec3 = std::array<double, 3>;

bool has_c(const MoebiusMap& g) { return std::abs(g.c) > 1e-14 * (std::abs(g.a) + std::abs(g.d) + std::abs(g.b)); }

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double length(const Vec3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

HPoint3 epstein_point(const FieldSample& s, cplx w, double eps) {
    double e = std::exp(s.phi);
    double den = 4.0 * e + eps * eps * std::norm(s.phi_z);
    cplx z = w + 2.0 * eps * eps * std::conj(s.phi_z) / den;
    double t = 4.0 * eps * std::exp(0.5 * s.phi) / den;
    return {z, t};
}

// Cutoff surface parametrized by a point w of the plane, with its tangent vectors in (x, y, t).
struct Jet {
    HPoint3 P;
    Vec3 Pu, Pv;

    double area_density() const { return length(cross(Pu, Pv)) / (P.t * P.t); }
};

class Surface {
public:
    Surface(const ConformalField& f, double eps, CutoffMode mode) : f_(f), eps_(eps), mode_(mode) {}

    HPoint3 at(cplx w) const {
        FieldSample s = f_.sample(w);
        check(s);
        if (mode_ == CutoffMode::naive) return {w, eps_ * std::exp(-0.5 * s.phi)};
        return epstein_point(s, w, eps_);
    }

    Jet jet(cplx w) const {
        FieldSample s = f_.sample(w);
        check(s);
        Jet j;
        if (mode_ == CutoffMode::naive) {
            double t = eps_ * std::exp(-0.5 * s.phi);
            j.P = {w, t};
            j.Pu = {1.0, 0.0, -t * s.phi_z.real()};
            j.Pv = {0.0, 1.0, t * s.phi_z.imag()};
            return j;
        }
        j.P = epstein_point(s, w, eps_);
        // five-point differences on the scale of the metric
        const double h = 1e-3 * std::exp(-0.5 * s.phi);
        auto diff = [&](cplx dir) {
            Vec3 d{};
            const double wts[] = {1.0, -8.0, 8.0, -1.0};
            const double off[] = {-2.0, -1.0, 1.0, 2.0};
            for (int k = 0; k < 4; ++k) {
                HPoint3 Q = at(w + off[k] * h * dir);
                d[0] += wts[k] * Q.z.real();
                d[1] += wts[k] * Q.z.imag();
                d[2] += wts[k] * Q.t;
            }
            for (double& x : d) x /= 12.0 * h;
            return d;
        };
        j.Pu = diff(1.0);
        j.Pv = diff(cplx(0.0, 1.0));
        return j;
    }

    // w with proj(at(w)) = target, started from w0
    template <class Proj>
    cplx invert(cplx target, cplx w0, Proj&& proj) const {
        cplx w = w0;
        const double scale = std::abs(target) + std::abs(w0) + 1e-300;
        for (int it = 0; it < 200; ++it) {
            cplx r = target - proj(at(w));
            w += r;
            if (std::abs(r) <= 4e-16 * scale) return w;
        }
        throw DomainError("cutoff surface could not be inverted over a quadrature column");
    }

    CutoffMode mode() const { return mode_; }
    double eps() const { return eps_; }

private:
    static void check(const FieldSample& s) {
        if (!std::isfinite(s.phi) || !std::isfinite(std::abs(s.phi_z)))
            throw DomainError("field is not finite on the cutoff surface");
    }
    const ConformalField& f_;
    double eps_;
    CutoffMode mode_;
};

// integral of sec^3 from 0 to atan q
double sec3(double q) { return 0.5 * (q * std::sqrt(1.0 + q * q) + std::asinh(q)); }

// Fermi projection of a point of the upper half-space onto the vertical plane over the real line
cplx fermi(HPoint3 P) { return {P.z.real(), std::hypot(P.z.imag(), P.t)}; }

// The fundamental region of a Fuchsian group is swept by the geodesic chords orthogonal to the
// vertical plane over the real line, one for each point zeta of the planar domain. The upper
// half of the chord ends on the cutoff surface at angle alpha from the vertical; the volume of
// the column is sec3(tan alpha) / Im(zeta)^2.
VolumeArea fuchsian_volume(const FundamentalPolygon& poly, const ConformalField& f, double eps, CutoffMode mode,
                           const HolographyOptions& opt) {
    Surface S(f, eps, mode);
    const double kappa = 1e-3 * eps * eps;
    Quad2DOptions q;
    q.abs_tol = opt.tol;
    q.max_cells = opt.max_cells;
    auto r = integrate2d<Vec3>(poly.quadrature_region(), [&](cplx zeta) -> Vec3 {
        cplx w = S.invert(zeta, zeta, fermi);
        Jet j = S.jet(w);
        const double Y = j.P.z.imag(), T = j.P.t;
        if (!(Y > 0.0)) throw DomainError("cutoff surface leaves the upper half-space");
        double s = zeta.imag();
        double vol = sec3(Y / T) / (s * s);
        double rho = std::hypot(Y, T);
        double ru = (Y * j.Pu[1] + T * j.Pu[2]) / rho, rv = (Y * j.Pv[1] + T * j.Pv[2]) / rho;
        double det = std::abs(j.Pu[0] * rv - j.Pv[0] * ru);
        double area = j.area_density() / det;
        // both half-spaces
        vol *= 2.0;
        area *= 2.0;
        return {kappa * vol, kappa * area, vol - 0.5 * area};
    }, q);
    if (!r.converged) throw DomainError("holography quadrature did not converge");
    VolumeArea out;
    out.eps = eps;
    out.volume = r.value[0] / kappa;
    out.area = r.value[1] / kappa;
    out.difference = r.value[2];
    out.error = r.abs_error;
    return out;
}

// Schottky groups: vertical columns over the disk bounded by the outer circle, in polar
// coordinates about its center. A column runs from the cutoff surface, or from an inner
// hemisphere where that lies higher, up to the outer hemisphere. Along a ray the hemispheres
// are quadratic in the radius, so the stretches where they bound the column are integrated in
// closed form, and only the stretches ending on the cutoff surface are sampled.
class SchottkyColumns {
public:
    SchottkyColumns(const FundamentalPolygon& poly, const ConformalField& f, double eps, CutoffMode mode)
        : S_(f, eps, mode) {
        for (const auto& D : poly.group.disks) {
            if (D.exterior) {
                O_ = D.center;
                R_ = D.radius;
                ++outer_count_;
            } else {
                inner_.push_back(D);
            }
        }
        if (outer_count_ != 1) throw DomainError("expected a single outer circle in the Schottky chart");
        for (const auto& D : inner_) {
            cplx c = D.center - O_;
            if (std::abs(c) > D.radius) {
                double a = std::arg(c), da = std::asin(D.radius / std::abs(c));
                for (double x : {a - da, a + da}) breaks_.push_back(std::fmod(x + 4.0 * pi, 2.0 * pi));
            }
        }
        kappa_ = 1e-3 * eps * eps;
    }

    // height of the cutoff surface over z
    double cut(cplx z) const {
        if (S_.mode() == CutoffMode::naive) return S_.at(z).t;
        cplx w = S_.invert(z, z, [](HPoint3 P) { return P.z; });
        return S_.at(w).t;
    }

    Vec3 sample(cplx z) const {
        double c, area;
        if (S_.mode() == CutoffMode::naive) {
            Jet j = S_.jet(z);
            c = j.P.t;
            area = j.area_density();
        } else {
            cplx w = S_.invert(z, z, [](HPoint3 P) { return P.z; });
            Jet j = S_.jet(w);
            c = j.P.t;
            area = j.area_density() / std::abs(j.Pu[0] * j.Pv[1] - j.Pv[0] * j.Pu[1]);
        }
        double v = 0.5 / (c * c);
        return {kappa_ * v, kappa_ * area, v - 0.5 * area};
    }

    QuadResult<Vec3> integrate(const HolographyOptions& opt) const {
        QuadOptions inner;
        inner.abs_tol = opt.tol * 0.1 / (2.0 * pi);
        inner.max_cells = opt.max_cells;
        bool ok = true;
        auto ray = [&](double theta) -> Vec3 {
            Vec3 acc = column(theta, inner, ok);
            return acc;
        };
        QuadOptions outer;
        outer.abs_tol = opt.tol;
        outer.max_cells = opt.max_cells;
        outer.sigmoid_order = 2;
        auto r = integrate1d<Vec3>(ray, 0.0, 2.0 * pi, outer, breaks_);
        r.converged = r.converged && ok;
        return r;
    }

    double kappa() const { return kappa_; }

private:
    // chord of the circle (center c relative to O, radius r) along direction u: rho in [lo, hi]
    static bool chord(cplx c, double r, cplx u, double& lo, double& hi) {
        double b = (c * std::conj(u)).real();
        double disc = b * b - (std::norm(c) - r * r);
        if (disc <= 0.0) return false;
        lo = b - std::sqrt(disc);
        hi = b + std::sqrt(disc);
        return true;
    }

    // integral of rho / (2 (rho - a)(b - rho)) over [x, y], a < x < y < b
    static double hemisphere_integral(double a, double b, double x, double y) {
        double A = a / (b - a), B = b / (b - a);
        auto F = [&](double rho) { return A * std::log(rho - a) - B * std::log(b - rho); };
        return 0.5 * (F(y) - F(x));
    }

    // Root of cut - h between the end e of the chord [a, b] and its middle, h the hemisphere
    // height. Returns false when the hemisphere stays below the cutoff surface.
    bool kink(cplx u, double a, double b, bool from_hi, double& root) const {
        const double mid = std::max(0.5 * (a + b), 0.0);
        const double half = 0.5 * (b - a);
        auto h = [&](double rho) { return std::sqrt(std::max((rho - a) * (b - rho), 0.0)); };
        auto g = [&](double rho) { return cut(O_ + rho * u) - h(rho); };
        const double e = from_hi ? b : a;
        double prev = e;
        double H = 2.0 * cut(O_ + e * u);
        for (;;) {
            double rho;
            bool last = H >= half;
            if (last) {
                rho = mid;
            } else {
                double d = std::sqrt(half * half - H * H);
                rho = from_hi ? 0.5 * (a + b) + d : 0.5 * (a + b) - d;
                if (from_hi ? rho < mid : rho > mid) {
                    rho = mid;
                    last = true;
                }
            }
            if (g(rho) < 0.0) {
                double lo = std::min(prev, rho), hi = std::max(prev, rho);
                boost::uintmax_t iters = 200;
                auto res = boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(50),
                                                             iters);
                root = 0.5 * (res.first + res.second);
                return true;
            }
            if (last) return false;
            prev = rho;
            H *= 2.0;
        }
    }

    Vec3 column(double theta, const QuadOptions& inner, bool& ok) const {
        const cplx u = std::polar(1.0, theta);
        double K;
        if (!kink(u, -R_, R_, true, K)) throw DomainError("cutoff surface exits the region under the outer hemisphere");
        double analytic = -hemisphere_integral(-R_, R_, 0.0, K);

        std::vector<std::array<double, 2>> cut_out;
        for (const auto& D : inner_) {
            double a, b;
            if (!chord(D.center - O_, D.radius, u, a, b) || b <= 0.0) continue;
            double k_hi;
            if (!kink(u, a, b, true, k_hi)) continue;
            double k_lo = 0.0;
            if (a > 0.0 && !kink(u, a, b, false, k_lo)) continue;
            if (k_hi > K) throw DomainError("inner hemisphere reaches the outer cutoff");
            analytic += hemisphere_integral(a, b, k_lo, k_hi);
            cut_out.push_back({k_lo, k_hi});
        }
        std::sort(cut_out.begin(), cut_out.end());
        Vec3 acc{kappa_ * analytic, 0.0, analytic};
        double start = 0.0;
        auto run = [&](double x, double y) {
            if (!(y > x)) return;
            auto r = integrate1d<Vec3>([&](double rho) { return rho * sample(O_ + rho * u); }, x, y, inner);
            ok = ok && r.converged;
            acc = acc + r.value;
        };
        for (const auto& I : cut_out) {
            run(start, I[0]);
            start = std::max(start, I[1]);
        }
        run(start, K);
        return acc;
    }

    Surface S_;
    cplx O_{0.0};
    double R_ = 0.0;
    int outer_count_ = 0;
    std::vector<Disk> inner_;
    std::vector<double> breaks_;
    double kappa_ = 1.0;
};

VolumeArea schottky_volume(const FundamentalPolygon& poly, const ConformalField& f, double eps, CutoffMode mode,
                           const HolographyOptions& opt) {
    SchottkyColumns cols(poly, f, eps, mode);
    auto r = cols.integrate(opt);
    if (!r.converged) throw DomainError("holography quadrature did not converge");
    VolumeArea out;
    out.eps = eps;
    out.volume = r.value[0] / cols.kappa();
    out.area = r.value[1] / cols.kappa();
    out.difference = r.value[2];
    out.error = r.abs_error;
    return out;
}

}  // namespace

double w3_density(HPoint3 Z) { return 1.0 / (Z.t * Z.t * Z.t); }

double w2_density(HPoint3 Z) { return -0.5 / (Z.t * Z.t); }

double delta_w2_slice(const MoebiusMap& g, HPoint3 Z) {
    MoebiusMap h = g.inverse();
    return act3d(h, Z).jacobian * std::norm(h.c);
}

SpaceForm w1_form(const MoebiusMap& g, HPoint3 Z) {
    MoebiusMap h = g.inverse();
    if (!has_c(h)) return {};
    double J = act3d(h, Z).jacobian;
    double ct = std::abs(h.c) * Z.t;
    double L = std::log(ct * ct * J);
    cplx q = h.c * Z.z + h.d;
    cplx r = -2.0 * h.c / q;  // gamma''/gamma'
    cplx k = cplx(0.0, -1.0 / 8.0) * L;
    return {k * r, -k * std::conj(r), 0.0};
}

SpaceForm pull_back(const SpaceForm& f, const MoebiusMap& m, HPoint3 Z) {
    Act3Derivatives d = act3d_derivatives(m, Z);
    SpaceForm r;
    // dz' = z_z dz + z_zbar dzbar + z_t dt, dzbar' its conjugate, dt' = t_z dz + conj(t_z) dzbar + t_t dt
    r.dz = f.dz * d.dz_dz + f.dzbar * std::conj(d.dz_dzbar) + f.dt * d.dt_dz;
    r.dzbar = f.dz * d.dz_dzbar + f.dzbar * std::conj(d.dz_dz) + f.dt * std::conj(d.dt_dz);
    r.dt = f.dz * d.dz_dt + f.dzbar * std::conj(d.dz_dt) + f.dt * d.dt_dt;
    return r;
}

SpaceForm delta_w1_form(const MoebiusMap& g1, const MoebiusMap& g2, HPoint3 Z) {
    MoebiusMap h1 = g1.inverse();
    HPoint3 Z1 = act3d(h1, Z).point;
    return pull_back(w1_form(g2, Z1), h1, Z) - w1_form(g1 * g2, Z) + w1_form(g1, Z);
}

HPoint3 epstein_map(const ConformalField& f, cplx w, double eps) {
    if (!(eps > 0.0)) throw ValidationError("eps must be positive");
    return epstein_point(f.sample(w), w, eps);
}

std::string to_string(CutoffMode m) { return m == CutoffMode::naive ? "naive" : "epstein"; }

CutoffMode cutoff_from_string(const std::string& s) {
    if (s == "naive") return CutoffMode::naive;
    if (s == "epstein") return CutoffMode::epstein;
    throw ValidationError("unknown cutoff family: " + s);
}

VolumeArea volume_area_eps(const FundamentalPolygon& poly, const ConformalField& f, double eps, CutoffMode mode,
                           const HolographyOptions& opt) {
    if (!(eps > 0.0)) throw ValidationError("eps must be positive");
    if (poly.kind == GroupKind::fuchsian) return fuchsian_volume(poly, f, eps, mode, opt);
    return schottky_volume(poly, f, eps, mode, opt);
}

void CutoffSpec::validate() const {
    if (eps.size() < 3) throw ValidationError("need at least three eps values");
    for (size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] >= 1e-4)) throw ValidationError("eps below 1e-4");
        if (i > 0 && !(eps[i] < eps[i - 1])) throw ValidationError("eps values must decrease strictly");
    }
}

LogFit fit_log_expansion(const std::vector<double>& eps, const std::vector<double>& y) {
    const int n = int(eps.size());
    if (n < 3 || int(y.size()) != n) throw ValidationError("fit needs at least three matching points");
    Eigen::MatrixXd A(n, 3);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = std::log(eps[i]);
        A(i, 2) = eps[i] * eps[i];
        b(i) = y[i];
    }
    Eigen::Vector3d c = A.colPivHouseholderQr().solve(b);
    LogFit f{c(0), c(1), c(2), 0.0};
    f.rms = std::sqrt((A * c - b).squaredNorm() / n);
    return f;
}

double boundary_euler_characteristic(const FundamentalPolygon& poly) {
    double chi = 2.0 - 2.0 * poly.group.genus;
    return poly.kind == GroupKind::fuchsian ? 2.0 * chi : chi;
}

ActionSide predicted_einstein_hilbert(const FundamentalPolygon& poly, const ConformalField& f) {
    ActionSide a;
    ActionOptions o;
    if (poly.kind == GroupKind::fuchsian) o.component = Component::both;
    ActionBreakdown b = evaluate_action(poly, f, o);
    a.action = b.total;
    a.area = b.area;
    a.predicted = a.action - a.area + 4.0 * pi * boundary_euler_characteristic(poly) * std::log(2.0);
    return a;
}

HolographyReport regularized_action(const FundamentalPolygon& poly, const ConformalField& f, const CutoffSpec& spec,
                                    const HolographyOptions& opt, bool with_action) {
    spec.validate();
    HolographyReport rep;
    rep.mode = spec.mode;
    rep.rows = parallel_map<VolumeArea>(int(spec.eps.size()),
                                        [&](int i) { return volume_area_eps(poly, f, spec.eps[i], spec.mode, opt); });
    std::vector<double> y;
    for (const auto& r : rep.rows) y.push_back(r.difference);
    rep.fit = fit_log_expansion(spec.eps, y);
    rep.chi = boundary_euler_characteristic(poly);
    rep.expected_slope = pi * rep.chi;
    rep.slope = rep.fit.c1;
    if (std::abs(rep.slope - rep.expected_slope) >= 0.05 * std::abs(rep.expected_slope)) {
        std::ostringstream os;
        os << "fitted log-slope " << rep.slope << " misses " << rep.expected_slope << ";";
        for (const auto& r : rep.rows) os << " eps=" << r.eps << " V-A/2=" << r.difference;
        throw DomainError(os.str());
    }
    rep.E = -4.0 * rep.fit.c0;
    if (with_action) {
        rep.action = predicted_einstein_hilbert(poly, f);
        rep.residual = std::abs(rep.E - rep.action.predicted) / std::abs(rep.E);
    }
    return rep;
}

}  // namespace lv
