#include "liouville/solver.hpp"

#include "liouville/parallel.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace lv {

namespace {

RadialRegion disk_region(const Disk& d) {
    RadialRegion reg;
    const cplx c = d.center;
    const double r = d.radius;
    reg.chart = [c](cplx zeta) { return c + zeta; };
    reg.jacobian = [](cplx) { return 1.0; };
    reg.radial = [r](double, std::vector<std::array<double, 2>>& out) { out.push_back({0.0, r}); };
    return reg;
}

double integrate_on(const Disk& d, const std::function<double(cplx)>& f, double tol) {
    Quad2DOptions q;
    q.abs_tol = tol;
    q.max_cells = 40000;
    q.inner_fraction = 0.5;
    auto r = integrate2d<double>(disk_region(d), f, q);
    if (!r.converged) throw DomainError("quadrature on a bump support did not converge");
    return r.value;
}

Disk support_of(const FundamentalPolygon& poly, const VariationalBasis& b, int j) {
    return bump_support(poly, b.centers[j], b.widths[j]);
}

Eigen::MatrixXd to_eigen(const std::vector<std::vector<double>>& m) {
    const int n = int(m.size());
    Eigen::MatrixXd H(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) H(i, j) = m[i][j];
    return H;
}

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// (K + 1)^2 e^phi over the domain: twice the second-order gap to the critical value
double liouville_residual(const FundamentalPolygon& poly, const ConformalField& f) {
    Quad2DOptions q;
    q.abs_tol = 1e-10;
    q.max_cells = 40000;
    auto r = integrate2d<double>(poly.quadrature_region(), [&](cplx z) {
        FieldSample s = f.sample(z);
        double k = s.curvature() + 1.0;
        return k * k * s.density();
    }, q);
    return r.value;
}

class Combination : public InvariantFunction {
public:
    Combination(const std::vector<InvariantPtr>& f, std::vector<double> w) : f_(f), w_(std::move(w)) {}
    InvariantSample sample(cplx z) const override {
        InvariantSample r;
        for (size_t j = 0; j < f_.size(); ++j) {
            if (w_[j] == 0.0) continue;
            InvariantSample v = f_[j]->sample(z);
            r.s += w_[j] * v.s;
            r.s_z += w_[j] * v.s_z;
            r.s_zzbar += w_[j] * v.s_zzbar;
        }
        return r;
    }

private:
    const std::vector<InvariantPtr>& f_;
    std::vector<double> w_;
};

}  // namespace

VariationalBasis bump_basis(const FundamentalPolygon& poly, int m) {
    if (poly.kind != GroupKind::fuchsian) throw ValidationError("bump bases are built on Fuchsian domains");
    if (m < 1) throw ValidationError("basis needs at least one function");
    VariationalBasis b;
    RadialRegion reg = poly.quadrature_region();
    auto add = [&](cplx c) {
        for (double w = 0.8; w >= 0.2; w -= 0.05) {
            try {
                auto f = invariant_bump(poly, c, w);
                b.functions.push_back(f);
                b.centers.push_back(c);
                b.widths.push_back(w);
                return true;
            } catch (const ValidationError&) {
            }
        }
        return false;
    };
    add(poly.interior);
    // rings at increasing hyperbolic distance from the center, offset by half a step
    const double dists[] = {0.9, 1.3, 0.6, 1.6, 1.1};
    for (int ring = 0; b.size() < m && ring < 5; ++ring) {
        const int per = 8;
        for (int j = 0; j < per && b.size() < m; ++j) {
            double psi = 2.0 * pi * (j + 0.5 * (ring % 2)) / per;
            cplx c = reg.chart(std::polar(std::tanh(0.5 * dists[ring]), psi));
            if (poly.contains(c)) add(c);
        }
    }
    if (b.size() < m) throw ValidationError("domain too small for the requested basis");

    // Gram matrix of the basis in L^2(e^phi_hyp)
    auto hyp = hyperbolic_field();
    const int n = b.size();
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Disk di = support_of(poly, b, i), dj = support_of(poly, b, j);
            if (std::abs(di.center - dj.center) > di.radius + dj.radius) continue;
            double v = integrate_on(di, [&](cplx z) {
                return b.functions[i]->sample(z).s * b.functions[j]->sample(z).s * hyp->sample(z).density();
            }, 1e-9);
            G(i, j) = G(j, i) = v;
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    b.gram_condition = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
    return b;
}

std::vector<double> gradient(const FundamentalPolygon& poly, const ConformalField& f, const VariationalBasis& basis,
                             double tol) {
    return parallel_map<double>(basis.size(), [&](int j) {
        return integrate_on(support_of(poly, basis, j), [&](cplx z) {
            double s = basis.functions[j]->sample(z).s;
            if (s == 0.0) return 0.0;
            FieldSample v = f.sample(z);
            return (v.curvature() + 1.0) * s * v.density();
        }, tol);
    });
}

double hessian_form(const FundamentalPolygon& poly, const ConformalField& f, const InvariantFunction& sigma, double tol) {
    Quad2DOptions q;
    q.abs_tol = tol;
    q.max_cells = 40000;
    auto r = integrate2d<double>(poly.quadrature_region(), [&](cplx z) {
        InvariantSample s = sigma.sample(z);
        if (s.s == 0.0 && s.s_z == 0.0) return 0.0;
        return 2.0 * std::norm(s.s_z) + s.s * s.s * f.sample(z).density();
    }, q);
    return r.value;
}

std::vector<std::vector<double>> hessian_matrix(const FundamentalPolygon& poly, const ConformalField& f,
                                                const VariationalBasis& basis, double tol) {
    const int n = basis.size();
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Disk di = support_of(poly, basis, i), dj = support_of(poly, basis, j);
            if (std::abs(di.center - dj.center) <= di.radius + dj.radius) pairs.push_back({i, j});
        }
    auto vals = parallel_map<double>(int(pairs.size()), [&](int k) {
        auto [i, j] = pairs[k];
        return integrate_on(support_of(poly, basis, i), [&](cplx z) {
            InvariantSample a = basis.functions[i]->sample(z);
            if (a.s == 0.0 && a.s_z == 0.0) return 0.0;
            InvariantSample b = basis.functions[j]->sample(z);
            return 2.0 * (a.s_z * std::conj(b.s_z)).real() + a.s * b.s * f.sample(z).density();
        }, tol);
    });
    std::vector<std::vector<double>> H(n, std::vector<double>(n, 0.0));
    for (size_t k = 0; k < pairs.size(); ++k) {
        auto [i, j] = pairs[k];
        H[i][j] = H[j][i] = vals[k];
    }
    return H;
}

double curvature_defect(const FundamentalPolygon& poly, const ConformalField& f, const VariationalBasis& basis) {
    std::vector<cplx> pts = domain_samples(poly, 200);
    for (int j = 0; j < basis.size(); ++j) {
        Disk d = support_of(poly, basis, j);
        pts.push_back(basis.centers[j]);
        for (int r = 1; r <= 6; ++r)
            for (int a = 0; a < 12; ++a) pts.push_back(d.center + std::polar(d.radius * r / 7.0, 2.0 * pi * a / 12.0));
    }
    double m = 0.0;
    for (cplx z : pts) m = std::max(m, std::abs(f.sample(z).curvature() + 1.0));
    return m;
}

Solution minimize(const FundamentalPolygon& poly, const FieldPtr& start, const VariationalBasis& basis,
                  const SolveOptions& opt) {
    const int n = basis.size();
    double r0 = automorphy_residual(*start, poly.group, domain_samples(poly, 24));
    if (r0 > 1e-7) throw DomainError("start field is not automorphic");

    SolveReport rep;
    std::vector<double> c(n, 0.0);
    auto field_at = [&](const std::vector<double>& coef) { return perturb(start, basis.functions, coef); };

    FieldPtr cur = start;
    rep.start_action = evaluate_action(poly, *start).total;
    rep.start_curvature_defect = curvature_defect(poly, *start, basis);
    double action = rep.start_action;
    rep.actions.push_back(action);

    for (int it = 0; it <= opt.max_iterations; ++it) {
        auto g = gradient(poly, *cur, basis);
        double gn = norm2(g);
        rep.gradient_norms.push_back(gn);
        if (gn < opt.tol) {
            rep.converged = true;
            break;
        }
        if (it == opt.max_iterations) break;
        Eigen::MatrixXd H = to_eigen(hessian_matrix(poly, *cur, basis));
        Eigen::VectorXd gv = Eigen::Map<Eigen::VectorXd>(g.data(), n);
        Eigen::VectorXd step = H.ldlt().solve(-gv);

        // backtracking on the exact increment S[cur + t step] - S[cur]
        std::vector<double> dir(step.data(), step.data() + n);
        Combination combo(basis.functions, dir);
        double t = 1.0, inc = 0.0;
        bool accepted = false;
        for (int k = 0; k < 30; ++k) {
            inc = variation_increment(poly, *cur, combo, t, 1e-10);
            if (inc <= 1e-14 * std::max(1.0, std::abs(action)) || gn < 1e-9) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) throw DomainError("line search could not decrease the action");
        for (int j = 0; j < n; ++j) c[j] += t * dir[j];
        FieldPtr next = field_at(c);
        action += inc;
        if (opt.check_increments) {
            double direct = evaluate_action(poly, *next).total - evaluate_action(poly, *cur).total;
            rep.increment_mismatch.push_back(std::abs(direct - inc));
        }
        rep.actions.push_back(action);
        cur = next;
        ++rep.iterations;
    }

    rep.coefficients = c;
    ActionBreakdown fin = evaluate_action(poly, *cur);
    rep.final_action = fin.total;
    rep.final_curvature_defect = curvature_defect(poly, *cur, basis);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(hessian_matrix(poly, *cur, basis)));
    for (int j = 0; j < n; ++j) rep.hessian_eigenvalues.push_back(es.eigenvalues()[j]);
    rep.projection_residual = 0.5 * liouville_residual(poly, *cur) + fin.error_budget;
    return {cur, rep};
}

}  // namespace lv
