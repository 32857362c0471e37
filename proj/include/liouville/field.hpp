#pragma once

#include "liouville/cells.hpp"

#include <memory>
#include <string>
#include <vector>

namespace lv {

struct FieldSample {
    double phi = 0.0;
    cplx phi_z{0.0};        // d phi / dz; d phi / dzbar is its conjugate
    double phi_zzbar = 0.0;

    double density() const { return std::exp(phi); }
    double curvature() const { return -2.0 * std::exp(-phi) * phi_zzbar; }
    double omega() const { return std::norm(phi_z) + std::exp(phi); }
};

// log-density phi of a conformal metric e^phi |dz|^2 on the domain of discontinuity
class ConformalField {
public:
    virtual ~ConformalField() = default;
    virtual FieldSample sample(cplx z) const = 0;
    virtual std::string provenance() const = 0;
    // a priori bound on the automorphy defect (0 when exact)
    virtual double tail_bound() const { return 0.0; }
};

using FieldPtr = std::shared_ptr<const ConformalField>;

// phi = -2 log|y| on the upper and lower half-planes
FieldPtr hyperbolic_field();

// Poincare series of the spherical density over words of length <= N of the group,
// summed in the coordinate in which the group was built and carried to the current chart.
FieldPtr poincare_series_field(const MarkedGroup& g, int N);

// Smooth real function on the domain, invariant under the group.
struct InvariantSample {
    double s = 0.0;
    cplx s_z{0.0};
    double s_zzbar = 0.0;
};

class InvariantFunction {
public:
    virtual ~InvariantFunction() = default;
    virtual InvariantSample sample(cplx z) const = 0;
};

using InvariantPtr = std::shared_ptr<const InvariantFunction>;

// Smooth compactly supported bump around center, made invariant by summing its pull-backs
// B(gamma z) over the group. The width is a hyperbolic radius for Fuchsian groups and a
// Euclidean radius for Schottky groups. The support must lie inside the fundamental domain,
// so on the closed domain only the identity term survives.
InvariantPtr invariant_bump(const FundamentalPolygon& poly, cplx center, double width);
// Euclidean disk holding the support of the bump before it is spread over the group
Disk bump_support(const FundamentalPolygon& poly, cplx center, double width);

// base + sum_j t_j sigma_j
FieldPtr perturb(const FieldPtr& base, const std::vector<InvariantPtr>& sigma, const std::vector<double>& t);
inline FieldPtr perturb(const FieldPtr& base, const InvariantPtr& sigma, double t) {
    return perturb(base, std::vector<InvariantPtr>{sigma}, std::vector<double>{t});
}

// Deterministic interior points of the fundamental domain (Fuchsian: upper half-plane piece).
std::vector<cplx> domain_samples(const FundamentalPolygon& poly, int n);

// max |phi(gamma z) + log|gamma'(z)|^2 - phi(z)| over samples and generators with inverses
double automorphy_residual(const ConformalField& f, const MarkedGroup& g, const std::vector<cplx>& samples);
double invariance_residual(const InvariantFunction& s, const MarkedGroup& g, const std::vector<cplx>& samples);

}  // namespace lv
