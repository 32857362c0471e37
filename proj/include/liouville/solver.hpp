#pragma once

#include "liouville/action.hpp"

#include <vector>

namespace lv {

struct VariationalBasis {
    std::vector<InvariantPtr> functions;
    std::vector<cplx> centers;
    std::vector<double> widths;
    double gram_condition = 0.0;

    int size() const { return int(functions.size()); }
};

// m invariant bumps: one at the domain center, the rest on rings around it, each as wide as the
// domain allows (up to 0.8 hyperbolic units). Fuchsian domains only.
VariationalBasis bump_basis(const FundamentalPolygon& poly, int m);

// component j: integral over the domain of (K + 1) sigma_j e^phi
std::vector<double> gradient(const FundamentalPolygon& poly, const ConformalField& f, const VariationalBasis& basis,
                             double tol = 1e-8);

// second variation at f in the direction sigma: integral of 2|sigma_z|^2 + sigma^2 e^phi
double hessian_form(const FundamentalPolygon& poly, const ConformalField& f, const InvariantFunction& sigma,
                    double tol = 1e-9);

// full second variation matrix on the span of the basis
std::vector<std::vector<double>> hessian_matrix(const FundamentalPolygon& poly, const ConformalField& f,
                                                const VariationalBasis& basis, double tol = 1e-8);

// max |K + 1| over the domain samples and a polar grid around every basis center
double curvature_defect(const FundamentalPolygon& poly, const ConformalField& f, const VariationalBasis& basis);

struct SolveOptions {
    double tol = 1e-6;
    int max_iterations = 40;
    bool check_increments = true;
};

struct SolveReport {
    int iterations = 0;
    double start_action = 0.0;
    double final_action = 0.0;
    double start_curvature_defect = 0.0;
    double final_curvature_defect = 0.0;
    std::vector<double> gradient_norms;
    std::vector<double> actions;               // bulk-increment bookkeeping, starting at start_action
    std::vector<double> increment_mismatch;    // |increment - direct difference| per accepted step
    std::vector<double> hessian_eigenvalues;   // at the final field
    std::vector<double> coefficients;          // final field = start + sum c_j sigma_j
    double projection_residual = 0.0;          // bound on final_action - critical value from the basis span
    bool converged = false;
};

struct Solution {
    FieldPtr field;
    SolveReport report;
};

// Newton iteration on the span of the basis with a backtracking search on the exact bulk increment.
Solution minimize(const FundamentalPolygon& poly, const FieldPtr& start, const VariationalBasis& basis,
                  const SolveOptions& opt = {});

}  // namespace lv
