#pragma once

#include "sweepkit/common.hpp"

#include <vector>

namespace sweepkit::bspline {

/// Knot span index i with knots[i] <= x < knots[i+1], clamped to the valid range
/// [degree, n_ctrl - 1].
int find_span(int degree, const std::vector<double>& knots, int n_ctrl, double x);

/// Nonzero basis functions N_{span-degree..span} and their derivatives up to `order`
/// at x (Cox-de Boor recursion). Row k holds the k-th derivative.
Eigen::MatrixXd basis_derivatives(int degree, const std::vector<double>& knots, int span, double x,
                                  int order);

/// Clamped knot vector for interpolation at the given sites (knot averaging).
std::vector<double> averaged_knots(int degree, const std::vector<double>& sites);

/// Uniform knot vector for a periodic spline of `n` distinct control points on [0,1):
/// knots j/n for j = -degree .. n + degree.
std::vector<double> periodic_knots(int degree, int n);

/// Collocation matrix B(i, j) = N_j(sites[i]) for a clamped spline with n_ctrl controls.
Eigen::MatrixXd collocation(int degree, const std::vector<double>& knots, int n_ctrl,
                            const std::vector<double>& sites);

/// Collocation matrix for the periodic spline of n distinct controls, wrapped onto n columns.
Eigen::MatrixXd periodic_collocation(int degree, int n, const std::vector<double>& sites);

/// Nonzero basis functions at x: control indices and a (order+1) x (degree+1) block of
/// derivatives (row k = k-th derivative).
struct BasisEval {
    std::vector<int> index;
    Eigen::MatrixXd ders;
};

BasisEval clamped_basis(int degree, const std::vector<double>& knots, int n_ctrl, double x,
                        int order);

/// Periodic spline of n distinct controls on [0,1); x is reduced modulo 1.
BasisEval periodic_basis(int degree, int n, double x, int order);

}  // namespace sweepkit::bspline
