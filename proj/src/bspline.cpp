#include "sweepkit/bspline.hpp"

#include <algorithm>
#include <cmath>

namespace sweepkit::bspline {

int find_span(int degree, const std::vector<double>& knots, int n_ctrl, double x)
{
    const int lo_idx = degree;
    const int hi_idx = n_ctrl - 1;
    if (x >= knots[hi_idx + 1]) return hi_idx;
    if (x <= knots[lo_idx]) return lo_idx;
    auto it = std::upper_bound(knots.begin() + lo_idx, knots.begin() + hi_idx + 2, x);
    const int span = static_cast<int>(it - knots.begin()) - 1;
    return std::clamp(span, lo_idx, hi_idx);
}

// The NURBS Book, algorithm A2.3.
Eigen::MatrixXd basis_derivatives(int p, const std::vector<double>& U, int span, double x, int n)
{
    Eigen::MatrixXd ndu(p + 1, p + 1);
    std::vector<double> left(p + 1), right(p + 1);
    ndu(0, 0) = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = x - U[span + 1 - j];
        right[j] = U[span + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu(j, r) = right[r + 1] + left[j - r];
            const double temp = ndu(r, j - 1) / ndu(j, r);
            ndu(r, j) = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu(j, j) = saved;
    }

    Eigen::MatrixXd ders = Eigen::MatrixXd::Zero(n + 1, p + 1);
    for (int j = 0; j <= p; ++j) ders(0, j) = ndu(j, p);

    Eigen::MatrixXd a(2, p + 1);
    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        a(0, 0) = 1.0;
        for (int k = 1; k <= std::min(n, p); ++k) {
            double d = 0.0;
            const int rk = r - k, pk = p - k;
            if (r >= k) {
                a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
                d = a(s2, 0) * ndu(rk, pk);
            }
            const int j1 = rk >= -1 ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
                d += a(s2, j) * ndu(rk + j, pk);
            }
            if (r <= pk) {
                a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
                d += a(s2, k) * ndu(r, pk);
            }
            ders(k, r) = d;
            std::swap(s1, s2);
        }
    }
    double factor = p;
    for (int k = 1; k <= std::min(n, p); ++k) {
        ders.row(k) *= factor;
        factor *= (p - k);
    }
    return ders;
}

std::vector<double> averaged_knots(int p, const std::vector<double>& sites)
{
    const int n = static_cast<int>(sites.size());
    std::vector<double> knots(n + p + 1);
    for (int i = 0; i <= p; ++i) {
        knots[i] = sites.front();
        knots[n + i] = sites.back();
    }
    for (int j = 1; j < n - p; ++j) {
        double s = 0.0;
        for (int i = j; i < j + p; ++i) s += sites[i];
        knots[j + p] = s / p;
    }
    return knots;
}

std::vector<double> periodic_knots(int p, int n)
{
    std::vector<double> knots;
    knots.reserve(n + 2 * p + 1);
    for (int j = -p; j <= n + p; ++j) knots.push_back(static_cast<double>(j) / n);
    return knots;
}

Eigen::MatrixXd collocation(int p, const std::vector<double>& knots, int n_ctrl,
                            const std::vector<double>& sites)
{
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sites.size()), n_ctrl);
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const int span = find_span(p, knots, n_ctrl, sites[i]);
        const Eigen::MatrixXd N = basis_derivatives(p, knots, span, sites[i], 0);
        for (int j = 0; j <= p; ++j) B(static_cast<Eigen::Index>(i), span - p + j) = N(0, j);
    }
    return B;
}

Eigen::MatrixXd periodic_collocation(int p, int n, const std::vector<double>& sites)
{
    const std::vector<double> knots = periodic_knots(p, n);
    const int n_ext = n + p;
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sites.size()), n);
    for (std::size_t i = 0; i < sites.size(); ++i) {
        double x = sites[i] - std::floor(sites[i]);
        const int span = find_span(p, knots, n_ext, x);
        const Eigen::MatrixXd N = basis_derivatives(p, knots, span, x, 0);
        for (int j = 0; j <= p; ++j)
            B(static_cast<Eigen::Index>(i), (span - p + j) % n) += N(0, j);
    }
    return B;
}

BasisEval clamped_basis(int p, const std::vector<double>& knots, int n_ctrl, double x, int order)
{
    BasisEval out;
    const int span = find_span(p, knots, n_ctrl, x);
    out.ders = basis_derivatives(p, knots, span, x, order);
    for (int j = 0; j <= p; ++j) out.index.push_back(span - p + j);
    return out;
}

BasisEval periodic_basis(int p, int n, double x, int order)
{
    static thread_local std::vector<double> knots;
    static thread_local int cached_p = -1, cached_n = -1;
    if (cached_p != p || cached_n != n) {
        knots = periodic_knots(p, n);
        cached_p = p;
        cached_n = n;
    }
    const double y = x - std::floor(x);
    BasisEval out;
    const int span = find_span(p, knots, n + p, y);
    out.ders = basis_derivatives(p, knots, span, y, order);
    for (int j = 0; j <= p; ++j) out.index.push_back((span - p + j) % n);
    return out;
}

}  // namespace sweepkit::bspline
