#include "koopman/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace koopman {

void gauss_hermite_rule(int n, std::vector<double>& nodes,
                        std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_hermite_rule: need n >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    if (n == 1) {
        weights[0] = std::sqrt(M_PI);
        return;
    }
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(0.5 * k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("gauss_hermite_rule: eigensolve failed");
    const double mu0 = std::sqrt(M_PI);
    for (int i = 0; i < n; ++i) {
        nodes[i] = solver.eigenvalues()[i];
        const double v0 = solver.eigenvectors()(0, i);
        weights[i] = mu0 * v0 * v0;
    }
    // The rule is symmetric about zero; average mirror pairs to remove
    // asymmetric roundoff from the eigensolve.
    for (int i = 0, j = n - 1; i < j; ++i, --j) {
        const double x = 0.5 * (nodes[j] - nodes[i]);
        nodes[i] = -x;
        nodes[j] = x;
        const double w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
    }
    if (n % 2 == 1) nodes[n / 2] = 0.0;
}

long QuadratureGrid::point_count() const {
    long count = 1;
    for (const auto& axis : nodes) count *= static_cast<long>(axis.size());
    return nodes.empty() ? 0 : count;
}

QuadratureGrid tensor_gauss_hermite(const std::vector<double>& sigma,
                                    int points_per_dim) {
    if (sigma.empty())
        throw std::invalid_argument("tensor_gauss_hermite: empty sigma");
    for (double s : sigma)
        if (!(s > 0.0))
            throw std::invalid_argument("tensor_gauss_hermite: sigma must be positive");
    std::vector<double> x, w;
    gauss_hermite_rule(points_per_dim, x, w);
    QuadratureGrid grid;
    grid.sigma = sigma;
    grid.exactness_degree = 2 * points_per_dim - 1;
    grid.nodes.resize(sigma.size());
    grid.weights.resize(sigma.size());
    for (std::size_t d = 0; d < sigma.size(); ++d) {
        grid.nodes[d].resize(x.size());
        grid.weights[d].resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            grid.nodes[d][i] = sigma[d] * x[i];
            grid.weights[d][i] = sigma[d] * w[i] * std::exp(x[i] * x[i]);
        }
    }
    return grid;
}

namespace {

// Sum over the sub-grid with the leading index fixed. Both integrate
// variants reduce through this helper in the same index order, which keeps
// their results bitwise identical.
Cplx slice_sum(const QuadratureGrid& grid,
               const std::function<Cplx(std::span<const double>)>& f, int i0) {
    const int dim = grid.dim();
    std::vector<double> pt(dim);
    pt[0] = grid.nodes[0][i0];
    const double w0 = grid.weights[0][i0];
    if (dim == 1) return f(pt) * w0;
    std::vector<int> idx(dim, 0);
    Cplx acc = 0.0;
    while (true) {
        double w = w0;
        for (int d = 1; d < dim; ++d) {
            pt[d] = grid.nodes[d][idx[d]];
            w *= grid.weights[d][idx[d]];
        }
        acc += f(pt) * w;
        int d = dim - 1;
        for (; d >= 1; --d) {
            if (++idx[d] < static_cast<int>(grid.nodes[d].size())) break;
            idx[d] = 0;
        }
        if (d == 0) break;
    }
    return acc;
}

}  // namespace

Cplx grid_integrate(const QuadratureGrid& grid,
                    const std::function<Cplx(std::span<const double>)>& f) {
    if (grid.dim() == 0)
        throw std::invalid_argument("grid_integrate: empty grid");
    const int n0 = static_cast<int>(grid.nodes[0].size());
    std::vector<Cplx> partial(n0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n0; ++i) partial[i] = slice_sum(grid, f, i);
    Cplx total = 0.0;
    for (int i = 0; i < n0; ++i) total += partial[i];
    return total;
}

Cplx grid_integrate_serial(const QuadratureGrid& grid,
                           const std::function<Cplx(std::span<const double>)>& f) {
    if (grid.dim() == 0)
        throw std::invalid_argument("grid_integrate: empty grid");
    const int n0 = static_cast<int>(grid.nodes[0].size());
    std::vector<Cplx> partial(n0);
    for (int i = 0; i < n0; ++i) partial[i] = slice_sum(grid, f, i);
    Cplx total = 0.0;
    for (int i = 0; i < n0; ++i) total += partial[i];
    return total;
}

}  // namespace koopman
