#pragma once

#include <functional>
#include <span>
#include <vector>

#include "koopman/polynomial.hpp"

namespace koopman {

// Nodes and weights of the n-point Gauss-Hermite rule: sum_i w_i f(x_i)
// equals the integral of f(u) e^{-u^2} du exactly for polynomial f of degree
// <= 2n - 1. Computed by the Golub-Welsch eigendecomposition of the Jacobi
// matrix.
void gauss_hermite_rule(int n, std::vector<double>& nodes,
                        std::vector<double>& weights);

// Tensor-product grid against the plain measure du_1 ... du_k: per dimension
// the nodes are sigma-scaled Hermite nodes and each weight folds in
// sigma * e^{+x^2}, so grid sums integrate  g * exp(-sum (u_d / sigma_d)^2)
// exactly for polynomial g up to the recorded per-dimension exactness.
struct QuadratureGrid {
    std::vector<std::vector<double>> nodes;    // [dim][point]
    std::vector<std::vector<double>> weights;  // [dim][point]
    std::vector<double> sigma;
    int exactness_degree = 0;

    int dim() const { return static_cast<int>(nodes.size()); }
    long point_count() const;
};

QuadratureGrid tensor_gauss_hermite(const std::vector<double>& sigma,
                                    int points_per_dim);

// Tensor sum over the grid; the unsuffixed version splits the leading
// dimension across OpenMP threads with a fixed partial-sum order, so both
// versions produce bitwise identical results.
Cplx grid_integrate(const QuadratureGrid& grid,
                    const std::function<Cplx(std::span<const double>)>& f);
Cplx grid_integrate_serial(const QuadratureGrid& grid,
                           const std::function<Cplx(std::span<const double>)>& f);

}  // namespace koopman
