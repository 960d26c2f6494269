#pragma once

// Self-contained reference implementations the tests check the library
// against. Nothing here calls into the library's numeric kernels: the
// Gauss-Hermite rule is built by Newton iteration on the three-term
// recurrence, finite differences replace symbolic derivatives, and the 2x2
// eigensolver is the closed quadratic formula.

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "koopman/polynomial.hpp"

namespace oracles {

using Cplx = std::complex<double>;

// Nodes and weights for integral f(x) e^{-x^2} dx ~ sum w_i f(x_i), exact
// through polynomial degree 2n - 1.
inline void gauss_hermite(int n, std::vector<double>& x, std::vector<double>& w) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: n must be positive");
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const double pim4 = 0.7511255444649425;  // pi^(-1/4)
    const int m = (n + 1) / 2;
    double z = 0.0, pp = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(n, 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * x[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * x[1];
        else
            z = 2.0 * z - x[i - 2];
        for (int it = 0; it < 32; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 3e-15) break;
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
}

template <class F>
Cplx hermite_integral_1d(int n, F&& f) {
    std::vector<double> x, w;
    gauss_hermite(n, x, w);
    Cplx s = 0.0;
    for (int i = 0; i < n; ++i) s += w[i] * f(x[i]);
    return s;
}

// integral over R^2 of f(x, p) e^{-x^2 - p^2} dx dp
template <class F>
Cplx hermite_integral_2d(int n, F&& f) {
    std::vector<double> x, w;
    gauss_hermite(n, x, w);
    Cplx s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += w[i] * w[j] * f(x[i], x[j]);
    return s;
}

// integral of z^n zbar^m e^{-z zbar} dx dp with z = x + i p, by quadrature
inline Cplx pair_moment_quadrature(int n, int m) {
    const int points = (n + m) / 2 + 4;
    return hermite_integral_2d(points, [&](double x, double p) {
        Cplx z(x, p);
        return std::pow(z, n) * std::pow(std::conj(z), m);
    });
}

// Five-point central difference, O(h^4).
template <class F>
auto central_diff(F&& f, double t, double h = 1e-4) {
    return (-f(t + 2 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2 * h)) / (12.0 * h);
}

// Eigenvalues of [[a, b], [c, d]] by the quadratic formula.
inline std::pair<Cplx, Cplx> eig2(Cplx a, Cplx b, Cplx c, Cplx d) {
    Cplx tr = a + d;
    Cplx disc = std::sqrt(tr * tr - 4.0 * (a * d - b * c));
    return {0.5 * (tr + disc), 0.5 * (tr - disc)};
}

// Random sparse polynomial with Gaussian-integer coefficients; arithmetic on
// these stays exact in double precision.
inline koopman::Polynomial random_integer_polynomial(std::mt19937_64& rng,
                                                     const koopman::Chart& chart,
                                                     int max_degree, int term_count,
                                                     int coeff_range = 6) {
    std::uniform_int_distribution<int> deg(0, max_degree);
    std::uniform_int_distribution<int> coord(0, chart.dim() - 1);
    std::uniform_int_distribution<int> coeff(-coeff_range, coeff_range);
    koopman::Polynomial f(chart);
    for (int t = 0; t < term_count; ++t) {
        koopman::MultiIndex e(chart.dim(), 0);
        for (int d = deg(rng); d > 0; --d) e[coord(rng)]++;
        int re = coeff(rng), im = coeff(rng);
        if (re == 0 && im == 0) re = 1;
        f.add_term(std::move(e), koopman::Cplx(re, im));
    }
    return f;
}

inline double dist(Cplx a, Cplx b) { return std::abs(a - b); }

inline double factorial(int n) {
    double f = 1.0;
    for (int j = 2; j <= n; ++j) f *= j;
    return f;
}

}  // namespace oracles
