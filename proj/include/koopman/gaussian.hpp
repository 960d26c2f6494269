#pragma once

#include "koopman/exppoly.hpp"

namespace koopman {

// Integral of z^n zbar^m e^{-z zbar} over one pair, in the flat measure of
// the underlying real pair (z = x + i p, d mu = dx dp): pi * n! * delta_{nm}.
Cplx gaussian_moment(int n, int m);

// Exact integral of f = sum_j P_j e^{S_j} over the chart's flat measure
// d mu = du_1 ... du_dim (for conjugate charts: the measure of the underlying
// real pairs, normalized so that the integral of e^{-z zbar} is pi).
//
// Each phase must reduce to independent one-coordinate or one-pair Gaussian
// factors: per real coordinate u at most  q u^2 + l u  with Re q < 0, per
// conjugate pair at most  q z zbar + a z + b zbar  with Re q < 0. Phases
// that fail Re q < 0 in any coordinate raise DivergentPairingError; phases
// with coordinate-coupling terms are rejected as unsupported.
Cplx gaussian_integral(const ExpPoly& f);

// L^2 pairing <f, g> = integral of conj(f) * g d mu, evaluated exactly via
// Gaussian moments. Conjugate-linear in f, linear in g.
Cplx weighted_inner(const ExpPoly& f, const ExpPoly& g);

// The standard dressing phase -(1/2) sum |z_i|^2 written over the chart:
// -(1/2) sum u_i^2 on real charts, -(1/2) sum z_i zbar_i on conjugate charts.
Polynomial gaussian_dressing_phase(const Chart& chart);

}  // namespace koopman
