#pragma once

#include <string>
#include <utility>
#include <vector>

#include "koopman/gaussian.hpp"
#include "koopman/operators.hpp"

namespace koopman {

// <f, op g> - <op f, g>, both pairings by exact Gaussian moments. Vanishes
// for generators of complete measure-preserving flows and for real
// multiplication operators.
Cplx selfadjointness_residual(const FirstOrderOperator& op, const ExpPoly& f,
                              const ExpPoly& g);

// Residual op(f) - lambda f with the listed coordinates pinned to numbers,
// returned as the amplitude polynomial riding on f's exponential factor
// (the factor itself never vanishes, so "amplitude = 0" is the eigenvalue
// statement). Plane-wave eigenfunctions of continuous spectra are checked
// this way: pin the dual coordinate to the wave vector.
Polynomial distributional_eigencheck(
    const FirstOrderOperator& op, const ExpPoly& f, Cplx lambda,
    const std::vector<std::pair<std::string, Cplx>>& pins);

// One-parameter subgroup pictures of the degree-preserving generators:
//   rotation   x = r cos(phi), p = -r sin(phi):   i L_H = i omega d/dphi
//   boost      X = s sinh(chi), P = s cosh(chi):  i L_H = i gamma d/dchi
// (boost chart covers |P| > |X| only).
enum class AngularForm { rotation, boost };

// Samples random points in the parameterization's domain and compares the
// symbolic operator action against i*rate times a central finite difference
// of f along the parameter. Returns the max absolute residual.
double representation_check(AngularForm form, const ExpPoly& f, double rate,
                            int points, double h = 1e-4, unsigned seed = 12345);

struct CompletenessResult {
    enum class Kind { complete, incomplete, unclassified };
    Kind kind = Kind::unclassified;
    int power = 0;       // n when the template matched
    std::string detail;  // escape law for incomplete flows
};

// Classifies Hamiltonians of the template -c x^n p (single term, one pair,
// real c > 0): the base flow of xdot = -c x^n is complete exactly when
// n = 1; for n >= 2 the result carries the closed-form escape law. Anything
// off-template comes back unclassified.
CompletenessResult completeness_classify(const Polynomial& hamiltonian);

}  // namespace koopman
