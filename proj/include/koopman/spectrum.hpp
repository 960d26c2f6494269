#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "koopman/basis.hpp"
#include "koopman/operators.hpp"
#include "koopman/presets.hpp"

namespace koopman {

struct SpectrumEntry {
    Cplx value;
    int multiplicity = 0;
    std::vector<std::string> labels;  // contributing basis monomials, if known
    // Basis-coefficient eigenvectors (full basis length); empty for
    // closed-form routes where the labels already name the eigenfunctions.
    std::vector<Eigen::VectorXcd> vectors;
};

struct SpectrumReport {
    std::string system;
    int max_degree = 0;
    std::string method;  // "matrix", "analytic", "exact-monomial", "edmd", ...
    int basis_size = 0;
    std::vector<SpectrumEntry> entries;  // sorted by (Re, Im)

    int multiplicity_sum() const;
};

// Degree-block matrices of a degree-preserving operator on the monomial
// basis: block d is square with entry (i, j) = coefficient of monomial i in
// op(monomial j), indices local to the block. Assembly verifies degree
// preservation monomial by monomial and names the first offender. The
// unsuffixed version runs the columns under OpenMP; both produce bitwise
// identical blocks.
std::vector<Eigen::MatrixXcd> matrix_on_basis(const FirstOrderOperator& op,
                                              const GradedBasis& basis);
std::vector<Eigen::MatrixXcd> matrix_on_basis_serial(const FirstOrderOperator& op,
                                                     const GradedBasis& basis);

// Dense eigensolve per degree block, eigenvalues clustered within
// `cluster_tol` and merged across blocks, sorted by (Re, Im).
SpectrumReport spectrum(const FirstOrderOperator& op, const GradedBasis& basis,
                        const std::string& system_name,
                        double cluster_tol = 1e-8);

// Reads the spectrum off monomials when the operator acts diagonally on
// them; errors if any monomial fails to be an eigenvector.
SpectrumReport monomial_spectrum(const FirstOrderOperator& op,
                                 const GradedBasis& basis,
                                 const std::string& system_name);

// Closed-form eigenvalue enumerations with eigenfunction labels:
//   harmonic            omega (n - m)                 on z^n zbar^m
//   damped-toy          i gamma (m - n)               on x^n p^m
//   damped-oscillator   omega(n+k-m-l) - i gamma(n+m-k-l)
//                                                     on z1^n z1bar^m z2^k z2bar^l
// Other presets have no closed-form point spectrum and are rejected.
SpectrumReport analytic_spectrum(const SystemPreset& preset, int max_degree);

struct SpectrumComparison {
    double max_abs_deviation = 0.0;  // over matched entries
    bool multiplicities_match = false;
    int unmatched = 0;  // entries of either side without a partner
};

// Matches entries of `b` to entries of `a` within `tol` and compares
// multiplicities.
SpectrumComparison compare_spectra(const SpectrumReport& a, const SpectrumReport& b,
                                   double tol);

}  // namespace koopman
