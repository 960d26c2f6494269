#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

#include "koopman/exppoly.hpp"
#include "koopman/presets.hpp"
#include "koopman/spectrum.hpp"

namespace koopman {

// Sampled pairs (x, Phi_dt(x)) collected along trajectories of one system.
struct SnapshotSet {
    Chart chart;
    std::string system;
    double dt = 0.0;
    std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs;
    bool partial = false;  // some seeds escaped during sampling
    std::string warning;   // non-empty when partial or the flow is incomplete
};

// `steps` pairs per seed, chained along the trajectory: (x_k, x_{k+1}) with
// x_{k+1} = Phi_dt(x_k), through the closed-form flow when available and the
// integrator otherwise. Seeds run in parallel. A seed that escapes keeps its
// pairs up to the escape and flags the set as partial; single-pair systems
// whose base field admits finite-time escape are flagged up front.
SnapshotSet collect_snapshots(const SystemPreset& preset,
                              const std::vector<std::vector<double>>& seeds,
                              double dt, int steps, double tol = 1e-10);

// A finite list of observables spanning the fit space. Construction verifies
// linear independence through the Gram matrix against the Gaussian measure
// (condition number below 1e10) and rejects dependent lists.
class Dictionary {
  public:
    // All monomials of total degree <= degree, optionally Gaussian-dressed.
    Dictionary(const Chart& chart, int degree, bool dressed = false);
    explicit Dictionary(std::vector<ExpPoly> elements);

    const Chart& chart() const { return chart_; }
    int degree() const { return degree_; }
    int size() const { return static_cast<int>(elements_.size()); }
    const std::vector<ExpPoly>& elements() const { return elements_; }
    const std::string& label(int i) const { return labels_.at(i); }

    Eigen::VectorXcd evaluate(std::span<const double> point) const;
    double gram_condition() const { return gram_condition_; }

  private:
    void validate();

    Chart chart_;
    int degree_ = 0;
    std::vector<ExpPoly> elements_;
    std::vector<std::string> labels_;
    double gram_condition_ = 0.0;
};

struct KoopmanFit {
    Eigen::MatrixXcd matrix;  // K with psi(x') ~ K^T psi(x)
    double condition_number = 0.0;  // of the data Gram Psi^H Psi
    int dict_degree = 0;
    double dt = 0.0;
};

// Least-squares fit K = argmin sum_j |psi(x'_j) - K^T psi(x_j)|^2 by thin
// SVD. Requires at least as many pairs as dictionary elements and a data
// Gram condition number below 1e10.
KoopmanFit fit_koopman_matrix(const SnapshotSet& snapshots, const Dictionary& dict);

struct GeneratorSpectrum {
    SpectrumReport report;  // method "edmd", entries clustered within 1e-8
    // True when every |Im log kappa| stays clear of the principal branch
    // cut, i.e. the recovered eigenvalues cannot have wrapped.
    bool aliasing_guard = true;
    std::vector<std::string> notes;  // exclusions and branch warnings
};

// Maps each eigenvalue kappa of K to the generator eigenvalue
// lambda = i log(kappa) / dt (principal branch), the inverse of
// kappa = e^{-i lambda dt}. Eigenvalues with |kappa| ~ 0 carry no finite
// logarithm and are excluded with a note.
GeneratorSpectrum recover_generator_spectrum(const Eigen::MatrixXcd& K, double dt,
                                             const std::string& system = "");

}  // namespace koopman
