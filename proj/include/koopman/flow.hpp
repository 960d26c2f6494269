#pragma once

#include <optional>
#include <string>
#include <vector>

#include "koopman/exppoly.hpp"
#include "koopman/lift.hpp"
#include "koopman/presets.hpp"
#include "koopman/quadrature.hpp"

namespace koopman {

struct IntegratorStats {
    long accepted = 0;
    long rejected = 0;
    double last_step = 0.0;
};

// Finite-time blow-up: the step size underflowed while the state or its
// generator velocity diverged. `coordinate` indexes the largest state
// component at the cut.
struct EscapeEvent {
    double time = 0.0;
    int coordinate = -1;
};

struct Trajectory {
    std::vector<std::string> coords;
    std::vector<double> times;
    std::vector<std::vector<double>> states;  // one row per accepted step
    std::string method = "rk54";
    double tolerance = 1e-10;
    IntegratorStats stats;
    std::optional<EscapeEvent> escape;

    bool truncated() const { return escape.has_value(); }
    double final_time() const { return times.back(); }
    const std::vector<double>& final_state() const { return states.back(); }
};

// Adaptive Dormand-Prince 5(4) with combined absolute and relative control
// at the given tolerance. Integrates du/dt = equations(u) from t = 0 to
// t_end (either sign). On finite-time blow-up the trajectory is truncated
// and the escape event recorded; it is not an error.
Trajectory integrate(const Chart& chart, const std::vector<Polynomial>& equations,
                     const std::vector<double>& x0, double t_end,
                     double tol = 1e-10);
Trajectory integrate(const HamiltonianSystem& system, const std::vector<double>& x0,
                     double t_end, double tol = 1e-10);

// One trajectory per initial condition; the unsuffixed version distributes
// initial conditions across OpenMP threads. Trajectories are independent, so
// the two versions agree bitwise.
std::vector<Trajectory> evolve_ensemble(const HamiltonianSystem& system,
                                        const std::vector<std::vector<double>>& initial,
                                        double t_end, double tol = 1e-10);
std::vector<Trajectory> evolve_ensemble_serial(const HamiltonianSystem& system,
                                               const std::vector<std::vector<double>>& initial,
                                               double t_end, double tol = 1e-10);

// Composition pullback (U(t) f)(u) = f(Phi_t(u)) evaluated at the given
// points, through the closed-form flow when the preset has one and through
// integration otherwise. Points whose trajectory escapes before time t map
// to nullopt.
std::vector<std::optional<Cplx>> koopman_evolve(const ExpPoly& f,
                                                const SystemPreset& preset, double t,
                                                const std::vector<std::vector<double>>& points,
                                                double tol = 1e-10);

// max_pts |f(Phi_t(pt)) - e^{-i lambda t} f(pt)| for a claimed eigenpair
// (f, lambda) of the premultiplied generator. Throws if a point escapes.
double eigen_evolution_check(const ExpPoly& f, Cplx lambda,
                             const SystemPreset& preset, double t,
                             const std::vector<std::vector<double>>& points,
                             double tol = 1e-10);

// Relative defect | ||U(t) f||^2 - ||f||^2 | / ||f||^2 in the flat L^2
// inner product. Every term of f must carry the standard Gaussian dressing.
// The grid integrates the pulled-back side, so it needs exactness degree
// >= 2 deg(f) + 4 and per-dimension sigma >= preset.support_scale(t);
// otherwise QuadratureDomainError reports the required enlargement. The
// ||f||^2 side is integrated on an internal unit-sigma grid of the same
// exactness.
double isometry_check(const ExpPoly& f, const SystemPreset& preset, double t,
                      const QuadratureGrid& grid);

// A grid that satisfies the isometry_check requirements for (f, preset, t).
QuadratureGrid isometry_grid(const ExpPoly& f, const SystemPreset& preset,
                             double t);

struct DecayFit {
    double rate = 0.0;  // minus the fitted slope of log|observable| vs t
    double r_squared = 0.0;
    bool window_shrunk = false;
    std::string note;
};

// Least-squares exponential-rate fit of a signed coordinate along a
// trajectory. Sign changes or zeros restrict the fit to the longest
// single-sign window (flagged in the result).
DecayFit decay_fit(const Trajectory& trajectory, int coordinate);
// Same fit on the euclidean norm over a coordinate subset, e.g. the modulus
// of a rotating pair.
DecayFit decay_fit(const Trajectory& trajectory, const std::vector<int>& coordinates);

// Searches both time directions for a finite escape time of the lifted flow
// started at base point x0 (momentum 1). Returns the detected blow-up time,
// or nullopt when the flow stays finite over the search horizon.
std::optional<double> escape_detect(const SystemPreset& preset, double x0,
                                    double tol = 1e-10);

// Term k of e^{t L} f = sum_k (t^k / k!) L^k f, with L the Liouville
// derivation g -> {g, H}. Entry k is the coefficient polynomial of t^k.
std::vector<Polynomial> pullback_series(const HamiltonianSystem& system,
                                        const Polynomial& f, int order);

struct SeriesComparison {
    std::vector<Polynomial> generator_terms;  // from iterating the bracket
    std::vector<Polynomial> flow_terms;       // from expanding the exact flow
    double max_distance = 0.0;
    std::string note;
};

// For a power-damped preset, compares the generator exponential applied to
// the base coordinate against the Taylor expansion of the closed-form flow
// x0 (1 + (n-1) gamma x0^{n-1} t)^{-1/(n-1)}, order by order.
SeriesComparison pullback_comparison(const SystemPreset& preset, int order);

}  // namespace koopman
