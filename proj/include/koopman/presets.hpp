#pragma once

#include <optional>
#include <string>
#include <vector>

#include "koopman/lift.hpp"

namespace koopman {

struct PresetParams {
    double gamma = 1.0;
    double omega = 1.0;
    double mass = 1.0;
};

// A named dynamical system from the built-in catalog:
//
//   "damped-toy"        xdot = -gamma x               lifted to H = -gamma x p
//   "power-damped:n"    xdot = -gamma x^n (n >= 2)    lifted to H = -gamma x^n p
//   "harmonic"          H = (omega/2)(x^2 + p^2)
//   "damped-oscillator" xdot = -gamma x + omega p ... lifted to 4D phase space
//   "free-particle"     H = |p|^2 / (2m) on R^3 (no base field; not a lift)
//
// Exact flows are closed-form solutions used as integrator oracles and for
// fast Koopman evaluation; support_scale gives the per-coordinate Gaussian
// stretch factors of the time-t pullback, used to size quadrature grids.
struct SystemPreset {
    std::string key;
    PresetParams params;
    int power = 0;  // n for power-damped, else 0
    std::optional<VectorField> base;
    HamiltonianSystem system;
    bool has_exact_flow = false;

    std::vector<double> exact_flow(const std::vector<double>& state, double t) const;
    std::vector<double> support_scale(double t) const;
};

// Parses keys like "harmonic" or "power-damped:3"; throws on unknown keys.
SystemPreset make_preset(const std::string& key, const PresetParams& params = {});

// True if the key names a preset (without constructing it).
bool is_preset_key(const std::string& key);

const std::vector<std::string>& preset_catalog();

}  // namespace koopman
