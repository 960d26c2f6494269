#pragma once

#include <string>
#include <vector>

#include "koopman/polynomial.hpp"

namespace koopman {

// First-order system du/dt = X(u) with polynomial components over a plain
// chart of base coordinates.
struct VectorField {
    Chart chart;
    std::vector<Polynomial> components;  // one per coordinate
    std::string name;
};

// Canonical-chart Hamiltonian dynamics: the Hamiltonian plus the phase-space
// velocity field it generates.
struct HamiltonianSystem {
    Chart chart;  // canonical (x..., p...)
    Polynomial hamiltonian;
    std::vector<Polynomial> equations;  // du_i/dt, one per chart coordinate
    std::string name;
};

// Momentum name paired with a base coordinate: "x" -> "p", "x2" -> "p2",
// anything else gets a "p_" prefix.
std::string momentum_name_for(const std::string& base);

// Cotangent lift: H(x, p) = sum_k p_k X^k(x) on the canonical chart
// (base..., momenta...). The base block of Hamilton's equations reproduces X.
HamiltonianSystem lift_vector_field(const VectorField& field);

// Hamilton's equations du/dt for every coordinate of H's canonical chart:
// dx_k/dt = dH/dp_k, dp_k/dt = -dH/dx_k.
std::vector<Polynomial> hamilton_equations(const Polynomial& hamiltonian);

// The momentum block of the lifted dynamics: dp_k/dt = -sum_l p_l dX^l/dx_k,
// written over the lifted canonical chart.
std::vector<Polynomial> momentum_dual_field(const VectorField& field);

// Reads the base components back out of a lifted system (the dx/dt block,
// which for a cotangent lift contains no momenta).
std::vector<Polynomial> base_equations(const HamiltonianSystem& system);

// Wraps a Hamiltonian into a system by attaching Hamilton's equations.
HamiltonianSystem make_system(Polynomial hamiltonian, std::string name);

}  // namespace koopman
