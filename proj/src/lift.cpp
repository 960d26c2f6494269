#include "koopman/lift.hpp"

#include <cctype>

#include <stdexcept>

#include "koopman/errors.hpp"

namespace koopman {

std::string momentum_name_for(const std::string& base) {
    if (base.size() >= 1 && base[0] == 'x') {
        std::string rest = base.substr(1);
        bool digits = true;
        for (char c : rest) digits = digits && std::isdigit(static_cast<unsigned char>(c));
        if (digits) return "p" + rest;
    }
    return "p_" + base;
}

HamiltonianSystem lift_vector_field(const VectorField& field) {
    const Chart& base = field.chart;
    if (base.kind() != ChartKind::plain)
        throw std::invalid_argument("lift: base chart must be plain coordinates");
    if (static_cast<int>(field.components.size()) != base.dim())
        throw std::invalid_argument("lift: one component per base coordinate required");
    for (const auto& comp : field.components)
        if (comp.chart() != base)
            throw ChartMismatchError("lift: component over the wrong chart");

    std::vector<std::string> momenta;
    for (const auto& name : base.names()) momenta.push_back(momentum_name_for(name));
    Chart phase = Chart::canonical(base.names(), momenta);

    // Rewrite each component over the phase chart (base coordinates keep
    // their indices: base_index(k) == k).
    std::vector<Polynomial> base_images;
    for (int i = 0; i < base.dim(); ++i)
        base_images.push_back(Polynomial::coordinate(phase, phase.base_index(i)));

    Polynomial h(phase);
    for (int k = 0; k < base.dim(); ++k) {
        Polynomial xk = field.components[k].substitute(base_images, phase);
        h += Polynomial::coordinate(phase, phase.momentum_index(k)) * xk;
    }

    HamiltonianSystem sys;
    sys.chart = phase;
    sys.hamiltonian = h;
    sys.equations = hamilton_equations(h);
    sys.name = field.name;
    return sys;
}

std::vector<Polynomial> hamilton_equations(const Polynomial& hamiltonian) {
    const Chart& chart = hamiltonian.chart();
    if (chart.kind() != ChartKind::canonical)
        throw std::invalid_argument("hamilton equations require a canonical chart");
    std::vector<Polynomial> eqs(chart.dim(), Polynomial(chart));
    for (int k = 0; k < chart.pair_count(); ++k) {
        eqs[chart.base_index(k)] = hamiltonian.derivative(chart.momentum_index(k));
        eqs[chart.momentum_index(k)] = -hamiltonian.derivative(chart.base_index(k));
    }
    return eqs;
}

std::vector<Polynomial> momentum_dual_field(const VectorField& field) {
    HamiltonianSystem sys = lift_vector_field(field);
    std::vector<Polynomial> duals;
    for (int k = 0; k < field.chart.dim(); ++k)
        duals.push_back(sys.equations[sys.chart.momentum_index(k)]);
    return duals;
}

std::vector<Polynomial> base_equations(const HamiltonianSystem& system) {
    std::vector<Polynomial> eqs;
    for (int k = 0; k < system.chart.pair_count(); ++k)
        eqs.push_back(system.equations[system.chart.base_index(k)]);
    return eqs;
}

HamiltonianSystem make_system(Polynomial hamiltonian, std::string name) {
    HamiltonianSystem sys;
    sys.chart = hamiltonian.chart();
    sys.equations = hamilton_equations(hamiltonian);
    sys.hamiltonian = std::move(hamiltonian);
    sys.name = std::move(name);
    return sys;
}

}  // namespace koopman
