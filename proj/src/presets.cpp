#include "koopman/presets.hpp"

#include <cmath>
#include <stdexcept>

namespace koopman {

namespace {

VectorField damped_toy_field(double gamma) {
    Chart base = Chart::plain({"x"});
    VectorField f;
    f.chart = base;
    f.components = {Cplx(-gamma, 0.0) * Polynomial::coordinate(base, "x")};
    f.name = "damped-toy";
    return f;
}

VectorField power_damped_field(double gamma, int n) {
    Chart base = Chart::plain({"x"});
    VectorField f;
    f.chart = base;
    f.components = {Polynomial::monomial(base, {n}, Cplx(-gamma, 0.0))};
    f.name = "power-damped:" + std::to_string(n);
    return f;
}

VectorField damped_oscillator_field(double gamma, double omega) {
    Chart base = Chart::plain({"x1", "x2"});
    Polynomial x1 = Polynomial::coordinate(base, "x1");
    Polynomial x2 = Polynomial::coordinate(base, "x2");
    VectorField f;
    f.chart = base;
    f.components = {Cplx(-gamma, 0.0) * x1 + Cplx(omega, 0.0) * x2,
                    Cplx(-omega, 0.0) * x1 + Cplx(-gamma, 0.0) * x2};
    f.name = "damped-oscillator";
    return f;
}

HamiltonianSystem harmonic_system(double omega) {
    Chart chart = Chart::canonical({"x"}, {"p"});
    Polynomial x = Polynomial::coordinate(chart, "x");
    Polynomial p = Polynomial::coordinate(chart, "p");
    return make_system(Cplx(omega / 2.0, 0.0) * (x * x + p * p), "harmonic");
}

HamiltonianSystem free_particle_system(double mass) {
    Chart chart = Chart::canonical({"x1", "x2", "x3"}, {"p1", "p2", "p3"});
    Polynomial h(chart);
    for (int k = 0; k < 3; ++k) {
        Polynomial pk = Polynomial::coordinate(chart, chart.momentum_index(k));
        h += Cplx(1.0 / (2.0 * mass), 0.0) * pk * pk;
    }
    return make_system(h, "free-particle");
}

}  // namespace

SystemPreset make_preset(const std::string& key, const PresetParams& params) {
    SystemPreset p;
    p.key = key;
    p.params = params;
    if (key == "damped-toy") {
        p.base = damped_toy_field(params.gamma);
        p.system = lift_vector_field(*p.base);
        p.has_exact_flow = true;
    } else if (key.rfind("power-damped:", 0) == 0) {
        int n = 0;
        try {
            n = std::stoi(key.substr(13));
        } catch (...) {
            throw std::invalid_argument("preset: bad power in '" + key + "'");
        }
        if (n < 2)
            throw std::invalid_argument("preset: power-damped requires n >= 2");
        p.power = n;
        p.base = power_damped_field(params.gamma, n);
        p.system = lift_vector_field(*p.base);
        p.has_exact_flow = true;
    } else if (key == "harmonic") {
        p.system = harmonic_system(params.omega);
        p.has_exact_flow = true;
    } else if (key == "damped-oscillator") {
        p.base = damped_oscillator_field(params.gamma, params.omega);
        p.system = lift_vector_field(*p.base);
        p.has_exact_flow = true;
    } else if (key == "free-particle") {
        p.system = free_particle_system(params.mass);
        p.has_exact_flow = true;
    } else {
        throw std::invalid_argument("unknown preset '" + key + "'");
    }
    return p;
}

bool is_preset_key(const std::string& key) {
    if (key == "damped-toy" || key == "harmonic" || key == "damped-oscillator" ||
        key == "free-particle")
        return true;
    return key.rfind("power-damped:", 0) == 0;
}

const std::vector<std::string>& preset_catalog() {
    static const std::vector<std::string> keys = {
        "damped-toy", "power-damped:n", "harmonic", "damped-oscillator",
        "free-particle"};
    return keys;
}

std::vector<double> SystemPreset::exact_flow(const std::vector<double>& s,
                                             double t) const {
    const double gamma = params.gamma, omega = params.omega, mass = params.mass;
    if (key == "damped-toy")
        return {s[0] * std::exp(-gamma * t), s[1] * std::exp(gamma * t)};
    if (key == "harmonic") {
        // (x, p) rotates clockwise: xdot = omega p, pdot = -omega x.
        const double c = std::cos(omega * t), sn = std::sin(omega * t);
        return {c * s[0] + sn * s[1], -sn * s[0] + c * s[1]};
    }
    if (key == "damped-oscillator") {
        // z1 = x1 + i x2 obeys z1' = -i alpha z1, z2 = i p1 - p2 obeys
        // z2' = -i conj(alpha) z2, alpha = omega - i gamma.
        const double c = std::cos(omega * t), sn = std::sin(omega * t);
        const double down = std::exp(-gamma * t), up = std::exp(gamma * t);
        return {down * (c * s[0] + sn * s[1]), down * (-sn * s[0] + c * s[1]),
                up * (c * s[2] + sn * s[3]), up * (-sn * s[2] + c * s[3])};
    }
    if (key == "free-particle")
        return {s[0] + t * s[3] / mass, s[1] + t * s[4] / mass,
                s[2] + t * s[5] / mass, s[3], s[4], s[5]};
    if (power >= 2) {
        // Separable solution of xdot = -gamma x^n; finite-time escape when
        // the bracket crosses zero.
        const int n = power;
        const double xn1 = std::pow(s[0], n - 1);
        const double bracket = 1.0 + (n - 1) * gamma * xn1 * t;
        if (bracket <= 0.0)
            throw std::domain_error("exact flow: trajectory escapes before t");
        const double x = s[0] * std::pow(bracket, -1.0 / (n - 1));
        const double p = s[1] * std::pow(bracket, static_cast<double>(n) / (n - 1));
        return {x, p};
    }
    throw std::logic_error("no exact flow for preset '" + key + "'");
}

std::vector<double> SystemPreset::support_scale(double t) const {
    const double gamma = params.gamma;
    if (key == "damped-toy")
        return {std::exp(gamma * t), std::exp(-gamma * t)};
    if (key == "harmonic") return {1.0, 1.0};
    if (key == "damped-oscillator") {
        const double up = std::exp(gamma * t), down = std::exp(-gamma * t);
        return {up, up, down, down};
    }
    throw std::invalid_argument("no Gaussian support scale for preset '" + key +
                                "'");
}

}  // namespace koopman
