#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "koopman/checks.hpp"
#include "koopman/edmd.hpp"
#include "koopman/errors.hpp"
#include "koopman/flow.hpp"
#include "koopman/gaussian.hpp"
#include "koopman/io.hpp"
#include "koopman/lift.hpp"
#include "koopman/operators.hpp"
#include "koopman/parse.hpp"
#include "koopman/presets.hpp"
#include "koopman/quantum.hpp"
#include "koopman/spectrum.hpp"

namespace {

using namespace koopman;

struct RunConfig {
    std::string preset;
    std::string field;
    double gamma = 1.0;
    double omega = 1.0;
    double hbar = 1.0;
    double mass = 1.0;
    int max_degree = 2;
    std::string method = "analytic";
    double t = 1.0;
    double dt = 0.0;
    double tol = 1e-10;
    double lambda = 0.0;
    std::vector<std::string> x0;
    std::string traj;
    std::string fit;
    std::string suite = "all";
    std::string poly;
    std::string out;
    std::string format = "json";
};

unsigned env_seed() {
    const char* s = std::getenv("KOOPMAN_SEED");
    if (!s) return 12345;
    char* end = nullptr;
    const unsigned long v = std::strtoul(s, &end, 10);
    if (end == s || *end != '\0')
        throw std::invalid_argument("KOOPMAN_SEED must be an unsigned integer");
    return static_cast<unsigned>(v);
}

void check_params(const RunConfig& cfg) {
    if (cfg.gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
    if (cfg.omega < 0.0) throw std::invalid_argument("omega must be >= 0");
    if (!(cfg.hbar > 0.0)) throw std::invalid_argument("hbar must be > 0");
    if (!(cfg.mass > 0.0)) throw std::invalid_argument("mass must be > 0");
    if (cfg.max_degree < 0) throw std::invalid_argument("D must be >= 0");
}

void require_one_source(const RunConfig& cfg) {
    if (cfg.preset.empty() == cfg.field.empty())
        throw std::invalid_argument("exactly one of --preset or --field is required");
}

void require_json(const RunConfig& cfg, const char* command) {
    if (cfg.format != "json")
        throw std::invalid_argument(std::string(command) + " emits json only");
}

SystemPreset preset_from(const RunConfig& cfg) {
    return make_preset(cfg.preset,
                       {.gamma = cfg.gamma, .omega = cfg.omega, .mass = cfg.mass});
}

// Inline systems come either as a JSON system document or as polynomial
// text: components ';'-separated, coordinates the identifiers in order of
// first appearance (the k-th component is the velocity of the k-th
// coordinate), or x1..xn when the text names none.
VectorField field_from_text(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{')
        return system_from_json(Json::parse(text));
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string cur; std::getline(ss, cur, ';');) parts.push_back(cur);
    if (parts.empty()) throw std::invalid_argument("field is empty");
    std::vector<std::string> names = scan_identifiers(text);
    if (names.empty()) {
        for (std::size_t k = 0; k < parts.size(); ++k)
            names.push_back(parts.size() == 1 ? std::string("x")
                                              : "x" + std::to_string(k + 1));
    }
    if (names.size() != parts.size())
        throw std::invalid_argument("field lists " + std::to_string(parts.size()) +
                                    " components but uses " +
                                    std::to_string(names.size()) + " coordinates");
    VectorField field;
    field.chart = Chart::plain(names);
    field.name = "inline";
    for (const auto& part : parts)
        field.components.push_back(parse_polynomial(field.chart, part));
    return field;
}

HamiltonianSystem system_from(const RunConfig& cfg) {
    if (!cfg.preset.empty()) return preset_from(cfg).system;
    return lift_vector_field(field_from_text(cfg.field));
}

void emit_text(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.out);
    if (!out) throw std::runtime_error("cannot open " + cfg.out);
    out << text;
}

void emit_json(const RunConfig& cfg, const Json& j) { emit_text(cfg, j.dump(2) + "\n"); }

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string cur; std::getline(ss, cur, sep);) parts.push_back(cur);
    return parts;
}

std::vector<double> parse_state(const std::string& text, int dim) {
    std::vector<double> state;
    for (const auto& cell : split_list(text, ',')) {
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (end == cell.c_str() || *end != '\0')
            throw std::invalid_argument("bad state component '" + cell + "'");
        state.push_back(v);
    }
    if (static_cast<int>(state.size()) != dim)
        throw std::invalid_argument("state '" + text + "' has " +
                                    std::to_string(state.size()) +
                                    " components, the chart has " + std::to_string(dim));
    return state;
}

std::vector<std::vector<double>> sample_points(int dim, int count, unsigned seed,
                                               double box) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-box, box);
    std::vector<std::vector<double>> pts(count, std::vector<double>(dim));
    for (auto& p : pts)
        for (auto& v : p) v = u(rng);
    return pts;
}

std::string spectrum_csv(const SpectrumReport& report) {
    std::string text = "re,im,multiplicity,labels\n";
    for (const auto& entry : report.entries) {
        text += format_shortest(entry.value.real()) + ",";
        text += format_shortest(entry.value.imag()) + ",";
        text += std::to_string(entry.multiplicity) + ",";
        for (std::size_t k = 0; k < entry.labels.size(); ++k)
            text += (k ? ";" : "") + entry.labels[k];
        text += "\n";
    }
    return text;
}

int emit_report(const RunConfig& cfg, const SpectrumReport& report) {
    if (cfg.format == "csv")
        emit_text(cfg, spectrum_csv(report));
    else
        emit_json(cfg, spectrum_report_to_json(report));
    return 0;
}

int cmd_lift(const RunConfig& cfg) {
    check_params(cfg);
    require_one_source(cfg);
    require_json(cfg, "lift");
    emit_json(cfg, lifted_system_to_json(system_from(cfg)));
    return 0;
}

int cmd_spectrum(const RunConfig& cfg) {
    check_params(cfg);
    const std::vector<std::string> methods = split_list(cfg.method, ',');
    static const std::vector<std::string> known = {
        "matrix",          "analytic",         "quantum-position",
        "quantum-momentum", "quantum-bargmann", "quantum-ccr"};
    for (const auto& m : methods)
        if (std::find(known.begin(), known.end(), m) == known.end())
            throw std::invalid_argument("unknown method '" + m + "'");
    if (methods.empty()) throw std::invalid_argument("method is empty");

    if (methods.size() == 1 && methods[0].rfind("quantum-", 0) == 0) {
        if (!cfg.preset.empty() || !cfg.field.empty())
            throw std::invalid_argument("quantum methods take no --preset or --field");
        const std::string& m = methods[0];
        if (m == "quantum-position")
            return emit_report(cfg, dilation_spectrum(true, cfg.max_degree, cfg.gamma,
                                                      cfg.hbar));
        if (m == "quantum-momentum")
            return emit_report(cfg, dilation_spectrum(false, cfg.max_degree, cfg.gamma,
                                                      cfg.hbar));
        if (m == "quantum-bargmann")
            return emit_report(cfg, bargmann_spectrum(cfg.max_degree, cfg.omega,
                                                      cfg.hbar));
        return emit_report(cfg,
                           planar_spectrum(cfg.max_degree, cfg.omega, cfg.gamma,
                                           cfg.hbar));
    }

    require_one_source(cfg);
    if (methods.size() > 1) {
        const bool pair = methods.size() == 2 &&
                          std::find(methods.begin(), methods.end(), "matrix") !=
                              methods.end() &&
                          std::find(methods.begin(), methods.end(), "analytic") !=
                              methods.end();
        if (!pair)
            throw std::invalid_argument("method lists combine matrix and analytic only");
        if (cfg.preset.empty())
            throw std::invalid_argument("analytic spectra need --preset");
        require_json(cfg, "the matrix/analytic diff");
        const SystemPreset preset = preset_from(cfg);
        const SpectrumReport mat =
            spectrum(build_liouville(preset.system),
                     GradedBasis(preset.system.chart, cfg.max_degree), preset.key);
        const SpectrumReport ana = analytic_spectrum(preset, cfg.max_degree);
        const SpectrumComparison diff =
            compare_spectra(mat, ana, std::max(cfg.tol, 1e-10));
        Json j = spectrum_report_to_json(mat);
        j["diff"] = {{"max_abs_deviation", diff.max_abs_deviation},
                     {"multiplicities_match", diff.multiplicities_match},
                     {"unmatched", diff.unmatched}};
        emit_json(cfg, j);
        return 0;
    }

    if (methods[0] == "analytic") {
        if (cfg.preset.empty())
            throw std::invalid_argument("analytic spectra need --preset");
        return emit_report(cfg, analytic_spectrum(preset_from(cfg), cfg.max_degree));
    }

    const HamiltonianSystem system = system_from(cfg);
    const std::string name = cfg.preset.empty() ? "inline" : cfg.preset;
    const GradedBasis basis(system.chart, cfg.max_degree);
    const FirstOrderOperator op = build_liouville(system);
    const SpectrumReport report = spectrum(op, basis, name);
    if (cfg.format == "csv" && !cfg.out.empty()) {
        const auto blocks = matrix_on_basis(op, basis);
        const std::filesystem::path base(cfg.out);
        const std::string stem = (base.parent_path() / base.stem()).string();
        for (std::size_t d = 0; d < blocks.size(); ++d) {
            std::ofstream mout(stem + "_block" + std::to_string(d) + ".csv");
            if (!mout) throw std::runtime_error("cannot open block file");
            write_matrix_csv(mout, blocks[d]);
        }
    }
    return emit_report(cfg, report);
}

// Uniform resampling of the flow: exact flow from the original state when
// the preset is complete and closed-form, chained integration otherwise.
Trajectory sampled_trajectory(const SystemPreset* preset,
                              const HamiltonianSystem& system,
                              const std::vector<double>& x0, double t_end, double dt,
                              double tol) {
    const bool exact = preset && preset->has_exact_flow && preset->power == 0;
    Trajectory traj;
    traj.coords = system.chart.names();
    traj.method = exact ? "exact-flow" : "rk54-sampled";
    traj.tolerance = tol;
    traj.times.push_back(0.0);
    traj.states.push_back(x0);
    const int steps = static_cast<int>(std::floor(std::abs(t_end) / dt + 1e-9));
    const double sign = t_end < 0 ? -1.0 : 1.0;
    std::vector<double> state = x0;
    for (int k = 1; k <= steps; ++k) {
        const double tk = sign * k * dt;
        if (exact) {
            state = preset->exact_flow(x0, tk);
        } else {
            Trajectory leg = integrate(system, state, sign * dt, tol);
            traj.stats.accepted += leg.stats.accepted;
            traj.stats.rejected += leg.stats.rejected;
            traj.stats.last_step = leg.stats.last_step;
            if (leg.truncated()) {
                traj.escape = EscapeEvent{sign * (k - 1) * dt + leg.escape->time,
                                          leg.escape->coordinate};
                break;
            }
            state = leg.final_state();
        }
        traj.times.push_back(tk);
        traj.states.push_back(state);
    }
    return traj;
}

int cmd_evolve(const RunConfig& cfg) {
    check_params(cfg);
    require_one_source(cfg);
    if (cfg.x0.empty()) throw std::invalid_argument("evolve needs at least one --x0");
    if (cfg.dt < 0.0) throw std::invalid_argument("dt must be >= 0");
    std::optional<SystemPreset> preset;
    if (!cfg.preset.empty()) preset = preset_from(cfg);
    const HamiltonianSystem system =
        preset ? preset->system : lift_vector_field(field_from_text(cfg.field));
    const int dim = system.chart.dim();
    std::vector<std::vector<double>> starts;
    for (const auto& text : cfg.x0) starts.push_back(parse_state(text, dim));

    const auto run_one = [&](const std::vector<double>& s) {
        return cfg.dt > 0.0 ? sampled_trajectory(preset ? &*preset : nullptr, system, s,
                                                 cfg.t, cfg.dt, cfg.tol)
                            : integrate(system, s, cfg.t, cfg.tol);
    };

    if (starts.size() > 1) {
        if (!cfg.fit.empty())
            throw std::invalid_argument("--fit takes a single trajectory");
        if (cfg.out.empty())
            throw std::invalid_argument("ensembles need --out DIRECTORY");
        std::vector<Trajectory> trajectories;
        if (cfg.dt > 0.0) {
            for (const auto& s : starts) trajectories.push_back(run_one(s));
        } else {
            trajectories = evolve_ensemble(system, starts, cfg.t, cfg.tol);
        }
        const Json index = write_ensemble_csv(cfg.out, "run", trajectories);
        std::cout << index.dump(2) << "\n";
        return 0;
    }

    const Trajectory traj = run_one(starts[0]);
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    if (!cfg.out.empty()) {
        std::ofstream out(cfg.out);
        if (!out) throw std::runtime_error("cannot open " + cfg.out);
        out << os.str();
    }
    if (!cfg.fit.empty()) {
        std::vector<int> indices;
        for (const auto& name : split_list(cfg.fit, ',')) {
            const auto it = std::find(traj.coords.begin(), traj.coords.end(), name);
            if (it == traj.coords.end())
                throw std::invalid_argument("unknown fit coordinate '" + name + "'");
            indices.push_back(static_cast<int>(it - traj.coords.begin()));
        }
        const DecayFit fit = indices.size() == 1 ? decay_fit(traj, indices[0])
                                                 : decay_fit(traj, indices);
        Json j = {{"system", system.name},
                  {"observable", cfg.fit},
                  {"rate", fit.rate},
                  {"r_squared", fit.r_squared},
                  {"window_shrunk", fit.window_shrunk}};
        if (!fit.note.empty()) j["note"] = fit.note;
        std::cout << j.dump(2) << "\n";
        if (!cfg.out.empty()) {
            const std::filesystem::path base(cfg.out);
            const std::string path =
                (base.parent_path() / (base.stem().string() + "_fit.json")).string();
            std::ofstream fout(path);
            if (!fout) throw std::runtime_error("cannot open " + path);
            fout << j.dump(2) << "\n";
        }
    } else if (cfg.out.empty()) {
        std::cout << os.str();
    }
    return 0;
}

struct CheckRow {
    std::string name;
    bool pass = false;
    bool has_value = false;
    double value = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

void add_check(std::vector<CheckRow>& rows, const std::string& name, double tol,
               const std::function<double(std::string&)>& body) {
    CheckRow row;
    row.name = name;
    row.tolerance = tol;
    try {
        row.value = body(row.detail);
        row.has_value = true;
        row.pass = row.value <= tol;
    } catch (const std::exception& e) {
        row.detail = e.what();
    }
    rows.push_back(std::move(row));
}

std::vector<ExpPoly> dressed_observables(const Chart& chart) {
    const Polynomial dress = gaussian_dressing_phase(chart);
    const Polynomial x = Polynomial::coordinate(chart, 0);
    const Polynomial p = Polynomial::coordinate(chart, chart.dim() / 2);
    const std::vector<Polynomial> amplitudes = {
        Polynomial::constant(chart, 1.0), x,
        x * x + x * p + Polynomial::constant(chart, 2.0)};
    std::vector<ExpPoly> fs;
    for (const auto& amp : amplitudes) fs.push_back(ExpPoly::dressed(amp, dress));
    return fs;
}

void isometry_suite(std::vector<CheckRow>& rows, const SystemPreset& preset, double t) {
    int k = 0;
    for (const auto& f : dressed_observables(preset.system.chart)) {
        add_check(rows, "isometry f" + std::to_string(k++), 1e-6,
                  [&](std::string& detail) {
                      detail = "relative defect of ||U(t) f||^2 at t = " +
                               format_shortest(t);
                      return isometry_check(f, preset, t, isometry_grid(f, preset, t));
                  });
    }
}

Polynomial poly_pow(const Polynomial& p, int n) {
    Polynomial r = Polynomial::constant(p.chart(), 1.0);
    for (int k = 0; k < n; ++k) r *= p;
    return r;
}

void eigen_suite(std::vector<CheckRow>& rows, const SystemPreset& preset, double t,
                 unsigned seed) {
    const Chart& ch = preset.system.chart;
    std::vector<std::pair<ExpPoly, Cplx>> pairs;
    if (preset.key == "damped-toy") {
        const Polynomial x = Polynomial::coordinate(ch, 0);
        const Polynomial p = Polynomial::coordinate(ch, 1);
        for (int n = 0; n <= 2; ++n)
            for (int m = 0; m <= 2; ++m)
                pairs.emplace_back(ExpPoly::of(poly_pow(x, n) * poly_pow(p, m)),
                                   Cplx(0.0, preset.params.gamma * (m - n)));
    } else if (preset.key == "harmonic") {
        const Polynomial x = Polynomial::coordinate(ch, 0);
        const Polynomial p = Polynomial::coordinate(ch, 1);
        const Polynomial z = x + Cplx(0.0, 1.0) * p;
        const Polynomial zb = x - Cplx(0.0, 1.0) * p;
        for (int n = 0; n <= 2; ++n)
            for (int m = 0; m <= 2; ++m)
                pairs.emplace_back(ExpPoly::of(poly_pow(z, n) * poly_pow(zb, m)),
                                   Cplx(preset.params.omega * (n - m), 0.0));
    } else if (preset.key == "damped-oscillator") {
        const Polynomial x1 = Polynomial::coordinate(ch, 0);
        const Polynomial x2 = Polynomial::coordinate(ch, 1);
        const Polynomial p1 = Polynomial::coordinate(ch, 2);
        const Polynomial p2 = Polynomial::coordinate(ch, 3);
        const Polynomial z1 = x1 + Cplx(0.0, 1.0) * x2;
        const Polynomial z1b = x1 - Cplx(0.0, 1.0) * x2;
        const Polynomial z2 = p1 + Cplx(0.0, 1.0) * p2;
        const Polynomial z2b = p1 - Cplx(0.0, 1.0) * p2;
        for (int n = 0; n <= 1; ++n)
            for (int m = 0; m <= 1; ++m)
                for (int k = 0; k <= 1; ++k)
                    for (int l = 0; l <= 1; ++l)
                        pairs.emplace_back(
                            ExpPoly::of(poly_pow(z1, n) * poly_pow(z1b, m) *
                                        poly_pow(z2, k) * poly_pow(z2b, l)),
                            Cplx(preset.params.omega * (n + k - m - l),
                                 -preset.params.gamma * (n + m - k - l)));
    } else {
        throw std::invalid_argument("no closed-form eigenpairs for " + preset.key);
    }
    const auto points = sample_points(ch.dim(), 8, seed, 0.8);
    add_check(rows, "eigen-evolution", 1e-6, [&](std::string& detail) {
        double worst = 0.0;
        for (const auto& [f, lambda] : pairs)
            worst = std::max(worst,
                             eigen_evolution_check(f, lambda, preset, t, points));
        detail = std::to_string(pairs.size()) + " monomial eigenpairs at t = " +
                 format_shortest(t);
        return worst;
    });
}

void selfadjoint_suite(std::vector<CheckRow>& rows, const SystemPreset& preset) {
    add_check(rows, "self-adjointness", 1e-10, [&](std::string& detail) {
        const FirstOrderOperator op = build_liouville(preset.system);
        const auto fs = dressed_observables(preset.system.chart);
        double worst = 0.0;
        for (const auto& f : fs)
            for (const auto& g : fs)
                worst = std::max(worst, std::abs(selfadjointness_residual(op, f, g)));
        detail = "max |<f, i L g> - <i L f, g>| over dressed pairs";
        return worst;
    });
}

void ccr_suite(std::vector<CheckRow>& rows, double hbar) {
    add_check(rows, "ccr planar ladders", 1e-12, [&](std::string& detail) {
        const PlanarLadders l = planar_ladders(hbar);
        const auto defect = [](const QuantumOperator& a, const QuantumOperator& b,
                               Cplx want) {
            const auto s = verified_scalar(commutator(a, b), 6, 1e-12);
            if (!s.has_value()) return 1.0;
            return std::abs(*s - want);
        };
        double worst = 0.0;
        worst = std::max(worst, defect(l.a1, l.a2_raise, Cplx(1.0, 0.0)));
        worst = std::max(worst, defect(l.a2, l.a1_raise, Cplx(1.0, 0.0)));
        worst = std::max(worst, defect(l.a1, l.a1_raise, Cplx(0.0, 0.0)));
        worst = std::max(worst, defect(l.a2, l.a2_raise, Cplx(0.0, 0.0)));
        worst = std::max(worst, defect(l.a1, l.a2, Cplx(0.0, 0.0)));
        worst = std::max(worst, defect(l.a1_raise, l.a2_raise, Cplx(0.0, 0.0)));
        detail = "twisted commutation table to degree 6";
        return worst;
    });
    add_check(rows, "ccr canonical pair", 0.0, [&](std::string& detail) {
        const Chart xc = Chart::plain({"x"});
        const QuantumOperator X =
            QuantumOperator::multiplication(Polynomial::coordinate(xc, "x"), hbar);
        const QuantumOperator P = QuantumOperator::momentum(xc, "x", hbar);
        const auto s = verified_scalar(commutator(X, P), 6);
        detail = "[X, P] = i hbar, exact";
        if (!s.has_value()) return 1.0;
        return std::abs(*s - Cplx(0.0, hbar));
    });
}

int cmd_verify(const RunConfig& cfg) {
    check_params(cfg);
    require_json(cfg, "verify");
    if (!cfg.field.empty())
        throw std::invalid_argument("verify runs on catalog presets");
    if (cfg.preset.empty()) throw std::invalid_argument("verify needs --preset");
    static const std::vector<std::string> suites = {
        "isometry", "eigen-evolution", "self-adjointness", "ccr", "all"};
    if (std::find(suites.begin(), suites.end(), cfg.suite) == suites.end())
        throw std::invalid_argument("unknown suite '" + cfg.suite + "'");
    const SystemPreset preset = preset_from(cfg);
    const bool closed_form = preset.key == "harmonic" || preset.key == "damped-toy" ||
                             preset.key == "damped-oscillator";
    const bool complete = preset.power == 0;
    const bool all = cfg.suite == "all";

    std::vector<CheckRow> rows;
    if (cfg.suite == "isometry" || (all && complete)) isometry_suite(rows, preset, cfg.t);
    if (cfg.suite == "eigen-evolution" || (all && closed_form))
        eigen_suite(rows, preset, cfg.t, env_seed());
    if (cfg.suite == "self-adjointness" || all) selfadjoint_suite(rows, preset);
    if (cfg.suite == "ccr" || all) ccr_suite(rows, cfg.hbar);

    bool pass = true;
    Json checks = Json::array();
    for (const auto& row : rows) {
        pass = pass && row.pass;
        Json entry = {{"name", row.name}, {"pass", row.pass},
                      {"tolerance", row.tolerance}};
        if (row.has_value) entry["value"] = row.value;
        if (!row.detail.empty()) entry["detail"] = row.detail;
        checks.push_back(std::move(entry));
    }
    emit_json(cfg, Json{{"system", preset.key},
                        {"suite", cfg.suite},
                        {"checks", checks},
                        {"pass", pass}});
    return pass ? 0 : 1;
}

SnapshotSet snapshots_from_file(const RunConfig& cfg) {
    std::ifstream in(cfg.traj);
    if (!in) throw std::runtime_error("cannot open " + cfg.traj);
    const Trajectory traj = read_trajectory_csv(in);
    if (traj.times.size() < 2)
        throw std::invalid_argument("trajectory has fewer than two samples");
    const double dt = traj.times[1] - traj.times[0];
    if (!(dt > 0.0)) throw std::invalid_argument("trajectory times must increase");
    for (std::size_t k = 0; k + 1 < traj.times.size(); ++k)
        if (std::abs(traj.times[k + 1] - traj.times[k] - dt) >
            1e-9 * std::max(1.0, std::abs(dt)))
            throw std::invalid_argument(
                "estimate needs uniformly spaced samples; rerun evolve with --dt");
    SnapshotSet set;
    set.dt = dt;
    if (!cfg.preset.empty()) {
        const SystemPreset preset = preset_from(cfg);
        if (preset.system.chart.names() != traj.coords)
            throw std::invalid_argument(
                "trajectory coordinates do not match the preset chart");
        set.chart = preset.system.chart;
        set.system = preset.key;
    } else if (traj.coords.size() % 2 == 0) {
        const std::size_t half = traj.coords.size() / 2;
        set.chart = Chart::canonical(
            {traj.coords.begin(), traj.coords.begin() + half},
            {traj.coords.begin() + half, traj.coords.end()});
        set.system = std::filesystem::path(cfg.traj).stem().string();
    } else {
        set.chart = Chart::plain(traj.coords);
        set.system = std::filesystem::path(cfg.traj).stem().string();
    }
    for (std::size_t k = 0; k + 1 < traj.states.size(); ++k)
        set.pairs.emplace_back(traj.states[k], traj.states[k + 1]);
    return set;
}

int cmd_estimate(const RunConfig& cfg) {
    check_params(cfg);
    require_json(cfg, "estimate");
    if (!cfg.field.empty())
        throw std::invalid_argument("estimate runs on presets or trajectory files");
    SnapshotSet set;
    if (!cfg.traj.empty()) {
        set = snapshots_from_file(cfg);
    } else {
        if (cfg.preset.empty())
            throw std::invalid_argument("estimate needs --preset or --traj");
        if (!(cfg.dt > 0.0)) throw std::invalid_argument("estimate needs --dt > 0");
        const SystemPreset preset = preset_from(cfg);
        const auto seeds =
            sample_points(preset.system.chart.dim(), 60, env_seed(), 1.0);
        set = collect_snapshots(preset, seeds, cfg.dt, 3, cfg.tol);
    }
    const Dictionary dict(set.chart, cfg.max_degree);
    const KoopmanFit fit = fit_koopman_matrix(set, dict);
    GeneratorSpectrum rec = recover_generator_spectrum(fit.matrix, set.dt, set.system);
    rec.report.max_degree = dict.degree();
    if (!set.warning.empty()) rec.notes.push_back(set.warning);
    emit_json(cfg, generator_spectrum_to_json(rec, fit));
    return 0;
}

int cmd_scale(const RunConfig& cfg) {
    check_params(cfg);
    require_json(cfg, "scale");
    if (cfg.poly.empty()) throw std::invalid_argument("scale needs --poly");
    const std::vector<std::string> ids = scan_identifiers(cfg.poly);
    const auto all_in = [&](const char* a, const char* b) {
        return std::all_of(ids.begin(), ids.end(), [&](const std::string& id) {
            return id == a || id == b;
        });
    };
    std::string first = "X", second = "P";
    if (all_in("X", "P")) {
        first = "X";
        second = "P";
    } else if (all_in("x", "p")) {
        first = "x";
        second = "p";
    } else {
        throw std::invalid_argument("scale expects coordinates named X,P or x,p");
    }
    const Chart chart = Chart::canonical({first}, {second});
    const Polynomial input = parse_polynomial(chart, cfg.poly);
    const Polynomial scaled = complex_scale(input, cfg.lambda, first, second);
    emit_json(cfg, Json{{"lambda", cfg.lambda},
                        {"coordinates", Json::array({first, second})},
                        {"input", input.to_text()},
                        {"scaled", scaled.to_text()}});
    return 0;
}

std::string catalog_help() {
    std::string text = "system from the catalog:";
    for (const auto& key : preset_catalog()) text += " " + key;
    return text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Koopman/Liouville toolkit: cotangent lifts, generator spectra, "
                 "flows, invariant checks, and data-driven estimates"};
    app.require_subcommand(1);
    RunConfig cfg;

    const auto add_system = [&](CLI::App* cmd) {
        cmd->add_option("--preset", cfg.preset, catalog_help());
        cmd->add_option("--field", cfg.field,
                        "inline polynomial field, components ';'-separated");
        cmd->add_option("--gamma", cfg.gamma, "damping rate (>= 0)");
        cmd->add_option("--omega", cfg.omega, "angular frequency (>= 0)");
        cmd->add_option("--hbar", cfg.hbar, "Planck constant (> 0)");
        cmd->add_option("--mass", cfg.mass, "mass (> 0)");
    };
    const auto add_output = [&](CLI::App* cmd) {
        cmd->add_option("--out", cfg.out, "output path (stdout when omitted)");
        cmd->add_option("--format", cfg.format, "json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    CLI::App* lift = app.add_subcommand(
        "lift", "cotangent-lift a first-order field to a Hamiltonian system");
    add_system(lift);
    add_output(lift);

    CLI::App* spec = app.add_subcommand(
        "spectrum", "point spectrum of the premultiplied Liouville generator");
    add_system(spec);
    add_output(spec);
    spec->add_option("--D", cfg.max_degree, "basis truncation degree (>= 0)");
    spec->add_option("--method", cfg.method,
                     "matrix | analytic | quantum-position | quantum-momentum | "
                     "quantum-bargmann | quantum-ccr, or matrix,analytic for a diff");
    spec->add_option("--tol", cfg.tol, "matching tolerance for the diff");

    CLI::App* evolve =
        app.add_subcommand("evolve", "integrate the lifted flow and export it");
    add_system(evolve);
    add_output(evolve);
    evolve->add_option("--x0", cfg.x0,
                       "initial state 'a,b,...'; repeat for an ensemble");
    evolve->add_option("--t", cfg.t, "time horizon (either sign)");
    evolve->add_option("--dt", cfg.dt, "uniform sampling step (adaptive when 0)");
    evolve->add_option("--tol", cfg.tol, "integrator tolerance");
    evolve->add_option("--fit", cfg.fit,
                       "fit a decay rate to this coordinate (or 'a,b' for a norm)");

    CLI::App* verify = app.add_subcommand(
        "verify", "run invariant checks and write a pass/fail report");
    add_system(verify);
    add_output(verify);
    verify->add_option("--suite", cfg.suite,
                       "isometry | eigen-evolution | self-adjointness | ccr | all");
    verify->add_option("--t", cfg.t, "flow time for the dynamic checks");

    CLI::App* estimate = app.add_subcommand(
        "estimate", "data-driven generator spectrum from snapshot pairs");
    add_system(estimate);
    add_output(estimate);
    estimate->add_option("--traj", cfg.traj,
                         "trajectory CSV with uniformly spaced samples");
    estimate->add_option("--dt", cfg.dt, "snapshot spacing when sampling a preset");
    estimate->add_option("--D", cfg.max_degree, "dictionary degree");
    estimate->add_option("--tol", cfg.tol, "integrator tolerance for sampling");

    CLI::App* scale = app.add_subcommand(
        "scale", "apply the complex scaling V_lambda to a polynomial");
    add_output(scale);
    scale->add_option("--lambda", cfg.lambda, "scaling angle");
    scale->add_option("--poly", cfg.poly, "polynomial in X,P (or x,p)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (lift->parsed()) return cmd_lift(cfg);
        if (spec->parsed()) return cmd_spectrum(cfg);
        if (evolve->parsed()) return cmd_evolve(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
        if (estimate->parsed()) return cmd_estimate(cfg);
        if (scale->parsed()) return cmd_scale(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
