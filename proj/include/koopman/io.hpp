#pragma once

#include <json.hpp>

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <vector>

#include "koopman/edmd.hpp"
#include "koopman/flow.hpp"
#include "koopman/lift.hpp"
#include "koopman/polynomial.hpp"
#include "koopman/spectrum.hpp"

namespace koopman {

using Json = nlohmann::json;

// Shortest decimal string that parses back to exactly the same double.
std::string format_shortest(double v);

// Chart JSON: {kind: "canonical", base, momentum} | {kind: "plain", names}
// | {kind: "conjugate", pairs: [[z, zbar], ...]}.
Json chart_to_json(const Chart& chart);
Chart chart_from_json(const Json& j);

// Polynomial JSON: {chart, terms: [{exps, re, im}]} with terms in graded-lex
// order; round-trips exactly.
Json polynomial_to_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j);

// Base system descriptor {name, base_coords, components} with components in
// the polynomial text grammar over the plain base chart.
Json system_to_json(const VectorField& field);
VectorField system_from_json(const Json& j);

// Lifted phase-space view: the descriptor fields plus phase_coords, the
// Hamiltonian, and Hamilton's equations, all as polynomial text.
Json lifted_system_to_json(const HamiltonianSystem& system);

// Spectrum JSON: {system, D, method, basis_size, eigenvalues: [{re, im,
// multiplicity, labels}]}. Eigenvectors are not serialized.
Json spectrum_report_to_json(const SpectrumReport& report);
SpectrumReport spectrum_report_from_json(const Json& j);

// Spectrum JSON with the data-driven extras {dt, dict_degree,
// condition_number, aliasing_guard, notes}.
Json generator_spectrum_to_json(const GeneratorSpectrum& spectrum,
                                const KoopmanFit& fit);

// Header "t,coord1,...,coordK", one row per accepted step, numbers in
// shortest round-trip form. The reader restores coords, times and states;
// integrator bookkeeping is not part of the format.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
Trajectory read_trajectory_csv(std::istream& in);

// Writes <stem>_<k>.csv per member plus <stem>_index.json into `directory`
// and returns the index document {coords, count, files, truncated}.
Json write_ensemble_csv(const std::string& directory, const std::string& stem,
                        const std::vector<Trajectory>& ensemble);

// Complex matrix CSV with cells like "1.5+0.75i"; round-trips exactly.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXcd& m);
Eigen::MatrixXcd read_matrix_csv(std::istream& in);

// Structural check against the shipped schema subset: type, enum, required,
// properties, items. Returns one message per violation, empty on success.
std::vector<std::string> schema_issues(const Json& document, const Json& schema);

}  // namespace koopman
