#include "koopman/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "koopman/errors.hpp"
#include "koopman/parse.hpp"

namespace koopman {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        std::string cell = line.substr(start, comma - start);
        const std::size_t a = cell.find_first_not_of(" \t\r");
        const std::size_t b = cell.find_last_not_of(" \t\r");
        cells.push_back(a == std::string::npos ? std::string()
                                               : cell.substr(a, b - a + 1));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

double parse_double(const std::string& text, const char* what) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || end != begin + text.size())
        throw std::invalid_argument(std::string(what) + ": malformed number '" +
                                    text + "'");
    return v;
}

// Splits "a+bi" at the sign that starts the imaginary part, skipping
// exponent signs like the one in "1e-5".
Cplx parse_complex_cell(const std::string& cell) {
    if (cell.empty() || cell.back() != 'i')
        throw std::invalid_argument("matrix csv: cell '" + cell +
                                    "' is not of the form a+bi");
    std::size_t split = std::string::npos;
    for (std::size_t k = 1; k + 1 < cell.size(); ++k) {
        if ((cell[k] == '+' || cell[k] == '-') && cell[k - 1] != 'e' &&
            cell[k - 1] != 'E')
            split = k;
    }
    if (split == std::string::npos)
        throw std::invalid_argument("matrix csv: cell '" + cell +
                                    "' is not of the form a+bi");
    const double re = parse_double(cell.substr(0, split), "matrix csv");
    const double im =
        parse_double(cell.substr(split, cell.size() - split - 1), "matrix csv");
    return {re, im};
}

std::string json_type_name(const Json& v) {
    if (v.is_object()) return "object";
    if (v.is_array()) return "array";
    if (v.is_string()) return "string";
    if (v.is_boolean()) return "boolean";
    if (v.is_null()) return "null";
    if (v.is_number_integer()) return "integer";
    return "number";
}

bool type_matches(const std::string& want, const Json& v) {
    if (want == "number") return v.is_number();
    if (want == "integer") return v.is_number_integer();
    return json_type_name(v) == want;
}

void check_schema(const Json& doc, const Json& schema, const std::string& path,
                  std::vector<std::string>& issues) {
    if (schema.contains("type")) {
        const std::string want = schema.at("type").get<std::string>();
        if (!type_matches(want, doc)) {
            issues.push_back(path + ": expected " + want + ", got " +
                             json_type_name(doc));
            return;
        }
    }
    if (schema.contains("enum")) {
        bool found = false;
        for (const auto& allowed : schema.at("enum"))
            if (doc == allowed) {
                found = true;
                break;
            }
        if (!found) issues.push_back(path + ": value " + doc.dump() + " not in enum");
    }
    if (doc.is_object()) {
        if (schema.contains("required"))
            for (const auto& key : schema.at("required")) {
                const std::string k = key.get<std::string>();
                if (!doc.contains(k))
                    issues.push_back(path + ": missing required key '" + k + "'");
            }
        if (schema.contains("properties"))
            for (const auto& [key, sub] : schema.at("properties").items())
                if (doc.contains(key))
                    check_schema(doc.at(key), sub, path + "/" + key, issues);
    }
    if (doc.is_array() && schema.contains("items")) {
        int idx = 0;
        for (const auto& element : doc)
            check_schema(element, schema.at("items"),
                         path + "/" + std::to_string(idx++), issues);
    }
}

}  // namespace

std::string format_shortest(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Json chart_to_json(const Chart& chart) {
    switch (chart.kind()) {
        case ChartKind::canonical: {
            Json base = Json::array(), momentum = Json::array();
            for (int k = 0; k < chart.pair_count(); ++k) {
                base.push_back(chart.name(chart.base_index(k)));
                momentum.push_back(chart.name(chart.momentum_index(k)));
            }
            return Json{{"kind", "canonical"}, {"base", base}, {"momentum", momentum}};
        }
        case ChartKind::conjugate: {
            Json pairs = Json::array();
            for (int i = 0; i < chart.dim(); ++i)
                if (i < chart.conjugate_index(i))
                    pairs.push_back(
                        Json::array({chart.name(i), chart.name(chart.conjugate_index(i))}));
            return Json{{"kind", "conjugate"}, {"pairs", pairs}};
        }
        case ChartKind::plain:
            break;
    }
    return Json{{"kind", "plain"}, {"names", chart.names()}};
}

Chart chart_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "canonical")
        return Chart::canonical(j.at("base").get<std::vector<std::string>>(),
                                j.at("momentum").get<std::vector<std::string>>());
    if (kind == "plain")
        return Chart::plain(j.at("names").get<std::vector<std::string>>());
    if (kind == "conjugate") {
        std::vector<std::pair<std::string, std::string>> pairs;
        for (const auto& p : j.at("pairs")) {
            if (!p.is_array() || p.size() != 2)
                throw std::invalid_argument("chart json: each pair needs two names");
            pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
        }
        return Chart::conjugate_pairs(std::move(pairs));
    }
    throw std::invalid_argument("chart json: unknown kind '" + kind + "'");
}

Json polynomial_to_json(const Polynomial& p) {
    Json terms = Json::array();
    for (const auto& [exps, coeff] : p.terms())
        terms.push_back(Json{{"exps", exps},
                             {"re", coeff.real()},
                             {"im", coeff.imag()}});
    return Json{{"chart", chart_to_json(p.chart())}, {"terms", terms}};
}

Polynomial polynomial_from_json(const Json& j) {
    const Chart chart = chart_from_json(j.at("chart"));
    Polynomial p(chart);
    for (const auto& term : j.at("terms")) {
        MultiIndex exps = term.at("exps").get<MultiIndex>();
        if (static_cast<int>(exps.size()) != chart.dim())
            throw std::invalid_argument(
                "polynomial json: exponent length does not match the chart");
        p.add_term(std::move(exps),
                   Cplx(term.at("re").get<double>(), term.at("im").get<double>()));
    }
    return p;
}

Json system_to_json(const VectorField& field) {
    Json components = Json::array();
    for (const auto& c : field.components) components.push_back(c.to_text());
    return Json{{"name", field.name},
                {"base_coords", field.chart.names()},
                {"components", components}};
}

VectorField system_from_json(const Json& j) {
    VectorField field;
    field.name = j.at("name").get<std::string>();
    field.chart = Chart::plain(j.at("base_coords").get<std::vector<std::string>>());
    const auto& components = j.at("components");
    if (static_cast<int>(components.size()) != field.chart.dim())
        throw std::invalid_argument(
            "system json: one component per base coordinate required");
    for (const auto& text : components)
        field.components.push_back(
            parse_polynomial(field.chart, text.get<std::string>()));
    return field;
}

Json lifted_system_to_json(const HamiltonianSystem& system) {
    Json base = Json::array(), components = Json::array();
    for (int k = 0; k < system.chart.pair_count(); ++k)
        base.push_back(system.chart.name(system.chart.base_index(k)));
    for (const auto& eq : base_equations(system)) components.push_back(eq.to_text());
    Json equations = Json::array();
    for (int i = 0; i < system.chart.dim(); ++i)
        equations.push_back(Json{{"coord", system.chart.name(i)},
                                 {"rhs", system.equations[i].to_text()}});
    return Json{{"name", system.name},
                {"base_coords", base},
                {"components", components},
                {"phase_coords", system.chart.names()},
                {"hamiltonian", system.hamiltonian.to_text()},
                {"equations", equations}};
}

Json spectrum_report_to_json(const SpectrumReport& report) {
    Json eigenvalues = Json::array();
    for (const auto& e : report.entries)
        eigenvalues.push_back(Json{{"re", e.value.real()},
                                   {"im", e.value.imag()},
                                   {"multiplicity", e.multiplicity},
                                   {"labels", e.labels}});
    return Json{{"system", report.system},
                {"D", report.max_degree},
                {"method", report.method},
                {"basis_size", report.basis_size},
                {"eigenvalues", eigenvalues}};
}

SpectrumReport spectrum_report_from_json(const Json& j) {
    SpectrumReport report;
    report.system = j.at("system").get<std::string>();
    report.max_degree = j.at("D").get<int>();
    report.method = j.at("method").get<std::string>();
    report.basis_size = j.value("basis_size", 0);
    for (const auto& e : j.at("eigenvalues")) {
        SpectrumEntry entry;
        entry.value = Cplx(e.at("re").get<double>(), e.at("im").get<double>());
        entry.multiplicity = e.at("multiplicity").get<int>();
        if (e.contains("labels"))
            entry.labels = e.at("labels").get<std::vector<std::string>>();
        report.entries.push_back(std::move(entry));
    }
    return report;
}

Json generator_spectrum_to_json(const GeneratorSpectrum& spectrum,
                                const KoopmanFit& fit) {
    Json j = spectrum_report_to_json(spectrum.report);
    j["dt"] = fit.dt;
    j["dict_degree"] = fit.dict_degree;
    j["condition_number"] = fit.condition_number;
    j["aliasing_guard"] = spectrum.aliasing_guard;
    j["notes"] = spectrum.notes;
    return j;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
    out << "t";
    for (const auto& c : trajectory.coords) out << "," << c;
    out << "\n";
    for (std::size_t r = 0; r < trajectory.times.size(); ++r) {
        out << format_shortest(trajectory.times[r]);
        for (double v : trajectory.states[r]) out << "," << format_shortest(v);
        out << "\n";
    }
}

Trajectory read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("trajectory csv: empty input");
    auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "t")
        throw std::invalid_argument(
            "trajectory csv: header must be t,coord1,...,coordK");
    Trajectory traj;
    traj.coords.assign(header.begin() + 1, header.end());
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw std::invalid_argument("trajectory csv: row has " +
                                        std::to_string(cells.size()) +
                                        " cells, header has " +
                                        std::to_string(header.size()));
        traj.times.push_back(parse_double(cells[0], "trajectory csv"));
        std::vector<double> state;
        for (std::size_t c = 1; c < cells.size(); ++c)
            state.push_back(parse_double(cells[c], "trajectory csv"));
        traj.states.push_back(std::move(state));
    }
    if (traj.times.empty())
        throw std::invalid_argument("trajectory csv: no data rows");
    return traj;
}

Json write_ensemble_csv(const std::string& directory, const std::string& stem,
                        const std::vector<Trajectory>& ensemble) {
    if (ensemble.empty())
        throw std::invalid_argument("ensemble csv: no trajectories");
    for (const auto& t : ensemble)
        if (t.coords != ensemble.front().coords)
            throw std::invalid_argument(
                "ensemble csv: members use different coordinates");
    const std::filesystem::path dir(directory);
    std::filesystem::create_directories(dir);
    Json files = Json::array(), truncated = Json::array();
    for (std::size_t k = 0; k < ensemble.size(); ++k) {
        char suffix[16];
        std::snprintf(suffix, sizeof suffix, "_%03zu.csv", k);
        const std::string filename = stem + suffix;
        std::ofstream out(dir / filename);
        if (!out)
            throw std::runtime_error("ensemble csv: cannot write " +
                                     (dir / filename).string());
        write_trajectory_csv(out, ensemble[k]);
        files.push_back(filename);
        truncated.push_back(ensemble[k].truncated());
    }
    Json index{{"coords", ensemble.front().coords},
               {"count", ensemble.size()},
               {"files", files},
               {"truncated", truncated}};
    std::ofstream out(dir / (stem + "_index.json"));
    if (!out)
        throw std::runtime_error("ensemble csv: cannot write the index");
    out << index.dump(2) << "\n";
    return index;
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXcd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ",";
            const double re = m(r, c).real(), im = m(r, c).imag();
            out << format_shortest(re) << (std::signbit(im) ? "-" : "+")
                << format_shortest(std::abs(im)) << "i";
        }
        out << "\n";
    }
}

Eigen::MatrixXcd read_matrix_csv(std::istream& in) {
    std::vector<std::vector<Cplx>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::vector<Cplx> row;
        for (const auto& cell : split_csv_line(line))
            row.push_back(parse_complex_cell(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::invalid_argument("matrix csv: ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("matrix csv: empty input");
    Eigen::MatrixXcd m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    return m;
}

std::vector<std::string> schema_issues(const Json& document, const Json& schema) {
    std::vector<std::string> issues;
    check_schema(document, schema, "$", issues);
    return issues;
}

}  // namespace koopman
