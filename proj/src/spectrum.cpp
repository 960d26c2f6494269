#include "koopman/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "koopman/errors.hpp"

namespace koopman {

int SpectrumReport::multiplicity_sum() const {
    int s = 0;
    for (const auto& e : entries) s += e.multiplicity;
    return s;
}

namespace {

// Expands op(monomial j) into column j of its degree block. Returns the
// basis index of the first degree violation found, -1 otherwise.
int fill_column(const FirstOrderOperator& op, const GradedBasis& basis, int j,
                std::vector<Eigen::MatrixXcd>& blocks) {
    const int d = basis.degree_of(j);
    const auto [begin, end] = basis.degree_range(d);
    Polynomial image = op.apply(basis.monomial(j));
    for (const auto& [e, c] : image.terms()) {
        if (total_degree(e) != d) return j;
        int i = basis.index_of(e);
        blocks[d](i - begin, j - begin) = c;
    }
    return -1;
}

std::vector<Eigen::MatrixXcd> assemble(const FirstOrderOperator& op,
                                       const GradedBasis& basis, bool parallel) {
    if (op.chart() != basis.chart())
        throw ChartMismatchError("matrix assembly: operator and basis charts differ");
    if (basis.dressed())
        throw std::invalid_argument(
            "matrix assembly operates on undressed monomial bases");

    std::vector<Eigen::MatrixXcd> blocks;
    for (int d = 0; d <= basis.max_degree(); ++d) {
        const auto [begin, end] = basis.degree_range(d);
        blocks.emplace_back(Eigen::MatrixXcd::Zero(end - begin, end - begin));
    }

    const int n = basis.size();
    int bad = n;  // index of the first offender, n if none
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 8) reduction(min : bad)
        for (int j = 0; j < n; ++j) {
            int r = fill_column(op, basis, j, blocks);
            if (r >= 0 && r < bad) bad = r;
        }
    } else {
        for (int j = 0; j < n; ++j) {
            int r = fill_column(op, basis, j, blocks);
            if (r >= 0 && r < bad) bad = r;
        }
    }
    if (bad < n)
        throw DegreeRaisingError(basis.label(bad), "leaves its degree block");
    return blocks;
}

struct Cluster {
    Cplx value;
    int multiplicity = 0;
    std::vector<std::string> labels;
    std::vector<Eigen::VectorXcd> vectors;
};

bool value_less(const Cplx& a, const Cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

SpectrumReport report_from_clusters(std::vector<Cluster> clusters,
                                    const std::string& system_name,
                                    const std::string& method,
                                    const GradedBasis& basis) {
    std::sort(clusters.begin(), clusters.end(),
              [](const Cluster& a, const Cluster& b) { return value_less(a.value, b.value); });
    SpectrumReport rep;
    rep.system = system_name;
    rep.max_degree = basis.max_degree();
    rep.method = method;
    rep.basis_size = basis.size();
    for (auto& c : clusters) {
        SpectrumEntry e;
        e.value = c.value;
        e.multiplicity = c.multiplicity;
        e.labels = std::move(c.labels);
        e.vectors = std::move(c.vectors);
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

// Single-link clustering of (value, payload) pairs sorted by (Re, Im).
void add_to_clusters(std::vector<Cluster>& clusters, Cplx value, double tol,
                     std::vector<std::string> labels, Eigen::VectorXcd vec) {
    for (auto& c : clusters) {
        if (std::abs(c.value - value) <= tol) {
            ++c.multiplicity;
            for (auto& l : labels) c.labels.push_back(std::move(l));
            if (vec.size() > 0) c.vectors.push_back(std::move(vec));
            return;
        }
    }
    Cluster c;
    c.value = value;
    c.multiplicity = 1;
    c.labels = std::move(labels);
    if (vec.size() > 0) c.vectors.push_back(std::move(vec));
    clusters.push_back(std::move(c));
}

Cplx scrub_negative_zero(Cplx v) {
    double re = v.real() == 0.0 ? 0.0 : v.real();
    double im = v.imag() == 0.0 ? 0.0 : v.imag();
    return {re, im};
}

}  // namespace

std::vector<Eigen::MatrixXcd> matrix_on_basis(const FirstOrderOperator& op,
                                              const GradedBasis& basis) {
    return assemble(op, basis, true);
}

std::vector<Eigen::MatrixXcd> matrix_on_basis_serial(const FirstOrderOperator& op,
                                                     const GradedBasis& basis) {
    return assemble(op, basis, false);
}

SpectrumReport spectrum(const FirstOrderOperator& op, const GradedBasis& basis,
                        const std::string& system_name, double cluster_tol) {
    std::vector<Eigen::MatrixXcd> blocks = matrix_on_basis(op, basis);

    // Blocks are independent eigenproblems; solve them in parallel, merge in
    // block order so the output is deterministic.
    std::vector<std::vector<std::pair<Cplx, Eigen::VectorXcd>>> per_block(blocks.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t d = 0; d < blocks.size(); ++d) {
        if (blocks[d].rows() == 0) continue;
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(blocks[d]);
        if (solver.info() != Eigen::Success)
            continue;  // handled below by size check
        const auto [begin, end] = basis.degree_range(static_cast<int>(d));
        for (int k = 0; k < blocks[d].rows(); ++k) {
            Eigen::VectorXcd full = Eigen::VectorXcd::Zero(basis.size());
            full.segment(begin, end - begin) = solver.eigenvectors().col(k);
            per_block[d].emplace_back(solver.eigenvalues()(k), std::move(full));
        }
    }
    for (std::size_t d = 0; d < blocks.size(); ++d)
        if (static_cast<long>(per_block[d].size()) != blocks[d].rows())
            throw std::runtime_error("eigensolver failed on degree block " +
                                     std::to_string(d));

    std::vector<Cluster> clusters;
    for (auto& block : per_block) {
        std::sort(block.begin(), block.end(),
                  [](const auto& a, const auto& b) { return value_less(a.first, b.first); });
        for (auto& [value, vec] : block)
            add_to_clusters(clusters, scrub_negative_zero(value), cluster_tol, {},
                            std::move(vec));
    }
    return report_from_clusters(std::move(clusters), system_name, "matrix", basis);
}

SpectrumReport monomial_spectrum(const FirstOrderOperator& op,
                                 const GradedBasis& basis,
                                 const std::string& system_name) {
    std::vector<Cluster> clusters;
    for (int j = 0; j < basis.size(); ++j) {
        Polynomial m = basis.monomial(j);
        Polynomial image = op.apply(m);
        Cplx value(0.0, 0.0);
        if (!image.is_zero()) {
            if (image.term_count() != 1 ||
                image.terms().begin()->first != basis.exponents(j))
                throw std::invalid_argument("operator is not diagonal on monomial " +
                                            basis.label(j));
            value = image.terms().begin()->second;
        }
        add_to_clusters(clusters, scrub_negative_zero(value), 0.0, {basis.label(j)},
                        {});
    }
    return report_from_clusters(std::move(clusters), system_name, "exact-monomial",
                                basis);
}

SpectrumReport analytic_spectrum(const SystemPreset& preset, int max_degree) {
    const double gamma = preset.params.gamma, omega = preset.params.omega;
    std::vector<Cluster> clusters;

    if (preset.key == "harmonic") {
        Chart zchart = Chart::conjugate_pairs({{"z", "zbar"}});
        GradedBasis basis(zchart, max_degree);
        for (int j = 0; j < basis.size(); ++j) {
            const auto& e = basis.exponents(j);
            Cplx lam(omega * (e[0] - e[1]), 0.0);
            add_to_clusters(clusters, scrub_negative_zero(lam), 0.0,
                            {basis.label(j)}, {});
        }
        return report_from_clusters(std::move(clusters), preset.key, "analytic",
                                    basis);
    }
    if (preset.key == "damped-toy") {
        GradedBasis basis(preset.system.chart, max_degree);
        for (int j = 0; j < basis.size(); ++j) {
            const auto& e = basis.exponents(j);
            Cplx lam(0.0, gamma * (e[1] - e[0]));
            add_to_clusters(clusters, scrub_negative_zero(lam), 0.0,
                            {basis.label(j)}, {});
        }
        return report_from_clusters(std::move(clusters), preset.key, "analytic",
                                    basis);
    }
    if (preset.key == "damped-oscillator") {
        Chart zchart =
            Chart::conjugate_pairs({{"z1", "z1bar"}, {"z2", "z2bar"}});
        GradedBasis basis(zchart, max_degree);
        for (int j = 0; j < basis.size(); ++j) {
            const auto& e = basis.exponents(j);
            const int n = e[0], m = e[1], k = e[2], l = e[3];
            Cplx lam(omega * (n + k - m - l), -gamma * (n + m - k - l));
            add_to_clusters(clusters, scrub_negative_zero(lam), 0.0,
                            {basis.label(j)}, {});
        }
        return report_from_clusters(std::move(clusters), preset.key, "analytic",
                                    basis);
    }
    throw std::invalid_argument("no closed-form point spectrum for preset '" +
                                preset.key + "'");
}

SpectrumComparison compare_spectra(const SpectrumReport& a, const SpectrumReport& b,
                                   double tol) {
    SpectrumComparison cmp;
    cmp.multiplicities_match = true;
    std::vector<bool> used(b.entries.size(), false);
    for (const auto& ea : a.entries) {
        int best = -1;
        double best_d = 0.0;
        for (std::size_t j = 0; j < b.entries.size(); ++j) {
            if (used[j]) continue;
            double d = std::abs(ea.value - b.entries[j].value);
            if (d <= tol && (best < 0 || d < best_d)) {
                best = static_cast<int>(j);
                best_d = d;
            }
        }
        if (best < 0) {
            ++cmp.unmatched;
            cmp.multiplicities_match = false;
            continue;
        }
        used[best] = true;
        cmp.max_abs_deviation = std::max(cmp.max_abs_deviation, best_d);
        if (ea.multiplicity != b.entries[best].multiplicity)
            cmp.multiplicities_match = false;
    }
    for (bool u : used)
        if (!u) ++cmp.unmatched;
    if (cmp.unmatched > 0) cmp.multiplicities_match = false;
    return cmp;
}

}  // namespace koopman
