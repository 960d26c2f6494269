#include "koopman/edmd.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "koopman/basis.hpp"
#include "koopman/checks.hpp"
#include "koopman/errors.hpp"
#include "koopman/flow.hpp"
#include "koopman/gaussian.hpp"

namespace koopman {

namespace {

// One dt of the flow; false when the trajectory escapes first.
bool step_flow(const SystemPreset& preset, const std::vector<double>& from,
               double dt, double tol, std::vector<double>& to) {
    if (preset.has_exact_flow) {
        try {
            to = preset.exact_flow(from, dt);
            return true;
        } catch (const std::domain_error&) {
            return false;
        }
    }
    const Trajectory traj = integrate(preset.system, from, dt, tol);
    if (traj.truncated()) return false;
    to = traj.final_state();
    return true;
}

}  // namespace

SnapshotSet collect_snapshots(const SystemPreset& preset,
                              const std::vector<std::vector<double>>& seeds,
                              double dt, int steps, double tol) {
    const Chart& chart = preset.system.chart;
    if (!(dt > 0.0)) throw std::invalid_argument("collect_snapshots: dt must be positive");
    if (steps < 1) throw std::invalid_argument("collect_snapshots: need steps >= 1");
    if (seeds.empty()) throw std::invalid_argument("collect_snapshots: no seeds");
    for (const auto& s : seeds)
        if (s.size() != static_cast<std::size_t>(chart.dim()))
            throw std::invalid_argument("collect_snapshots: seed dimension mismatch");

    SnapshotSet out;
    out.chart = chart;
    out.system = preset.system.name;
    out.dt = dt;

    if (chart.pair_count() == 1) {
        const CompletenessResult c = completeness_classify(preset.system.hamiltonian);
        if (c.kind == CompletenessResult::Kind::incomplete)
            out.warning = "flow admits finite-time escape: " + c.detail;
    }

    using PairList = std::vector<std::pair<std::vector<double>, std::vector<double>>>;
    std::vector<PairList> per_seed(seeds.size());
    std::vector<char> escaped(seeds.size(), 0);
    const int n = static_cast<int>(seeds.size());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        std::vector<double> x = seeds[i], next;
        for (int k = 0; k < steps; ++k) {
            if (!step_flow(preset, x, dt, tol, next)) {
                escaped[i] = 1;
                break;
            }
            per_seed[i].emplace_back(x, next);
            x = next;
        }
    }

    int escape_count = 0;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        escape_count += escaped[i];
        for (auto& pr : per_seed[i]) out.pairs.push_back(std::move(pr));
    }
    if (escape_count > 0) {
        out.partial = true;
        std::ostringstream msg;
        if (!out.warning.empty()) msg << out.warning << "; ";
        msg << escape_count << " of " << seeds.size()
            << " seeds escaped during sampling; their remaining pairs were dropped";
        out.warning = msg.str();
    }
    return out;
}

Dictionary::Dictionary(const Chart& chart, int degree, bool dressed)
    : chart_(chart), degree_(degree) {
    if (degree < 0) throw std::invalid_argument("dictionary: negative degree");
    const GradedBasis basis(chart, degree, dressed);
    for (int i = 0; i < basis.size(); ++i) {
        elements_.push_back(basis.element(i));
        labels_.push_back(basis.label(i));
    }
    validate();
}

Dictionary::Dictionary(std::vector<ExpPoly> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw std::invalid_argument("dictionary: no elements");
    chart_ = elements_[0].chart();
    for (const ExpPoly& e : elements_) {
        if (!(e.chart() == chart_))
            throw ChartMismatchError("dictionary elements use different charts");
        if (e.is_zero()) throw std::invalid_argument("dictionary: zero element");
        int deg = 0;
        for (const auto& term : e.terms()) deg = std::max(deg, term.amplitude.degree());
        degree_ = std::max(degree_, deg);
        labels_.push_back(e.to_text());
    }
    validate();
}

void Dictionary::validate() {
    // Plain polynomial elements are paired under the Gaussian measure;
    // anything else must already decay on its own.
    const Polynomial dress = gaussian_dressing_phase(chart_);
    const auto measure_ready = [&](const ExpPoly& e) {
        return e.is_polynomial() ? ExpPoly::dressed(e.polynomial_part(), dress) : e;
    };
    const int n = size();
    Eigen::MatrixXcd gram(n, n);
    for (int i = 0; i < n; ++i) {
        const ExpPoly fi = measure_ready(elements_[i]);
        for (int j = i; j < n; ++j) {
            const Cplx v = weighted_inner(fi, measure_ready(elements_[j]));
            gram(i, j) = v;
            gram(j, i) = std::conj(v);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram);
    const double lo = solver.eigenvalues().minCoeff();
    const double hi = solver.eigenvalues().maxCoeff();
    gram_condition_ = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    if (!(gram_condition_ < 1e10))
        throw IllConditionedDictionaryError("elements are numerically dependent",
                                            gram_condition_);
}

Eigen::VectorXcd Dictionary::evaluate(std::span<const double> point) const {
    if (point.size() != static_cast<std::size_t>(chart_.dim()))
        throw std::invalid_argument("dictionary: point dimension mismatch");
    Eigen::VectorXcd values(size());
    for (int i = 0; i < size(); ++i) values(i) = elements_[i].evaluate_real(point);
    return values;
}

KoopmanFit fit_koopman_matrix(const SnapshotSet& snapshots, const Dictionary& dict) {
    if (!(snapshots.chart == dict.chart()))
        throw ChartMismatchError("snapshots and dictionary use different charts");
    const int m = dict.size();
    const int n = static_cast<int>(snapshots.pairs.size());
    if (n < m)
        throw std::invalid_argument(
            "fit_koopman_matrix: need at least as many snapshot pairs as dictionary "
            "elements");

    Eigen::MatrixXcd psi(n, m), psi_next(n, m);
    for (int j = 0; j < n; ++j) {
        psi.row(j) = dict.evaluate(snapshots.pairs[j].first).transpose();
        psi_next.row(j) = dict.evaluate(snapshots.pairs[j].second).transpose();
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(psi,
                                           Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smin = sv(m - 1), smax = sv(0);
    const double cond =
        smin > 0.0 ? (smax / smin) * (smax / smin) : std::numeric_limits<double>::infinity();
    if (!(cond < 1e10))
        throw IllConditionedDictionaryError("snapshot data does not resolve the dictionary",
                                            cond);

    KoopmanFit fit;
    fit.matrix = svd.solve(psi_next);
    fit.condition_number = cond;
    fit.dict_degree = dict.degree();
    fit.dt = snapshots.dt;
    return fit;
}

GeneratorSpectrum recover_generator_spectrum(const Eigen::MatrixXcd& K, double dt,
                                             const std::string& system) {
    if (K.rows() == 0 || K.rows() != K.cols())
        throw std::invalid_argument("recover_generator_spectrum: K must be square");
    if (!(dt > 0.0))
        throw std::invalid_argument("recover_generator_spectrum: dt must be positive");

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(K, true);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("recover_generator_spectrum: eigensolve failed");

    GeneratorSpectrum out;
    out.report.system = system;
    out.report.method = "edmd";
    out.report.basis_size = static_cast<int>(K.rows());

    double kappa_max = 0.0;
    for (int i = 0; i < K.rows(); ++i)
        kappa_max = std::max(kappa_max, std::abs(solver.eigenvalues()(i)));
    const double floor = std::max(1e-14 * kappa_max, 1e-300);

    struct Recovered {
        Cplx lambda;
        Eigen::VectorXcd vector;
    };
    std::vector<Recovered> recovered;
    int excluded = 0;
    bool near_cut = false;
    for (int i = 0; i < K.rows(); ++i) {
        const Cplx kappa = solver.eigenvalues()(i);
        if (std::abs(kappa) <= floor) {
            ++excluded;
            continue;
        }
        const Cplx logk = std::log(kappa);
        if (std::abs(logk.imag()) > 0.95 * M_PI) near_cut = true;
        recovered.push_back(
            {Cplx(0.0, 1.0) * logk / dt, solver.eigenvectors().col(i)});
    }
    if (excluded > 0) {
        std::ostringstream msg;
        msg << excluded << " eigenvalue(s) with kappa ~ 0 excluded "
            << "(no finite generator logarithm)";
        out.notes.push_back(msg.str());
    }
    if (near_cut) {
        out.aliasing_guard = false;
        out.notes.push_back(
            "some |Im log kappa| lie within 5% of the principal branch cut at pi; "
            "recovered eigenvalues may be wrapped by 2 pi / dt");
    }

    std::sort(recovered.begin(), recovered.end(), [](const auto& a, const auto& b) {
        if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
        return a.lambda.imag() < b.lambda.imag();
    });
    const double cluster_tol = 1e-8;
    for (std::size_t i = 0; i < recovered.size();) {
        std::size_t j = i;
        Cplx sum = 0.0;
        SpectrumEntry entry;
        while (j < recovered.size() &&
               std::abs(recovered[j].lambda - recovered[i].lambda) <= cluster_tol) {
            sum += recovered[j].lambda;
            entry.vectors.push_back(recovered[j].vector);
            ++j;
        }
        entry.multiplicity = static_cast<int>(j - i);
        entry.value = sum / static_cast<double>(j - i);
        out.report.entries.push_back(std::move(entry));
        i = j;
    }
    return out;
}

}  // namespace koopman
