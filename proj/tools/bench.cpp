#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "koopman/flow.hpp"
#include "koopman/operators.hpp"
#include "koopman/presets.hpp"
#include "koopman/quadrature.hpp"
#include "koopman/spectrum.hpp"

using namespace koopman;

namespace {

double best_of(int repeats, const std::function<void()>& body) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        body();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

void report(const char* name, double serial, double parallel, bool match) {
    std::printf("%-18s serial %8.4f s   parallel %8.4f s   speedup %5.2fx   %s\n",
                name, serial, parallel, serial / parallel,
                match ? "bitwise match" : "MISMATCH");
}

bool blocks_equal(const std::vector<Eigen::MatrixXcd>& a,
                  const std::vector<Eigen::MatrixXcd>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t d = 0; d < a.size(); ++d)
        if (a[d].rows() != b[d].rows() || (a[d].array() != b[d].array()).any())
            return false;
    return true;
}

}  // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    bool all_match = true;

    {
        const SystemPreset preset =
            make_preset("damped-oscillator", {.gamma = 0.4, .omega = 1.1});
        const FirstOrderOperator op = build_liouville(preset.system);
        const GradedBasis basis(preset.system.chart, 9);
        std::vector<Eigen::MatrixXcd> serial_blocks, parallel_blocks;
        const double ts =
            best_of(3, [&] { serial_blocks = matrix_on_basis_serial(op, basis); });
        const double tp =
            best_of(3, [&] { parallel_blocks = matrix_on_basis(op, basis); });
        const bool match = blocks_equal(serial_blocks, parallel_blocks);
        all_match = all_match && match;
        report("matrix_on_basis", ts, tp, match);
    }

    {
        const QuadratureGrid grid = tensor_gauss_hermite({1.0, 1.3, 0.8}, 48);
        const auto f = [](std::span<const double> u) {
            double q = 0.0, s = 1.0;
            for (double v : u) {
                q += v * v;
                s *= std::cos(v);
            }
            return Cplx(std::exp(-0.5 * q), s);
        };
        Cplx serial_sum, parallel_sum;
        const double ts = best_of(3, [&] { serial_sum = grid_integrate_serial(grid, f); });
        const double tp = best_of(3, [&] { parallel_sum = grid_integrate(grid, f); });
        const bool match = serial_sum == parallel_sum;
        all_match = all_match && match;
        report("grid_integrate", ts, tp, match);
    }

    {
        const SystemPreset preset = make_preset("harmonic", {.omega = 1.0});
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<std::vector<double>> starts(96, std::vector<double>(2));
        for (auto& s : starts)
            for (auto& v : s) v = u(rng);
        std::vector<Trajectory> serial_runs, parallel_runs;
        const double ts = best_of(
            3, [&] { serial_runs = evolve_ensemble_serial(preset.system, starts, 25.0); });
        const double tp =
            best_of(3, [&] { parallel_runs = evolve_ensemble(preset.system, starts, 25.0); });
        bool match = serial_runs.size() == parallel_runs.size();
        for (std::size_t k = 0; match && k < serial_runs.size(); ++k)
            match = serial_runs[k].times == parallel_runs[k].times &&
                    serial_runs[k].states == parallel_runs[k].states;
        all_match = all_match && match;
        report("evolve_ensemble", ts, tp, match);
    }

    return all_match ? 0 : 1;
}
