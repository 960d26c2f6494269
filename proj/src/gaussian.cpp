#include "koopman/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "koopman/errors.hpp"

namespace koopman {

namespace {

constexpr double kPi = std::numbers::pi;

double factorial(int n) {
    double r = 1.0;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
}

Cplx cpow(Cplx b, int e) {
    Cplx r(1.0, 0.0);
    while (e-- > 0) r *= b;
    return r;
}

// integral of v^j e^{q v^2} dv over the real line, Re q < 0:
// zero for odd j, sqrt(pi/(-q)) * (j-1)!! / (2(-q))^{j/2} for even j.
Cplx centered_line_moment(int j, Cplx q) {
    if (j % 2 == 1) return {0.0, 0.0};
    Cplx m = std::sqrt(kPi / (-q));
    for (int r = 1; 2 * r <= j; ++r)
        m *= static_cast<double>(2 * r - 1) / (2.0 * (-q));
    return m;
}

// integral of u^k e^{q u^2 + l u} du, Re q < 0. Completing the square shifts
// u = v - l/(2q) and leaves a polynomial against a centered Gaussian.
Cplx line_moment(int k, Cplx q, Cplx l) {
    if (l == Cplx(0.0, 0.0)) return centered_line_moment(k, q);
    const Cplx s = -l / (2.0 * q);
    Cplx sum(0.0, 0.0);
    for (int j = 0; j <= k; j += 2)
        sum += binomial(k, j) * cpow(s, k - j) * centered_line_moment(j, q);
    return std::exp(-l * l / (4.0 * q)) * sum;
}

// integral of z^a zbar^b e^{q z zbar + beta z + delta zbar} d mu over one
// conjugate pair, Re q < 0. With c = -q the centered moments are
// pi j! / c^{j+1} on the diagonal; linear terms shift z by delta/c and zbar
// by beta/c and contribute e^{beta delta / c}.
Cplx pair_moment(int a, int b, Cplx q, Cplx beta, Cplx delta) {
    const Cplx c = -q;
    if (beta == Cplx(0.0, 0.0) && delta == Cplx(0.0, 0.0)) {
        if (a != b) return {0.0, 0.0};
        return kPi * factorial(a) / cpow(c, a + 1);
    }
    Cplx sum(0.0, 0.0);
    for (int j = 0; j <= a; ++j) {
        if (j > b) break;
        sum += binomial(a, j) * binomial(b, j) * cpow(delta / c, a - j) *
               cpow(beta / c, b - j) * kPi * factorial(j) / cpow(c, j + 1);
    }
    return std::exp(beta * delta / c) * sum;
}

struct PhaseFactors {
    // Indexed by pair (conjugate charts) or by coordinate (otherwise).
    std::vector<Cplx> quad;    // q coefficients
    std::vector<Cplx> lin_a;   // l (real coord) or beta (z)
    std::vector<Cplx> lin_b;   // delta (zbar), unused for real coords
};

// Splits a phase into independent per-coordinate / per-pair Gaussian factors
// and verifies integrability. The constant part is already folded into the
// amplitude by ExpPoly's canonical form.
PhaseFactors split_phase(const Chart& chart, const Polynomial& phase) {
    const bool pairs = chart.kind() == ChartKind::conjugate;
    const int groups = pairs ? chart.pair_count() : chart.dim();
    PhaseFactors f;
    f.quad.assign(groups, Cplx(0.0, 0.0));
    f.lin_a.assign(groups, Cplx(0.0, 0.0));
    f.lin_b.assign(groups, Cplx(0.0, 0.0));

    for (const auto& [e, c] : phase.terms()) {
        int deg = total_degree(e);
        if (deg == 0) continue;
        if (deg > 2)
            throw std::invalid_argument(
                "gaussian integral: phase term of degree > 2: " +
                monomial_text(chart, e));
        // Identify the at most two active coordinates.
        int first = -1, second = -1;
        for (int i = 0; i < chart.dim(); ++i) {
            for (int r = 0; r < e[i]; ++r) {
                if (first < 0)
                    first = i;
                else
                    second = i;
            }
        }
        if (pairs) {
            if (deg == 1) {
                if (first % 2 == 0)
                    f.lin_a[first / 2] += c;
                else
                    f.lin_b[first / 2] += c;
                continue;
            }
            if (chart.conjugate_index(first) != second)
                throw std::invalid_argument(
                    "gaussian integral: phase not reducible to z*zbar factors: " +
                    monomial_text(chart, e));
            f.quad[first / 2] += c;
        } else {
            if (deg == 1) {
                f.lin_a[first] += c;
                continue;
            }
            if (first != second)
                throw std::invalid_argument(
                    "gaussian integral: phase couples coordinates " +
                    chart.name(first) + " and " + chart.name(second));
            f.quad[first] += c;
        }
    }

    for (int g = 0; g < groups; ++g) {
        if (!(f.quad[g].real() < 0.0)) {
            std::string where = pairs ? chart.name(2 * g) + "*" + chart.name(2 * g + 1)
                                      : chart.name(g);
            throw DivergentPairingError("no Gaussian decay in " + where);
        }
    }
    return f;
}

}  // namespace

Cplx gaussian_moment(int n, int m) {
    if (n < 0 || m < 0)
        throw std::invalid_argument("gaussian moment: negative exponent");
    if (n != m) return {0.0, 0.0};
    return {kPi * factorial(n), 0.0};
}

Cplx gaussian_integral(const ExpPoly& f) {
    const Chart& chart = f.chart();
    if (chart.dim() == 0)
        throw std::invalid_argument("gaussian integral over an empty chart");
    const bool pairs = chart.kind() == ChartKind::conjugate;

    Cplx total(0.0, 0.0);
    for (const auto& term : f.terms()) {
        PhaseFactors ph = split_phase(chart, term.phase);
        for (const auto& [e, c] : term.amplitude.terms()) {
            Cplx contrib = c;
            if (pairs) {
                for (int g = 0; g < chart.pair_count(); ++g)
                    contrib *= pair_moment(e[2 * g], e[2 * g + 1], ph.quad[g],
                                           ph.lin_a[g], ph.lin_b[g]);
            } else {
                for (int i = 0; i < chart.dim(); ++i)
                    contrib *= line_moment(e[i], ph.quad[i], ph.lin_a[i]);
            }
            total += contrib;
        }
    }
    return total;
}

Cplx weighted_inner(const ExpPoly& f, const ExpPoly& g) {
    return gaussian_integral(f.conjugate() * g);
}

Polynomial gaussian_dressing_phase(const Chart& chart) {
    Polynomial s(chart);
    if (chart.kind() == ChartKind::conjugate) {
        for (int g = 0; g < chart.pair_count(); ++g) {
            MultiIndex e(chart.dim(), 0);
            e[2 * g] = 1;
            e[2 * g + 1] = 1;
            s.add_term(std::move(e), Cplx(-0.5, 0.0));
        }
    } else {
        for (int i = 0; i < chart.dim(); ++i) {
            MultiIndex e(chart.dim(), 0);
            e[i] = 2;
            s.add_term(std::move(e), Cplx(-0.5, 0.0));
        }
    }
    return s;
}

}  // namespace koopman
