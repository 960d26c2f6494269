#include "koopman/checks.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace koopman {

Cplx selfadjointness_residual(const FirstOrderOperator& op, const ExpPoly& f,
                              const ExpPoly& g) {
    return weighted_inner(f, op.apply(g)) - weighted_inner(op.apply(f), g);
}

Polynomial distributional_eigencheck(
    const FirstOrderOperator& op, const ExpPoly& f, Cplx lambda,
    const std::vector<std::pair<std::string, Cplx>>& pins) {
    ExpPoly residual = op.apply(f) - f * lambda;
    residual = residual.substitute_values(pins);
    if (residual.is_zero()) return Polynomial(op.chart());
    if (residual.terms().size() > 1)
        throw std::invalid_argument(
            "distributional_eigencheck: residual spreads over several "
            "exponential factors; pass a single-phase eigenfunction");
    return residual.terms().front().amplitude;
}

double representation_check(AngularForm form, const ExpPoly& f, double rate,
                            int points, double h, unsigned seed) {
    const Chart& chart = f.chart();
    if (chart.kind() != ChartKind::canonical || chart.dim() != 2)
        throw std::invalid_argument(
            "representation_check: f must live on a one-pair canonical chart");
    if (points < 1) throw std::invalid_argument("representation_check: points < 1");

    const Polynomial u = Polynomial::coordinate(chart, 0);
    const Polynomial v = Polynomial::coordinate(chart, 1);
    Polynomial hamiltonian =
        form == AngularForm::rotation
            ? (u * u + v * v) * Cplx(0.5 * rate, 0.0)
            : (v * v - u * u) * Cplx(0.5 * rate, 0.0);
    const FirstOrderOperator op = build_liouville(hamiltonian);
    const ExpPoly op_f = op.apply(f);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> radius(0.5, 2.0);
    std::uniform_real_distribution<double> angle_full(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> angle_boost(-1.5, 1.5);

    auto curve = [&](double scale, double param) -> std::vector<double> {
        if (form == AngularForm::rotation)
            return {scale * std::cos(param), -scale * std::sin(param)};
        return {scale * std::sinh(param), scale * std::cosh(param)};
    };

    double worst = 0.0;
    for (int sample = 0; sample < points; ++sample) {
        double scale = radius(rng);
        double param;
        if (form == AngularForm::rotation) {
            param = angle_full(rng);
        } else {
            param = angle_boost(rng);
            if (sample % 2 == 1) scale = -scale;  // cover the P < 0 sheet
        }
        auto along = [&](double q) {
            const std::vector<double> pt = curve(scale, q);
            return f.evaluate_real(pt);
        };
        const Cplx deriv = (-along(param + 2 * h) + 8.0 * along(param + h) -
                            8.0 * along(param - h) + along(param - 2 * h)) /
                           (12.0 * h);
        const std::vector<double> pt = curve(scale, param);
        const Cplx lhs = op_f.evaluate_real(pt);
        const Cplx rhs = Cplx(0.0, rate) * deriv;
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

CompletenessResult completeness_classify(const Polynomial& hamiltonian) {
    CompletenessResult out;
    out.detail = "hamiltonian does not match the template -c x^n p";
    const Chart& chart = hamiltonian.chart();
    if (chart.kind() != ChartKind::canonical || chart.pair_count() != 1) return out;
    if (hamiltonian.term_count() != 1) return out;
    const auto& [exps, coeff] = *hamiltonian.terms().begin();
    const int xi = chart.base_index(0);
    const int pi = chart.momentum_index(0);
    const int n = exps[xi];
    if (exps[pi] != 1 || n < 1) return out;
    if (coeff.imag() != 0.0 || coeff.real() >= 0.0) return out;
    const double c = -coeff.real();

    out.power = n;
    std::ostringstream text;
    if (n == 1) {
        out.kind = CompletenessResult::Kind::complete;
        text << "base flow x(t) = exp(-" << c << " t) x0 exists for all t";
    } else {
        out.kind = CompletenessResult::Kind::incomplete;
        text << "base flow x(t) = x0 (1 + " << (n - 1) * c << " x0^" << (n - 1)
             << " t)^(-1/" << (n - 1) << ") leaves every compact set at "
             << "t* = -1/(" << (n - 1) * c << " x0^" << (n - 1) << ")";
    }
    out.detail = text.str();
    return out;
}

}  // namespace koopman
