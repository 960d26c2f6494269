#pragma once

#include <vector>

#include "koopman/exppoly.hpp"
#include "koopman/polynomial.hpp"

namespace koopman {

// Invertible affine change of coordinates between two charts, stored as the
// image of every new coordinate in the old chart and of every old coordinate
// in the new chart. Construction checks that both directions are affine and
// that they compose to the identity (coefficient distance below 1e-12; maps
// with dyadic entries round-trip bitwise).
class ChartMap {
  public:
    ChartMap(Chart old_chart, Chart new_chart,
             std::vector<Polynomial> new_in_old,
             std::vector<Polynomial> old_in_new);

    const Chart& old_chart() const { return old_; }
    const Chart& new_chart() const { return new_; }
    const std::vector<Polynomial>& new_in_old() const { return new_in_old_; }
    const std::vector<Polynomial>& old_in_new() const { return old_in_new_; }

    // Rewrite a function given over the old chart in the new coordinates
    // (substitutes old_in_new), and back.
    Polynomial to_new(const Polynomial& f) const;
    Polynomial to_old(const Polynomial& f) const;
    ExpPoly to_new(const ExpPoly& f) const;
    ExpPoly to_old(const ExpPoly& f) const;

    ChartMap inverse() const;

    // d(new_j)/d(old_u), constant because the map is affine.
    Cplx jacobian(int new_j, int old_u) const;

    // --- standard maps ---

    // Pairs each canonical (x_k, p_k) into z_k = x_k + i p_k with conjugate
    // zbar_k = x_k - i p_k. Names: ("z","zbar") for one pair, else
    // ("z1","z1bar",...).
    static ChartMap complexification(const Chart& canonical_chart);

    // For a two-pair canonical chart: z1 = x1 + i x2 pairs the base plane,
    // z2 = i p1 - p2 pairs the momentum plane. Planar rotation-dilation
    // lifts act diagonally in this chart.
    static ChartMap planar_complexification(const Chart& canonical_chart);

    // Rotates a one-pair canonical chart by 45 degrees: x = (X + P)/sqrt2,
    // p = (X - P)/sqrt2. Turns the product Hamiltonian x*p into the
    // difference of squares (P^2 - X^2)/2 on the new canonical chart (X, P).
    static ChartMap half_turn_to_squares(const Chart& canonical_chart);

  private:
    Chart old_;
    Chart new_;
    std::vector<Polynomial> new_in_old_;
    std::vector<Polynomial> old_in_new_;
};

}  // namespace koopman
