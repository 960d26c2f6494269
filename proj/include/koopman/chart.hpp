#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace koopman {

enum class ChartKind {
    canonical,  // (x_1..x_n, p_1..p_n) with the standard Poisson bracket
    plain,      // bare real coordinates, no pairing structure
    conjugate,  // (z_1, z_1bar, ..., z_n, z_nbar) with the conjugation involution
};

// An ordered list of coordinate names plus the structure the symbolic layer
// needs: canonical charts know their base/momentum split, conjugate charts
// know which coordinate is the formal conjugate of which. Charts are
// immutable; copies share storage and compare structurally.
class Chart {
  public:
    Chart();  // empty plain chart

    static Chart canonical(std::vector<std::string> base,
                           std::vector<std::string> momentum);
    static Chart plain(std::vector<std::string> names);
    static Chart conjugate_pairs(
        std::vector<std::pair<std::string, std::string>> pairs);

    ChartKind kind() const;
    int dim() const;
    // Number of (base, momentum) or (z, zbar) pairs; 0 for plain charts.
    int pair_count() const;

    const std::vector<std::string>& names() const;
    const std::string& name(int i) const;
    int index(std::string_view name) const;      // throws on unknown name
    int try_index(std::string_view name) const;  // -1 on unknown name

    // Canonical charts only.
    int base_index(int k) const;
    int momentum_index(int k) const;

    // Involution behind complex conjugation: identity on real coordinates,
    // swaps z <-> zbar on conjugate charts.
    int conjugate_index(int i) const;

    bool operator==(const Chart& o) const;
    bool operator!=(const Chart& o) const { return !(*this == o); }

  private:
    struct Data;
    explicit Chart(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
    std::shared_ptr<const Data> d_;
};

}  // namespace koopman
