#include "koopman/chart.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "koopman/errors.hpp"

namespace koopman {

struct Chart::Data {
    ChartKind kind = ChartKind::plain;
    std::vector<std::string> names;
    std::vector<int> conj;  // involution, index per coordinate
    int pairs = 0;
    std::unordered_map<std::string, int> lookup;

    static std::shared_ptr<const Data> make(ChartKind kind,
                                            std::vector<std::string> names,
                                            std::vector<int> conj, int pairs);
};

namespace {

void check_names(const std::vector<std::string>& names) {
    for (const auto& n : names) {
        if (n.empty())
            throw std::invalid_argument("chart: empty coordinate name");
    }
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i + 1; j < names.size(); ++j)
            if (names[i] == names[j])
                throw std::invalid_argument("chart: duplicate coordinate name '" +
                                            names[i] + "'");
}

}  // namespace

std::shared_ptr<const Chart::Data> Chart::Data::make(ChartKind kind,
                                                     std::vector<std::string> names,
                                                     std::vector<int> conj, int pairs) {
    check_names(names);
    auto d = std::make_shared<Chart::Data>();
    d->kind = kind;
    d->names = std::move(names);
    d->conj = std::move(conj);
    d->pairs = pairs;
    for (std::size_t i = 0; i < d->names.size(); ++i)
        d->lookup.emplace(d->names[i], static_cast<int>(i));
    return d;
}

Chart::Chart() : d_(Data::make(ChartKind::plain, {}, {}, 0)) {}

Chart Chart::canonical(std::vector<std::string> base,
                       std::vector<std::string> momentum) {
    if (base.size() != momentum.size())
        throw std::invalid_argument("chart: base/momentum count mismatch");
    if (base.empty())
        throw std::invalid_argument("chart: canonical chart needs at least one pair");
    std::vector<std::string> names(base);
    names.insert(names.end(), momentum.begin(), momentum.end());
    const int dim = static_cast<int>(names.size());
    std::vector<int> conj(dim);
    for (int i = 0; i < dim; ++i) conj[i] = i;
    return Chart(Data::make(ChartKind::canonical, std::move(names), std::move(conj),
                           static_cast<int>(base.size())));
}

Chart Chart::plain(std::vector<std::string> names) {
    const int dim = static_cast<int>(names.size());
    std::vector<int> conj(dim);
    for (int i = 0; i < dim; ++i) conj[i] = i;
    return Chart(Data::make(ChartKind::plain, std::move(names), std::move(conj), 0));
}

Chart Chart::conjugate_pairs(
    std::vector<std::pair<std::string, std::string>> pairs) {
    if (pairs.empty())
        throw std::invalid_argument("chart: conjugate chart needs at least one pair");
    std::vector<std::string> names;
    for (auto& [z, zb] : pairs) {
        names.push_back(z);
        names.push_back(zb);
    }
    const int dim = static_cast<int>(names.size());
    std::vector<int> conj(dim);
    for (int i = 0; i < dim; i += 2) {
        conj[i] = i + 1;
        conj[i + 1] = i;
    }
    return Chart(Data::make(ChartKind::conjugate, std::move(names), std::move(conj),
                           static_cast<int>(pairs.size())));
}

ChartKind Chart::kind() const { return d_->kind; }
int Chart::dim() const { return static_cast<int>(d_->names.size()); }
int Chart::pair_count() const { return d_->pairs; }
const std::vector<std::string>& Chart::names() const { return d_->names; }
const std::string& Chart::name(int i) const { return d_->names.at(i); }

int Chart::index(std::string_view name) const {
    int i = try_index(name);
    if (i < 0)
        throw std::invalid_argument("chart: unknown coordinate '" +
                                    std::string(name) + "'");
    return i;
}

int Chart::try_index(std::string_view name) const {
    auto it = d_->lookup.find(std::string(name));
    return it == d_->lookup.end() ? -1 : it->second;
}

int Chart::base_index(int k) const {
    if (d_->kind != ChartKind::canonical || k < 0 || k >= d_->pairs)
        throw std::invalid_argument("chart: no base coordinate with that index");
    return k;
}

int Chart::momentum_index(int k) const {
    if (d_->kind != ChartKind::canonical || k < 0 || k >= d_->pairs)
        throw std::invalid_argument("chart: no momentum coordinate with that index");
    return d_->pairs + k;
}

int Chart::conjugate_index(int i) const { return d_->conj.at(i); }

bool Chart::operator==(const Chart& o) const {
    if (d_ == o.d_) return true;
    return d_->kind == o.d_->kind && d_->pairs == o.d_->pairs &&
           d_->names == o.d_->names;
}

}  // namespace koopman
