#include "hgntr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace hgntr {

namespace {

void check_labelings(const Labeling& truth, const Labeling& pred)
{
    if (truth.size() != pred.size())
        throw std::invalid_argument("labelings have different lengths");
    if (truth.size() == 0) throw std::invalid_argument("empty labeling");
    auto check = [](const Labeling& l) {
        for (int v : l.labels)
            if (v < 0 || v >= l.n_clusters) throw std::invalid_argument("label id out of range");
    };
    check(truth);
    check(pred);
}

double entropy_bits(const std::vector<double>& counts, double n)
{
    double h = 0.0;
    for (double c : counts)
        if (c > 0.0) h -= (c / n) * std::log2(c / n);
    return h;
}

std::size_t occupied(const std::vector<double>& counts)
{
    return static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(),
                                                  [](double c) { return c > 0.0; }));
}

} // namespace

Labeling Labeling::from_raw(const std::vector<int>& raw)
{
    std::map<int, int> ids;
    Labeling l;
    l.labels.reserve(raw.size());
    for (int v : raw) {
        auto [it, inserted] = ids.emplace(v, static_cast<int>(ids.size()));
        l.labels.push_back(it->second);
    }
    l.n_clusters = static_cast<int>(ids.size());
    return l;
}

std::vector<std::vector<std::size_t>> contingency(const Labeling& truth, const Labeling& pred)
{
    check_labelings(truth, pred);
    std::vector<std::vector<std::size_t>> table(
        static_cast<std::size_t>(truth.n_clusters),
        std::vector<std::size_t>(static_cast<std::size_t>(pred.n_clusters), 0));
    for (std::size_t i = 0; i < truth.size(); ++i)
        ++table[static_cast<std::size_t>(truth.labels[i])][static_cast<std::size_t>(pred.labels[i])];
    return table;
}

std::vector<std::size_t> max_weight_assignment(const std::vector<std::vector<double>>& weights)
{
    // Shortest augmenting path formulation on costs = -weights (1-based potentials).
    const std::size_t n = weights.size();
    for (const auto& row : weights)
        if (row.size() != n) throw std::invalid_argument("assignment matrix must be square");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = -weights[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> assignment(n);
    for (std::size_t j = 1; j <= n; ++j) assignment[p[j] - 1] = j - 1;
    return assignment;
}

double accuracy(const Labeling& truth, const Labeling& pred)
{
    const auto table = contingency(truth, pred);
    const std::size_t dim = std::max<std::size_t>(truth.n_clusters, pred.n_clusters);
    // Square weights indexed [pred cluster][truth class], zero padded.
    std::vector<std::vector<double>> w(dim, std::vector<double>(dim, 0.0));
    for (std::size_t c = 0; c < table.size(); ++c)
        for (std::size_t k = 0; k < table[c].size(); ++k) w[k][c] = static_cast<double>(table[c][k]);
    const auto map = max_weight_assignment(w);
    double matched = 0.0;
    for (std::size_t k = 0; k < dim; ++k) matched += w[k][map[k]];
    return matched / static_cast<double>(truth.size());
}

double nmi(const Labeling& truth, const Labeling& pred)
{
    const auto table = contingency(truth, pred);
    const double n = static_cast<double>(truth.size());
    std::vector<double> row(table.size(), 0.0), col(table.front().size(), 0.0);
    for (std::size_t c = 0; c < table.size(); ++c)
        for (std::size_t k = 0; k < table[c].size(); ++k) {
            row[c] += static_cast<double>(table[c][k]);
            col[k] += static_cast<double>(table[c][k]);
        }
    const bool truth_single = occupied(row) == 1;
    const bool pred_single = occupied(col) == 1;
    if (truth_single && pred_single) return 1.0;
    if (truth_single || pred_single) return 0.0;

    double mi = 0.0;
    for (std::size_t c = 0; c < table.size(); ++c)
        for (std::size_t k = 0; k < table[c].size(); ++k) {
            const double joint = static_cast<double>(table[c][k]);
            if (joint == 0.0) continue;
            mi += (joint / n) * std::log2(joint * n / (row[c] * col[k]));
        }
    const double norm = std::max(entropy_bits(row, n), entropy_bits(col, n));
    return std::clamp(mi / norm, 0.0, 1.0);
}

double purity(const Labeling& truth, const Labeling& pred)
{
    const auto table = contingency(truth, pred);
    double total = 0.0;
    for (std::size_t k = 0; k < static_cast<std::size_t>(pred.n_clusters); ++k) {
        std::size_t best = 0;
        for (const auto& row : table) best = std::max(best, row[k]);
        total += static_cast<double>(best);
    }
    return total / static_cast<double>(truth.size());
}

Metrics evaluate(const Labeling& truth, const Labeling& pred)
{
    return Metrics{accuracy(truth, pred), nmi(truth, pred), purity(truth, pred)};
}

} // namespace hgntr
