#pragma once

#include <cstddef>
#include <vector>

namespace hgntr {

/// Cluster assignment with ids in [0, n_clusters).
struct Labeling {
    std::vector<int> labels;
    int n_clusters = 0;

    std::size_t size() const noexcept { return labels.size(); }

    /// Maps arbitrary integer ids to 0..k-1 in order of first appearance.
    static Labeling from_raw(const std::vector<int>& raw);
};

struct Metrics {
    double acc = 0.0;
    double nmi = 0.0;
    double pur = 0.0;
};

/// Contingency counts, rows = truth classes, cols = predicted clusters.
std::vector<std::vector<std::size_t>> contingency(const Labeling& truth, const Labeling& pred);

/// Fraction matched under the best one-to-one cluster-to-class mapping.
double accuracy(const Labeling& truth, const Labeling& pred);

/// Mutual information (log base 2) over max(H(truth), H(pred)).
/// Both sides single-cluster gives 1, exactly one side single-cluster gives 0.
double nmi(const Labeling& truth, const Labeling& pred);

/// Size-weighted purity: sum over predicted clusters of the majority count, over n.
double purity(const Labeling& truth, const Labeling& pred);

Metrics evaluate(const Labeling& truth, const Labeling& pred);

/// Maximum-weight perfect assignment on a square matrix (Hungarian method).
/// Returns assignment[row] = column.
std::vector<std::size_t> max_weight_assignment(const std::vector<std::vector<double>>& weights);

} // namespace hgntr
