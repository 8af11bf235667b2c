#pragma once

#include <cstdint>
#include <vector>

#include "hgntr/metrics.hpp"
#include "hgntr/tensor.hpp"

namespace hgntr {

struct KMeansOptions {
    std::size_t k = 2;
    std::uint64_t seed = 0;
    std::size_t restarts = 10;
    std::size_t max_iterations = 300;
};

struct KMeansRun {
    Labeling labeling;
    Matrix centroids; // k x d
    double wcss = 0.0;
    std::vector<double> wcss_history; // one entry per Lloyd iteration
};

struct KMeansResult {
    KMeansRun best; // lowest within-cluster sum of squares
    std::vector<KMeansRun> runs;
};

/// Lloyd's algorithm with k-means++ seeding on the rows of `features`.
/// An emptied cluster is reseeded at the point farthest from its centroid.
KMeansResult kmeans(const Matrix& features, const KMeansOptions& options);

} // namespace hgntr
