#include "hgntr/clustering.hpp"

#include <limits>
#include <random>
#include <stdexcept>

namespace hgntr {

namespace {

// Assigns every point to its nearest centroid (lowest index on ties) and
// returns the total within-cluster sum of squares.
double assign(const Matrix& points, const Matrix& centroids, std::vector<int>& labels,
              Vector& sq_dist)
{
    const Eigen::Index n = points.cols();
    const Eigen::Index k = centroids.cols();
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        int arg = 0;
        for (Eigen::Index c = 0; c < k; ++c) {
            const double d = (points.col(i) - centroids.col(c)).squaredNorm();
            if (d < best) {
                best = d;
                arg = static_cast<int>(c);
            }
        }
        labels[static_cast<std::size_t>(i)] = arg;
        sq_dist(i) = best;
        total += best;
    }
    return total;
}

Matrix plus_plus_seeds(const Matrix& points, std::size_t k, std::mt19937_64& rng)
{
    const Eigen::Index n = points.cols();
    Matrix centroids(points.rows(), static_cast<Eigen::Index>(k));
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    centroids.col(0) = points.col(pick(rng));
    Vector nearest = Vector::Constant(n, std::numeric_limits<double>::infinity());
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t c = 1; c < k; ++c) {
        const auto prev = static_cast<Eigen::Index>(c - 1);
        for (Eigen::Index i = 0; i < n; ++i)
            nearest(i) = std::min(nearest(i), (points.col(i) - centroids.col(prev)).squaredNorm());
        const double total = nearest.sum();
        Eigen::Index chosen = 0;
        if (total > 0.0) {
            double target = unif(rng) * total;
            chosen = n - 1;
            for (Eigen::Index i = 0; i < n; ++i) {
                target -= nearest(i);
                if (target < 0.0) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = pick(rng); // all points coincide with existing seeds
        }
        centroids.col(static_cast<Eigen::Index>(c)) = points.col(chosen);
    }
    return centroids;
}

KMeansRun lloyd(const Matrix& points, std::size_t k, std::size_t max_iterations,
                std::mt19937_64& rng)
{
    const Eigen::Index n = points.cols();
    KMeansRun run;
    run.centroids = plus_plus_seeds(points, k, rng);
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    Vector sq_dist(n);
    double wcss = assign(points, run.centroids, labels, sq_dist);
    run.wcss_history.push_back(wcss);

    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
        Matrix sums = Matrix::Zero(points.rows(), static_cast<Eigen::Index>(k));
        std::vector<std::size_t> counts(k, 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(labels[static_cast<std::size_t>(i)]);
            sums.col(static_cast<Eigen::Index>(c)) += points.col(i);
            ++counts[c];
        }
        for (std::size_t c = 0; c < k; ++c) {
            const auto ci = static_cast<Eigen::Index>(c);
            if (counts[c] > 0) {
                run.centroids.col(ci) = sums.col(ci) / static_cast<double>(counts[c]);
            } else {
                Eigen::Index far = 0;
                sq_dist.maxCoeff(&far);
                run.centroids.col(ci) = points.col(far);
                sq_dist(far) = 0.0;
            }
        }
        const std::vector<int> previous = labels;
        wcss = assign(points, run.centroids, labels, sq_dist);
        run.wcss_history.push_back(wcss);
        if (labels == previous) break;
    }
    run.wcss = wcss;
    run.labeling.labels = std::move(labels);
    run.labeling.n_clusters = static_cast<int>(k);
    run.centroids.transposeInPlace();
    return run;
}

} // namespace

KMeansResult kmeans(const Matrix& features, const KMeansOptions& options)
{
    const auto n = static_cast<std::size_t>(features.rows());
    if (options.k < 1 || options.k > n)
        throw std::invalid_argument("k-means needs 1 <= k <= n_samples");
    if (options.restarts < 1) throw std::invalid_argument("k-means needs at least one restart");
    if (!features.allFinite()) throw std::invalid_argument("features contain non-finite entries");

    const Matrix points = features.transpose();
    std::mt19937_64 rng(options.seed);
    KMeansResult result;
    for (std::size_t r = 0; r < options.restarts; ++r) {
        result.runs.push_back(lloyd(points, options.k, options.max_iterations, rng));
        if (r == 0 || result.runs.back().wcss < result.best.wcss) result.best = result.runs.back();
    }
    return result;
}

} // namespace hgntr
