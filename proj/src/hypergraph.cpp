#include "hgntr/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace hgntr {

namespace {

Matrix pairwise_squared_distances(const Matrix& samples)
{
    const Eigen::Index n = samples.rows();
    const Matrix cols = samples.transpose(); // one sample per contiguous column
    Matrix d = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = (cols.col(i) - cols.col(j)).squaredNorm();
            d(i, j) = v;
            d(j, i) = v;
        }
    return d;
}

void check_samples(const Matrix& samples)
{
    if (samples.rows() < 2) throw std::invalid_argument("need at least two samples");
    if (!samples.allFinite()) throw std::invalid_argument("samples contain non-finite entries");
}

// Indices of the k nearest other samples to i, nearest first; ties by index.
std::vector<std::size_t> nearest_neighbours(const Matrix& sq_dist, std::size_t i, std::size_t k)
{
    const auto n = static_cast<std::size_t>(sq_dist.rows());
    std::vector<std::size_t> order;
    order.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j)
        if (j != i) order.push_back(j);
    auto closer = [&](std::size_t a, std::size_t b) {
        const double da = sq_dist(i, a), db = sq_dist(i, b);
        return da < db || (da == db && a < b);
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      closer);
    order.resize(k);
    return order;
}

void check_k(std::size_t k, std::size_t n)
{
    if (k < 1 || k >= n)
        throw std::invalid_argument("neighbour count k=" + std::to_string(k)
                                    + " must satisfy 1 <= k < n_samples=" + std::to_string(n));
}

Incidence knn_incidence(const Matrix& sq_dist, std::size_t k)
{
    const auto n = static_cast<std::size_t>(sq_dist.rows());
    check_k(k, n);
    std::vector<std::vector<std::size_t>> edges(n);
    for (std::size_t i = 0; i < n; ++i) {
        edges[i].push_back(i);
        for (auto j : nearest_neighbours(sq_dist, i, k)) edges[i].push_back(j);
    }
    return incidence_from_edges(n, edges);
}

Affinity affinity_from_distances(const Matrix& sq_dist)
{
    const Eigen::Index n = sq_dist.rows();
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) total += std::sqrt(sq_dist(i, j));
    const double sigma = total / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
    if (!(sigma > 0.0))
        throw std::domain_error("degenerate samples: mean pairwise distance is zero");
    Affinity a;
    a.sigma = sigma;
    a.values = (-sq_dist.array() / (sigma * sigma)).exp().matrix();
    return a;
}

} // namespace

Incidence incidence_from_edges(std::size_t n_vertices,
                               const std::vector<std::vector<std::size_t>>& edges)
{
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (edges[e].empty())
            throw std::invalid_argument("hyperedge " + std::to_string(e) + " is empty");
        std::set<std::size_t> members(edges[e].begin(), edges[e].end());
        for (auto v : members) {
            if (v >= n_vertices) throw std::out_of_range("hyperedge vertex out of range");
            triplets.emplace_back(static_cast<int>(v), static_cast<int>(e), 1.0);
        }
    }
    Incidence h(static_cast<Eigen::Index>(n_vertices), static_cast<Eigen::Index>(edges.size()));
    h.setFromTriplets(triplets.begin(), triplets.end());
    h.makeCompressed();
    return h;
}

Incidence build_knn_hyperedges(const Matrix& samples, std::size_t k)
{
    check_samples(samples);
    return knn_incidence(pairwise_squared_distances(samples), k);
}

Affinity affinity(const Matrix& samples)
{
    check_samples(samples);
    return affinity_from_distances(pairwise_squared_distances(samples));
}

Vector edge_weights(const Incidence& h, const Matrix& affinity)
{
    if (h.rows() != h.cols() || h.rows() != affinity.rows())
        throw std::invalid_argument("edge weights need one anchored edge per vertex");
    Vector w = Vector::Zero(h.cols());
    for (Eigen::Index e = 0; e < h.outerSize(); ++e) {
        bool any = false;
        for (Incidence::InnerIterator it(h, e); it; ++it) {
            w(e) += affinity(e, it.row());
            any = true;
        }
        if (!any) throw std::invalid_argument("hyperedge " + std::to_string(e) + " is empty");
    }
    return w;
}

LaplacianParts laplacian(const Incidence& h, const Vector& weights)
{
    if (weights.size() != h.cols())
        throw std::invalid_argument("need one weight per hyperedge");
    Vector edge_deg = Vector::Zero(h.cols());
    for (Eigen::Index e = 0; e < h.outerSize(); ++e)
        for (Incidence::InnerIterator it(h, e); it; ++it) edge_deg(e) += it.value();
    if ((edge_deg.array() <= 0.0).any()) throw std::invalid_argument("empty hyperedge");

    const Vector scale = weights.cwiseQuotient(edge_deg);
    const Incidence scaled = h * scale.asDiagonal();
    LaplacianParts parts;
    parts.similarity = Matrix(scaled * h.transpose());
    parts.degrees = h * weights;
    return parts;
}

Matrix Hypergraph::similarity() const
{
    return hgntr::laplacian(incidence, edge_weights).similarity;
}

Matrix Hypergraph::laplacian() const
{
    auto parts = hgntr::laplacian(incidence, edge_weights);
    Matrix l = -parts.similarity;
    l.diagonal() += parts.degrees;
    return l;
}

Hypergraph make_hypergraph(Incidence h, Vector weights, double sigma)
{
    if (weights.size() != h.cols()) throw std::invalid_argument("need one weight per hyperedge");
    Hypergraph g;
    g.edge_degrees = Vector::Zero(h.cols());
    for (Eigen::Index e = 0; e < h.outerSize(); ++e)
        for (Incidence::InnerIterator it(h, e); it; ++it) g.edge_degrees(e) += it.value();
    g.vertex_degrees = h * weights;
    g.incidence = std::move(h);
    g.edge_weights = std::move(weights);
    g.sigma = sigma;
    return g;
}

Hypergraph build_hypergraph(const Matrix& samples, std::size_t k)
{
    check_samples(samples);
    const Matrix sq_dist = pairwise_squared_distances(samples);
    Incidence h = knn_incidence(sq_dist, k);
    const Affinity a = affinity_from_distances(sq_dist);
    Vector w = edge_weights(h, a.values);
    return make_hypergraph(std::move(h), std::move(w), a.sigma);
}

Hypergraph build_pairwise_graph(const Matrix& samples, std::size_t k)
{
    check_samples(samples);
    const Matrix sq_dist = pairwise_squared_distances(samples);
    const auto n = static_cast<std::size_t>(samples.rows());
    check_k(k, n);
    const Affinity a = affinity_from_distances(sq_dist);

    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (auto j : nearest_neighbours(sq_dist, i, k)) pairs.emplace(std::min(i, j), std::max(i, j));

    std::vector<std::vector<std::size_t>> edges;
    Vector w(static_cast<Eigen::Index>(pairs.size()));
    Eigen::Index e = 0;
    for (const auto& [i, j] : pairs) {
        edges.push_back({i, j});
        w(e++) = a.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    return make_hypergraph(incidence_from_edges(n, edges), std::move(w), a.sigma);
}

} // namespace hgntr
