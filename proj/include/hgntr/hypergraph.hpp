#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "hgntr/tensor.hpp"

namespace hgntr {

using Incidence = Eigen::SparseMatrix<double>;

/// Weighted hypergraph over samples. Rows of the incidence matrix are
/// vertices, columns are hyperedges.
struct Hypergraph {
    Incidence incidence;
    Vector edge_weights;
    Vector vertex_degrees;
    Vector edge_degrees;
    double sigma = 0.0;

    std::size_t n_vertices() const { return static_cast<std::size_t>(incidence.rows()); }
    std::size_t n_edges() const { return static_cast<std::size_t>(incidence.cols()); }

    /// S = H W D_E^{-1} H^T
    Matrix similarity() const;
    /// L = D_V - S
    Matrix laplacian() const;
};

struct LaplacianParts {
    Matrix similarity;
    Vector degrees;
};

struct Affinity {
    Matrix values;
    double sigma = 0.0;
};

/// One hyperedge per sample: the sample itself plus its k nearest neighbours
/// under Euclidean distance. Distance ties go to the lower sample index.
Incidence build_knn_hyperedges(const Matrix& samples, std::size_t k);

/// A_ij = exp(-|v_i - v_j|^2 / sigma^2), sigma the mean distance over distinct pairs.
Affinity affinity(const Matrix& samples);

/// W_i = sum of A(i, j) over members j of the edge anchored at vertex i.
Vector edge_weights(const Incidence& h, const Matrix& affinity);

LaplacianParts laplacian(const Incidence& h, const Vector& weights);

/// Assembles a hypergraph from explicit incidence and weights.
Hypergraph make_hypergraph(Incidence h, Vector weights, double sigma = 0.0);

/// kNN probabilistic hypergraph on the rows of `samples`.
Hypergraph build_hypergraph(const Matrix& samples, std::size_t k);

/// Degenerate two-vertex-edge variant: one edge per symmetrized kNN pair
/// {i, j}, weighted by the heat kernel A(i, j). Its Laplacian is half the
/// ordinary graph Laplacian D - A_knn of that graph.
Hypergraph build_pairwise_graph(const Matrix& samples, std::size_t k);

/// Incidence matrix from an explicit edge list.
Incidence incidence_from_edges(std::size_t n_vertices,
                               const std::vector<std::vector<std::size_t>>& edges);

} // namespace hgntr
