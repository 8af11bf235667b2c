#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hgntr/hypergraph.hpp"
#include "hgntr/tensor.hpp"
#include "hgntr/tensor_ring.hpp"
#include "hgntr/tucker.hpp"

namespace hgntr {

enum class GraphMode { hypergraph, pairwise, none };

const char* to_string(GraphMode mode);
GraphMode parse_graph_mode(const std::string& name);

struct SolverConfig {
    Shape tr_ranks;
    double beta = 0.1;
    std::size_t k_neighbors = 5;
    std::size_t inner_iters = 20;
    std::size_t outer_sweeps = 100;
    double tol = 1e-6;
    /// Present selects the low-rank-approximation solver.
    std::optional<Shape> tucker_ranks;
    GraphMode graph_mode = GraphMode::hypergraph;
    double epsilon = 1e-12;
    std::uint64_t seed = 0;
    /// Overrides the seeded uniform initialization when set.
    std::optional<TRCores> initial_cores;

    void validate(const DenseTensor& x) const;
};

/// Raised when an update produces a non-finite entry.
class NumericalError : public std::runtime_error {
public:
    NumericalError(std::size_t core_index, const std::string& what)
        : std::runtime_error(what), core_index_(core_index)
    {
    }
    std::size_t core_index() const noexcept { return core_index_; }

private:
    std::size_t core_index_;
};

struct PhaseTimes {
    double graph_build = 0.0;
    double setup = 0.0; // unfoldings (exact) or HOSVD (low-rank)
    double updates = 0.0;
    double evaluation = 0.0;
};

struct SolveResult {
    TRCores cores;
    // Index 0 is the initialization; index s is after sweep s.
    std::vector<double> objective_trace;
    std::vector<double> fit_trace;
    std::vector<double> elapsed_seconds;
    std::vector<double> update_seconds; // per sweep, excludes evaluation
    std::size_t sweeps_run = 0;
    bool converged = false;
    PhaseTimes times;
    std::uint64_t seed = 0;
};

/// Reported after every inner multiplicative update.
struct InnerStep {
    std::size_t sweep;     // 1-based
    std::size_t core;      // 0-based core index
    std::size_t iteration; // 1-based inner iteration
    const Matrix& numerator;
    const Matrix& core_unfolding;
};
using InnerObserver = std::function<void(const InnerStep&)>;

/// Graph term for the sample (last) core, L = diag(degrees) - similarity.
struct Regularizer {
    Matrix similarity; // S
    Vector degrees;    // diag(D_V)
};

/// 1/2 |X - TR(cores)|_F^2 + beta/2 tr(G_(2)^T L G_(2)) for the last core.
double objective(const DenseTensor& x, const TRCores& cores, const Regularizer* reg, double beta);

/// Same, reusing an already computed reconstruction.
double objective_from_reconstruction(const DenseTensor& x, const DenseTensor& reconstruction,
                                     const TRCores& cores, const Regularizer* reg, double beta);

/// X_[n] G^{!=n}_[2]
Matrix exact_numerator(const Matrix& x_unfolded_tr, const TRCores& cores, std::size_t n);

/// U_n C_[n] Z^{!=n}_[2] with Z_m = G_m x_2 U_m^T; entries are not clamped here.
Matrix lra_numerator(const TuckerApprox& tucker, const TRCores& cores, std::size_t n);

/// One multiplicative step on G = G_(2) of a core:
///   G <- G * (N + beta S G) / (G Gram + beta D_V G + eps)
/// The regularizer terms apply only when `reg` is non-null.
Matrix mur_step(const Matrix& g, const Matrix& data_numerator, const Matrix& gram,
                const Regularizer* reg, double beta, double epsilon, Matrix* numerator_out = nullptr);

SolveResult solve(const DenseTensor& x, const SolverConfig& config, const InnerObserver& observer = {});
SolveResult solve_hgntr(const DenseTensor& x, SolverConfig config, const InnerObserver& observer = {});
SolveResult solve_lra_hgntr(const DenseTensor& x, const SolverConfig& config,
                            const InnerObserver& observer = {});

/// Rows are samples: G_(2) of the last core, I_N x (R_N R_1).
Matrix feature_matrix(const TRCores& cores);
inline Matrix feature_matrix(const SolveResult& result) { return feature_matrix(result.cores); }

/// Graph regularizer built from the rows of X_[N] (one row per sample).
Regularizer build_regularizer(const DenseTensor& x, GraphMode mode, std::size_t k);

} // namespace hgntr
