#include "hgntr/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace hgntr {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Supplies the data term of the numerator for core n given the current cores.
using NumeratorSource = std::function<Matrix(const TRCores&, std::size_t)>;

SolveResult run_multiplicative_updates(const DenseTensor& x, const SolverConfig& config,
                                       const std::optional<Regularizer>& reg,
                                       const NumeratorSource& numerator_for,
                                       const InnerObserver& observer, SolveResult result)
{
    const std::size_t order = x.order();
    const std::size_t last = order - 1;
    const Regularizer* reg_ptr = reg ? &*reg : nullptr;

    TRCores cores = config.initial_cores
                        ? *config.initial_cores
                        : TRCores::random_uniform(x.shape(), config.tr_ranks, config.seed);
    const auto start = Clock::now();

    auto evaluate = [&](const TRCores& c) {
        const auto t0 = Clock::now();
        const DenseTensor recon = tr_reconstruct(c);
        const double obj = objective_from_reconstruction(x, recon, c, reg_ptr, config.beta);
        const double fit = relative_error(recon, x);
        result.objective_trace.push_back(obj);
        result.fit_trace.push_back(fit);
        result.times.evaluation += seconds_since(t0);
        result.elapsed_seconds.push_back(seconds_since(start));
        if (!std::isfinite(obj)) throw NumericalError(last, "objective became non-finite");
    };

    evaluate(cores);
    for (std::size_t sweep = 1; sweep <= config.outer_sweeps; ++sweep) {
        const auto sweep_start = Clock::now();
        for (std::size_t n = 0; n < order; ++n) {
            const Matrix data_numerator = numerator_for(cores, n);
            const Matrix gram = subchain_gram(cores, n);
            const Regularizer* core_reg = (n == last) ? reg_ptr : nullptr;
            Matrix g = core_unfolding(cores.core(n));
            Matrix numerator;
            for (std::size_t t = 1; t <= config.inner_iters; ++t) {
                g = mur_step(g, data_numerator, gram, core_reg, config.beta, config.epsilon,
                             observer ? &numerator : nullptr);
                if (!g.allFinite())
                    throw NumericalError(n, "non-finite entry in core " + std::to_string(n)
                                                + " at sweep " + std::to_string(sweep));
                if (observer) observer(InnerStep{sweep, n, t, numerator, g});
            }
            cores.set_core(n, fold_core(g, cores.core(n).shape()));
        }
        const double update_time = seconds_since(sweep_start);
        result.update_seconds.push_back(update_time);
        result.times.updates += update_time;
        result.sweeps_run = sweep;

        evaluate(cores);
        const double prev = result.objective_trace[result.objective_trace.size() - 2];
        const double cur = result.objective_trace.back();
        const double denom = std::max(std::abs(prev), std::numeric_limits<double>::min());
        if (std::abs(prev - cur) / denom < config.tol) {
            result.converged = true;
            break;
        }
    }
    result.cores = std::move(cores);
    result.seed = config.seed;
    return result;
}

std::optional<Regularizer> maybe_regularizer(const DenseTensor& x, const SolverConfig& config,
                                             PhaseTimes& times)
{
    if (config.graph_mode == GraphMode::none || config.beta == 0.0) return std::nullopt;
    const auto t0 = Clock::now();
    auto reg = build_regularizer(x, config.graph_mode, config.k_neighbors);
    times.graph_build = seconds_since(t0);
    return reg;
}

} // namespace

const char* to_string(GraphMode mode)
{
    switch (mode) {
    case GraphMode::hypergraph: return "hypergraph";
    case GraphMode::pairwise: return "pairwise";
    case GraphMode::none: return "none";
    }
    return "unknown";
}

GraphMode parse_graph_mode(const std::string& name)
{
    if (name == "hypergraph") return GraphMode::hypergraph;
    if (name == "pairwise" || name == "pairwise-graph") return GraphMode::pairwise;
    if (name == "none") return GraphMode::none;
    throw std::invalid_argument("unknown graph mode '" + name + "'");
}

void SolverConfig::validate(const DenseTensor& x) const
{
    if (x.order() < 2) throw std::invalid_argument("input tensor must have at least two modes");
    if (tr_ranks.size() != x.order())
        throw std::invalid_argument("need " + std::to_string(x.order()) + " TR ranks, got "
                                    + std::to_string(tr_ranks.size()));
    for (auto r : tr_ranks)
        if (r < 1) throw std::invalid_argument("TR ranks must be positive");
    if (inner_iters < 1 || outer_sweeps < 1)
        throw std::invalid_argument("iteration counts must be positive");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be >= 0");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    if (!(tol >= 0.0)) throw std::invalid_argument("tol must be >= 0");
    if (k_neighbors < 1) throw std::invalid_argument("k must be >= 1");
    if (tucker_ranks) {
        if (tucker_ranks->size() != x.order())
            throw std::invalid_argument("need one Tucker rank per mode");
        for (std::size_t n = 0; n < x.order(); ++n)
            if ((*tucker_ranks)[n] < 1 || (*tucker_ranks)[n] > x.extent(n))
                throw std::invalid_argument("Tucker rank for mode " + std::to_string(n)
                                            + " outside [1, extent]");
    }
    if (initial_cores) {
        if (initial_cores->extents() != x.shape() || initial_cores->ranks() != tr_ranks)
            throw std::invalid_argument("initial cores do not match input shape and TR ranks");
        if (!initial_cores->is_nonnegative())
            throw std::invalid_argument("initial cores must be nonnegative");
    }
    if (!x.is_finite()) throw std::invalid_argument("input tensor has non-finite entries");
    if (!x.is_nonnegative())
        throw std::invalid_argument("input tensor has negative entries; truncate at zero first");
}

double objective_from_reconstruction(const DenseTensor& x, const DenseTensor& reconstruction,
                                     const TRCores& cores, const Regularizer* reg, double beta)
{
    if (reconstruction.shape() != x.shape())
        throw std::invalid_argument("reconstruction shape does not match data");
    double fit = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x.data()[i] - reconstruction.data()[i];
        fit += d * d;
    }
    double value = 0.5 * fit;
    if (reg && beta != 0.0) {
        const Matrix g = core_unfolding(cores.core(cores.order() - 1));
        if (reg->similarity.rows() != g.rows())
            throw std::invalid_argument("Laplacian size does not match the sample mode");
        const double degree_part = (reg->degrees.asDiagonal() * g).cwiseProduct(g).sum();
        const double sim_part = (reg->similarity * g).cwiseProduct(g).sum();
        value += 0.5 * beta * (degree_part - sim_part);
    }
    return value;
}

double objective(const DenseTensor& x, const TRCores& cores, const Regularizer* reg, double beta)
{
    if (cores.extents() != x.shape())
        throw std::invalid_argument("cores do not match data shape");
    return objective_from_reconstruction(x, tr_reconstruct(cores), cores, reg, beta);
}

Matrix exact_numerator(const Matrix& x_unfolded_tr, const TRCores& cores, std::size_t n)
{
    const Matrix sub = subchain_unfolding(cores, n);
    if (x_unfolded_tr.cols() != sub.rows())
        throw std::invalid_argument("data unfolding does not match sub-chain");
    return x_unfolded_tr * sub;
}

Matrix lra_numerator(const TuckerApprox& tucker, const TRCores& cores, std::size_t n)
{
    const std::size_t order = cores.order();
    if (tucker.factors.size() != order) throw std::invalid_argument("Tucker order mismatch");
    std::vector<DenseTensor> projected;
    projected.reserve(order);
    for (std::size_t m = 0; m < order; ++m) {
        if (m == n)
            projected.push_back(cores.core(m));
        else
            projected.push_back(mode_n_product(cores.core(m), tucker.factors[m].transpose(), 1));
    }
    const Matrix z_sub = subchain_unfolding(TRCores(std::move(projected)), n);
    const Matrix c_unfolded = unfold_tr(tucker.core, n);
    return tucker.factors[n] * (c_unfolded * z_sub);
}

Matrix mur_step(const Matrix& g, const Matrix& data_numerator, const Matrix& gram,
                const Regularizer* reg, double beta, double epsilon, Matrix* numerator_out)
{
    Matrix numerator = data_numerator;
    Matrix denominator = g * gram;
    if (reg && beta != 0.0) {
        numerator.noalias() += beta * (reg->similarity * g);
        denominator.noalias() += beta * (reg->degrees.asDiagonal() * g);
    }
    Matrix updated = g.cwiseProduct(numerator).cwiseQuotient(
        (denominator.array() + epsilon).matrix());
    if (numerator_out) *numerator_out = std::move(numerator);
    return updated;
}

Regularizer build_regularizer(const DenseTensor& x, GraphMode mode, std::size_t k)
{
    const Matrix samples = unfold_tr(x, x.order() - 1);
    Hypergraph graph;
    switch (mode) {
    case GraphMode::hypergraph: graph = build_hypergraph(samples, k); break;
    case GraphMode::pairwise: graph = build_pairwise_graph(samples, k); break;
    case GraphMode::none: throw std::invalid_argument("no regularizer for graph mode 'none'");
    }
    auto parts = laplacian(graph.incidence, graph.edge_weights);
    return Regularizer{std::move(parts.similarity), std::move(parts.degrees)};
}

SolveResult solve_hgntr(const DenseTensor& x, SolverConfig config, const InnerObserver& observer)
{
    config.tucker_ranks.reset();
    config.validate(x);
    SolveResult result;
    auto reg = maybe_regularizer(x, config, result.times);

    const auto t0 = Clock::now();
    std::vector<Matrix> unfoldings;
    for (std::size_t n = 0; n < x.order(); ++n) unfoldings.push_back(unfold_tr(x, n));
    result.times.setup = seconds_since(t0);

    NumeratorSource source = [&](const TRCores& cores, std::size_t n) {
        return exact_numerator(unfoldings[n], cores, n);
    };
    return run_multiplicative_updates(x, config, reg, source, observer, std::move(result));
}

SolveResult solve_lra_hgntr(const DenseTensor& x, const SolverConfig& config,
                            const InnerObserver& observer)
{
    if (!config.tucker_ranks)
        throw std::invalid_argument("low-rank solver requires Tucker ranks");
    config.validate(x);
    SolveResult result;
    auto reg = maybe_regularizer(x, config, result.times);

    const auto t0 = Clock::now();
    const TuckerApprox tucker = hosvd_truncate(x, *config.tucker_ranks);
    result.times.setup = seconds_since(t0);

    // The Tucker surrogate is signed, so its numerator is clamped at zero.
    NumeratorSource source = [&](const TRCores& cores, std::size_t n) {
        return lra_numerator(tucker, cores, n).cwiseMax(0.0).eval();
    };
    return run_multiplicative_updates(x, config, reg, source, observer, std::move(result));
}

SolveResult solve(const DenseTensor& x, const SolverConfig& config, const InnerObserver& observer)
{
    return config.tucker_ranks ? solve_lra_hgntr(x, config, observer)
                               : solve_hgntr(x, config, observer);
}

Matrix feature_matrix(const TRCores& cores)
{
    if (cores.order() == 0) throw std::invalid_argument("no cores");
    return core_unfolding(cores.core(cores.order() - 1));
}

} // namespace hgntr
