#include <gtest/gtest.h>

#include <cmath>

#include "hgntr/solver.hpp"
#include "hgntr/synth.hpp"
#include "unit/test_support.hpp"

using namespace hgntr;
using hgntr::test::random_tensor;
using hgntr::test::relative_diff;

namespace {

SolverConfig base_config(Shape ranks, double beta = 0.0)
{
    SolverConfig c;
    c.tr_ranks = std::move(ranks);
    c.beta = beta;
    c.k_neighbors = 3;
    c.inner_iters = 5;
    c.outer_sweeps = 20;
    c.tol = 0.0;
    c.seed = 7;
    if (beta == 0.0) c.graph_mode = GraphMode::none;
    return c;
}

TRCores scaled(const TRCores& c, double factor)
{
    std::vector<DenseTensor> out;
    for (const auto& g : c.cores()) {
        DenseTensor s = g;
        for (double& v : s.data()) v *= factor;
        out.push_back(std::move(s));
    }
    return TRCores(std::move(out));
}

} // namespace

TEST(Objective, ExactReconstructionIsZero)
{
    const auto s = synth_tr_exact({4, 3, 5}, {2, 2, 2}, 1);
    EXPECT_NEAR(objective(s.tensor, s.cores, nullptr, 0.0), 0.0, 1e-20);
}

TEST(Objective, ZeroCoresGiveHalfSquaredNorm)
{
    const auto x = random_tensor({4, 3, 5}, 2);
    auto c = TRCores::random_uniform({4, 3, 5}, {2, 2, 2}, 3);
    for (std::size_t n = 0; n < 3; ++n) c.set_core(n, DenseTensor(c.core(n).shape()));
    EXPECT_DOUBLE_EQ(objective(x, c, nullptr, 0.0), 0.5 * x.squared_norm());
}

TEST(Objective, MatchesMaterializedLaplacian)
{
    const auto x = random_tensor({4, 3, 12}, 4);
    const auto c = TRCores::random_uniform({4, 3, 12}, {2, 3, 2}, 5);
    const auto reg = build_regularizer(x, GraphMode::hypergraph, 3);
    const double beta = 0.37;

    Matrix l = -reg.similarity;
    l.diagonal() += reg.degrees;
    const Matrix g = core_unfolding(c.core(2));
    DenseTensor recon(x.shape());
    for (const auto& idx : hgntr::test::all_indices(x.shape())) recon.at(idx) = hgntr::test::trace_oracle(c, idx);
    double fit = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) fit += std::pow(x.data()[i] - recon.data()[i], 2);
    const double expected = 0.5 * fit + 0.5 * beta * (g.transpose() * l * g).trace();
    EXPECT_NEAR(objective(x, c, &reg, beta), expected, 1e-10 * expected);
}

TEST(MurStep, FixedPointWhenRatioIsOne)
{
    const Matrix g = hgntr::test::random_matrix(4, 3, 1, 0.1, 1.0);
    const Matrix gram = Matrix::Identity(3, 3);
    // numerator equals g * gram, so the ratio is one up to the guard
    const Matrix out = mur_step(g, g * gram, gram, nullptr, 0.0, 1e-300);
    EXPECT_LT((out - g).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(MurStep, ScalarClosedForm)
{
    // x = 6, g = 2, other core 1: g * (x g_o) / (g g_o^2) = 6
    const DenseTensor x({1, 1}, std::vector<double>{6.0});
    const TRCores c({DenseTensor({1, 1, 1}, std::vector<double>{2.0}),
                     DenseTensor({1, 1, 1}, std::vector<double>{1.0})});
    const Matrix num = exact_numerator(unfold_tr(x, 0), c, 0);
    const Matrix out = mur_step(core_unfolding(c.core(0)), num, subchain_gram(c, 0), nullptr, 0.0, 1e-12);
    EXPECT_NEAR(out(0, 0), 6.0, 1e-11);
}

TEST(MurStep, StationaryOnExactInstance)
{
    const auto s = synth_tr_exact({4, 3, 5}, {2, 2, 2}, 6);
    for (std::size_t n = 0; n < 3; ++n) {
        const Matrix g = core_unfolding(s.cores.core(n));
        const Matrix out = mur_step(g, exact_numerator(unfold_tr(s.tensor, n), s.cores, n),
                                    subchain_gram(s.cores, n), nullptr, 0.0, 1e-12);
        EXPECT_LT((out - g).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(MurStep, RegularizerTermsUseSimilarityAndDegrees)
{
    const Matrix g = hgntr::test::random_matrix(5, 2, 2, 0.1, 1.0);
    const Matrix num = hgntr::test::random_matrix(5, 2, 3, 0.1, 1.0);
    const Matrix gram = Matrix::Identity(2, 2) * 2.0;
    Regularizer reg{hgntr::test::random_matrix(5, 5, 4, 0.0, 1.0), Vector::Constant(5, 3.0)};
    reg.similarity = (reg.similarity + reg.similarity.transpose()).eval();
    Matrix captured;
    const Matrix out = mur_step(g, num, gram, &reg, 0.5, 1e-12, &captured);
    const Matrix n2 = num + 0.5 * reg.similarity * g;
    const Matrix d2 = g * gram + 0.5 * Matrix(reg.degrees.asDiagonal()) * g;
    EXPECT_LT((captured - n2).cwiseAbs().maxCoeff(), 1e-14);
    for (Eigen::Index i = 0; i < 5; ++i)
        for (Eigen::Index j = 0; j < 2; ++j) EXPECT_NEAR(out(i, j), g(i, j) * n2(i, j) / (d2(i, j) + 1e-12), 1e-14);
}

TEST(Solve, ExactInstanceReachesLowFit)
{
    const auto s = synth_tr_exact({6, 5, 30}, {2, 2, 2}, 11);
    auto c = base_config({2, 2, 2});
    c.inner_iters = 20;
    c.outer_sweeps = 2000;
    c.seed = 3;
    const auto r = solve_hgntr(s.tensor, c);
    // Multiplicative updates converge sublinearly here: about 3e-3 at sweep 200.
    EXPECT_LT(r.fit_trace[200], 1e-2);
    EXPECT_LT(r.fit_trace.back(), 1e-3);
    EXPECT_EQ(r.sweeps_run, 2000u);
    EXPECT_EQ(r.objective_trace.size(), 2001u);
}

TEST(Solve, ZeroBetaMatchesGraphFreeRun)
{
    const auto x = random_tensor({5, 4, 15}, 12);
    auto with_graph = base_config({2, 2, 2});
    with_graph.graph_mode = GraphMode::hypergraph;
    const auto a = solve_hgntr(x, with_graph);
    const auto b = solve_hgntr(x, base_config({2, 2, 2}));
    EXPECT_EQ(a.objective_trace, b.objective_trace);
    EXPECT_EQ(a.cores.cores(), b.cores.cores());
}

TEST(Solve, MonotoneAndNonnegativeEveryInnerIteration)
{
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto x = random_tensor({5, 4, 3, 16}, 20 + seed);
        for (double beta : {0.0, 0.1}) {
            auto c = base_config({2, 3, 2, 2}, beta);
            c.seed = seed;
            bool nonneg = true;
            const auto r = solve_hgntr(x, c, [&](const InnerStep& s) {
                nonneg = nonneg && (s.core_unfolding.array() >= 0.0).all();
            });
            EXPECT_TRUE(nonneg);
            EXPECT_TRUE(r.cores.is_nonnegative());
            for (std::size_t t = 1; t < r.objective_trace.size(); ++t)
                EXPECT_LE(r.objective_trace[t], r.objective_trace[t - 1] * (1.0 + 1e-9));
        }
    }
}

TEST(Solve, PairwiseGraphMonotone)
{
    const auto x = random_tensor({4, 4, 20}, 30);
    auto c = base_config({2, 2, 2}, 0.5);
    c.graph_mode = GraphMode::pairwise;
    const auto r = solve_hgntr(x, c);
    for (std::size_t t = 1; t < r.objective_trace.size(); ++t)
        EXPECT_LE(r.objective_trace[t], r.objective_trace[t - 1] * (1.0 + 1e-9));
    const auto reg = build_regularizer(x, GraphMode::pairwise, 3);
    EXPECT_NEAR(r.objective_trace.back(), objective(x, r.cores, &reg, 0.5), 1e-12 * r.objective_trace.back());
}

TEST(Solve, StopsOnTolerance)
{
    const auto x = random_tensor({4, 4, 10}, 31);
    auto c = base_config({2, 2, 2});
    c.tol = 1e-3;
    c.outer_sweeps = 500;
    const auto r = solve_hgntr(x, c);
    EXPECT_TRUE(r.converged);
    EXPECT_LT(r.sweeps_run, 500u);
    const double prev = r.objective_trace[r.objective_trace.size() - 2];
    EXPECT_LT(std::abs(prev - r.objective_trace.back()) / prev, 1e-3);
    EXPECT_EQ(r.update_seconds.size(), r.sweeps_run);
}

TEST(Solve, DeterministicPerSeed)
{
    const auto x = random_tensor({4, 4, 10}, 32);
    const auto c = base_config({2, 2, 2}, 0.1);
    EXPECT_EQ(solve_hgntr(x, c).fit_trace, solve_hgntr(x, c).fit_trace);
}

TEST(Solve, ScaleInvariantFitTrace)
{
    const auto x = random_tensor({4, 5, 6}, 33);
    auto c = base_config({2, 2, 3});
    c.initial_cores = TRCores::random_uniform(x.shape(), c.tr_ranks, 1);
    const auto a = solve_hgntr(x, c);
    for (double factor : {1e-3, 7.5, 1e4}) {
        DenseTensor xs = x;
        for (double& v : xs.data()) v *= factor;
        auto cs = c;
        cs.initial_cores = scaled(*c.initial_cores, std::pow(factor, 1.0 / 3.0));
        // The denominator is homogeneous of degree 5/3 in the scale; the guard must follow it.
        cs.epsilon = c.epsilon * std::pow(factor, 5.0 / 3.0);
        const auto b = solve_hgntr(xs, cs);
        ASSERT_EQ(a.fit_trace.size(), b.fit_trace.size());
        for (std::size_t t = 0; t < a.fit_trace.size(); ++t) EXPECT_NEAR(b.fit_trace[t], a.fit_trace[t], 1e-9);
    }
}

TEST(Solve, RejectsInvalidInput)
{
    auto x = random_tensor({3, 3, 4}, 34);
    const auto c = base_config({2, 2, 2});
    x.data()[3] = -0.1;
    EXPECT_THROW(solve_hgntr(x, c), std::invalid_argument);
    x.data()[3] = 0.1;
    auto bad = c;
    bad.tr_ranks = {2, 2};
    EXPECT_THROW(solve_hgntr(x, bad), std::invalid_argument);
    bad = c;
    bad.epsilon = 0.0;
    EXPECT_THROW(solve_hgntr(x, bad), std::invalid_argument);
    bad = c;
    bad.tucker_ranks = Shape{4, 2, 2};
    EXPECT_THROW(solve_lra_hgntr(x, bad), std::invalid_argument);
    EXPECT_THROW(solve_lra_hgntr(x, c), std::invalid_argument);
}

TEST(Solve, GraphModeNames)
{
    EXPECT_EQ(parse_graph_mode("pairwise-graph"), GraphMode::pairwise);
    EXPECT_EQ(parse_graph_mode("hypergraph"), GraphMode::hypergraph);
    EXPECT_STREQ(to_string(GraphMode::none), "none");
    EXPECT_THROW(parse_graph_mode("ring"), std::invalid_argument);
}

TEST(LraNumerator, MatchesSurrogateProduct)
{
    const auto x = random_tensor({5, 6, 4, 7}, 40);
    const auto tucker = hosvd_truncate(x, {2, 3, 4, 5});
    const auto surrogate = tucker_reconstruct(tucker);
    const auto c = TRCores::random_uniform(x.shape(), {2, 3, 2, 2}, 41);
    for (std::size_t n = 0; n < 4; ++n) {
        const Matrix expected = unfold_tr(surrogate, n) * subchain_unfolding(c, n);
        EXPECT_LT(relative_diff(lra_numerator(tucker, c, n), expected), 1e-8);
    }
}

TEST(Lra, FullRankMatchesExactSolver)
{
    const auto x = random_tensor({4, 5, 3, 12}, 42);
    auto c = base_config({2, 2, 2, 2}, 0.1);
    c.graph_mode = GraphMode::hypergraph;
    c.outer_sweeps = 10;
    std::vector<Matrix> exact_nums;
    const auto a = solve_hgntr(x, c, [&](const InnerStep& s) { exact_nums.push_back(s.numerator); });
    auto lc = c;
    lc.tucker_ranks = x.shape();
    std::size_t i = 0;
    double worst = 0.0;
    const auto b = solve_lra_hgntr(x, lc, [&](const InnerStep& s) {
        worst = std::max(worst, relative_diff(s.numerator, exact_nums.at(i++)));
    });
    EXPECT_EQ(i, exact_nums.size());
    EXPECT_LT(worst, 1e-8);
    for (std::size_t n = 0; n < 4; ++n)
        EXPECT_LT(relative_error(b.cores.core(n), a.cores.core(n)), 1e-6);
}

TEST(Lra, ExactTuckerInputTracksExactSolver)
{
    const auto s = synth_tucker_exact({5, 5, 4, 6}, {2, 2, 2, 2}, 43);
    auto c = base_config({2, 2, 2, 2});
    c.outer_sweeps = 15;
    const auto a = solve_hgntr(s.tensor, c);
    c.tucker_ranks = Shape{2, 2, 2, 2};
    const auto b = solve_lra_hgntr(s.tensor, c);
    ASSERT_EQ(a.fit_trace.size(), b.fit_trace.size());
    for (std::size_t t = 0; t < a.fit_trace.size(); ++t) EXPECT_NEAR(b.fit_trace[t], a.fit_trace[t], 1e-6);
}

TEST(Lra, TruncatedRunStaysNonnegative)
{
    const auto x = random_tensor({6, 6, 6}, 44);
    auto c = base_config({2, 2, 2}, 0.1);
    c.graph_mode = GraphMode::hypergraph;
    c.tucker_ranks = Shape{2, 2, 2};
    bool nonneg = true;
    const auto r = solve_lra_hgntr(x, c, [&](const InnerStep& s) {
        nonneg = nonneg && (s.numerator.array() >= 0.0).all() && (s.core_unfolding.array() >= 0.0).all();
    });
    EXPECT_TRUE(nonneg);
    for (double v : r.objective_trace) EXPECT_TRUE(std::isfinite(v));
}

TEST(Features, LastCoreUnfolding)
{
    const auto c = TRCores::random_uniform({3, 4, 6}, {2, 1, 3}, 50);
    const Matrix f = feature_matrix(c);
    EXPECT_EQ(f.rows(), 6);
    EXPECT_EQ(f.cols(), 6);
    EXPECT_EQ(f, core_unfolding(c.core(2)));
    const auto ones = TRCores::random_uniform({3, 4, 6}, {1, 1, 1}, 51);
    EXPECT_EQ(feature_matrix(ones).cols(), 1);
}
