#include <gtest/gtest.h>

#include "hgntr/tensor.hpp"
#include "unit/test_support.hpp"

using namespace hgntr;
using hgntr::test::all_indices;
using hgntr::test::random_matrix;
using hgntr::test::random_tensor;

namespace {

DenseTensor index_coded()
{
    DenseTensor x({3, 4, 2});
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            for (std::size_t k = 0; k < 2; ++k) x({i, j, k}) = 100.0 * i + 10.0 * j + k;
    return x;
}

} // namespace

TEST(DenseTensor, RejectsInconsistentData)
{
    EXPECT_THROW(DenseTensor({2, 3}, std::vector<double>(5)), std::invalid_argument);
    EXPECT_THROW(DenseTensor(Shape{2, 0}), std::invalid_argument);
}

TEST(DenseTensor, RowMajorLayout)
{
    DenseTensor x({2, 3}, std::vector<double>{0, 1, 2, 3, 4, 5});
    EXPECT_EQ(x({1, 0}), 3.0);
    EXPECT_EQ(x({0, 2}), 2.0);
    EXPECT_THROW(x({2, 0}), std::out_of_range);
}

TEST(Unfold, MatrixCaseIsIdentity)
{
    DenseTensor x({2, 3}, std::vector<double>{0, 1, 2, 3, 4, 5});
    const Matrix m = unfold_classic(x, 0);
    ASSERT_EQ(m.rows(), 2);
    ASSERT_EQ(m.cols(), 3);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_EQ(m(i, j), 3 * i + j);
}

TEST(Unfold, ConstantTensor)
{
    DenseTensor x({2, 2, 2}, 1.0);
    EXPECT_EQ(unfold_classic(x, 1), Matrix::Ones(2, 4));
    EXPECT_EQ(unfold_tr(x, 1), Matrix::Ones(2, 4));
}

TEST(Unfold, ClassicIndexMapExhaustive)
{
    const DenseTensor x = index_coded();
    const Shape& s = x.shape();
    for (std::size_t n = 0; n < 3; ++n) {
        const Matrix m = unfold_classic(x, n);
        ASSERT_EQ(static_cast<std::size_t>(m.rows()), s[n]);
        for (const auto& idx : all_indices(s)) {
            std::size_t col = 0;
            for (std::size_t q = 0; q < 3; ++q)
                if (q != n) col = col * s[q] + idx[q];
            EXPECT_EQ(m(static_cast<Eigen::Index>(idx[n]), static_cast<Eigen::Index>(col)),
                      100.0 * idx[0] + 10.0 * idx[1] + idx[2]);
        }
    }
}

TEST(Unfold, CyclicIndexMapExhaustive)
{
    const DenseTensor x = index_coded();
    const Shape& s = x.shape();
    for (std::size_t n = 0; n < 3; ++n) {
        const Matrix m = unfold_tr(x, n);
        for (const auto& idx : all_indices(s)) {
            std::size_t col = 0;
            for (std::size_t step = 1; step < 3; ++step) {
                const std::size_t q = (n + step) % 3;
                col = col * s[q] + idx[q];
            }
            EXPECT_EQ(m(static_cast<Eigen::Index>(idx[n]), static_cast<Eigen::Index>(col)),
                      100.0 * idx[0] + 10.0 * idx[1] + idx[2]);
        }
    }
}

TEST(Unfold, ConventionsCoincideOnFirstMode)
{
    const auto x = random_tensor({3, 4, 2, 2}, 5);
    EXPECT_EQ(unfold_classic(x, 0), unfold_tr(x, 0));
}

TEST(Unfold, ModeOutOfRange)
{
    const auto x = random_tensor({2, 2}, 1);
    EXPECT_THROW(unfold_classic(x, 2), std::out_of_range);
    EXPECT_THROW(unfold_tr(x, 5), std::out_of_range);
}

TEST(Fold, InvertsBothUnfoldingsUpToOrderFive)
{
    const std::vector<Shape> shapes = {{4}, {3, 5}, {2, 3, 4}, {2, 3, 2, 3}, {2, 2, 3, 2, 2}};
    std::uint64_t seed = 10;
    for (const auto& shape : shapes) {
        const auto x = random_tensor(shape, ++seed);
        for (std::size_t n = 0; n < shape.size(); ++n) {
            EXPECT_EQ(fold(unfold_classic(x, n), n, shape), x);
            EXPECT_EQ(fold_tr(unfold_tr(x, n), n, shape), x);
        }
    }
}

TEST(Fold, ZeroMatrix)
{
    EXPECT_EQ(fold(Matrix::Zero(2, 6), 0, {2, 3, 2}), DenseTensor(Shape{2, 3, 2}));
}

TEST(Fold, DimensionMismatch)
{
    EXPECT_THROW(fold(Matrix::Zero(2, 5), 0, {2, 3, 2}), std::invalid_argument);
    EXPECT_THROW(fold_tr(Matrix::Zero(3, 4), 0, {2, 3, 2}), std::invalid_argument);
}

TEST(ModeProduct, IdentityLeavesTensorUnchanged)
{
    const auto x = random_tensor({3, 4, 2}, 2);
    for (std::size_t n = 0; n < 3; ++n) {
        const auto y = mode_n_product(x, Matrix::Identity(static_cast<Eigen::Index>(x.extent(n)),
                                                          static_cast<Eigen::Index>(x.extent(n))),
                                      n);
        EXPECT_EQ(y, x);
    }
}

TEST(ModeProduct, OnesRowSumsTheMode)
{
    const auto x = random_tensor({3, 4, 2}, 3);
    const auto y = mode_n_product(x, Matrix::Ones(1, 4), 1);
    ASSERT_EQ(y.shape(), (Shape{3, 1, 2}));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 2; ++k) {
            double sum = 0.0;
            for (std::size_t j = 0; j < 4; ++j) sum += x({i, j, k});
            EXPECT_NEAR(y({i, 0, k}), sum, 1e-14);
        }
}

TEST(ModeProduct, MatchesElementwiseDefinition)
{
    const auto x = random_tensor({2, 3, 2}, 4);
    const Matrix u = random_matrix(4, 3, 7);
    const auto y = mode_n_product(x, u, 1);
    ASSERT_EQ(y.shape(), (Shape{2, 4, 2}));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            for (std::size_t k = 0; k < 2; ++k) {
                double v = 0.0;
                for (std::size_t p = 0; p < 3; ++p)
                    v += x({i, p, k}) * u(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(p));
                EXPECT_NEAR(y({i, j, k}), v, 1e-12);
            }
}

TEST(ModeProduct, EqualsFoldOfUnfoldingProduct)
{
    const auto x = random_tensor({3, 2, 4, 2}, 8);
    for (std::size_t n = 0; n < 4; ++n) {
        const Matrix u = random_matrix(3, static_cast<Eigen::Index>(x.extent(n)), 20 + n);
        Shape s = x.shape();
        s[n] = 3;
        const auto expected = fold(u * unfold_classic(x, n), n, s);
        EXPECT_LT(max_abs_difference(mode_n_product(x, u, n), expected), 1e-12);
    }
}

TEST(ModeProduct, DistinctModesCommute)
{
    const auto x = random_tensor({3, 4, 5}, 9);
    const Matrix a = random_matrix(2, 3, 1), b = random_matrix(6, 5, 2);
    const auto ab = mode_n_product(mode_n_product(x, a, 0), b, 2);
    const auto ba = mode_n_product(mode_n_product(x, b, 2), a, 0);
    EXPECT_LT(max_abs_difference(ab, ba), 1e-12);
}

TEST(ModeProduct, InnerDimensionMismatch)
{
    const auto x = random_tensor({3, 4}, 1);
    EXPECT_THROW(mode_n_product(x, Matrix::Ones(2, 3), 1), std::invalid_argument);
}

TEST(MultilinearProduct, UnitMiddleIsSliceProduct)
{
    const auto a = random_tensor({2, 1, 3}, 11);
    const auto b = random_tensor({3, 1, 4}, 12);
    const auto c = multilinear_product(a, b);
    ASSERT_EQ(c.shape(), (Shape{2, 1, 4}));
    const Matrix ma = Eigen::Map<const RowMajorMatrix>(a.data().data(), 2, 3);
    const Matrix mb = Eigen::Map<const RowMajorMatrix>(b.data().data(), 3, 4);
    const Matrix expected = ma * mb;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            EXPECT_NEAR(c({i, 0, j}), expected(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
                        1e-14);
}

TEST(MultilinearProduct, IdentitySlicesReplicate)
{
    const auto a = random_tensor({2, 3, 2}, 13);
    DenseTensor b({2, 4, 2});
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t r = 0; r < 2; ++r) b({r, j, r}) = 1.0;
    const auto c = multilinear_product(a, b);
    ASSERT_EQ(c.shape(), (Shape{2, 12, 2}));
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                for (std::size_t s = 0; s < 2; ++s) EXPECT_EQ(c({r, i * 4 + j, s}), a({r, i, s}));
}

TEST(MultilinearProduct, MatchesElementwiseDefinition)
{
    const auto a = random_tensor({2, 3, 4}, 14);
    const auto b = random_tensor({4, 2, 3}, 15);
    const auto c = multilinear_product(a, b);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                for (std::size_t s = 0; s < 3; ++s) {
                    double v = 0.0;
                    for (std::size_t q = 0; q < 4; ++q) v += a({r, i, q}) * b({q, j, s});
                    EXPECT_NEAR(c({r, i * 2 + j, s}), v, 1e-13);
                }
}

TEST(MultilinearProduct, ZeroFactorGivesZero)
{
    const auto a = random_tensor({2, 3, 2}, 16);
    const auto c = multilinear_product(a, DenseTensor(Shape{2, 2, 3}));
    EXPECT_EQ(c, DenseTensor(Shape{2, 6, 3}));
}

TEST(MultilinearProduct, RankMismatch)
{
    EXPECT_THROW(multilinear_product(DenseTensor(Shape{2, 3, 2}), DenseTensor(Shape{3, 3, 2})),
                 std::invalid_argument);
}

TEST(RelativeError, ZeroReferenceFallsBackToAbsolute)
{
    DenseTensor a({2}, std::vector<double>{3, 4});
    EXPECT_DOUBLE_EQ(relative_error(a, DenseTensor(Shape{2})), 5.0);
    EXPECT_DOUBLE_EQ(relative_error(a, a), 0.0);
}
