#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hgntr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);

// Dense N-way array stored row-major (last index varies fastest).
// Mode indices are zero-based throughout the library.
class DenseTensor {
public:
    DenseTensor() = default;
    explicit DenseTensor(Shape shape, double fill = 0.0);
    DenseTensor(Shape shape, std::vector<double> data);

    const Shape& shape() const noexcept { return shape_; }
    std::size_t order() const noexcept { return shape_.size(); }
    std::size_t extent(std::size_t mode) const { return shape_.at(mode); }
    std::size_t size() const noexcept { return data_.size(); }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    std::size_t linear_index(std::span<const std::size_t> index) const;
    double& at(std::span<const std::size_t> index) { return data_[linear_index(index)]; }
    double at(std::span<const std::size_t> index) const { return data_[linear_index(index)]; }
    double& operator()(std::initializer_list<std::size_t> index)
    {
        return at(std::span<const std::size_t>(index.begin(), index.size()));
    }
    double operator()(std::initializer_list<std::size_t> index) const
    {
        return at(std::span<const std::size_t>(index.begin(), index.size()));
    }

    double squared_norm() const noexcept;
    double frobenius_norm() const noexcept;
    bool is_nonnegative() const noexcept;
    bool is_finite() const noexcept;

    friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

private:
    Shape shape_;
    std::vector<double> data_;
};

// Rows of X_(n) are indexed by i_n; columns enumerate the remaining modes in
// ascending order with the first listed mode slowest.
Matrix unfold_classic(const DenseTensor& x, std::size_t mode);

// Rows of X_[n] are indexed by i_n; columns enumerate modes n+1, ..., N-1,
// 0, ..., n-1 with the first listed mode slowest.
Matrix unfold_tr(const DenseTensor& x, std::size_t mode);

DenseTensor fold(const Matrix& m, std::size_t mode, const Shape& shape);
DenseTensor fold_tr(const Matrix& m, std::size_t mode, const Shape& shape);

// X x_n U with U of shape J x I_n.
DenseTensor mode_n_product(const DenseTensor& x, const Matrix& u, std::size_t mode);

// Contracts the last mode of a (Ra, Ia, Rb) tensor with the first mode of a
// (Rb, Ib, Rc) tensor, giving (Ra, Ia*Ib, Rc) with combined index ia*Ib + ib.
DenseTensor multilinear_product(const DenseTensor& a, const DenseTensor& b);

double max_abs_difference(const DenseTensor& a, const DenseTensor& b);
double relative_error(const DenseTensor& approx, const DenseTensor& reference);

} // namespace hgntr
