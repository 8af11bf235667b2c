#include "hgntr/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hgntr {

namespace {

using ConstRowMap = Eigen::Map<const RowMajorMatrix>;
using RowMap = Eigen::Map<RowMajorMatrix>;

void check_mode(const Shape& shape, std::size_t mode)
{
    if (mode >= shape.size())
        throw std::out_of_range("mode " + std::to_string(mode) + " out of range for order-"
                                + std::to_string(shape.size()) + " tensor");
}

// Sizes of the modes before and after `mode` in row-major storage.
std::pair<std::size_t, std::size_t> split_sizes(const Shape& shape, std::size_t mode)
{
    std::size_t left = 1, right = 1;
    for (std::size_t m = 0; m < mode; ++m) left *= shape[m];
    for (std::size_t m = mode + 1; m < shape.size(); ++m) right *= shape[m];
    return {left, right};
}

void check_unfolding_dims(const Matrix& m, std::size_t mode, const Shape& shape)
{
    check_mode(shape, mode);
    const std::size_t total = shape_size(shape);
    if (static_cast<std::size_t>(m.rows()) != shape[mode]
        || static_cast<std::size_t>(m.rows() * m.cols()) != total)
        throw std::invalid_argument("unfolding of size " + std::to_string(m.rows()) + "x"
                                    + std::to_string(m.cols())
                                    + " does not match target shape at mode "
                                    + std::to_string(mode));
}

} // namespace

std::size_t shape_size(const Shape& shape)
{
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

DenseTensor::DenseTensor(Shape shape, double fill)
    : shape_(std::move(shape))
{
    for (auto e : shape_)
        if (e == 0) throw std::invalid_argument("tensor extents must be positive");
    data_.assign(shape_size(shape_), fill);
}

DenseTensor::DenseTensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data))
{
    for (auto e : shape_)
        if (e == 0) throw std::invalid_argument("tensor extents must be positive");
    if (data_.size() != shape_size(shape_))
        throw std::invalid_argument("tensor data length " + std::to_string(data_.size())
                                    + " does not match shape product "
                                    + std::to_string(shape_size(shape_)));
}

std::size_t DenseTensor::linear_index(std::span<const std::size_t> index) const
{
    if (index.size() != shape_.size())
        throw std::invalid_argument("index arity does not match tensor order");
    std::size_t linear = 0;
    for (std::size_t m = 0; m < shape_.size(); ++m) {
        if (index[m] >= shape_[m]) throw std::out_of_range("tensor index out of range");
        linear = linear * shape_[m] + index[m];
    }
    return linear;
}

double DenseTensor::squared_norm() const noexcept
{
    double s = 0.0;
    for (double v : data_) s += v * v;
    return s;
}

double DenseTensor::frobenius_norm() const noexcept { return std::sqrt(squared_norm()); }

bool DenseTensor::is_nonnegative() const noexcept
{
    return std::all_of(data_.begin(), data_.end(), [](double v) { return v >= 0.0; });
}

bool DenseTensor::is_finite() const noexcept
{
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix unfold_classic(const DenseTensor& x, std::size_t mode)
{
    check_mode(x.shape(), mode);
    const auto [left, right] = split_sizes(x.shape(), mode);
    const std::size_t extent = x.extent(mode);
    Matrix m(extent, left * right);
    const auto data = x.data();
    for (std::size_t l = 0; l < left; ++l)
        for (std::size_t i = 0; i < extent; ++i) {
            const double* src = data.data() + (l * extent + i) * right;
            for (std::size_t r = 0; r < right; ++r) m(i, l * right + r) = src[r];
        }
    return m;
}

Matrix unfold_tr(const DenseTensor& x, std::size_t mode)
{
    check_mode(x.shape(), mode);
    const auto [left, right] = split_sizes(x.shape(), mode);
    const std::size_t extent = x.extent(mode);
    Matrix m(extent, left * right);
    const auto data = x.data();
    for (std::size_t l = 0; l < left; ++l)
        for (std::size_t i = 0; i < extent; ++i) {
            const double* src = data.data() + (l * extent + i) * right;
            for (std::size_t r = 0; r < right; ++r) m(i, r * left + l) = src[r];
        }
    return m;
}

DenseTensor fold(const Matrix& m, std::size_t mode, const Shape& shape)
{
    check_unfolding_dims(m, mode, shape);
    DenseTensor x(shape);
    const auto [left, right] = split_sizes(shape, mode);
    const std::size_t extent = shape[mode];
    auto data = x.data();
    for (std::size_t l = 0; l < left; ++l)
        for (std::size_t i = 0; i < extent; ++i) {
            double* dst = data.data() + (l * extent + i) * right;
            for (std::size_t r = 0; r < right; ++r) dst[r] = m(i, l * right + r);
        }
    return x;
}

DenseTensor fold_tr(const Matrix& m, std::size_t mode, const Shape& shape)
{
    check_unfolding_dims(m, mode, shape);
    DenseTensor x(shape);
    const auto [left, right] = split_sizes(shape, mode);
    const std::size_t extent = shape[mode];
    auto data = x.data();
    for (std::size_t l = 0; l < left; ++l)
        for (std::size_t i = 0; i < extent; ++i) {
            double* dst = data.data() + (l * extent + i) * right;
            for (std::size_t r = 0; r < right; ++r) dst[r] = m(i, r * left + l);
        }
    return x;
}

DenseTensor mode_n_product(const DenseTensor& x, const Matrix& u, std::size_t mode)
{
    check_mode(x.shape(), mode);
    if (static_cast<std::size_t>(u.cols()) != x.extent(mode))
        throw std::invalid_argument("mode product: matrix has " + std::to_string(u.cols())
                                    + " columns but mode " + std::to_string(mode) + " has extent "
                                    + std::to_string(x.extent(mode)));
    Shape out_shape = x.shape();
    out_shape[mode] = static_cast<std::size_t>(u.rows());
    DenseTensor out(out_shape);

    const auto [left, right] = split_sizes(x.shape(), mode);
    const auto in_extent = static_cast<Eigen::Index>(x.extent(mode));
    const auto out_extent = static_cast<Eigen::Index>(u.rows());
    const auto r = static_cast<Eigen::Index>(right);
    for (std::size_t l = 0; l < left; ++l) {
        ConstRowMap slice(x.data().data() + l * in_extent * r, in_extent, r);
        RowMap dst(out.data().data() + l * out_extent * r, out_extent, r);
        dst.noalias() = u * slice;
    }
    return out;
}

DenseTensor multilinear_product(const DenseTensor& a, const DenseTensor& b)
{
    if (a.order() != 3 || b.order() != 3)
        throw std::invalid_argument("multilinear product expects third-order tensors");
    if (a.extent(2) != b.extent(0))
        throw std::invalid_argument("multilinear product: rank mismatch ("
                                    + std::to_string(a.extent(2)) + " vs "
                                    + std::to_string(b.extent(0)) + ")");
    const auto ra = static_cast<Eigen::Index>(a.extent(0));
    const auto ia = static_cast<Eigen::Index>(a.extent(1));
    const auto rb = static_cast<Eigen::Index>(a.extent(2));
    const auto ib = static_cast<Eigen::Index>(b.extent(1));
    const auto rc = static_cast<Eigen::Index>(b.extent(2));

    DenseTensor out({a.extent(0), a.extent(1) * b.extent(1), b.extent(2)});
    // Row-major (ra*ia) x rb times rb x (ib*rc) lays out (ra, ia, ib, rc) exactly.
    ConstRowMap lhs(a.data().data(), ra * ia, rb);
    ConstRowMap rhs(b.data().data(), rb, ib * rc);
    RowMap dst(out.data().data(), ra * ia, ib * rc);
    dst.noalias() = lhs * rhs;
    return out;
}

double max_abs_difference(const DenseTensor& a, const DenseTensor& b)
{
    if (a.shape() != b.shape()) throw std::invalid_argument("shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

double relative_error(const DenseTensor& approx, const DenseTensor& reference)
{
    if (approx.shape() != reference.shape()) throw std::invalid_argument("shape mismatch");
    double diff = 0.0;
    for (std::size_t i = 0; i < approx.size(); ++i) {
        const double d = approx.data()[i] - reference.data()[i];
        diff += d * d;
    }
    const double ref = reference.squared_norm();
    return ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);
}

} // namespace hgntr
