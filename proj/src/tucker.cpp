#include "hgntr/tucker.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace hgntr {

namespace {

Matrix leading_eigenvectors(const Matrix& unfolding, std::size_t rank)
{
    const Matrix gram = unfolding * unfolding.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");

    // Eigen returns ascending eigenvalues.
    const Eigen::Index n = gram.rows();
    const auto r = static_cast<Eigen::Index>(rank);
    Matrix u(n, r);
    for (Eigen::Index c = 0; c < r; ++c) {
        Vector v = solver.eigenvectors().col(n - 1 - c);
        Eigen::Index arg = 0;
        for (Eigen::Index i = 1; i < n; ++i)
            if (std::abs(v(i)) > std::abs(v(arg))) arg = i;
        if (v(arg) < 0.0) v = -v;
        u.col(c) = v;
    }
    return u;
}

} // namespace

TuckerApprox hosvd_truncate(const DenseTensor& x, const Shape& ranks)
{
    if (ranks.size() != x.order())
        throw std::invalid_argument("need one Tucker rank per tensor mode");
    for (std::size_t n = 0; n < ranks.size(); ++n)
        if (ranks[n] < 1 || ranks[n] > x.extent(n))
            throw std::invalid_argument("Tucker rank " + std::to_string(ranks[n]) + " for mode "
                                        + std::to_string(n) + " outside [1, "
                                        + std::to_string(x.extent(n)) + "]");

    TuckerApprox t;
    for (std::size_t n = 0; n < x.order(); ++n)
        t.factors.push_back(leading_eigenvectors(unfold_classic(x, n), ranks[n]));

    DenseTensor core = x;
    for (std::size_t n = 0; n < x.order(); ++n)
        core = mode_n_product(core, t.factors[n].transpose(), n);
    t.core = std::move(core);
    return t;
}

DenseTensor tucker_reconstruct(const TuckerApprox& t)
{
    if (t.factors.size() != t.core.order())
        throw std::invalid_argument("Tucker factor count does not match core order");
    DenseTensor out = t.core;
    for (std::size_t n = 0; n < t.factors.size(); ++n) {
        if (static_cast<std::size_t>(t.factors[n].cols()) != t.core.extent(n))
            throw std::invalid_argument("Tucker factor " + std::to_string(n)
                                        + " does not match core extent");
        out = mode_n_product(out, t.factors[n], n);
    }
    return out;
}

} // namespace hgntr
