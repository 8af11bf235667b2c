#pragma once

#include <vector>

#include "hgntr/tensor.hpp"

namespace hgntr {

/// X ~ C x_0 U_0 x_1 U_1 ... with orthonormal (not nonnegative) factors.
struct TuckerApprox {
    DenseTensor core;
    std::vector<Matrix> factors; // factor n is I_n x R~_n

    Shape ranks() const { return core.shape(); }
};

/// One-pass truncated HOSVD. Factor n holds the leading eigenvectors of
/// X_(n) X_(n)^T; each vector's largest-magnitude entry is made positive.
TuckerApprox hosvd_truncate(const DenseTensor& x, const Shape& ranks);

DenseTensor tucker_reconstruct(const TuckerApprox& t);

} // namespace hgntr
