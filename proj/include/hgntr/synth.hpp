#pragma once

#include <cstdint>
#include <vector>

#include "hgntr/tensor.hpp"
#include "hgntr/tensor_ring.hpp"
#include "hgntr/tucker.hpp"

namespace hgntr {

struct SyntheticTR {
    TRCores cores;
    DenseTensor tensor;
};

struct SyntheticTucker {
    TuckerApprox model; // nonnegative core and factors (not orthonormal)
    DenseTensor tensor;
};

struct SyntheticClusters {
    DenseTensor tensor;      // samples stacked along the last mode
    std::vector<int> labels; // one per sample
    std::vector<DenseTensor> prototypes;
};

/// Exact tensor-ring tensor from uniform(0, 1) cores.
SyntheticTR synth_tr_exact(const Shape& shape, const Shape& ranks, std::uint64_t seed);

/// Exact Tucker tensor with uniform(0, 1) core and factors.
SyntheticTucker synth_tucker_exact(const Shape& shape, const Shape& ranks, std::uint64_t seed);

/// `n_classes` uniform(0, 1) prototypes of shape `sample_shape`; each sample is
/// its prototype plus eta * uniform(0, 1) per entry. Sample order is shuffled.
SyntheticClusters synth_clusters(const Shape& sample_shape, std::size_t n_classes,
                                 std::size_t per_class, double eta, std::uint64_t seed);

/// Mean within-class over mean between-class Euclidean distance of samples.
double within_between_ratio(const Matrix& samples, const std::vector<int>& labels);

} // namespace hgntr
