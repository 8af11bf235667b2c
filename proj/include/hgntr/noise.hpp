#pragma once

#include <cstdint>

#include "hgntr/tensor.hpp"

namespace hgntr {

/// Adds iid Gaussian noise scaled so that 10 log10(|X|^2 / |noise|^2) equals
/// `snr_db` exactly. An infinite SNR returns X unchanged. With `truncate`,
/// negative entries of the result are set to zero.
DenseTensor add_gaussian_noise(const DenseTensor& x, double snr_db, std::uint64_t seed,
                               bool truncate);

/// Elementwise max(x, 0).
DenseTensor truncate_negatives(const DenseTensor& x);

} // namespace hgntr
