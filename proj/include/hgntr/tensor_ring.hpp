#pragma once

#include <cstdint>
#include <vector>

#include "hgntr/tensor.hpp"

namespace hgntr {

/// Ordered ring of third-order cores. Core n has shape (R_n, I_n, R_{n+1})
/// with the rank chain closing cyclically (R_N == R_0).
class TRCores {
public:
    TRCores() = default;
    explicit TRCores(std::vector<DenseTensor> cores);

    /// Cores with entries drawn iid from uniform(0, 1).
    static TRCores random_uniform(const Shape& extents, const Shape& ranks, std::uint64_t seed);

    std::size_t order() const noexcept { return cores_.size(); }
    const DenseTensor& core(std::size_t n) const { return cores_.at(n); }
    const std::vector<DenseTensor>& cores() const noexcept { return cores_; }
    Shape ranks() const;
    Shape extents() const;

    // Replaces core n, keeping the ring shape intact.
    void set_core(std::size_t n, DenseTensor core);

    bool is_nonnegative() const noexcept;

private:
    std::vector<DenseTensor> cores_;
};

/// Mode-2 unfolding G_(2) of a core: I_n x (R_n R_{n+1}), column r_n * R_{n+1} + r_{n+1}.
Matrix core_unfolding(const DenseTensor& core);
DenseTensor fold_core(const Matrix& unfolding, const Shape& core_shape);

/// Multilinear product of all cores except n, in cyclic order n+1, ..., n-1.
/// Shape (R_{n+1}, prod of the other extents, R_n).
DenseTensor subchain(const TRCores& cores, std::size_t n);

/// G^{!=n}_[2]: the sub-chain unfolded so that its columns line up with
/// core_unfolding(core(n)), i.e. rows enumerate the other modes cyclically
/// and column r_n * R_{n+1} + r_{n+1} holds sub-chain entry (r_{n+1}, j, r_n).
Matrix subchain_unfolding(const TRCores& cores, std::size_t n);

/// Full tensor: X(i_0..i_{N-1}) = Tr(G_0(i_0) ... G_{N-1}(i_{N-1})).
DenseTensor tr_reconstruct(const TRCores& cores);

/// (G^{!=n}_[2])^T G^{!=n}_[2] computed from per-core self-contractions,
/// never materializing the sub-chain.
Matrix subchain_gram(const TRCores& cores, std::size_t n);

} // namespace hgntr
