#include "hgntr/tensor_ring.hpp"

#include <random>
#include <stdexcept>
#include <string>

namespace hgntr {

TRCores::TRCores(std::vector<DenseTensor> cores)
    : cores_(std::move(cores))
{
    if (cores_.empty()) throw std::invalid_argument("tensor ring needs at least one core");
    const std::size_t n = cores_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (cores_[i].order() != 3)
            throw std::invalid_argument("core " + std::to_string(i) + " is not third-order");
        if (cores_[i].extent(2) != cores_[(i + 1) % n].extent(0))
            throw std::invalid_argument("rank chain broken between core " + std::to_string(i)
                                        + " and core " + std::to_string((i + 1) % n));
    }
}

TRCores TRCores::random_uniform(const Shape& extents, const Shape& ranks, std::uint64_t seed)
{
    if (extents.size() != ranks.size() || extents.empty())
        throw std::invalid_argument("need one TR rank per tensor mode");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<DenseTensor> cores;
    const std::size_t n = extents.size();
    for (std::size_t i = 0; i < n; ++i) {
        DenseTensor core({ranks[i], extents[i], ranks[(i + 1) % n]});
        for (double& v : core.data()) v = unif(rng);
        cores.push_back(std::move(core));
    }
    return TRCores(std::move(cores));
}

Shape TRCores::ranks() const
{
    Shape r;
    for (const auto& c : cores_) r.push_back(c.extent(0));
    return r;
}

Shape TRCores::extents() const
{
    Shape e;
    for (const auto& c : cores_) e.push_back(c.extent(1));
    return e;
}

void TRCores::set_core(std::size_t n, DenseTensor core)
{
    if (core.shape() != cores_.at(n).shape())
        throw std::invalid_argument("replacement core " + std::to_string(n) + " changes shape");
    cores_[n] = std::move(core);
}

bool TRCores::is_nonnegative() const noexcept
{
    for (const auto& c : cores_)
        if (!c.is_nonnegative()) return false;
    return true;
}

Matrix core_unfolding(const DenseTensor& core) { return unfold_classic(core, 1); }

DenseTensor fold_core(const Matrix& unfolding, const Shape& core_shape)
{
    return fold(unfolding, 1, core_shape);
}

DenseTensor subchain(const TRCores& cores, std::size_t n)
{
    const std::size_t order = cores.order();
    if (order < 2) throw std::invalid_argument("sub-chain needs at least two cores");
    if (n >= order) throw std::out_of_range("sub-chain core index out of range");
    DenseTensor acc = cores.core((n + 1) % order);
    for (std::size_t step = 2; step < order; ++step)
        acc = multilinear_product(acc, cores.core((n + step) % order));
    return acc;
}

Matrix subchain_unfolding(const TRCores& cores, std::size_t n)
{
    return unfold_tr(subchain(cores, n), 1);
}

DenseTensor tr_reconstruct(const TRCores& cores)
{
    const std::size_t order = cores.order();
    if (order == 0) throw std::invalid_argument("empty tensor ring");
    DenseTensor chain = cores.core(0);
    for (std::size_t m = 1; m < order; ++m) chain = multilinear_product(chain, cores.core(m));

    const std::size_t r = chain.extent(0);
    const std::size_t middle = chain.extent(1);
    DenseTensor out(cores.extents());
    auto dst = out.data();
    const auto src = chain.data();
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t j = 0; j < middle; ++j) dst[j] += src[(a * middle + j) * r + a];
    return out;
}

Matrix subchain_gram(const TRCores& cores, std::size_t n)
{
    const std::size_t order = cores.order();
    if (order < 2) throw std::invalid_argument("sub-chain Gram needs at least two cores");
    if (n >= order) throw std::out_of_range("sub-chain core index out of range");

    // E_m((p,p'),(q,q')) = sum_i G_m(p,i,q) G_m(p',i,q'), chained over the ring.
    auto self_contraction = [](const DenseTensor& core) {
        const std::size_t p_dim = core.extent(0), q_dim = core.extent(2);
        const Matrix g = core_unfolding(core);
        const Matrix k = g.transpose() * g;
        Matrix e(p_dim * p_dim, q_dim * q_dim);
        for (std::size_t p = 0; p < p_dim; ++p)
            for (std::size_t pp = 0; pp < p_dim; ++pp)
                for (std::size_t q = 0; q < q_dim; ++q)
                    for (std::size_t qq = 0; qq < q_dim; ++qq)
                        e(p * p_dim + pp, q * q_dim + qq) = k(p * q_dim + q, pp * q_dim + qq);
        return e;
    };

    Matrix chain = self_contraction(cores.core((n + 1) % order));
    for (std::size_t step = 2; step < order; ++step)
        chain = chain * self_contraction(cores.core((n + step) % order));

    const std::size_t r_next = cores.core(n).extent(2);
    const std::size_t r_this = cores.core(n).extent(0);
    Matrix gram(r_this * r_next, r_this * r_next);
    for (std::size_t a = 0; a < r_this; ++a)
        for (std::size_t b = 0; b < r_next; ++b)
            for (std::size_t aa = 0; aa < r_this; ++aa)
                for (std::size_t bb = 0; bb < r_next; ++bb)
                    gram(a * r_next + b, aa * r_next + bb) = chain(b * r_next + bb, a * r_this + aa);
    return gram;
}

} // namespace hgntr
