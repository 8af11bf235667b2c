#include "hgntr/synth.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace hgntr {

SyntheticTR synth_tr_exact(const Shape& shape, const Shape& ranks, std::uint64_t seed)
{
    SyntheticTR out{TRCores::random_uniform(shape, ranks, seed), {}};
    out.tensor = tr_reconstruct(out.cores);
    return out;
}

SyntheticTucker synth_tucker_exact(const Shape& shape, const Shape& ranks, std::uint64_t seed)
{
    if (shape.size() != ranks.size() || shape.empty())
        throw std::invalid_argument("need one Tucker rank per mode");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    SyntheticTucker out;
    out.model.core = DenseTensor(ranks);
    for (double& v : out.model.core.data()) v = unif(rng);
    for (std::size_t n = 0; n < shape.size(); ++n) {
        if (ranks[n] < 1 || ranks[n] > shape[n])
            throw std::invalid_argument("Tucker rank outside [1, extent]");
        Matrix u(static_cast<Eigen::Index>(shape[n]), static_cast<Eigen::Index>(ranks[n]));
        for (Eigen::Index i = 0; i < u.rows(); ++i)
            for (Eigen::Index j = 0; j < u.cols(); ++j) u(i, j) = unif(rng);
        out.model.factors.push_back(std::move(u));
    }
    out.tensor = tucker_reconstruct(out.model);
    return out;
}

SyntheticClusters synth_clusters(const Shape& sample_shape, std::size_t n_classes,
                                 std::size_t per_class, double eta, std::uint64_t seed)
{
    if (sample_shape.empty() || n_classes < 1 || per_class < 1)
        throw std::invalid_argument("clusters need a sample shape, classes and samples per class");
    if (!(eta >= 0.0)) throw std::invalid_argument("perturbation amplitude must be >= 0");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    SyntheticClusters out;
    for (std::size_t c = 0; c < n_classes; ++c) {
        DenseTensor p(sample_shape);
        for (double& v : p.data()) v = unif(rng);
        out.prototypes.push_back(std::move(p));
    }

    const std::size_t n = n_classes * per_class;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    const std::size_t sample_size = shape_size(sample_shape);
    Shape shape = sample_shape;
    shape.push_back(n);
    out.tensor = DenseTensor(shape);
    out.labels.assign(n, 0);
    auto dst = out.tensor.data();
    for (std::size_t s = 0; s < n; ++s) {
        const auto cls = order[s] / per_class;
        out.labels[s] = static_cast<int>(cls);
        const auto proto = out.prototypes[cls].data();
        // Last index is fastest, so sample s is strided by n.
        for (std::size_t j = 0; j < sample_size; ++j) dst[j * n + s] = proto[j] + eta * unif(rng);
    }
    return out;
}

double within_between_ratio(const Matrix& samples, const std::vector<int>& labels)
{
    if (static_cast<std::size_t>(samples.rows()) != labels.size())
        throw std::invalid_argument("one label per sample required");
    double within = 0.0, between = 0.0;
    std::size_t n_within = 0, n_between = 0;
    for (Eigen::Index i = 0; i < samples.rows(); ++i)
        for (Eigen::Index j = i + 1; j < samples.rows(); ++j) {
            const double d = (samples.row(i) - samples.row(j)).norm();
            if (labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)]) {
                within += d;
                ++n_within;
            } else {
                between += d;
                ++n_between;
            }
        }
    if (n_within == 0 || n_between == 0)
        throw std::invalid_argument("ratio needs both within- and between-class pairs");
    return (within / static_cast<double>(n_within)) / (between / static_cast<double>(n_between));
}

} // namespace hgntr
