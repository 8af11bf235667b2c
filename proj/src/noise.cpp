#include "hgntr/noise.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace hgntr {

DenseTensor truncate_negatives(const DenseTensor& x)
{
    DenseTensor out = x;
    for (double& v : out.data()) v = std::max(v, 0.0);
    return out;
}

DenseTensor add_gaussian_noise(const DenseTensor& x, double snr_db, std::uint64_t seed,
                               bool truncate)
{
    if (std::isnan(snr_db)) throw std::invalid_argument("SNR is NaN");
    const double signal = x.squared_norm();
    if (signal == 0.0) throw std::invalid_argument("cannot set an SNR for a zero tensor");
    if (std::isinf(snr_db) && snr_db > 0) return truncate ? truncate_negatives(x) : x;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> noise(x.size());
    double energy = 0.0;
    for (double& v : noise) {
        v = normal(rng);
        energy += v * v;
    }
    const double target = signal / std::pow(10.0, snr_db / 10.0);
    const double scale = std::sqrt(target / energy);

    DenseTensor out = x;
    auto dst = out.data();
    for (std::size_t i = 0; i < noise.size(); ++i) dst[i] += scale * noise[i];
    return truncate ? truncate_negatives(out) : out;
}

} // namespace hgntr
