#include "segmeter/kernels.hpp"

namespace segmeter::kernels::scalar {

double dot(std::span<const double> x, std::span<const double> y) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void hash_words(std::uint64_t key, std::span<const std::uint64_t> words,
                std::span<std::uint64_t> out) noexcept {
    for (std::size_t i = 0; i < words.size(); ++i) out[i] = keyed_hash(key, words[i]);
}

std::size_t count_below(std::span<const std::uint64_t> values, std::uint64_t threshold) noexcept {
    std::size_t count = 0;
    for (auto v : values) count += v < threshold ? 1 : 0;
    return count;
}

}  // namespace segmeter::kernels::scalar
