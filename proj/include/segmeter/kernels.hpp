#pragma once

// Data-parallel inner loops. Every kernel has a portable scalar reference
// implementation and, on x86-64, an AVX2 variant. The active variant is
// chosen once at startup from CPUID (override with SEGMETER_ISA=scalar).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace segmeter::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

// Variant used by the dispatching entry points below.
Isa active_isa() noexcept;

// True when the CPU and the build both support the variant.
bool isa_available(Isa isa) noexcept;

// Pin the dispatch target (tests, benchmarking). Falls back to scalar when
// the requested variant is unavailable; returns the variant now active.
Isa force_isa(Isa isa) noexcept;

// splitmix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Keyed hash of one packed word: mix64(mix64(word ^ key) + kGolden).
constexpr std::uint64_t keyed_hash(std::uint64_t key, std::uint64_t word) noexcept {
    return mix64(mix64(word ^ key) + kGolden);
}

double dot(std::span<const double> x, std::span<const double> y) noexcept;

// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept;

// out[i] = keyed_hash(key, words[i]); bit-exact across variants.
void hash_words(std::uint64_t key, std::span<const std::uint64_t> words,
                std::span<std::uint64_t> out) noexcept;

// Number of values v with v < threshold (unsigned compare).
std::size_t count_below(std::span<const std::uint64_t> values, std::uint64_t threshold) noexcept;

namespace scalar {
double dot(std::span<const double> x, std::span<const double> y) noexcept;
void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept;
void hash_words(std::uint64_t key, std::span<const std::uint64_t> words,
                std::span<std::uint64_t> out) noexcept;
std::size_t count_below(std::span<const std::uint64_t> values, std::uint64_t threshold) noexcept;
}  // namespace scalar

#if defined(SEGMETER_HAVE_AVX2)
namespace avx2 {
double dot(std::span<const double> x, std::span<const double> y) noexcept;
void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept;
void hash_words(std::uint64_t key, std::span<const std::uint64_t> words,
                std::span<std::uint64_t> out) noexcept;
std::size_t count_below(std::span<const std::uint64_t> values, std::uint64_t threshold) noexcept;
}  // namespace avx2
#endif

}  // namespace segmeter::kernels
