// Compiled with -mavx2. Only reached through dispatch after a CPUID check.

#include "segmeter/kernels.hpp"

#include <immintrin.h>

namespace segmeter::kernels::avx2 {
namespace {

// Low 64 bits of a 64x64 product; AVX2 has no native 64-bit mullo.
inline __m256i mullo64(__m256i a, __m256i b) {
    const __m256i a_hi = _mm256_srli_epi64(a, 32);
    const __m256i b_hi = _mm256_srli_epi64(b, 32);
    const __m256i lo = _mm256_mul_epu32(a, b);
    const __m256i cross = _mm256_add_epi64(_mm256_mul_epu32(a_hi, b), _mm256_mul_epu32(a, b_hi));
    return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

inline __m256i mix64(__m256i z) {
    const __m256i m1 = _mm256_set1_epi64x(static_cast<long long>(0xbf58476d1ce4e5b9ULL));
    const __m256i m2 = _mm256_set1_epi64x(static_cast<long long>(0x94d049bb133111ebULL));
    z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 30));
    z = mullo64(z, m1);
    z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 27));
    z = mullo64(z, m2);
    return _mm256_xor_si256(z, _mm256_srli_epi64(z, 31));
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double dot(std::span<const double> x, std::span<const double> y) noexcept {
    const std::size_t n = x.size();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i)));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(x.data() + i + 4),
                                                 _mm256_loadu_pd(y.data() + i + 4)));
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i)));
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
    const std::size_t n = x.size();
    const __m256d a = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(a, _mm256_loadu_pd(x.data() + i));
        _mm256_storeu_pd(y.data() + i, _mm256_add_pd(_mm256_loadu_pd(y.data() + i), prod));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void hash_words(std::uint64_t key, std::span<const std::uint64_t> words,
                std::span<std::uint64_t> out) noexcept {
    const std::size_t n = words.size();
    const __m256i k = _mm256_set1_epi64x(static_cast<long long>(key));
    const __m256i golden = _mm256_set1_epi64x(static_cast<long long>(kGolden));
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i w = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(words.data() + i));
        w = mix64(_mm256_add_epi64(mix64(_mm256_xor_si256(w, k)), golden));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + i), w);
    }
    for (; i < n; ++i) out[i] = keyed_hash(key, words[i]);
}

std::size_t count_below(std::span<const std::uint64_t> values, std::uint64_t threshold) noexcept {
    const std::size_t n = values.size();
    const __m256i sign = _mm256_set1_epi64x(static_cast<long long>(0x8000000000000000ULL));
    const __m256i t = _mm256_xor_si256(_mm256_set1_epi64x(static_cast<long long>(threshold)), sign);
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i v = _mm256_xor_si256(
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(values.data() + i)), sign);
        const int mask = _mm256_movemask_pd(_mm256_castsi256_pd(_mm256_cmpgt_epi64(t, v)));
        count += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mask)));
    }
    for (; i < n; ++i) count += values[i] < threshold ? 1 : 0;
    return count;
}

}  // namespace segmeter::kernels::avx2
