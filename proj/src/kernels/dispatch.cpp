#include "segmeter/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace segmeter::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(SEGMETER_HAVE_AVX2)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa detect() noexcept {
    if (const char* env = std::getenv("SEGMETER_ISA"); env && std::string_view(env) == "scalar")
        return Isa::scalar;
    return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() noexcept {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

bool isa_available(Isa isa) noexcept {
    return isa == Isa::scalar || cpu_has_avx2();
}

Isa force_isa(Isa isa) noexcept {
    if (!isa_available(isa)) isa = Isa::scalar;
    current().store(isa, std::memory_order_relaxed);
    return isa;
}

#if defined(SEGMETER_HAVE_AVX2)
#define SEGMETER_DISPATCH(call) \
    return active_isa() == Isa::avx2 ? avx2::call : scalar::call
#else
#define SEGMETER_DISPATCH(call) return scalar::call
#endif

double dot(std::span<const double> x, std::span<const double> y) noexcept {
    SEGMETER_DISPATCH(dot(x, y));
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
    SEGMETER_DISPATCH(axpy(alpha, x, y));
}

void hash_words(std::uint64_t key, std::span<const std::uint64_t> words,
                std::span<std::uint64_t> out) noexcept {
    SEGMETER_DISPATCH(hash_words(key, words, out));
}

std::size_t count_below(std::span<const std::uint64_t> values, std::uint64_t threshold) noexcept {
    SEGMETER_DISPATCH(count_below(values, threshold));
}

#undef SEGMETER_DISPATCH

}  // namespace segmeter::kernels
