#include "esfem/errors.hpp"
#include "esfem/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace esfem::kernels {

#ifndef ESFEM_HAVE_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif

bool cpu_supports_avx2()
{
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

const KernelTable* detect()
{
    const char* env = std::getenv("ESFEM_SIMD");
    const std::string choice = env ? env : "auto";
    if (choice == "scalar") return &scalar_table();
    if (avx2_table() != nullptr && cpu_supports_avx2()) return avx2_table();
    return &scalar_table();
}

std::atomic<const KernelTable*> current{nullptr};

}  // namespace

const KernelTable& active()
{
    const KernelTable* t = current.load(std::memory_order_acquire);
    if (t == nullptr) {
        t = detect();
        current.store(t, std::memory_order_release);
    }
    return *t;
}

void select(Isa isa)
{
    if (isa == Isa::scalar) {
        current.store(&scalar_table());
        return;
    }
    if (avx2_table() == nullptr || !cpu_supports_avx2())
        throw ConfigError("AVX2 kernels are not available on this machine");
    current.store(avx2_table());
}

}  // namespace esfem::kernels
