#pragma once

// Vector and CSR kernels behind the iterative solvers. A portable scalar
// reference and an AVX2/FMA variant are selected once at runtime.

#include <cstddef>
#include <span>

namespace esfem::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
    Isa isa;
    const char* name;
    double (*dot)(const double* x, const double* y, std::size_t n);
    /// y += a x
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    /// y = x + b y
    void (*xpby)(const double* x, double b, double* y, std::size_t n);
    /// y = A x for CSR (row_ptr, col, val) with `rows` rows.
    void (*spmv)(std::size_t rows, const int* row_ptr, const int* col, const double* val, const double* x, double* y);
};

const KernelTable& scalar_table();
/// nullptr when the AVX2 variant was not compiled in.
const KernelTable* avx2_table();
bool cpu_supports_avx2();

/// The table in use. On first call it honours ESFEM_SIMD=scalar|avx2|auto
/// (default auto: AVX2 when compiled in and supported by the CPU).
const KernelTable& active();
/// Forces a variant; throws ConfigError if it is unavailable on this machine.
void select(Isa isa);

inline double dot(std::span<const double> x, std::span<const double> y) { return active().dot(x.data(), y.data(), x.size()); }
inline void axpy(double a, std::span<const double> x, std::span<double> y) { active().axpy(a, x.data(), y.data(), x.size()); }
inline void xpby(std::span<const double> x, double b, std::span<double> y) { active().xpby(x.data(), b, y.data(), x.size()); }

}  // namespace esfem::kernels
