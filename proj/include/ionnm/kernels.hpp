#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace ionnm::kernels {

/// The two trigonometric mode sums behind every dephasing quantity,
/// evaluated at one time:
///   a = sum_j va[j] * (1 - cos(omega[j]*t))   -> decay exponent A(t)
///   b = sum_j vb[j] * sin(omega[j]*t)         -> phase B(t)
struct ModeSums {
    double a;
    double b;
};

ModeSums mode_sums_scalar(std::span<const double> omega, std::span<const double> va,
                          std::span<const double> vb, double t);

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_supported();
ModeSums mode_sums_avx2(std::span<const double> omega, std::span<const double> va,
                        std::span<const double> vb, double t);
#endif

/// Runtime-dispatched entry point. Picks AVX2 when the CPU supports it,
/// scalar otherwise; the IONNM_KERNEL environment variable ("scalar" or
/// "avx2") overrides the choice.
ModeSums mode_sums(std::span<const double> omega, std::span<const double> va,
                   std::span<const double> vb, double t);

/// Name of the implementation mode_sums() dispatches to ("scalar" / "avx2").
std::string_view active_kernel();

} // namespace ionnm::kernels
