#include "ionnm/kernels.hpp"

#include <cmath>

namespace ionnm::kernels {

ModeSums mode_sums_scalar(std::span<const double> omega, std::span<const double> va,
                          std::span<const double> vb, double t) {
    double a = 0.0;
    double b = 0.0;
    const std::size_t n = omega.size();
    for (std::size_t j = 0; j < n; ++j) {
        const double x = omega[j] * t;
        a += va[j] * (1.0 - std::cos(x));
        b += vb[j] * std::sin(x);
    }
    return {a, b};
}

} // namespace ionnm::kernels
