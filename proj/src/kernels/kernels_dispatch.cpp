#include "ionnm/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace ionnm::kernels {

namespace {

using kernel_fn = ModeSums (*)(std::span<const double>, std::span<const double>,
                               std::span<const double>, double);

struct Dispatch {
    kernel_fn fn;
    const char* name;
};

Dispatch select() {
    const char* req = std::getenv("IONNM_KERNEL");
#if defined(__x86_64__) || defined(_M_X64)
    const bool have_avx2 = avx2_supported();
    if (req != nullptr) {
        if (std::strcmp(req, "scalar") == 0) return {mode_sums_scalar, "scalar"};
        if (std::strcmp(req, "avx2") == 0 && have_avx2) return {mode_sums_avx2, "avx2"};
    }
    if (have_avx2) return {mode_sums_avx2, "avx2"};
#else
    (void)req;
#endif
    return {mode_sums_scalar, "scalar"};
}

const Dispatch& dispatch() {
    static const Dispatch d = select();
    return d;
}

} // namespace

ModeSums mode_sums(std::span<const double> omega, std::span<const double> va,
                   std::span<const double> vb, double t) {
    return dispatch().fn(omega, va, vb, t);
}

std::string_view active_kernel() { return dispatch().name; }

} // namespace ionnm::kernels
