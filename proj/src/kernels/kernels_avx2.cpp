// AVX2 + FMA variant of the mode-sum kernel. Compiled with -mavx2 -mfma in a
// separate translation unit; callers go through the runtime dispatcher, so the
// rest of the binary stays baseline-x86_64.
#include "ionnm/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

namespace ionnm::kernels {

namespace {

// Cody-Waite split of pi/2. PIO2_A carries 33 significant bits, so q*PIO2_A is
// exact for |q| < 2^20; arguments here stay below omega_max * t_max ~ 1e3.
constexpr double kTwoOverPi = 6.36619772367581382433e-01;
constexpr double kPio2A = 1.57079632673412561417e+00;
constexpr double kPio2B = 6.07710050650619224932e-11;
constexpr double kPio2C = 2.02226624879595063154e-21;

// Minimax polynomials on [-pi/4, pi/4] (Cephes coefficients).
constexpr double S1 = -1.66666666666666307295e-01;
constexpr double S2 = 8.33333333332211858878e-03;
constexpr double S3 = -1.98412698295895385996e-04;
constexpr double S4 = 2.75573136213857245213e-06;
constexpr double S5 = -2.50507477628578072866e-08;
constexpr double S6 = 1.58962301576546568060e-10;

constexpr double C1 = 4.16666666666665929218e-02;
constexpr double C2 = -1.38888888888730564116e-03;
constexpr double C3 = 2.48015872888517179954e-05;
constexpr double C4 = -2.75573141792967388112e-07;
constexpr double C5 = 2.08757008419747316778e-09;
constexpr double C6 = -1.13585365213876817300e-11;

inline void sincos4(__m256d x, __m256d& s_out, __m256d& c_out) {
    const __m256d q = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kTwoOverPi)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    // r = x - q*pi/2, three-term reduction
    __m256d r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kPio2A), x);
    r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kPio2B), r);
    r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kPio2C), r);

    const __m256d z = _mm256_mul_pd(r, r);

    __m256d ps = _mm256_set1_pd(S6);
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(S5));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(S4));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(S3));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(S2));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(S1));
    // sin(r) = r + r*z*P(z)
    const __m256d sr = _mm256_fmadd_pd(_mm256_mul_pd(r, z), ps, r);

    __m256d pc = _mm256_set1_pd(C6);
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(C5));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(C4));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(C3));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(C2));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(C1));
    // cos(r) = 1 - z/2 + z^2*Q(z)
    const __m256d cr = _mm256_fmadd_pd(_mm256_mul_pd(z, z), pc,
                                       _mm256_fnmadd_pd(z, _mm256_set1_pd(0.5),
                                                        _mm256_set1_pd(1.0)));

    // quadrant fixup from q mod 4
    const __m128i qi = _mm256_cvtpd_epi32(q);
    const __m256i qw = _mm256_cvtepi32_epi64(qi);
    const __m256i bit0 = _mm256_and_si256(qw, _mm256_set1_epi64x(1));
    const __m256i bit1 = _mm256_and_si256(qw, _mm256_set1_epi64x(2));
    const __m256d swap = _mm256_castsi256_pd(
        _mm256_sub_epi64(_mm256_setzero_si256(), bit0));  // all-ones when q odd
    const __m256d signbit = _mm256_set1_pd(-0.0);
    // sin: negate when q&2; cos: negate when ((q+1)&2), i.e. q mod 4 in {1,2}
    const __m256d sneg = _mm256_and_pd(
        _mm256_castsi256_pd(_mm256_sub_epi64(_mm256_setzero_si256(),
                                             _mm256_srli_epi64(bit1, 1))),
        signbit);
    const __m256i qp1 = _mm256_and_si256(_mm256_add_epi64(qw, _mm256_set1_epi64x(1)),
                                         _mm256_set1_epi64x(2));
    const __m256d cneg = _mm256_and_pd(
        _mm256_castsi256_pd(_mm256_sub_epi64(_mm256_setzero_si256(),
                                             _mm256_srli_epi64(qp1, 1))),
        signbit);

    const __m256d s_base = _mm256_blendv_pd(sr, cr, swap);
    const __m256d c_base = _mm256_blendv_pd(cr, sr, swap);
    s_out = _mm256_xor_pd(s_base, sneg);
    c_out = _mm256_xor_pd(c_base, cneg);
}

} // namespace

bool avx2_supported() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

ModeSums mode_sums_avx2(std::span<const double> omega, std::span<const double> va,
                        std::span<const double> vb, double t) {
    const std::size_t n = omega.size();
    const std::size_t n4 = n - n % 4;
    const __m256d tv = _mm256_set1_pd(t);
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d acc_a = _mm256_setzero_pd();
    __m256d acc_b = _mm256_setzero_pd();
    for (std::size_t j = 0; j < n4; j += 4) {
        const __m256d x = _mm256_mul_pd(_mm256_loadu_pd(omega.data() + j), tv);
        __m256d s, c;
        sincos4(x, s, c);
        acc_a = _mm256_fmadd_pd(_mm256_loadu_pd(va.data() + j), _mm256_sub_pd(one, c), acc_a);
        acc_b = _mm256_fmadd_pd(_mm256_loadu_pd(vb.data() + j), s, acc_b);
    }
    alignas(32) double lane_a[4], lane_b[4];
    _mm256_store_pd(lane_a, acc_a);
    _mm256_store_pd(lane_b, acc_b);
    double a = (lane_a[0] + lane_a[2]) + (lane_a[1] + lane_a[3]);
    double b = (lane_b[0] + lane_b[2]) + (lane_b[1] + lane_b[3]);
    for (std::size_t j = n4; j < n; ++j) {
        const double x = omega[j] * t;
        a += va[j] * (1.0 - std::cos(x));
        b += vb[j] * std::sin(x);
    }
    return {a, b};
}

} // namespace ionnm::kernels

#endif // x86_64
