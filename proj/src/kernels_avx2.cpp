// Copyright 2026 The lhiggs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma
// and must only be entered after a CPU feature check.

#include <immintrin.h>

#include <cmath>
#include <cstdint>

#include "lhiggs/kernels.hpp"

namespace lhiggs::kernels {
namespace {

// Cody-Waite split of pi/2; the first two parts have trailing zero bits so
// q * part is exact for |q| < 2^20.
constexpr double kPio2_1 = 1.57079632673412561417e+00;
constexpr double kPio2_2 = 6.07710050630396597660e-11;
constexpr double kPio2_3 = 2.02226624871116645580e-21;
constexpr double kTwoOverPi = 6.36619772367581382433e-01;
constexpr double kReduceLimit = 1e7;

// Minimax kernels on [-pi/4, pi/4] (fdlibm __kernel_sin / __kernel_cos).
constexpr double kS1 = -1.66666666666666324348e-01;
constexpr double kS2 = 8.33333333332248946124e-03;
constexpr double kS3 = -1.98412698298579493134e-04;
constexpr double kS4 = 2.75573137070700676789e-06;
constexpr double kS5 = -2.50507602534068634195e-08;
constexpr double kS6 = 1.58969099521155010221e-10;
constexpr double kC1 = 4.16666666666666019037e-02;
constexpr double kC2 = -1.38888888888741095749e-03;
constexpr double kC3 = 2.48015872894767294178e-05;
constexpr double kC4 = -2.75573143513906633035e-07;
constexpr double kC5 = 2.08757232129817482790e-09;
constexpr double kC6 = -1.13596475577881948265e-11;

constexpr double kLog2e = 1.44269504088896338700e+00;
constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kExpMax = 709.782712893384;
constexpr double kExpMin = -745.1332191019412;

inline __m256d sin_poly(__m256d r) {
  const __m256d z = _mm256_mul_pd(r, r);
  __m256d p = _mm256_set1_pd(kS6);
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(kS5));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(kS4));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(kS3));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(kS2));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(kS1));
  return _mm256_fmadd_pd(_mm256_mul_pd(p, z), r, r);
}

inline __m256d cos_poly(__m256d r) {
  const __m256d z = _mm256_mul_pd(r, r);
  __m256d p = _mm256_set1_pd(kC6);
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(kC5));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(kC4));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(kC3));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(kC2));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(kC1));
  const __m256d hz = _mm256_mul_pd(_mm256_set1_pd(0.5), z);
  const __m256d w = _mm256_sub_pd(_mm256_set1_pd(1.0), hz);
  // 1 - hz loses the low bits of hz; add them back before the tail.
  const __m256d corr =
      _mm256_sub_pd(_mm256_sub_pd(_mm256_set1_pd(1.0), w), hz);
  return _mm256_add_pd(w, _mm256_fmadd_pd(_mm256_mul_pd(z, z), p, corr));
}

// Reduces x to r in [-pi/4, pi/4] and returns the quadrant in q.
inline __m256d reduce(__m256d x, __m256i& q) {
  const __m256d qd = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kTwoOverPi)),
                                     _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(qd, _mm256_set1_pd(kPio2_1), x);
  r = _mm256_fnmadd_pd(qd, _mm256_set1_pd(kPio2_2), r);
  r = _mm256_fnmadd_pd(qd, _mm256_set1_pd(kPio2_3), r);
  q = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(qd));
  return r;
}

inline bool any_large(__m256d x) {
  const __m256d ax = _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
  // Also catches NaN (unordered compare).
  const __m256d bad = _mm256_cmp_pd(ax, _mm256_set1_pd(kReduceLimit), _CMP_NLT_UQ);
  return _mm256_movemask_pd(bad) != 0;
}

// phase 0 for cos, 1 for sin: result uses quadrant q + phase.
inline __m256d trig4(__m256d x, int phase) {
  __m256i q;
  const __m256d r = reduce(x, q);
  q = _mm256_add_epi64(q, _mm256_set1_epi64x(phase == 0 ? 0 : 3));
  const __m256d s = sin_poly(r);
  const __m256d c = cos_poly(r);
  // cos(r + q pi/2): q%4 = 0 -> c, 1 -> -s, 2 -> -c, 3 -> s.
  // sin(x) = cos(x - pi/2) = cos(r + (q-1) pi/2) = cos(r + (q+3) pi/2).
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i two = _mm256_set1_epi64x(2);
  const __m256i odd = _mm256_cmpeq_epi64(_mm256_and_si256(q, one), one);
  const __m256i q1 = _mm256_add_epi64(q, one);
  const __m256i neg = _mm256_cmpeq_epi64(_mm256_and_si256(q1, two), two);
  __m256d v = _mm256_blendv_pd(c, s, _mm256_castsi256_pd(odd));
  const __m256d sign =
      _mm256_and_pd(_mm256_castsi256_pd(neg), _mm256_set1_pd(-0.0));
  return _mm256_xor_pd(v, sign);
}

inline __m256d exp4(__m256d x) {
  const __m256d xc = _mm256_max_pd(_mm256_min_pd(x, _mm256_set1_pd(kExpMax)),
                                   _mm256_set1_pd(kExpMin));
  const __m256d nd = _mm256_round_pd(_mm256_mul_pd(xc, _mm256_set1_pd(kLog2e)),
                                     _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(nd, _mm256_set1_pd(kLn2Hi), xc);
  r = _mm256_fnmadd_pd(nd, _mm256_set1_pd(kLn2Lo), r);
  // Taylor to degree 13; |r| <= ln2/2 keeps the truncation below 1e-17.
  __m256d p = _mm256_set1_pd(1.0 / 6227020800.0);
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  // 2^n in two halves so that n down to -1075 stays representable.
  const __m256i n = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(nd));
  const __m256i n1 = _mm256_srai_epi32(n, 1);  // lanes fit in 32 bits
  const __m256i n1s = _mm256_blend_epi32(n1, _mm256_srai_epi32(n, 31), 0xAA);
  const __m256i n2 = _mm256_sub_epi64(n, n1s);
  const __m256i bias = _mm256_set1_epi64x(1023);
  const __m256d s1 = _mm256_castsi256_pd(
      _mm256_slli_epi64(_mm256_add_epi64(n1s, bias), 52));
  const __m256d s2 = _mm256_castsi256_pd(
      _mm256_slli_epi64(_mm256_add_epi64(n2, bias), 52));
  __m256d y = _mm256_mul_pd(_mm256_mul_pd(p, s1), s2);
  const __m256d under = _mm256_cmp_pd(x, _mm256_set1_pd(kExpMin), _CMP_LT_OQ);
  const __m256d over = _mm256_cmp_pd(x, _mm256_set1_pd(kExpMax), _CMP_GT_OQ);
  y = _mm256_andnot_pd(under, y);
  y = _mm256_blendv_pd(y, _mm256_set1_pd(HUGE_VAL), over);
  // Propagate NaN.
  const __m256d nan = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
  return _mm256_blendv_pd(y, x, nan);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void cos_avx2(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    if (any_large(v)) {
      for (std::size_t t = 0; t < 4; ++t) out[i + t] = std::cos(x[i + t]);
      continue;
    }
    _mm256_storeu_pd(out + i, trig4(v, 0));
  }
  for (; i < n; ++i) out[i] = std::cos(x[i]);
}

void sin_avx2(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    if (any_large(v)) {
      for (std::size_t t = 0; t < 4; ++t) out[i + t] = std::sin(x[i + t]);
      continue;
    }
    _mm256_storeu_pd(out + i, trig4(v, 1));
  }
  for (; i < n; ++i) out[i] = std::sin(x[i]);
}

void exp_avx2(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, exp4(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = std::exp(x[i]);
}

template <int Phase>
double sum_trig_avx2(const double* x, double scale, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  double tail = 0.0;
  const __m256d sc = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_mul_pd(sc, _mm256_loadu_pd(x + i));
    if (any_large(v)) {
      for (std::size_t t = 0; t < 4; ++t) {
        const double a = scale * x[i + t];
        tail += Phase == 0 ? std::cos(a) : std::sin(a);
      }
      continue;
    }
    acc = _mm256_add_pd(acc, trig4(v, Phase));
  }
  for (; i < n; ++i) {
    const double a = scale * x[i];
    tail += Phase == 0 ? std::cos(a) : std::sin(a);
  }
  return hsum(acc) + tail;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void mul_exp_cos_avx2(const double* x, double a, double shift, double offset,
                      double subtract, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vs = _mm256_set1_pd(shift);
  const __m256d vo = _mm256_set1_pd(offset);
  const __m256d vsub = _mm256_set1_pd(subtract);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d arg = _mm256_add_pd(_mm256_loadu_pd(x + i), vs);
    __m256d c;
    if (any_large(arg)) {
      alignas(32) double tmp[4];
      _mm256_store_pd(tmp, arg);
      for (double& t : tmp) t = std::cos(t);
      c = _mm256_load_pd(tmp);
    } else {
      c = trig4(arg, 0);
    }
    const __m256d e = exp4(_mm256_mul_pd(va, _mm256_sub_pd(c, vo)));
    const __m256d f = _mm256_sub_pd(e, vsub);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(out + i), f));
  }
  for (; i < n; ++i) {
    out[i] *= std::exp(a * (std::cos(x[i] + shift) - offset)) - subtract;
  }
}

constexpr KernelTable kAvx2{
    "avx2",
    cos_avx2,
    sin_avx2,
    exp_avx2,
    sum_trig_avx2<0>,
    sum_trig_avx2<1>,
    dot_avx2,
    mul_exp_cos_avx2,
};

}  // namespace

namespace detail {
const KernelTable* avx2_table_impl() { return &kAvx2; }
}  // namespace detail

}  // namespace lhiggs::kernels
