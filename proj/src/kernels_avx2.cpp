#include "mortar_dg/kernels.hpp"

#include <immintrin.h>

namespace mdg::kernels {
namespace {

inline __m256i tail_mask(int r) {
  return _mm256_setr_epi64x(r > 0 ? -1 : 0, r > 1 ? -1 : 0, r > 2 ? -1 : 0, 0);
}

// Rows of A applied to contiguous runs: y[a, i..i+3] = sum_b A[a, b] x[b, i..i+3].
void contract_runs(const double* A, int n, int inner, const double* x, double* y,
                   bool accumulate) {
  const int full = inner & ~3;
  const int rem = inner - full;
  const __m256i mask = tail_mask(rem);
  for (int a = 0; a < n; ++a) {
    const double* row = A + a * n;
    double* ya = y + a * inner;
    for (int i = 0; i < full; i += 4) {
      __m256d s = _mm256_setzero_pd();
      for (int b = 0; b < n; ++b)
        s = _mm256_add_pd(s, _mm256_mul_pd(_mm256_set1_pd(row[b]),
                                           _mm256_loadu_pd(x + b * inner + i)));
      if (accumulate) s = _mm256_add_pd(_mm256_loadu_pd(ya + i), s);
      _mm256_storeu_pd(ya + i, s);
    }
    if (rem) {
      __m256d s = _mm256_setzero_pd();
      for (int b = 0; b < n; ++b)
        s = _mm256_add_pd(s, _mm256_mul_pd(_mm256_set1_pd(row[b]),
                                           _mm256_maskload_pd(x + b * inner + full, mask)));
      if (accumulate) s = _mm256_add_pd(_mm256_maskload_pd(ya + full, mask), s);
      _mm256_maskstore_pd(ya + full, mask, s);
    }
  }
}

void apply_axis(const double* A, const double* AT, int n, int dir, const double* in,
                double* out, bool accumulate) {
  if (dir == 0) {
    // Lines are contiguous; vectorise over the output index using columns of A.
    const int full = n & ~3;
    const int rem = n - full;
    const __m256i mask = tail_mask(rem);
    for (int o = 0; o < n * n; ++o) {
      const double* x = in + o * n;
      double* y = out + o * n;
      for (int a = 0; a < full; a += 4) {
        __m256d s = _mm256_setzero_pd();
        for (int b = 0; b < n; ++b)
          s = _mm256_add_pd(s, _mm256_mul_pd(_mm256_loadu_pd(AT + b * n + a),
                                             _mm256_set1_pd(x[b])));
        if (accumulate) s = _mm256_add_pd(_mm256_loadu_pd(y + a), s);
        _mm256_storeu_pd(y + a, s);
      }
      if (rem) {
        __m256d s = _mm256_setzero_pd();
        for (int b = 0; b < n; ++b)
          s = _mm256_add_pd(s, _mm256_mul_pd(_mm256_maskload_pd(AT + b * n + full, mask),
                                             _mm256_set1_pd(x[b])));
        if (accumulate) s = _mm256_add_pd(_mm256_maskload_pd(y + full, mask), s);
        _mm256_maskstore_pd(y + full, mask, s);
      }
    }
    return;
  }
  const int inner = dir == 1 ? n : n * n;
  const int outer = dir == 1 ? n : 1;
  for (int o = 0; o < outer; ++o)
    contract_runs(A, n, inner, in + o * n * inner, out + o * n * inner, accumulate);
}

void lsrk_update(double* q, double* res, const double* k, std::size_t len, double a,
                 double b, double dt) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  const __m256d vdt = _mm256_set1_pd(dt);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d r = _mm256_add_pd(_mm256_mul_pd(va, _mm256_loadu_pd(res + i)),
                                    _mm256_mul_pd(vdt, _mm256_loadu_pd(k + i)));
    _mm256_storeu_pd(res + i, r);
    _mm256_storeu_pd(q + i, _mm256_add_pd(_mm256_loadu_pd(q + i), _mm256_mul_pd(vb, r)));
  }
  for (; i < len; ++i) {
    const double r = a * res[i] + dt * k[i];
    res[i] = r;
    q[i] = q[i] + b * r;
  }
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{"avx2", &apply_axis, &lsrk_update};
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &table : nullptr;
}

}  // namespace mdg::kernels
