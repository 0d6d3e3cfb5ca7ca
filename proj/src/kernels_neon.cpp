#include "mortar_dg/kernels.hpp"

#include <arm_neon.h>

namespace mdg::kernels {
namespace {

void contract_runs(const double* A, int n, int inner, const double* x, double* y,
                   bool accumulate) {
  const int full = inner & ~1;
  for (int a = 0; a < n; ++a) {
    const double* row = A + a * n;
    double* ya = y + a * inner;
    for (int i = 0; i < full; i += 2) {
      float64x2_t s = vdupq_n_f64(0.0);
      for (int b = 0; b < n; ++b)
        s = vaddq_f64(s, vmulq_f64(vdupq_n_f64(row[b]), vld1q_f64(x + b * inner + i)));
      if (accumulate) s = vaddq_f64(vld1q_f64(ya + i), s);
      vst1q_f64(ya + i, s);
    }
    if (full < inner) {
      double s = 0.0;
      for (int b = 0; b < n; ++b) s += row[b] * x[b * inner + full];
      ya[full] = accumulate ? ya[full] + s : s;
    }
  }
}

void apply_axis(const double* A, const double* AT, int n, int dir, const double* in,
                double* out, bool accumulate) {
  if (dir == 0) {
    const int full = n & ~1;
    for (int o = 0; o < n * n; ++o) {
      const double* x = in + o * n;
      double* y = out + o * n;
      for (int a = 0; a < full; a += 2) {
        float64x2_t s = vdupq_n_f64(0.0);
        for (int b = 0; b < n; ++b)
          s = vaddq_f64(s, vmulq_f64(vld1q_f64(AT + b * n + a), vdupq_n_f64(x[b])));
        if (accumulate) s = vaddq_f64(vld1q_f64(y + a), s);
        vst1q_f64(y + a, s);
      }
      if (full < n) {
        double s = 0.0;
        for (int b = 0; b < n; ++b) s += A[full * n + b] * x[b];
        y[full] = accumulate ? y[full] + s : s;
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
  const float64x2_t va = vdupq_n_f64(a);
  const float64x2_t vb = vdupq_n_f64(b);
  const float64x2_t vdt = vdupq_n_f64(dt);
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    const float64x2_t r =
        vaddq_f64(vmulq_f64(va, vld1q_f64(res + i)), vmulq_f64(vdt, vld1q_f64(k + i)));
    vst1q_f64(res + i, r);
    vst1q_f64(q + i, vaddq_f64(vld1q_f64(q + i), vmulq_f64(vb, r)));
  }
  for (; i < len; ++i) {
    const double r = a * res[i] + dt * k[i];
    res[i] = r;
    q[i] = q[i] + b * r;
  }
}

}  // namespace

const KernelTable* neon_table() {
  static const KernelTable table{"neon", &apply_axis, &lsrk_update};
  return &table;
}

}  // namespace mdg::kernels
