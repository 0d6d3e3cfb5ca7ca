#include "mortar_dg/kernels.hpp"

namespace mdg::kernels {
namespace {

void apply_axis(const double* A, const double* /*AT*/, int n, int dir, const double* in,
                double* out, bool accumulate) {
  const int inner = dir == 0 ? 1 : (dir == 1 ? n : n * n);
  const int outer = dir == 0 ? n * n : (dir == 1 ? n : 1);
  for (int o = 0; o < outer; ++o) {
    const double* x = in + o * n * inner;
    double* y = out + o * n * inner;
    for (int a = 0; a < n; ++a) {
      const double* row = A + a * n;
      for (int i = 0; i < inner; ++i) {
        double s = 0.0;
        for (int b = 0; b < n; ++b) s += row[b] * x[b * inner + i];
        y[a * inner + i] = accumulate ? y[a * inner + i] + s : s;
      }
    }
  }
}

void lsrk_update(double* q, double* res, const double* k, std::size_t len, double a,
                 double b, double dt) {
  for (std::size_t i = 0; i < len; ++i) {
    const double r = a * res[i] + dt * k[i];
    res[i] = r;
    q[i] = q[i] + b * r;
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", &apply_axis, &lsrk_update};
  return table;
}

}  // namespace mdg::kernels
