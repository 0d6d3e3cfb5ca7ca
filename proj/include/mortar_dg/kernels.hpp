// Hot loops of the solver with a scalar reference implementation and SIMD
// variants picked at runtime. Every variant accumulates in the same order
// without fused multiply-add, so results are bit-identical across variants.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mdg::kernels {

// out[o, a, i] (+)= sum_b A[a, b] in[o, b, i] on an n^3 array viewed as
// (n^(2-dir), n, n^dir). AT is the transpose of A, used when dir == 0.
using ApplyAxisFn = void (*)(const double* A, const double* AT, int n, int dir,
                             const double* in, double* out, bool accumulate);

// One low-storage Runge-Kutta stage: res = a res + dt k; q = q + b res.
using LsrkUpdateFn = void (*)(double* q, double* res, const double* k, std::size_t len,
                              double a, double b, double dt);

struct KernelTable {
  const char* name;
  ApplyAxisFn apply_axis;
  LsrkUpdateFn lsrk_update;
};

const KernelTable& scalar_table();
// nullptr when the variant is not compiled in or the CPU lacks support.
const KernelTable* avx2_table();
const KernelTable* neon_table();

// The table used by the library. Chosen on first use: the widest supported
// variant unless MORTAR_DG_KERNELS=scalar is set in the environment.
const KernelTable& active();

// Forces a variant by name ("scalar", "avx2", "neon"); false if unavailable.
bool select(const std::string& name);

std::vector<std::string> available();

}  // namespace mdg::kernels
