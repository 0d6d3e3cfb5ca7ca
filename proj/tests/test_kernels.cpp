#include "doctest.h"
#include "mortar_dg/kernels.hpp"
#include "mortar_dg/tensor_basis.hpp"

#include <cstring>
#include <random>

using namespace mdg;

TEST_CASE("scalar kernels are always available and active by default or by request") {
  auto names = kernels::available();
  CHECK(names.front() == "scalar");
  CHECK(kernels::select("scalar"));
  CHECK(std::string(kernels::active().name) == "scalar");
  CHECK_FALSE(kernels::select("no-such-variant"));
  CHECK(kernels::select(names.back()));
}

TEST_CASE("every SIMD variant reproduces the scalar reference bit for bit") {
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto& ref = kernels::scalar_table();
  for (const auto& name : kernels::available()) {
    if (name == "scalar") continue;
    const kernels::KernelTable* t = name == "avx2" ? kernels::avx2_table() : kernels::neon_table();
    REQUIRE(t != nullptr);
    for (int n = 2; n <= 10; ++n) {
      Mat A(n, n);
      for (int i = 0; i < n * n; ++i) A.data()[i] = u(g);
      Mat AT = A.transpose();
      std::vector<double> in(n * n * n), o1(n * n * n), o2(n * n * n);
      for (auto& v : in) v = u(g);
      for (int dir = 0; dir < 3; ++dir)
        for (int acc = 0; acc < 2; ++acc) {
          for (int i = 0; i < n * n * n; ++i) o1[i] = o2[i] = u(g);
          ref.apply_axis(A.data(), AT.data(), n, dir, in.data(), o1.data(), acc);
          t->apply_axis(A.data(), AT.data(), n, dir, in.data(), o2.data(), acc);
          CHECK(std::memcmp(o1.data(), o2.data(), o1.size() * sizeof(double)) == 0);
        }
    }
    for (std::size_t len : {1u, 3u, 4u, 7u, 64u, 1001u}) {
      std::vector<double> q1(len), r1(len), k(len);
      for (std::size_t i = 0; i < len; ++i) {
        q1[i] = u(g);
        r1[i] = u(g);
        k[i] = u(g);
      }
      auto q2 = q1, r2 = r1;
      ref.lsrk_update(q1.data(), r1.data(), k.data(), len, -0.41, 0.37, 0.013);
      t->lsrk_update(q2.data(), r2.data(), k.data(), len, -0.41, 0.37, 0.013);
      CHECK(std::memcmp(q1.data(), q2.data(), len * sizeof(double)) == 0);
      CHECK(std::memcmp(r1.data(), r2.data(), len * sizeof(double)) == 0);
    }
  }
}

TEST_CASE("tensor derivative is identical under every kernel variant") {
  TensorOps3D ops(5);
  std::mt19937_64 g(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> in(ops.volume_size());
  for (auto& v : in) v = u(g);
  std::vector<std::vector<double>> outs;
  for (const auto& name : kernels::available()) {
    REQUIRE(kernels::select(name));
    std::vector<double> out(ops.volume_size());
    for (int d = 0; d < 3; ++d) ops.derivative_transpose(in.data(), out.data(), d, d > 0);
    outs.push_back(out);
  }
  for (std::size_t i = 1; i < outs.size(); ++i) CHECK(outs[i] == outs[0]);
}
