#include "mortar_dg/kernels.hpp"

#include <atomic>
#include <cstdlib>

namespace mdg::kernels {

#ifndef MDG_HAVE_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif
#ifndef MDG_HAVE_NEON
const KernelTable* neon_table() { return nullptr; }
#endif

namespace {

const KernelTable* widest() {
  if (const KernelTable* t = avx2_table()) return t;
  if (const KernelTable* t = neon_table()) return t;
  return &scalar_table();
}

const KernelTable* initial_choice() {
  const char* env = std::getenv("MORTAR_DG_KERNELS");
  if (env && std::string(env) == "scalar") return &scalar_table();
  return widest();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_choice()};
  return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

bool select(const std::string& name) {
  const KernelTable* t = nullptr;
  if (name == "scalar") t = &scalar_table();
  if (name == "avx2") t = avx2_table();
  if (name == "neon") t = neon_table();
  if (!t) return false;
  current().store(t, std::memory_order_relaxed);
  return true;
}

std::vector<std::string> available() {
  std::vector<std::string> names{"scalar"};
  if (avx2_table()) names.emplace_back("avx2");
  if (neon_table()) names.emplace_back("neon");
  return names;
}

}  // namespace mdg::kernels
