// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <string>

#include "kernels_impl.hpp"
#include "loralab/errors.hpp"

namespace loralab::kernels {

namespace {

const KernelTable kScalar{
    Isa::kScalar,        "scalar",       &scalar::dot,          &scalar::sum_squares,
    &scalar::axpy,       &scalar::scale, &scalar::adamw_update,
};

#if defined(LORALAB_HAVE_AVX2)
const KernelTable kAvx2{
    Isa::kAvx2,        "avx2",       &avx2::dot,          &avx2::sum_squares,
    &avx2::axpy,       &avx2::scale, &avx2::adamw_update,
};
#endif

const KernelTable* detect() {
#if defined(LORALAB_HAVE_AVX2)
  if (cpu_supports(Isa::kAvx2)) return &kAvx2;
#endif
  return &kScalar;
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> table{detect()};
  return table;
}

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

const KernelTable* avx2_table() {
#if defined(LORALAB_HAVE_AVX2)
  return &kAvx2;
#else
  return nullptr;
#endif
}

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(LORALAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& active() { return *slot().load(std::memory_order_relaxed); }

void select(Isa isa) {
  if (isa == Isa::kScalar) {
    slot().store(&kScalar);
    return;
  }
  const KernelTable* table = avx2_table();
  if (table == nullptr || !cpu_supports(isa)) {
    throw ArgumentError(std::string("kernel variant unavailable: ") + isa_name(isa));
  }
  slot().store(table);
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace loralab::kernels
