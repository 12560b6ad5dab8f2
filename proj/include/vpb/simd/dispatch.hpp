#pragma once

#include <string>

#include "vpb/simd/collision_row.hpp"

namespace vpb::simd {

using CollisionRowFn = RowOut (*)(const CollisionTables&, const double*, const double*, int);

struct Backend {
  const char* name;
  CollisionRowFn collision_row;
};

// Active backend: AVX2 when the CPU supports it, overridable with the
// VPB_SIMD environment variable ("scalar" or "avx2").
const Backend& active();
const Backend& scalar();
void force(const std::string& name);  // throws on unknown/unsupported name

}  // namespace vpb::simd
