#include "vpb/simd/dispatch.hpp"

#include <cstdlib>
#include <stdexcept>

namespace vpb::simd {

namespace {

const Backend kScalar{"scalar", &collision_row_scalar};
const Backend kAvx2{"avx2", &collision_row_avx2};

const Backend* pick_default() {
  if (const char* env = std::getenv("VPB_SIMD")) {
    const std::string s = env;
    if (s == "scalar") return &kScalar;
    if (s == "avx2" && avx2_available()) return &kAvx2;
    if (s == "avx2") throw std::runtime_error("VPB_SIMD=avx2 requested but CPU lacks AVX2+FMA");
  }
  return avx2_available() ? &kAvx2 : &kScalar;
}

const Backend*& current() {
  static const Backend* b = pick_default();
  return b;
}

}  // namespace

const Backend& active() { return *current(); }
const Backend& scalar() { return kScalar; }

void force(const std::string& name) {
  if (name == "scalar") {
    current() = &kScalar;
  } else if (name == "avx2") {
    if (!avx2_available()) throw std::runtime_error("AVX2+FMA not available on this CPU");
    current() = &kAvx2;
  } else {
    throw std::runtime_error("unknown SIMD backend: " + name);
  }
}

}  // namespace vpb::simd
