#include <doctest.h>

#include <cmath>
#include <random>

#include "vpb/collision/operator.hpp"
#include "vpb/simd/dispatch.hpp"
#include "vpb/simd/interp.hpp"

using namespace vpb;

TEST_CASE("quadratic stencils reproduce per-axis quadratics exactly") {
  VelocityGrid vg(5.0, 9);
  auto poly = [](const Vec3& v) {
    return 1.0 + 0.3 * v[0] - 0.2 * v[1] + 0.7 * v[2] + 0.5 * v[0] * v[0] - 0.1 * v[1] * v[2] +
           0.25 * v[2] * v[2] + 0.05 * v[0] * v[1] * v[2];
  };
  VField f(vg.size());
  for (int iv = 0; iv < vg.size(); ++iv) f[iv] = poly(vg.node(iv));

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    Vec3 p;
    // include points outside the box: clamped stencils extrapolate exactly
    for (int d = 0; d < 3; ++d) p[d] = -7.0 + 14.0 * double(rng() >> 11) * 0x1.0p-53;
    InterpStencil st = make_stencil(vg, p, 2);
    CHECK(interp_eval_scalar(f.data(), st, vg.per_axis()) ==
          doctest::Approx(poly(p)).epsilon(1e-11));
  }
}

TEST_CASE("trilinear stencils reproduce multilinear fields exactly") {
  VelocityGrid vg(4.0, 7);
  auto lin = [](const Vec3& v) { return 0.2 + v[0] - 2.0 * v[1] + 0.5 * v[2] + v[0] * v[1]; };
  VField f(vg.size());
  for (int iv = 0; iv < vg.size(); ++iv) f[iv] = lin(vg.node(iv));
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    Vec3 p;
    for (int d = 0; d < 3; ++d) p[d] = -3.9 + 7.8 * double(rng() >> 11) * 0x1.0p-53;
    InterpStencil st = make_stencil(vg, p, 1);
    CHECK(interp_eval_scalar(f.data(), st, vg.per_axis()) ==
          doctest::Approx(lin(p)).epsilon(1e-12));
  }
}

TEST_CASE("scalar and AVX2 collision rows agree") {
  if (!avx2_available()) {
    MESSAGE("AVX2 not available; skipping equivalence check");
    return;
  }
  SpeciesPair sp;
  sp.m_A = 1.875;
  sp.m_B = 1.0;
  CollisionKernel ker;
  ker.gamma = 0.5;  // exercises the radial power table
  VelocityGrid vg(5.0, 7);
  AngularGrid ag(14);
  CollisionTables tables(vg, ag, ker, sp, 2);

  std::mt19937_64 rng(31);
  VField FA(vg.size()), FB(vg.size());
  for (int iv = 0; iv < vg.size(); ++iv) {
    FA[iv] = 0.1 + double(rng() >> 11) * 0x1.0p-53;
    FB[iv] = 0.1 + double(rng() >> 11) * 0x1.0p-53;
  }

  for (int i = 0; i < vg.size(); i += 11) {
    RowOut a = collision_row_scalar(tables, FA.data(), FB.data(), i);
    RowOut b = collision_row_avx2(tables, FA.data(), FB.data(), i);
    for (int s = 0; s < 2; ++s)
      for (int t = 0; t < 2; ++t)
        CHECK(a.q[s][t] == doctest::Approx(b.q[s][t]).epsilon(1e-12));
  }
}

TEST_CASE("backend selection") {
  const auto& backend = simd::active();
  CHECK((std::string(backend.name) == "scalar" || std::string(backend.name) == "avx2"));
  simd::force("scalar");
  CHECK(std::string(simd::active().name) == "scalar");
  if (avx2_available()) {
    simd::force("avx2");
    CHECK(std::string(simd::active().name) == "avx2");
  }
  CHECK_THROWS(simd::force("neon"));
}
