#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "pyro/constants.hpp"
#include "pyro/error.hpp"
#include "pyro/geometry.hpp"

using namespace pyro;

namespace {

// Reference plant dimensions used across the geometry tests.
CycloneDims cy1() {
  CycloneDims d;
  d.h_t = 18.28;
  d.h_c = 7.43;
  d.h_x = 3.45;
  d.A_in = 10.95;
  d.r_c = 3.45;
  d.r_r = 3.59;
  d.r_w = 3.60;
  d.r_d = 0.32;
  d.r_x = 1.92;
  d.r_in = 2.76;
  d.w_in = 1.38;
  d.l_in = 0.1;
  return d;
}

DuctDims riser1() {
  DuctDims d;
  d.h_tot = 21.38;
  d.h_cl = 0.0;
  d.h_cu = 21.38 - 4.83;  // angled pipe on top, 4.83 m long
  d.r_c = 2.45;
  d.r_r = 2.47;
  d.r_w = 2.48;
  d.r_l = 2.45;
  d.r_u = 1.72;
  d.n_segments = 3;
  return d;
}

// Solid-of-revolution quadrature for the cyclone chamber: cylinder of radius
// r_c above the cone, cone tapering from r_c to r_x, minus the vortex tube.
// Simpson per smooth piece (breakpoints at the tube end and the cone start).
double cyclone_volume_quadrature(const CycloneDims& d) {
  auto area = [&](double y) {  // y measured downward from the roof
    double r;
    if (y < d.h_t - d.h_c)
      r = d.r_c;
    else
      r = d.r_c - (y - (d.h_t - d.h_c)) / d.h_c * (d.r_c - d.r_x);
    double a = kPi * r * r;
    if (y < d.h_x) a -= kPi * d.r_x * d.r_x;
    return a;
  };
  double breaks[4] = {0.0, d.h_x, d.h_t - d.h_c, d.h_t};
  std::sort(breaks, breaks + 4);
  double v = 0.0;
  for (int p = 0; p < 3; ++p) {
    const double a = breaks[p], b = breaks[p + 1];
    if (b <= a) continue;
    const int n = 4000;
    const double h = (b - a) / n;
    double sum = area(a + 1e-12) + area(b - 1e-12);
    for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * area(a + i * h);
    v += sum * h / 3.0;
  }
  return v;
}

}  // namespace

TEST_CASE("cyclone geometry closed forms") {
  const CycloneGeometry g = cyclone_geometry(cy1());
  CHECK(g.V_delta ==
        doctest::Approx(cyclone_volume_quadrature(cy1())).epsilon(1e-9));
  CHECK(g.A_sep < g.A_cy);
  CHECK(g.A_x == doctest::Approx(kPi * 1.92 * 1.92));
  CHECK(g.A_d == doctest::Approx(kPi * 0.32 * 0.32));
  CHECK(g.V_r > 0.0);
  CHECK(g.V_w > 0.0);

  // Degenerate cone: V = pi (r_c^2 h_t - r_x^2 h_x).
  CycloneDims flat = cy1();
  flat.h_c = 0.0;
  const CycloneGeometry gf = cyclone_geometry(flat);
  CHECK(gf.V_delta ==
        doctest::Approx(kPi * (flat.r_c * flat.r_c * flat.h_t -
                               flat.r_x * flat.r_x * flat.h_x))
            .epsilon(1e-12));

  CycloneDims bad = cy1();
  bad.r_d = 2.0;  // violates r_d < r_x
  CHECK_THROWS_AS(bad.validate("bad"), Error);
}

TEST_CASE("duct segment volumes telescope to the whole-duct closed form") {
  const DuctDims d = riser1();
  d.validate("riser1");
  double sum = 0.0, area = 0.0;
  for (int k = 0; k < d.n_segments; ++k) {
    const DuctSegmentGeometry g = duct_segment_geometry(d, k);
    CHECK(g.V_delta > 0.0);
    CHECK(g.V_r > 0.0);
    CHECK(g.V_w > 0.0);
    sum += g.V_delta;
    area += g.A_c;
  }
  // Whole duct: cylinder up to h_cu plus the frustum r_c -> r_u.
  const double cone = d.h_tot - d.h_cu;
  const double closed =
      kPi * d.r_c * d.r_c * d.h_cu +
      kPi / 3.0 * cone *
          (d.r_c * d.r_c + d.r_u * d.r_u + d.r_c * d.r_u);
  CHECK(sum == doctest::Approx(closed).epsilon(1e-12));
  const double lateral =
      2.0 * kPi * d.r_c * d.h_cu +
      kPi * (d.r_c + d.r_u) * std::hypot(cone, d.r_c - d.r_u);
  CHECK(area == doctest::Approx(lateral).epsilon(1e-12));

  // Pure-cylinder segment.
  const DuctSegmentGeometry g0 = duct_segment_geometry(d, 0);
  CHECK(g0.V_delta ==
        doctest::Approx(kPi * d.r_c * d.r_c * d.segment_height())
            .epsilon(1e-12));
}

TEST_CASE("calciner with degenerate cones is a plain cylinder") {
  DuctDims ca;
  ca.h_tot = 33.0;
  ca.h_cl = 33.0;
  ca.h_cu = 33.0;
  ca.r_c = 3.08;
  ca.r_r = 3.29;
  ca.r_w = 3.30;
  ca.r_l = 3.08;
  ca.r_u = 3.08;
  ca.n_segments = 3;
  ca.validate("ca");
  for (int k = 0; k < 3; ++k) {
    const DuctSegmentGeometry g = duct_segment_geometry(ca, k);
    CHECK(g.V_delta == doctest::Approx(kPi * 3.08 * 3.08 * 11.0).epsilon(1e-12));
    CHECK(g.A_c == doctest::Approx(2.0 * kPi * 3.08 * 11.0).epsilon(1e-12));
  }
}

TEST_CASE("kiln fill angle") {
  // Half circle.
  CHECK(kiln_fill_angle(kPi * 1.98 * 1.98 / 2.0, 1.98) ==
        doctest::Approx(kPi).epsilon(1e-12));
  CHECK(kiln_fill_angle(0.0, 1.0) == 0.0);

  // Fill fraction 0.1 with r_c = 1: bisection oracle on theta - sin theta =
  // 0.2 pi.
  double lo = 0.0, hi = 2.0 * kPi;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid - std::sin(mid) > 0.2 * kPi ? hi : lo) = mid;
  }
  const double theta = kiln_fill_angle(0.1 * kPi, 1.0);
  CHECK(theta == doctest::Approx(lo).epsilon(1e-10));
  CHECK(theta == doctest::Approx(1.627).epsilon(2e-3));

  // Inverse identity over a sweep.
  for (double th = 0.05; th < 2.0 * kPi - 0.05; th += 0.23) {
    const double A = kiln_fill_area(th, 1.98);
    CHECK(kiln_fill_angle(A, 1.98) == doctest::Approx(th).epsilon(1e-10));
  }
  CHECK_THROWS_AS(kiln_fill_angle(kPi * 4.0, 1.0), Error);
  CHECK_THROWS_AS(kiln_fill_angle(-0.1, 1.0), Error);
}

TEST_CASE("kiln section geometry") {
  const double r = 1.98, dz = 5.1;
  // Uniform profile: phi = 0 everywhere.
  std::vector<double> uniform(10, 1.3);
  auto sec = kiln_section_geometry(uniform, r, dz);
  for (const auto& s : sec) CHECK(s.phi == doctest::Approx(0.0));

  // theta = 0: no bed surfaces, full-circle gas-refractory contact.
  std::vector<double> empty = {0.0};
  auto e = kiln_section_geometry(empty, r, dz);
  CHECK(e[0].A_gs == 0.0);
  CHECK(e[0].A_rs == 0.0);
  CHECK(e[0].A_gr == doctest::Approx(2.0 * kPi * r * dz));

  // theta = pi: half-full, L_c = 2 r, h = r.
  std::vector<double> half = {kPi};
  auto h = kiln_section_geometry(half, r, dz);
  CHECK(h[0].L_c == doctest::Approx(2.0 * r));
  CHECK(h[0].h == doctest::Approx(r));
  CHECK(h[0].A_s == doctest::Approx(kPi * r * r / 2.0));

  // Sloped profile: phi = atan(-dh/dz), one-sided at the ends.
  std::vector<double> slope = {1.0, 1.2, 1.4};
  auto s = kiln_section_geometry(slope, r, dz);
  const double h0 = r * (1.0 - std::cos(0.5)), h1 = r * (1.0 - std::cos(0.6)),
               h2 = r * (1.0 - std::cos(0.7));
  CHECK(s[0].phi == doctest::Approx(std::atan(-(h1 - h0) / dz)));
  CHECK(s[1].phi == doctest::Approx(std::atan(-(h2 - h0) / (2.0 * dz))));
  CHECK(s[2].phi == doctest::Approx(std::atan(-(h2 - h1) / dz)));
}

TEST_CASE("cooler geometry and roof mapping") {
  CoolerDims d;
  d.L = 36.0;
  d.h = 3.0;
  d.w = 4.0;
  d.n_segments = 5;
  d.roof_areas = {12.1, 22.5, 49.0, 60.5};
  d.validate("cooler");
  const CoolerGeometry g = cooler_geometry(d);
  CHECK(g.V_delta == doctest::Approx(86.4));
  CHECK(g.A_wz == doctest::Approx(4.0 * 7.2));
  CHECK(g.A_solids_in == doctest::Approx(12.0));

  // Roof overlaps per segment sum to the roof areas (144.1 vs 144 m2
  // footprint: the last part is clipped at the cooler end).
  std::array<double, 4> sums{};
  for (const auto& row : g.roof_overlap)
    for (int p = 0; p < 4; ++p) sums[p] += row[p];
  CHECK(sums[0] == doctest::Approx(12.1));
  CHECK(sums[1] == doctest::Approx(22.5));
  CHECK(sums[2] == doctest::Approx(49.0));
  CHECK(sums[3] == doctest::Approx(144.0 - 12.1 - 22.5 - 49.0));
  // Segment 1 roof: part 1 fully inside plus the start of part 2.
  CHECK(g.roof_overlap[0][0] == doctest::Approx(12.1));
  CHECK(g.roof_overlap[0][1] == doctest::Approx((7.2 - 12.1 / 4.0) * 4.0));
  CHECK(g.roof_overlap[4][3] == doctest::Approx(7.2 * 4.0));
}
