#include "pyro/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "pyro/constants.hpp"
#include "pyro/error.hpp"

namespace pyro {

void CycloneDims::validate(const char* name) const {
  auto fail = [&](const char* what) {
    throw Error(std::string(name) + ": " + what);
  };
  if (!(r_d < r_x && r_x < r_c && r_c < r_r && r_r < r_w))
    fail("requires r_d < r_x < r_c < r_r < r_w");
  if (!(h_c < h_t)) fail("requires h_c < h_t");
  if (A_in <= 0.0 || w_in <= 0.0 || r_in <= 0.0) fail("inlet must be positive");
}

CycloneGeometry cyclone_geometry(const CycloneDims& d) {
  CycloneGeometry g;
  // Lumped chamber: cylinder above the cone, cone towards the dust outlet,
  // minus the vortex finder tube.
  auto chamber_volume = [&](double rc) {
    return kPi * (rc * rc * (d.h_t - d.h_c) +
                  d.h_c / 3.0 * (rc * rc + d.r_x * d.r_x + rc * d.r_x) -
                  d.r_x * d.r_x * d.h_x);
  };
  g.V_delta = chamber_volume(d.r_c);
  auto surface = [&](double rc, double rd) {
    return 2.0 * kPi * rc * (d.h_t - d.h_c) + kPi * (rc * rc - d.r_x * d.r_x) +
           kPi * (rc + rd) * std::hypot(rc - rd, d.h_c);
  };
  g.A_cy = surface(d.r_c, d.r_d);
  const double h_c1 = d.h_c / 2.0;
  const double r2 = d.r_c - h_c1 / d.h_c * (d.r_c - d.r_d);
  g.A_sep = 2.0 * kPi * d.r_c * (d.h_t - d.h_c) +
            kPi * (d.r_c + r2) * std::hypot(d.r_c - r2, h_c1);
  g.A_x = kPi * d.r_x * d.r_x;
  g.A_d = kPi * d.r_d * d.r_d;
  g.V_r = chamber_volume(d.r_r) - chamber_volume(d.r_c);
  g.V_w = chamber_volume(d.r_w) - chamber_volume(d.r_r);
  g.A_r = g.A_cy * d.r_r / d.r_c;
  g.A_w = g.A_cy * d.r_w / d.r_c;
  return g;
}

void DuctDims::validate(const char* name) const {
  auto fail = [&](const char* what) {
    throw Error(std::string(name) + ": " + what);
  };
  if (!(h_tot > 0.0) || n_segments < 1) fail("bad height or segment count");
  if (h_cl < 0.0 || h_cu > h_tot || h_cl > h_cu)
    fail("requires 0 <= h_cl <= h_cu <= h_tot");
  if (r_l > r_c || r_u > r_c) fail("requires r_l, r_u <= r_c");
  if (!(r_c < r_r && r_r < r_w)) fail("requires r_c < r_r < r_w");
}

// Piecewise-linear internal radius profile, parametrized by the cylinder
// radius rc so refractory and wall volumes follow by substitution.
static double duct_radius(const DuctDims& d, double rc, double y) {
  if (y < d.h_cl && d.h_cl > 0.0) return d.r_l + (rc - d.r_l) * y / d.h_cl;
  if (y > d.h_cu && d.h_cu < d.h_tot)
    return rc + (d.r_u - rc) * (y - d.h_cu) / (d.h_tot - d.h_cu);
  return rc;
}

// Exact frustum integrals of the linear radius profile over [a, b].
static void duct_piece(const DuctDims& d, double rc, double a, double b,
                       double* volume, double* lateral) {
  double breaks[4] = {a, std::clamp(d.h_cl, a, b), std::clamp(d.h_cu, a, b),
                      b};
  std::sort(breaks, breaks + 4);
  *volume = 0.0;
  *lateral = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double y0 = breaks[i], y1 = breaks[i + 1];
    if (y1 <= y0) continue;
    const double r0 = duct_radius(d, rc, y0), r1 = duct_radius(d, rc, y1);
    *volume += kPi * (y1 - y0) / 3.0 * (r0 * r0 + r1 * r1 + r0 * r1);
    *lateral += kPi * (r0 + r1) * std::hypot(y1 - y0, r1 - r0);
  }
}

DuctSegmentGeometry duct_segment_geometry(const DuctDims& d, int k) {
  if (k < 0 || k >= d.n_segments)
    throw Error("duct_segment_geometry: segment index out of range");
  const double dy = d.segment_height();
  const double a = k * dy, b = (k + 1) * dy;
  DuctSegmentGeometry g;
  double v_c, a_c, v_r, a_r, v_w, a_w;
  duct_piece(d, d.r_c, a, b, &v_c, &a_c);
  duct_piece(d, d.r_r, a, b, &v_r, &a_r);
  duct_piece(d, d.r_w, a, b, &v_w, &a_w);
  g.V_delta = v_c;
  g.V_r = v_r - v_c;
  g.V_w = v_w - v_r;
  g.A_c = a_c;
  g.A_r = a_r;
  g.A_w = a_w;
  return g;
}

double duct_inlet_area(const DuctDims& d) { return kPi * d.r_l * d.r_l; }
double duct_outlet_area(const DuctDims& d) { return kPi * d.r_u * d.r_u; }

void KilnDims::validate(const char* name) const {
  auto fail = [&](const char* what) {
    throw Error(std::string(name) + ": " + what);
  };
  if (!(L > 0.0) || n_segments < 1) fail("bad length or segment count");
  if (!(r_c < r_r)) fail("requires r_c < r_r");
  if (!(tilt > 0.0 && tilt < 0.1)) fail("tilt must lie in (0, 0.1) rad");
}

double KilnDims::cross_area() const { return kPi * r_c * r_c; }

double kiln_fill_area(double theta, double r_c) {
  return 0.5 * r_c * r_c * (theta - std::sin(theta));
}

double kiln_fill_angle(double A_s, double r_c) {
  const double full = kPi * r_c * r_c;
  if (A_s < 0.0 || A_s >= full)
    throw Error("kiln_fill_angle: bed area out of range (overfilled kiln)");
  if (A_s == 0.0) return 0.0;
  const double target = 2.0 * A_s / (r_c * r_c);
  const double tol = 1e-12;  // on theta - sin(theta), i.e. 1e-12 r_c^2 on A
  double lo = 0.0, hi = 2.0 * kPi;
  // Small-angle seed: theta - sin(theta) ~ theta^3/6.
  double th = std::cbrt(6.0 * target);
  if (th > hi) th = kPi;
  for (int it = 0; it < 100; ++it) {
    const double f = th - std::sin(th) - target;
    if (std::abs(f) < tol) return th;
    (f > 0.0 ? hi : lo) = th;
    const double df = 1.0 - std::cos(th);
    double next = df > 1e-12 ? th - f / df : 0.5 * (lo + hi);
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    th = next;
  }
  return th;
}

std::vector<KilnSectionGeometry> kiln_section_geometry(
    const std::vector<double>& theta, double r_c, double dz) {
  const int n = static_cast<int>(theta.size());
  std::vector<KilnSectionGeometry> out(n);
  for (int k = 0; k < n; ++k) {
    KilnSectionGeometry& g = out[k];
    const double th = theta[k];
    g.A_s = kiln_fill_area(th, r_c);
    g.A_g = kPi * r_c * r_c - g.A_s;
    g.L_c = 2.0 * r_c * std::sin(0.5 * th);
    g.h = r_c * (1.0 - std::cos(0.5 * th));
    g.A_gs = g.L_c * dz;
    g.A_rs = r_c * th * dz;
    g.A_gr = 2.0 * kPi * r_c * dz - g.A_rs;
  }
  auto height = [&](int k) { return out[k].h; };
  for (int k = 0; k < n; ++k) {
    double dh_dz;
    if (n == 1)
      dh_dz = 0.0;
    else if (k == 0)
      dh_dz = (height(1) - height(0)) / dz;
    else if (k == n - 1)
      dh_dz = (height(n - 1) - height(n - 2)) / dz;
    else
      dh_dz = (height(k + 1) - height(k - 1)) / (2.0 * dz);
    out[k].phi = std::atan(-dh_dz);
  }
  return out;
}

void CoolerDims::validate(const char* name) const {
  auto fail = [&](const char* what) {
    throw Error(std::string(name) + ": " + what);
  };
  if (!(L > 0.0 && h > 0.0 && w > 0.0) || n_segments < 1) fail("bad box dims");
  double roof = 0.0;
  for (double a : roof_areas) {
    if (a < 0.0) fail("roof areas must be nonnegative");
    roof += a;
  }
  // Rounded table values may exceed w*L marginally.
  if (roof > w * L * 1.01) fail("roof areas exceed the cooler footprint");
}

CoolerGeometry cooler_geometry(const CoolerDims& d) {
  CoolerGeometry g;
  const double dz = d.segment_length();
  g.V_delta = d.w * d.h * dz;
  g.A_yz = dz * d.h;
  g.A_wy = d.w * d.h;
  g.A_wz = d.w * dz;
  g.A_solids_in = d.w * d.h;
  // Roof parts laid out sequentially along z; part lengths A_i / w.
  g.roof_overlap.assign(d.n_segments, {});
  double part_start = 0.0;
  for (int p = 0; p < 4; ++p) {
    const double len = d.roof_areas[p] / d.w;
    const double part_end = part_start + len;
    for (int k = 0; k < d.n_segments; ++k) {
      const double s0 = k * dz, s1 = (k + 1) * dz;
      const double ov = std::max(
          0.0, std::min(part_end, s1) - std::max(part_start, s0));
      g.roof_overlap[k][p] = ov * d.w;
    }
    part_start = part_end;
  }
  return g;
}

}  // namespace pyro
