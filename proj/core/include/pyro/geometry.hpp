#pragma once

#include <array>
#include <vector>

#include "pyro/species.hpp"

namespace pyro {

// --- Cyclone ----------------------------------------------------------------

struct CycloneDims {
  double h_t = 0.0;   // total chamber height [m]
  double h_c = 0.0;   // cone height
  double h_x = 0.0;   // vortex-finder depth below the roof
  double r_c = 0.0;   // chamber radius
  double r_r = 0.0;   // refractory outer radius
  double r_w = 0.0;   // wall outer radius
  double r_d = 0.0;   // dust outlet radius
  double r_x = 0.0;   // gas outlet radius
  double r_in = 0.0;  // inlet centerline radius
  double w_in = 0.0;  // inlet width
  double l_in = 0.0;  // inlet length
  double A_in = 0.0;  // inlet cross area [m2]

  void validate(const char* name) const;
};

struct CycloneGeometry {
  double V_delta = 0.0;  // chamber volume [m3]
  double A_cy = 0.0;     // internal surface area [m2]
  double A_sep = 0.0;    // collection (separation) surface [m2]
  double A_x = 0.0;      // gas outlet area
  double A_d = 0.0;      // dust outlet area
  double V_r = 0.0;      // refractory shell volume
  double V_w = 0.0;      // wall shell volume
  double A_r = 0.0;      // refractory outer surface
  double A_w = 0.0;      // wall outer surface
};

CycloneGeometry cyclone_geometry(const CycloneDims& d);

// --- Calciner / riser ducts ---------------------------------------------------

struct DuctDims {
  double h_tot = 0.0;  // total height [m]
  double h_cl = 0.0;   // lower cone ends at this height (0 = none)
  double h_cu = 0.0;   // upper cone starts at this height (h_tot = none)
  double r_c = 0.0;    // cylinder radius
  double r_r = 0.0;    // refractory outer radius
  double r_w = 0.0;    // wall outer radius
  double r_l = 0.0;    // bottom radius
  double r_u = 0.0;    // top radius
  int n_segments = 3;

  void validate(const char* name) const;
  double segment_height() const { return h_tot / n_segments; }
};

struct DuctSegmentGeometry {
  double V_delta = 0.0;  // process volume [m3]
  double V_r = 0.0;      // refractory volume
  double V_w = 0.0;      // wall volume
  double A_c = 0.0;      // internal lateral surface [m2]
  double A_r = 0.0;      // refractory outer lateral surface
  double A_w = 0.0;      // wall outer lateral surface
};

// k in [0, n_segments).
DuctSegmentGeometry duct_segment_geometry(const DuctDims& d, int k);

double duct_inlet_area(const DuctDims& d);   // pi r_l^2
double duct_outlet_area(const DuctDims& d);  // pi r_u^2

// --- Kiln --------------------------------------------------------------------

struct KilnDims {
  double L = 0.0;    // length [m]
  double r_c = 0.0;  // inner radius
  double r_r = 0.0;  // refractory outer radius
  double tilt = 0.0; // axis tilt [rad]
  int n_segments = 10;

  void validate(const char* name) const;
  double segment_length() const { return L / n_segments; }
  double cross_area() const;
};

// Solves A_s = r_c^2/2 (theta - sin theta); theta in [0, 2 pi). Throws when
// A_s is out of [0, pi r_c^2) (overfilled kiln).
double kiln_fill_angle(double A_s, double r_c);
double kiln_fill_area(double theta, double r_c);

struct KilnSectionGeometry {
  double A_s = 0.0;   // bed cross area [m2]
  double A_g = 0.0;   // gas cross area
  double L_c = 0.0;   // bed chord width [m]
  double h = 0.0;     // bed height
  double phi = 0.0;   // bed slope angle [rad]
  double A_gs = 0.0;  // gas-solid surface in the segment [m2]
  double A_rs = 0.0;  // refractory-solid surface
  double A_gr = 0.0;  // gas-refractory surface
};

// Midpoint surface integrals; phi by one-sided differences at the ends and
// central differences inside.
std::vector<KilnSectionGeometry> kiln_section_geometry(
    const std::vector<double>& theta, double r_c, double dz);

// --- Grate cooler --------------------------------------------------------------

struct CoolerDims {
  double L = 0.0;  // length [m]
  double h = 0.0;  // height
  double w = 0.0;  // width
  int n_segments = 5;
  std::array<double, 4> roof_areas{};  // A_y1..A_y4 [m2], sequential along z

  void validate(const char* name) const;
  double segment_length() const { return L / n_segments; }
};

struct CoolerGeometry {
  double V_delta = 0.0;              // segment volume [m3]
  double A_yz = 0.0;                 // vertical cross area dz*dy
  double A_wy = 0.0;                 // side-wall area per unit y: w*dy
  double A_wz = 0.0;                 // roof cell area w*dz
  double A_solids_in = 0.0;          // w*h, the solids inlet cross-section
  // Overlap [m2] of each segment's roof with roof parts 1..4.
  std::vector<std::array<double, 4>> roof_overlap;
};

CoolerGeometry cooler_geometry(const CoolerDims& d);

}  // namespace pyro
