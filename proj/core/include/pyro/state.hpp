#pragma once

#include <array>
#include <string>
#include <vector>

#include "pyro/species.hpp"

namespace pyro {

enum class UnitKind { Cyclone, Duct, Kiln, Cooler };

// Phase slot meaning per unit kind:
//   cyclone/duct: 0 = mixture, 1 = refractory, 2 = wall
//   kiln:         0 = solid,   1 = gas,        2 = refractory
//   cooler:       0 = solid,   1 = gas
inline constexpr int kMaxPhases = 3;

inline int phase_count(UnitKind kind) {
  return kind == UnitKind::Cooler ? 2 : 3;
}
inline bool has_fill_angle(UnitKind kind) { return kind == UnitKind::Kiln; }

// One finite volume's unknowns. Differential part: concentrations and phase
// internal-energy densities. Algebraic part: phase temperatures, pressure,
// and the kiln fill angle.
struct SegState {
  SolidVec C_s{};                    // mol/m3
  GasVec C_g{};                      // mol/m3
  std::array<double, kMaxPhases> U{};  // J/m3
  std::array<double, kMaxPhases> T{};  // K
  double P = 0.0;                    // Pa
  double theta = 0.0;                // rad (kiln only)
};

// Per-area boundary stream exchanged between units: molar fluxes, enthalpy
// fluxes, the carrier velocity and the upstream pressure (used by the
// cyclone inlet correlations). Scaling by a connection's area ratio
// preserves total flows.
struct Stream {
  SolidVec Ns{};   // mol/(m2 s)
  GasVec Ng{};
  double Hs = 0.0;  // W/m2
  double Hg = 0.0;
  double v = 0.0;    // m/s
  double P_up = 0.0; // Pa

  Stream scaled(double ratio) const;
  void add(const Stream& other, double ratio);
  double gas_flux_total() const;
};

// Flat DAE layout: x stacks [C_s, C_g, U...] per segment per unit, z stacks
// [T..., P, theta] in the same order. The map (unit, segment, field) <->
// position is a bijection by construction.
class Layout {
 public:
  struct UnitInfo {
    std::string name;
    UnitKind kind = UnitKind::Duct;
    int n_segments = 1;
    int x_offset = 0;
    int z_offset = 0;
  };

  void add_unit(const std::string& name, UnitKind kind, int n_segments);

  int n_x() const { return n_x_; }
  int n_z() const { return n_z_; }
  int n_units() const { return static_cast<int>(units_.size()); }
  const UnitInfo& unit(int u) const { return units_[u]; }
  int unit_index(const std::string& name) const;

  int x_stride(UnitKind kind) const {
    return static_cast<int>(kNumSpecies) + phase_count(kind);
  }
  int z_stride(UnitKind kind) const {
    return phase_count(kind) + 1 + (has_fill_angle(kind) ? 1 : 0);
  }

  int x_offset(int u, int seg) const {
    return units_[u].x_offset + seg * x_stride(units_[u].kind);
  }
  int z_offset(int u, int seg) const {
    return units_[u].z_offset + seg * z_stride(units_[u].kind);
  }

  // Diagnostic name of a row/column, e.g. "ca[1].C_g.CO2" or "kiln[3].theta".
  std::string x_name(int i) const;
  std::string z_name(int i) const;

  SegState unpack(const double* x, const double* z, int u, int seg) const;
  void pack_x(const SegState& s, int u, int seg, double* x) const;
  void pack_z(const SegState& s, int u, int seg, double* z) const;

  // Global block index of (unit, segment) used by the sparsity pattern.
  int block_index(int u, int seg) const;
  int n_blocks() const { return n_blocks_; }

  // True for components of x that are concentrations (nonnegativity clips).
  bool x_is_concentration(int i) const;

  enum class ZKind { Temperature, Pressure, FillAngle };
  ZKind z_kind(int i) const;

 private:
  std::vector<UnitInfo> units_;
  int n_x_ = 0;
  int n_z_ = 0;
  int n_blocks_ = 0;
};

}  // namespace pyro
