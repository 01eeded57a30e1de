#include "pyro/state.hpp"

#include <cmath>

#include "pyro/error.hpp"

namespace pyro {

Stream Stream::scaled(double ratio) const {
  Stream out = *this;
  for (double& v_i : out.Ns) v_i *= ratio;
  for (double& v_i : out.Ng) v_i *= ratio;
  out.Hs *= ratio;
  out.Hg *= ratio;
  out.v *= ratio;
  return out;
}

void Stream::add(const Stream& other, double ratio) {
  const double w_old = gas_flux_total();
  const double w_new = ratio * other.gas_flux_total();
  for (std::size_t i = 0; i < kNumSolids; ++i) Ns[i] += ratio * other.Ns[i];
  for (std::size_t i = 0; i < kNumGases; ++i) Ng[i] += ratio * other.Ng[i];
  Hs += ratio * other.Hs;
  Hg += ratio * other.Hg;
  // Carrier velocity and upstream pressure merge weighted by gas flux.
  const double w_tot = w_old + w_new;
  if (w_tot > 0.0) {
    v = (w_old * v + w_new * ratio * other.v) / w_tot;
    P_up = (w_old * P_up + w_new * other.P_up) / w_tot;
  }
}

double Stream::gas_flux_total() const {
  double s = 0.0;
  for (double v_i : Ng) s += std::abs(v_i);
  return s;
}

void Layout::add_unit(const std::string& name, UnitKind kind, int n_segments) {
  UnitInfo info;
  info.name = name;
  info.kind = kind;
  info.n_segments = n_segments;
  info.x_offset = n_x_;
  info.z_offset = n_z_;
  units_.push_back(info);
  n_x_ += n_segments * x_stride(kind);
  n_z_ += n_segments * z_stride(kind);
  n_blocks_ += n_segments;
}

int Layout::unit_index(const std::string& name) const {
  for (int u = 0; u < n_units(); ++u)
    if (units_[u].name == name) return u;
  throw Error("unknown unit: " + name);
}

namespace {

const char* phase_label(UnitKind kind, int slot) {
  if (kind == UnitKind::Cyclone || kind == UnitKind::Duct) {
    constexpr const char* names[] = {"m", "r", "w"};
    return names[slot];
  }
  constexpr const char* names[] = {"s", "g", "r"};
  return names[slot];
}

}  // namespace

std::string Layout::x_name(int i) const {
  for (const UnitInfo& u : units_) {
    const int stride = x_stride(u.kind);
    const int span = u.n_segments * stride;
    if (i >= u.x_offset && i < u.x_offset + span) {
      const int local = i - u.x_offset;
      const int seg = local / stride;
      const int f = local % stride;
      const std::string base = u.name + "[" + std::to_string(seg) + "].";
      if (f < static_cast<int>(kNumSolids))
        return base + "C_s." + std::string(kSolidNames[f]);
      if (f < static_cast<int>(kNumSpecies))
        return base + "C_g." + std::string(kGasNames[f - kNumSolids]);
      return base + "U_" + phase_label(u.kind, f - kNumSpecies);
    }
  }
  return "x[" + std::to_string(i) + "]";
}

std::string Layout::z_name(int i) const {
  for (const UnitInfo& u : units_) {
    const int stride = z_stride(u.kind);
    const int span = u.n_segments * stride;
    if (i >= u.z_offset && i < u.z_offset + span) {
      const int local = i - u.z_offset;
      const int seg = local / stride;
      const int f = local % stride;
      const std::string base = u.name + "[" + std::to_string(seg) + "].";
      const int np = phase_count(u.kind);
      if (f < np) return base + "T_" + phase_label(u.kind, f);
      if (f == np) return base + "P";
      return base + "theta";
    }
  }
  return "z[" + std::to_string(i) + "]";
}

SegState Layout::unpack(const double* x, const double* z, int u,
                        int seg) const {
  const UnitInfo& info = units_[u];
  SegState s;
  const double* px = x + x_offset(u, seg);
  for (std::size_t i = 0; i < kNumSolids; ++i) s.C_s[i] = px[i];
  for (std::size_t i = 0; i < kNumGases; ++i) s.C_g[i] = px[kNumSolids + i];
  const int np = phase_count(info.kind);
  for (int p = 0; p < np; ++p) s.U[p] = px[kNumSpecies + p];
  const double* pz = z + z_offset(u, seg);
  for (int p = 0; p < np; ++p) s.T[p] = pz[p];
  s.P = pz[np];
  if (has_fill_angle(info.kind)) s.theta = pz[np + 1];
  return s;
}

void Layout::pack_x(const SegState& s, int u, int seg, double* x) const {
  const UnitInfo& info = units_[u];
  double* px = x + x_offset(u, seg);
  for (std::size_t i = 0; i < kNumSolids; ++i) px[i] = s.C_s[i];
  for (std::size_t i = 0; i < kNumGases; ++i) px[kNumSolids + i] = s.C_g[i];
  const int np = phase_count(info.kind);
  for (int p = 0; p < np; ++p) px[kNumSpecies + p] = s.U[p];
}

void Layout::pack_z(const SegState& s, int u, int seg, double* z) const {
  const UnitInfo& info = units_[u];
  double* pz = z + z_offset(u, seg);
  const int np = phase_count(info.kind);
  for (int p = 0; p < np; ++p) pz[p] = s.T[p];
  pz[np] = s.P;
  if (has_fill_angle(info.kind)) pz[np + 1] = s.theta;
}

int Layout::block_index(int u, int seg) const {
  int b = 0;
  for (int i = 0; i < u; ++i) b += units_[i].n_segments;
  return b + seg;
}

Layout::ZKind Layout::z_kind(int i) const {
  for (const UnitInfo& u : units_) {
    const int stride = z_stride(u.kind);
    const int span = u.n_segments * stride;
    if (i >= u.z_offset && i < u.z_offset + span) {
      const int f = (i - u.z_offset) % stride;
      const int np = phase_count(u.kind);
      if (f < np) return ZKind::Temperature;
      if (f == np) return ZKind::Pressure;
      return ZKind::FillAngle;
    }
  }
  return ZKind::Temperature;
}

bool Layout::x_is_concentration(int i) const {
  for (const UnitInfo& u : units_) {
    const int stride = x_stride(u.kind);
    const int span = u.n_segments * stride;
    if (i >= u.x_offset && i < u.x_offset + span)
      return (i - u.x_offset) % stride < static_cast<int>(kNumSpecies);
  }
  return false;
}

}  // namespace pyro
