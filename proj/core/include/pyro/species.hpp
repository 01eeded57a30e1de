#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace pyro {

// Fixed species sets. Solid ordering: CaCO3, CaO, SiO2, Al2O3, Fe2O3 (raw
// meal oxides) followed by the clinker phases C2S, C3S, C3A, C4AF. Gas
// ordering: CO2, N2, O2, Ar, CO, Csus (suspended carbon), H2O, H2.
inline constexpr std::size_t kNumSolids = 9;
inline constexpr std::size_t kNumGases = 8;
inline constexpr std::size_t kNumSpecies = kNumSolids + kNumGases;

enum class Solid : std::size_t {
  CaCO3 = 0,
  CaO,
  SiO2,
  Al2O3,
  Fe2O3,
  C2S,
  C3S,
  C3A,
  C4AF,
};

enum class Gas : std::size_t {
  CO2 = 0,
  N2,
  O2,
  Ar,
  CO,
  Csus,
  H2O,
  H2,
};

using SolidVec = std::array<double, kNumSolids>;
using GasVec = std::array<double, kNumGases>;

constexpr std::size_t idx(Solid s) { return static_cast<std::size_t>(s); }
constexpr std::size_t idx(Gas g) { return static_cast<std::size_t>(g); }

// Flat species index: solids in [0, 9), gases in [9, 17).
constexpr std::size_t flat(Solid s) { return idx(s); }
constexpr std::size_t flat(Gas g) { return kNumSolids + idx(g); }

inline constexpr std::string_view kSolidNames[kNumSolids] = {
    "CaCO3", "CaO", "SiO2", "Al2O3", "Fe2O3", "C2S", "C3S", "C3A", "C4AF"};
inline constexpr std::string_view kGasNames[kNumGases] = {
    "CO2", "N2", "O2", "Ar", "CO", "Csus", "H2O", "H2"};

inline std::string_view species_name(std::size_t flat_index) {
  return flat_index < kNumSolids ? kSolidNames[flat_index]
                                 : kGasNames[flat_index - kNumSolids];
}

// Lookup by name; returns kNumSpecies when unknown.
inline std::size_t species_index(std::string_view name) {
  for (std::size_t i = 0; i < kNumSpecies; ++i)
    if (species_name(i) == name) return i;
  return kNumSpecies;
}

// Chemical elements tracked by the conservation audits.
inline constexpr std::size_t kNumElements = 9;
enum class Element : std::size_t { Ca = 0, Si, Al, Fe, C, O, H, N, Ar };

inline constexpr std::string_view kElementNames[kNumElements] = {
    "Ca", "Si", "Al", "Fe", "C", "O", "H", "N", "Ar"};

// Atoms of each element per formula unit, indexed [element][flat species].
// Clinker phases in oxide notation: C2S = Ca2SiO4, C3S = Ca3SiO5,
// C3A = Ca3Al2O6, C4AF = Ca4Al2Fe2O10.
inline constexpr int kElementMatrix[kNumElements][kNumSpecies] = {
    //        CaCO3 CaO SiO2 Al2O3 Fe2O3 C2S C3S C3A C4AF CO2 N2 O2 Ar CO Csus H2O H2
    /* Ca */ {1, 1, 0, 0, 0, 2, 3, 3, 4, 0, 0, 0, 0, 0, 0, 0, 0},
    /* Si */ {0, 0, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    /* Al */ {0, 0, 0, 2, 0, 0, 0, 2, 2, 0, 0, 0, 0, 0, 0, 0, 0},
    /* Fe */ {0, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0},
    /* C  */ {1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 1, 0, 0},
    /* O  */ {3, 1, 2, 3, 3, 4, 5, 6, 10, 2, 0, 2, 0, 1, 0, 1, 0},
    /* H  */ {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 2},
    /* N  */ {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0},
    /* Ar */ {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0},
};

}  // namespace pyro
