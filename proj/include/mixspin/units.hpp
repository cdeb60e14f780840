#pragma once

#include <optional>
#include <string_view>

namespace mixspin::units {

// CODATA 2018 exact SI-defining values, in cgs.
inline constexpr double planck_erg_s = 6.62607015e-27;
inline constexpr double light_speed_cm_s = 2.99792458e10;
inline constexpr double boltzmann_erg_per_k = 1.380649e-16;
inline constexpr double avogadro_per_mol = 6.02214076e23;
inline constexpr double bohr_magneton_erg_per_gauss = 9.2740100783e-21;

// hc/k_B in K cm, approximately 1.438777.
inline constexpr double kelvin_per_wavenumber = planck_erg_s * light_speed_cm_s / boltzmann_erg_per_k;

// N_A mu_B^2 / k_B in emu K / mol, approximately 0.375148.
inline constexpr double curie_factor =
    avogadro_per_mol * bohr_magneton_erg_per_gauss * bohr_magneton_erg_per_gauss / boltzmann_erg_per_k;

enum class Unit {
    kelvin,
    wavenumber,            // cm^-1
    reduced_susceptibility, // chi k_B T / (g^2 mu_B^2) per formula unit
    emu_per_mol,
};

Unit parse_unit(std::string_view text);
std::string_view unit_name(Unit u);

// Susceptibility conversions need the temperature and g-factor.
struct ConversionContext {
    std::optional<double> temperature_kelvin;
    std::optional<double> g_factor;
};

double convert(double value, Unit from, Unit to, const ConversionContext& ctx = {});

inline double wavenumber_to_kelvin(double cm) { return cm * kelvin_per_wavenumber; }
inline double kelvin_to_wavenumber(double k) { return k / kelvin_per_wavenumber; }

// chi_mol = curie_factor g^2 chi_reduced / T
double reduced_to_molar(double chi_reduced, double temperature_kelvin, double g_factor);
double molar_to_reduced(double chi_mol, double temperature_kelvin, double g_factor);

// Parses "81.4cm-1", "5.12K", "117" (Kelvin when no suffix) into Kelvin.
double parse_coupling_kelvin(std::string_view text);

} // namespace mixspin::units
