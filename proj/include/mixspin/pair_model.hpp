#pragma once

#include "mixspin/spin.hpp"

namespace mixspin::pair {

// Spectrum of J S.s for one (S, 1/2) pair: two multiplets j = S +- 1/2.
struct PairSpectrum {
    SpinQuantum spin;
    double coupling_kelvin;
    double upper_energy;   // J S / 2
    double lower_energy;   // -J (S+1) / 2
    int upper_degeneracy;  // 2S + 2
    int lower_degeneracy;  // 2S

    double gap() const { return upper_energy - lower_energy; }
};

PairSpectrum pair_spectrum(SpinQuantum spin, double coupling_kelvin);

struct PairThermalResult {
    double temperature_kelvin;
    double correlator_g1;
    double negativity;
};

// <S.s> in the Gibbs state of one pair. Uses x = exp(-J(2S+1)/(2T)), so only
// non-positive exponents are evaluated for J > 0:
//   G1 = S(S+1)(x - 1) / (2((S+1)x + S))
double pair_correlator(SpinQuantum spin, double coupling_kelvin, double temperature_kelvin);

// Alternative closed forms for S = 1/2 and S = 1 (the latter is 5/6 of
// the exact thermal average). Other spins throw ValidationError.
double pair_correlator_printed(SpinQuantum spin, double coupling_kelvin, double temperature_kelvin);

// Candidate negative eigenvalue of the partially transposed pair state,
// tau = (S + 2 G1) / (D (D - 1)), degeneracy 2S.
double negative_eigenvalue(SpinQuantum spin, double g1);

// 2S max(0, -tau) for a given correlator value.
double negativity_from_correlator(SpinQuantum spin, double g1);

double pair_negativity(SpinQuantum spin, double coupling_kelvin, double temperature_kelvin);

PairThermalResult pair_thermal(SpinQuantum spin, double coupling_kelvin, double temperature_kelvin);

// T -> 0+ limits (antiferromagnetic J).
double pair_correlator_ground_limit(SpinQuantum spin);  // -(S+1)/2
double pair_negativity_ground_limit(SpinQuantum spin);  // 1/(2S+1)

// Temperature where G1 = -S/2: J (2S+1) / (2 ln(2S+2)). The result is
// cross-checked against bisection on pair_correlator; a mismatch beyond 1e-8
// relative throws ComputationError.
double characteristic_temperature(SpinQuantum spin, double coupling_kelvin);

// Closed form only, no cross-check.
double characteristic_temperature_closed_form(SpinQuantum spin, double coupling_kelvin);

} // namespace mixspin::pair
