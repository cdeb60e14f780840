#pragma once

#include "mixspin/chain.hpp"
#include "mixspin/spin.hpp"
#include "mixspin/units.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mixspin::witness {

// All susceptibilities here are reduced, chi k_B T / (g^2 mu_B^2), summed over
// `sites` spins. For molar data `sites` is the number of spins per formula
// unit (2 for one (S, 1/2) cell).

// n (12 S^2 - 4S + 3) / 24: the value of the nearest-neighbour susceptibility
// at G1 = -S/2.
double separability_threshold(int sites, SpinQuantum spin);

// W = chi - threshold. Negative certifies entanglement.
double witness_value(double chi_reduced, int sites, SpinQuantum spin);

// Variant with the exact diagonal S(S+1)/3 in place of S^2/2; threshold
// n (1/8 + S(S+1)/6 - S/6).
double witness_value_exact_diagonal(double chi_reduced, int sites, SpinQuantum spin);

// -6 W / (D n)
double negativity_lower_bound(double witness_reduced, int sites, SpinQuantum spin);

// P(x) = 0.11 x - 0.07 x^2 with x = J / k_B T
double correction_polynomial(double j_over_t);

// bound + P(J/T) g1
double corrected_bound(double bound, double coupling_kelvin, double temperature_kelvin, double g1);

// Inverts the nearest-neighbour approximation: g1 = 3 (chi/n - 1/8 - S^2/2).
double correlator_from_susceptibility(double chi_reduced, int sites, SpinQuantum spin);

struct WitnessInput {
    double chi;
    units::Unit unit = units::Unit::reduced_susceptibility;
    double temperature_kelvin;
    double g_factor = 2.0;
    int sites = 2;
    SpinQuantum spin;
    std::optional<double> correction_coupling_kelvin; // apply the P(J/T) correction when set
};

struct WitnessReport {
    double temperature_kelvin;
    double chi_input;
    units::Unit unit;
    double witness_value; // same unit as chi_input
    bool entangled;       // witness_value < 0
    double negativity_lower_bound;
    bool correction_applied;
};

WitnessReport evaluate(const WitnessInput& in);

// G1 as a function of temperature (Kelvin).
using CorrelatorModel = std::function<double(double)>;

CorrelatorModel pair_model(SpinQuantum spin, double coupling_kelvin);
CorrelatorModel printed_pair_model(SpinQuantum spin, double coupling_kelvin);
CorrelatorModel chain_model(chain::ThermalModel model);

// Bisection on G1(T) + S/2 to |dT| < 1e-8 J. The bracket starts at
// [1e-3, 1e3] J and is widened geometrically before ComputationError.
double solve_tc(const CorrelatorModel& model, SpinQuantum spin, double coupling_kelvin);

struct SweepPoint {
    SpinQuantum spin;
    double coupling_kelvin;
    double tc_kelvin;
};

struct LinearFit {
    double a0 = 0.0;
    double b0 = 0.0;
    double r_squared = 1.0;
    bool degenerate = false; // fewer than two distinct spins
};

struct SweepResult {
    std::vector<SweepPoint> grid;
    LinearFit linear_fit; // T_c / J = a0 S + b0
};

using ModelFactory = std::function<CorrelatorModel(SpinQuantum, double)>;

SweepResult sweep_tc(const std::vector<SpinQuantum>& spins, const std::vector<double>& couplings_kelvin,
                     const ModelFactory& factory = pair_model);

// Least-squares line y = a0 x + b0.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct CompoundRecord {
    std::string name;
    SpinQuantum spin;
    double coupling_value;
    units::Unit coupling_unit;
    std::optional<double> g_factor;
    std::optional<double> reference_tc_kelvin;

    double coupling_kelvin() const { return units::convert(coupling_value, coupling_unit, units::Unit::kelvin); }
};

const std::vector<CompoundRecord>& builtin_compounds();
// Case-insensitive; accepts the short form ("Ni") for the ACu family. Throws ValidationError.
const CompoundRecord& find_compound(std::string_view name);

struct DiscrepancyRow {
    std::string name;
    SpinQuantum spin;
    double coupling_kelvin;
    double reference_tc_kelvin;
    double tc_pair_kelvin;
    std::optional<double> tc_printed_kelvin;
    double tc_chain_kelvin;
    int chain_sites;
    double relative_deviation; // (tc_pair - reference) / reference
    double threshold_residual; // |G1(tc_pair) + S/2|
    bool flagged;
    bool reproduced_by_closed_form; // pair or printed correlator within tolerance
    bool reproduced_by_any_model;   // also counting the finite ring
    std::string note;
};

// Rows with a reference T_c. A row is flagged when the pair-model deviation
// exceeds `tolerance`.
std::vector<DiscrepancyRow> discrepancy_report(double tolerance = 0.05, int chain_sites = 6,
                                               const chain::Config& config = {});

} // namespace mixspin::witness
