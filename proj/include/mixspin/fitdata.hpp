#pragma once

#include "mixspin/chain.hpp"
#include "mixspin/spin.hpp"
#include "mixspin/units.hpp"

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mixspin::fit {

struct MeasurementPoint {
    double temperature_kelvin;
    double chi;
};

// Molar susceptibilities are per mole of formula units, i.e. per (S, 1/2) cell.
struct MeasurementSeries {
    std::vector<MeasurementPoint> points; // strictly increasing temperature
    units::Unit unit = units::Unit::emu_per_mol;
    std::string compound;
    std::string source;
};

// CSV: header `temperature_kelvin,chi_emu_per_mol` or `temperature_kelvin,chi_reduced`,
// further columns ignored, `#` lines are comments (`# compound: X` and
// `# source: Y` fill the metadata). Errors name the offending line.
MeasurementSeries load_measurements(std::istream& in);
MeasurementSeries load_measurements_file(const std::string& path);

std::string chi_column_name(units::Unit unit);

enum class ModelKind { pair, chain };

struct ModelSpec {
    ModelKind kind = ModelKind::pair;
    int chain_sites = 6;               // periodic ring used by ModelKind::chain
    bool printed_correlator = false;   // pair model with the alternative closed forms
};

// chi per formula unit as a function of (J, T). The chain model is diagonalized
// once at J = 1 and evaluated at T / J.
class SusceptibilityModel {
public:
    SusceptibilityModel(const ModelSpec& model, SpinQuantum spin, const chain::Config& config = {});

    double chi_reduced(double coupling_kelvin, double temperature_kelvin) const;
    double chi_molar(double coupling_kelvin, double g_factor, double temperature_kelvin) const;
    double chi(units::Unit unit, double coupling_kelvin, double g_factor, double temperature_kelvin) const;

    SpinQuantum spin() const { return spin_; }
    const ModelSpec& spec() const { return model_; }

private:
    ModelSpec model_;
    SpinQuantum spin_;
    std::shared_ptr<const chain::ThermalModel> chain_; // unit coupling
};

// emu/mol per formula unit: curie_factor g^2 chi_reduced / T.
double model_chi(const ModelSpec& model, SpinQuantum spin, double coupling_kelvin, double g_factor,
                 double temperature_kelvin);

MeasurementSeries synthesize(const SusceptibilityModel& model, double coupling_kelvin, double g_factor,
                             const std::vector<double>& temperatures_kelvin, units::Unit unit = units::Unit::emu_per_mol);

struct FitWindow {
    double t_min;
    double t_max;
};

// Parses "25:250"; either side may be empty for an open end.
FitWindow parse_window(std::string_view text);

struct FitOptions {
    double init_coupling_kelvin = 10.0;
    double init_g = 2.0;
    std::optional<FitWindow> window;
    int max_iterations = 2000;
    double tolerance = 1e-9; // relative simplex diameter
};

struct FitResult {
    double coupling_kelvin;
    double g_factor;
    bool g_fixed;         // reduced data carry no g information
    double residual_rms;
    int iterations;
    bool converged;
    FitWindow fit_window; // temperature span actually used
    int points_used;
    std::vector<double> best_objective; // per iteration, non-increasing
};

// Least squares on raw residuals in the series' unit, over (log J, g) by
// Nelder-Mead. Throws ValidationError with fewer than 4 points in the window.
FitResult fit(const MeasurementSeries& series, const SusceptibilityModel& model, const FitOptions& options);

struct BoundPoint {
    double temperature_kelvin;
    double chi;
    double witness_value; // same unit as chi
    bool entangled;
    double negativity_bound;
    bool corrected;
};

// Witness and negativity bound at every point. `sites_per_formula_unit` is n.
std::vector<BoundPoint> bound_series(const MeasurementSeries& series, SpinQuantum spin, double g_factor,
                                     int sites_per_formula_unit = 2,
                                     std::optional<double> correction_coupling_kelvin = std::nullopt);

// Index of the first point where the bound goes from positive to non-positive, if any.
std::optional<std::size_t> bound_sign_change(const std::vector<BoundPoint>& points);

} // namespace mixspin::fit
