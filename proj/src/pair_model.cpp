#include "mixspin/pair_model.hpp"
#include "mixspin/error.hpp"
#include "mixspin/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace mixspin::pair {

namespace {

void require_positive_temperature(double t)
{
    if (!(t > 0.0) || !std::isfinite(t))
        throw ValidationError("temperature must be positive and finite, got " + std::to_string(t));
}

} // namespace

PairSpectrum pair_spectrum(SpinQuantum spin, double coupling_kelvin)
{
    const double s = spin.value();
    return {spin,
            coupling_kelvin,
            coupling_kelvin * s / 2.0,
            -coupling_kelvin * (s + 1.0) / 2.0,
            spin.twice_spin() + 2,
            spin.twice_spin()};
}

double pair_correlator(SpinQuantum spin, double coupling_kelvin, double temperature_kelvin)
{
    require_positive_temperature(temperature_kelvin);
    const double s = spin.value();
    const double gap_over_t = coupling_kelvin * (2.0 * s + 1.0) / (2.0 * temperature_kelvin);
    if (gap_over_t >= 0.0) {
        const double x = std::exp(-gap_over_t);
        return s * (s + 1.0) * (x - 1.0) / (2.0 * ((s + 1.0) * x + s));
    }
    // ferromagnetic: the upper multiplet is the ground state; divide through by x
    const double y = std::exp(gap_over_t);
    return s * (s + 1.0) * (1.0 - y) / (2.0 * ((s + 1.0) + s * y));
}

double pair_correlator_printed(SpinQuantum spin, double coupling_kelvin, double temperature_kelvin)
{
    require_positive_temperature(temperature_kelvin);
    const double beta_j = coupling_kelvin / temperature_kelvin;
    if (spin.twice_spin() == 1) {
        const double e = std::exp(-beta_j);
        return -3.0 * (1.0 - e) / (4.0 * (1.0 + 3.0 * e));
    }
    if (spin.twice_spin() == 2) {
        const double e = std::exp(-1.5 * beta_j);
        return -5.0 * (1.0 - e) / (6.0 * (1.0 + 2.0 * e));
    }
    throw ValidationError("printed correlator exists only for S = 1/2 and S = 1, got S = " + spin.to_string());
}

double negative_eigenvalue(SpinQuantum spin, double g1)
{
    const double d = spin.dimension();
    return (spin.value() + 2.0 * g1) / (d * (d - 1.0));
}

double negativity_from_correlator(SpinQuantum spin, double g1)
{
    return spin.twice_spin() * std::max(0.0, -negative_eigenvalue(spin, g1));
}

double pair_negativity(SpinQuantum spin, double coupling_kelvin, double temperature_kelvin)
{
    return negativity_from_correlator(spin, pair_correlator(spin, coupling_kelvin, temperature_kelvin));
}

PairThermalResult pair_thermal(SpinQuantum spin, double coupling_kelvin, double temperature_kelvin)
{
    const double g1 = pair_correlator(spin, coupling_kelvin, temperature_kelvin);
    return {temperature_kelvin, g1, negativity_from_correlator(spin, g1)};
}

double pair_correlator_ground_limit(SpinQuantum spin) { return -(spin.value() + 1.0) / 2.0; }

double pair_negativity_ground_limit(SpinQuantum spin) { return 1.0 / spin.dimension(); }

double characteristic_temperature_closed_form(SpinQuantum spin, double coupling_kelvin)
{
    if (!(coupling_kelvin > 0.0) || !std::isfinite(coupling_kelvin))
        throw ValidationError("characteristic temperature needs an antiferromagnetic coupling J > 0");
    const double s = spin.value();
    return coupling_kelvin * (2.0 * s + 1.0) / (2.0 * std::log(2.0 * s + 2.0));
}

double characteristic_temperature(SpinQuantum spin, double coupling_kelvin)
{
    const double tc = characteristic_temperature_closed_form(spin, coupling_kelvin);

    const double threshold = -spin.value() / 2.0;
    auto excess = [&](double t) { return pair_correlator(spin, coupling_kelvin, t) - threshold; };
    auto [lo, hi] = numeric::expand_bracket(excess, 1e-3 * coupling_kelvin, 1e3 * coupling_kelvin);
    const double tc_bisect = numeric::bisect(excess, lo, hi, 1e-12 * coupling_kelvin);

    if (std::abs(tc_bisect - tc) > 1e-8 * tc)
        throw ComputationError("characteristic temperature: closed form " + std::to_string(tc) +
                               " disagrees with bisection " + std::to_string(tc_bisect));
    return tc;
}

} // namespace mixspin::pair
