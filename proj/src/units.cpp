#include "mixspin/units.hpp"
#include "mixspin/error.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace mixspin::units {

Unit parse_unit(std::string_view text)
{
    if (text == "K" || text == "kelvin")
        return Unit::kelvin;
    if (text == "cm-1" || text == "cm^-1" || text == "wavenumber")
        return Unit::wavenumber;
    if (text == "reduced")
        return Unit::reduced_susceptibility;
    if (text == "emu/mol" || text == "emu")
        return Unit::emu_per_mol;
    throw ValidationError("unknown unit '" + std::string(text) + "'");
}

std::string_view unit_name(Unit u)
{
    switch (u) {
    case Unit::kelvin: return "K";
    case Unit::wavenumber: return "cm-1";
    case Unit::reduced_susceptibility: return "reduced";
    case Unit::emu_per_mol: return "emu/mol";
    }
    return "?";
}

double reduced_to_molar(double chi_reduced, double temperature_kelvin, double g_factor)
{
    if (!(temperature_kelvin > 0.0))
        throw ValidationError("temperature must be positive");
    return curie_factor * g_factor * g_factor * chi_reduced / temperature_kelvin;
}

double molar_to_reduced(double chi_mol, double temperature_kelvin, double g_factor)
{
    if (!(temperature_kelvin > 0.0))
        throw ValidationError("temperature must be positive");
    if (!(g_factor > 0.0))
        throw ValidationError("g-factor must be positive");
    return chi_mol * temperature_kelvin / (curie_factor * g_factor * g_factor);
}

namespace {

bool is_energy(Unit u) { return u == Unit::kelvin || u == Unit::wavenumber; }

} // namespace

double convert(double value, Unit from, Unit to, const ConversionContext& ctx)
{
    if (from == to)
        return value;
    if (is_energy(from) && is_energy(to))
        return from == Unit::wavenumber ? wavenumber_to_kelvin(value) : kelvin_to_wavenumber(value);
    if (!is_energy(from) && !is_energy(to)) {
        if (!ctx.temperature_kelvin || !ctx.g_factor)
            throw ValidationError("susceptibility conversion needs temperature and g-factor");
        return from == Unit::reduced_susceptibility
                   ? reduced_to_molar(value, *ctx.temperature_kelvin, *ctx.g_factor)
                   : molar_to_reduced(value, *ctx.temperature_kelvin, *ctx.g_factor);
    }
    throw ValidationError("cannot convert " + std::string(unit_name(from)) + " to " + std::string(unit_name(to)));
}

double parse_coupling_kelvin(std::string_view text)
{
    std::string_view number = text;
    Unit unit = Unit::kelvin;
    for (std::string_view suffix : {"cm-1", "cm^-1", "K"}) {
        if (text.size() > suffix.size() && text.substr(text.size() - suffix.size()) == suffix) {
            number = text.substr(0, text.size() - suffix.size());
            unit = parse_unit(suffix);
            break;
        }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
    if (number.empty() || ec != std::errc{} || ptr != number.data() + number.size() || !std::isfinite(value))
        throw ValidationError("invalid coupling '" + std::string(text) + "': expected e.g. 81.4cm-1 or 5.12K");
    return convert(value, unit, Unit::kelvin);
}

} // namespace mixspin::units
