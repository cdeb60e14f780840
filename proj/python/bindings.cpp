#include "mixspin/chain.hpp"
#include "mixspin/error.hpp"
#include "mixspin/fitdata.hpp"
#include "mixspin/pair_model.hpp"
#include "mixspin/units.hpp"
#include "mixspin/witness.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <memory>

namespace py = pybind11;
using namespace mixspin;

namespace {

units::Unit unit_arg(const std::string& text) { return units::parse_unit(text); }

witness::CorrelatorModel correlator_model(const std::string& model, SpinQuantum spin, double j, int sites)
{
    if (model == "pair")
        return witness::pair_model(spin, j);
    if (model == "printed")
        return witness::printed_pair_model(spin, j);
    if (model == "chain") {
        const chain::ThermalModel unit(chain::solve({sites, spin, 1.0, Boundary::periodic}, chain::Config::from_environment()));
        return witness::chain_model(unit.rescaled(j));
    }
    throw ValidationError("model must be pair, printed or chain, got " + model);
}

fit::ModelSpec model_spec(const std::string& model, int sites)
{
    fit::ModelSpec spec;
    if (model == "chain") {
        spec.kind = fit::ModelKind::chain;
        spec.chain_sites = sites;
    } else if (model == "printed") {
        spec.printed_correlator = true;
    } else if (model != "pair") {
        throw ValidationError("model must be pair, printed or chain, got " + model);
    }
    return spec;
}

fit::MeasurementSeries make_series(const std::vector<double>& temps, const std::vector<double>& chi, const std::string& unit)
{
    if (temps.size() != chi.size())
        throw ValidationError("temperatures and chi must have the same length");
    fit::MeasurementSeries s;
    s.unit = unit_arg(unit);
    for (std::size_t k = 0; k < temps.size(); ++k) {
        if (!(temps[k] > 0.0))
            throw ValidationError("temperatures must be positive");
        if (k > 0 && !(temps[k] > temps[k - 1]))
            throw ValidationError("temperatures must be strictly increasing");
        s.points.push_back({temps[k], chi[k]});
    }
    return s;
}

py::dict series_dict(const fit::MeasurementSeries& s)
{
    std::vector<double> t, c;
    for (const auto& p : s.points) {
        t.push_back(p.temperature_kelvin);
        c.push_back(p.chi);
    }
    py::dict d;
    d["temperature_kelvin"] = t;
    d["chi"] = c;
    d["unit"] = std::string(units::unit_name(s.unit));
    d["compound"] = s.compound;
    d["source"] = s.source;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Thermal entanglement in mixed-spin (S, 1/2) Heisenberg chains";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ComputationError>(m, "ComputationError", PyExc_RuntimeError);

    py::class_<SpinQuantum>(m, "SpinQuantum")
        .def(py::init<int>(), py::arg("twice_spin"))
        .def(py::init([](const std::string& s) { return SpinQuantum::parse(s); }), py::arg("text"))
        .def_static("parse", &SpinQuantum::parse)
        .def_property_readonly("twice_spin", &SpinQuantum::twice_spin)
        .def_property_readonly("value", &SpinQuantum::value)
        .def_property_readonly("dimension", &SpinQuantum::dimension)
        .def("__str__", &SpinQuantum::to_string)
        .def("__repr__", [](const SpinQuantum& s) { return "SpinQuantum('" + s.to_string() + "')"; })
        .def("__eq__", [](const SpinQuantum& a, const SpinQuantum& b) { return a == b; })
        .def("__hash__", [](const SpinQuantum& s) { return s.twice_spin(); });
    py::implicitly_convertible<py::str, SpinQuantum>();

    m.attr("KELVIN_PER_WAVENUMBER") = units::kelvin_per_wavenumber;
    m.attr("CURIE_FACTOR") = units::curie_factor;
    m.def("parse_coupling", &units::parse_coupling_kelvin, py::arg("text"), "coupling string such as '81.4cm-1' in Kelvin");
    m.def(
        "convert",
        [](double v, const std::string& from, const std::string& to, std::optional<double> t, std::optional<double> g) {
            return units::convert(v, unit_arg(from), unit_arg(to), {t, g});
        },
        py::arg("value"), py::arg("from_unit"), py::arg("to_unit"), py::arg("temperature_kelvin") = py::none(),
        py::arg("g_factor") = py::none());

    m.def("pair_correlator", &pair::pair_correlator, py::arg("spin"), py::arg("coupling_kelvin"), py::arg("temperature_kelvin"));
    m.def("pair_negativity", &pair::pair_negativity, py::arg("spin"), py::arg("coupling_kelvin"), py::arg("temperature_kelvin"));
    m.def("negativity_from_correlator", &pair::negativity_from_correlator, py::arg("spin"), py::arg("g1"));
    m.def("characteristic_temperature", &pair::characteristic_temperature, py::arg("spin"), py::arg("coupling_kelvin"));

    m.def("separability_threshold", &witness::separability_threshold, py::arg("sites"), py::arg("spin"));
    m.def("witness_value", &witness::witness_value, py::arg("chi_reduced"), py::arg("sites"), py::arg("spin"));
    m.def("negativity_lower_bound", &witness::negativity_lower_bound, py::arg("witness_reduced"), py::arg("sites"),
          py::arg("spin"));
    m.def(
        "evaluate_witness",
        [](double chi, SpinQuantum spin, double t, const std::string& unit, double g, int sites,
           std::optional<double> correction_j) {
            const auto r = witness::evaluate({chi, unit_arg(unit), t, g, sites, spin, correction_j});
            py::dict d;
            d["temperature_kelvin"] = r.temperature_kelvin;
            d["chi"] = r.chi_input;
            d["unit"] = std::string(units::unit_name(r.unit));
            d["witness_value"] = r.witness_value;
            d["entangled"] = r.entangled;
            d["negativity_lower_bound"] = r.negativity_lower_bound;
            d["correction_applied"] = r.correction_applied;
            return d;
        },
        py::arg("chi"), py::arg("spin"), py::arg("temperature_kelvin"), py::arg("unit") = "reduced",
        py::arg("g_factor") = 2.0, py::arg("sites") = 2, py::arg("correction_coupling_kelvin") = py::none());

    m.def(
        "solve_tc",
        [](SpinQuantum spin, double j, const std::string& model, int sites) {
            return witness::solve_tc(correlator_model(model, spin, j, sites), spin, j);
        },
        py::arg("spin"), py::arg("coupling_kelvin"), py::arg("model") = "pair", py::arg("sites") = 6);

    m.def(
        "sweep_tc",
        [](const std::vector<SpinQuantum>& spins, const std::vector<double>& couplings, const std::string& model, int sites) {
            std::map<int, std::shared_ptr<chain::ThermalModel>> cache;
            witness::ModelFactory factory = [&](SpinQuantum s, double j) {
                if (model != "chain")
                    return correlator_model(model, s, j, sites);
                auto& slot = cache[s.twice_spin()];
                if (!slot)
                    slot = std::make_shared<chain::ThermalModel>(
                        chain::solve({sites, s, 1.0, Boundary::periodic}, chain::Config::from_environment()));
                return witness::chain_model(slot->rescaled(j));
            };
            const auto res = witness::sweep_tc(spins, couplings, factory);
            py::list grid;
            for (const auto& p : res.grid)
                grid.append(py::make_tuple(p.spin.to_string(), p.coupling_kelvin, p.tc_kelvin));
            py::dict d;
            d["grid"] = grid;
            d["a0"] = res.linear_fit.a0;
            d["b0"] = res.linear_fit.b0;
            d["r_squared"] = res.linear_fit.r_squared;
            d["degenerate"] = res.linear_fit.degenerate;
            return d;
        },
        py::arg("spins"), py::arg("couplings_kelvin"), py::arg("model") = "pair", py::arg("sites") = 6);

    m.def("compounds", [] {
        py::list out;
        for (const auto& c : witness::builtin_compounds()) {
            py::dict d;
            d["name"] = c.name;
            d["spin"] = c.spin.to_string();
            d["coupling_kelvin"] = c.coupling_kelvin();
            d["g_factor"] = c.g_factor ? py::object(py::float_(*c.g_factor)) : py::object(py::none());
            d["reference_tc_kelvin"] =
                c.reference_tc_kelvin ? py::object(py::float_(*c.reference_tc_kelvin)) : py::object(py::none());
            out.append(d);
        }
        return out;
    });
    m.def(
        "discrepancy_report",
        [](double tolerance, int sites) {
            py::list out;
            for (const auto& r : witness::discrepancy_report(tolerance, sites, chain::Config::from_environment())) {
                py::dict d;
                d["name"] = r.name;
                d["spin"] = r.spin.to_string();
                d["reference_tc_kelvin"] = r.reference_tc_kelvin;
                d["tc_pair_kelvin"] = r.tc_pair_kelvin;
                d["tc_printed_kelvin"] = r.tc_printed_kelvin;
                d["tc_chain_kelvin"] = r.tc_chain_kelvin;
                d["relative_deviation"] = r.relative_deviation;
                d["flagged"] = r.flagged;
                d["reproduced_by_closed_form"] = r.reproduced_by_closed_form;
                d["reproduced_by_any_model"] = r.reproduced_by_any_model;
                d["note"] = r.note;
                out.append(d);
            }
            return out;
        },
        py::arg("tolerance") = 0.05, py::arg("chain_sites") = 6);

    m.def(
        "chain_scan",
        [](SpinQuantum spin, int sites, double j, const std::vector<double>& temps, const std::string& boundary) {
            if (boundary != "periodic" && boundary != "open")
                throw ValidationError("boundary must be periodic or open");
            const ChainSpec spec{sites, spin, j, boundary == "open" ? Boundary::open : Boundary::periodic};
            const auto sd = chain::solve(spec, chain::Config::from_environment());
            const chain::ThermalModel model(sd);
            std::vector<double> chi, chi_nn, g1, neg;
            for (double t : temps) {
                const double g = model.bond_correlator(t);
                chi.push_back(model.susceptibility(t));
                chi_nn.push_back(chain::susceptibility_nn_approx(sites, spin, g));
                g1.push_back(g);
                neg.push_back(chain::negativity_bruteforce(chain::reduced_pair_state(sd, t, 0, 1), spin.dimension(), 2));
            }
            py::dict d;
            d["temperature_kelvin"] = temps;
            d["chi_exact"] = chi;
            d["chi_nn"] = chi_nn;
            d["g1"] = g1;
            d["negativity"] = neg;
            d["ground_energy_kelvin"] = sd.ground_energy();
            return d;
        },
        py::arg("spin"), py::arg("sites"), py::arg("coupling_kelvin"), py::arg("temperatures_kelvin"),
        py::arg("boundary") = "periodic");

    m.def("load_measurements", [](const std::string& path) { return series_dict(fit::load_measurements_file(path)); },
          py::arg("path"));
    m.def(
        "model_chi",
        [](SpinQuantum spin, double j, double g, double t, const std::string& model, int sites) {
            return fit::model_chi(model_spec(model, sites), spin, j, g, t);
        },
        py::arg("spin"), py::arg("coupling_kelvin"), py::arg("g_factor"), py::arg("temperature_kelvin"),
        py::arg("model") = "pair", py::arg("sites") = 6);
    m.def(
        "synthesize",
        [](SpinQuantum spin, double j, double g, const std::vector<double>& temps, const std::string& unit,
           const std::string& model, int sites) {
            const fit::SusceptibilityModel sm(model_spec(model, sites), spin, chain::Config::from_environment());
            return series_dict(fit::synthesize(sm, j, g, temps, unit_arg(unit)));
        },
        py::arg("spin"), py::arg("coupling_kelvin"), py::arg("g_factor"), py::arg("temperatures_kelvin"),
        py::arg("unit") = "emu/mol", py::arg("model") = "pair", py::arg("sites") = 6);
    m.def(
        "fit",
        [](const std::vector<double>& temps, const std::vector<double>& chi, SpinQuantum spin, const std::string& unit,
           const std::string& model, int sites, double init_j, double init_g, std::optional<std::pair<double, double>> window,
           int max_iterations) {
            const auto series = make_series(temps, chi, unit);
            const fit::SusceptibilityModel sm(model_spec(model, sites), spin, chain::Config::from_environment());
            fit::FitOptions opt;
            opt.init_coupling_kelvin = init_j;
            opt.init_g = init_g;
            opt.max_iterations = max_iterations;
            if (window)
                opt.window = fit::FitWindow{window->first, window->second};
            const auto r = fit::fit(series, sm, opt);
            py::dict d;
            d["coupling_kelvin"] = r.coupling_kelvin;
            d["g_factor"] = r.g_factor;
            d["g_fixed"] = r.g_fixed;
            d["residual_rms"] = r.residual_rms;
            d["iterations"] = r.iterations;
            d["converged"] = r.converged;
            d["window"] = py::make_tuple(r.fit_window.t_min, r.fit_window.t_max);
            d["points_used"] = r.points_used;
            return d;
        },
        py::arg("temperatures_kelvin"), py::arg("chi"), py::arg("spin"), py::arg("unit") = "emu/mol",
        py::arg("model") = "pair", py::arg("sites") = 6, py::arg("init_coupling_kelvin") = 10.0, py::arg("init_g") = 2.0,
        py::arg("window") = py::none(), py::arg("max_iterations") = 2000);
}
