#include "cli.hpp"

#include "mixspin/chain.hpp"
#include "mixspin/error.hpp"
#include "mixspin/fitdata.hpp"
#include "mixspin/pair_model.hpp"
#include "mixspin/units.hpp"
#include "mixspin/witness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <variant>

namespace mixspin::cli {
namespace {

using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

struct Table {
    std::vector<std::string> preamble; // CSV comment lines ahead of the header
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, Cell>> summary;
};

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string csv_text(const Cell& c)
{
    struct {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(double v) const { return format_number(v); }
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
        std::string operator()(const std::string& s) const
        {
            if (s.find_first_of(",\"\n\r") == std::string::npos)
                return s;
            std::string q = "\"";
            for (char ch : s) {
                if (ch == '"')
                    q += '"';
                q += ch;
            }
            return q + '"';
        }
    } visitor;
    return std::visit(visitor, c);
}

nlohmann::ordered_json json_value(const Cell& c)
{
    struct {
        nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
        nlohmann::ordered_json operator()(double v) const
        {
            // round-trip through the 9-digit text so JSON and CSV agree
            if (!std::isfinite(v))
                return nullptr;
            return std::stod(format_number(v));
        }
        nlohmann::ordered_json operator()(long long v) const { return v; }
        nlohmann::ordered_json operator()(bool v) const { return v; }
        nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    } visitor;
    return std::visit(visitor, c);
}

nlohmann::ordered_json summary_object(const Table& t)
{
    nlohmann::ordered_json s = nlohmann::ordered_json::object();
    for (const auto& [key, value] : t.summary)
        s[key] = json_value(value);
    return s;
}

void write_csv(const Table& t, std::ostream& os)
{
    for (const auto& line : t.preamble)
        os << "# " << line << '\n';
    for (std::size_t k = 0; k < t.columns.size(); ++k)
        os << (k ? "," : "") << t.columns[k];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t k = 0; k < row.size(); ++k)
            os << (k ? "," : "") << csv_text(row[k]);
        os << '\n';
    }
    if (!t.summary.empty())
        os << "# summary: " << summary_object(t).dump() << '\n';
}

void write_json(const Table& t, std::ostream& os)
{
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t k = 0; k < row.size(); ++k)
            obj[t.columns[k]] = json_value(row[k]);
        os << obj.dump() << '\n';
    }
    nlohmann::ordered_json s;
    s["summary"] = summary_object(t);
    os << s.dump() << '\n';
}

struct OutputFlags {
    std::string format = "csv";
    std::string path;
};

void add_output(CLI::App* cmd, OutputFlags& f)
{
    cmd->add_option("--format", f.format, "csv or json (line-delimited)")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", f.path, "output file (default: standard output)");
}

void emit(const Table& t, const OutputFlags& f, std::ostream& out)
{
    std::ostringstream buf;
    if (f.format == "json")
        write_json(t, buf);
    else
        write_csv(t, buf);
    if (f.path.empty()) {
        out << buf.str();
        return;
    }
    std::ofstream file(f.path, std::ios::binary);
    if (!file)
        throw ValidationError("cannot open output file " + f.path);
    file << buf.str();
    if (!file)
        throw ValidationError("failed writing output file " + f.path);
}

struct SpinFlags {
    std::string spin;
    int twice_spin = -1;
};

void add_spin(CLI::App* cmd, SpinFlags& f)
{
    auto* a = cmd->add_option("--spin", f.spin, "spin S on the even sites, e.g. 3/2");
    auto* b = cmd->add_option("--twice-spin", f.twice_spin, "2S as an integer");
    a->excludes(b);
}

bool spin_given(const SpinFlags& f) { return !f.spin.empty() || f.twice_spin != -1; }

SpinQuantum resolve_spin(const SpinFlags& f)
{
    if (!f.spin.empty())
        return SpinQuantum::parse(f.spin);
    if (f.twice_spin != -1)
        return SpinQuantum(f.twice_spin);
    throw ValidationError("--spin or --twice-spin is required");
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_list(std::string_view text, const std::string& flag)
{
    std::vector<std::string> out;
    if (trim(text).empty())
        throw ValidationError(flag + " needs at least one entry");
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        const auto item = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (item.empty())
            throw ValidationError(flag + " has an empty entry in '" + std::string(text) + "'");
        out.emplace_back(item);
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

double parse_number(std::string_view text, const std::string& what)
{
    const auto t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
        throw ValidationError(what + ": not a number: '" + std::string(text) + "'");
    return v;
}

// "lo:hi:count" (linear, or geometric with `log`) or "t1,t2,...".
std::vector<double> parse_temperatures(std::string_view text, bool log)
{
    std::vector<double> temps;
    if (text.find(':') != std::string_view::npos) {
        const auto a = text.find(':');
        const auto b = text.find(':', a + 1);
        if (b == std::string_view::npos || text.find(':', b + 1) != std::string_view::npos)
            throw ValidationError("--temps range must look like lo:hi:count, got '" + std::string(text) + "'");
        const double lo = parse_number(text.substr(0, a), "--temps");
        const double hi = parse_number(text.substr(a + 1, b - a - 1), "--temps");
        const double count_d = parse_number(text.substr(b + 1), "--temps");
        if (count_d < 1 || count_d > 1e6 || count_d != std::floor(count_d))
            throw ValidationError("--temps count must be an integer between 1 and 1e6");
        const int count = static_cast<int>(count_d);
        if (count > 1 && !(hi > lo))
            throw ValidationError("--temps range needs hi > lo");
        for (int k = 0; k < count; ++k) {
            const double f = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
            temps.push_back(log ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
        }
        if (count > 1)
            temps.back() = hi;
    } else {
        for (const auto& item : split_list(text, "--temps"))
            temps.push_back(parse_number(item, "--temps"));
    }
    for (std::size_t k = 0; k < temps.size(); ++k) {
        if (!(temps[k] > 0.0))
            throw ValidationError("--temps values must be positive");
        if (k > 0 && !(temps[k] > temps[k - 1]))
            throw ValidationError("--temps values must be strictly increasing");
    }
    return temps;
}

double positive_coupling(std::string_view text, const std::string& flag)
{
    const double j = units::parse_coupling_kelvin(text);
    if (!(j > 0.0))
        throw ValidationError(flag + " must be positive (antiferromagnetic), got " + std::string(text));
    return j;
}

fit::ModelSpec model_spec(const std::string& model, int sites)
{
    fit::ModelSpec spec;
    if (model == "chain") {
        spec.kind = fit::ModelKind::chain;
        spec.chain_sites = sites;
    } else if (model == "printed") {
        spec.printed_correlator = true;
    }
    return spec;
}

// --- tc ---

struct TcFlags {
    OutputFlags output;
    SpinFlags spin;
    std::string coupling;
    std::string compound;
    std::string model = "pair";
    int sites = 6;
    double tolerance = 0.05;
};

witness::CorrelatorModel correlator_model(const std::string& model, SpinQuantum spin, double j, int sites,
                                          const chain::Config& cfg)
{
    if (model == "printed")
        return witness::printed_pair_model(spin, j);
    if (model == "chain") {
        const chain::ThermalModel unit(chain::solve({sites, spin, 1.0, Boundary::periodic}, cfg));
        return witness::chain_model(unit.rescaled(j));
    }
    return witness::pair_model(spin, j);
}

Table run_tc(const TcFlags& f)
{
    const auto cfg = chain::Config::from_environment();
    Table t;
    t.summary.emplace_back("command", std::string("tc"));

    if (f.compound == "all" || f.compound == "ALL") {
        if (!(f.tolerance > 0.0))
            throw ValidationError("--tolerance must be positive");
        t.columns = {"compound", "spin", "coupling_kelvin", "reference_tc_kelvin", "tc_pair_kelvin", "tc_printed_kelvin",
                     "tc_chain_kelvin", "chain_sites", "relative_deviation", "threshold_residual", "flagged",
                     "reproduced_by_closed_form", "reproduced_by_any_model", "note"};
        long long flagged = 0;
        for (const auto& r : witness::discrepancy_report(f.tolerance, f.sites, cfg)) {
            Cell printed = r.tc_printed_kelvin ? Cell(*r.tc_printed_kelvin) : Cell();
            t.rows.push_back({r.name, r.spin.to_string(), r.coupling_kelvin, r.reference_tc_kelvin, r.tc_pair_kelvin,
                              printed, r.tc_chain_kelvin, static_cast<long long>(r.chain_sites), r.relative_deviation,
                              r.threshold_residual, r.flagged, r.reproduced_by_closed_form, r.reproduced_by_any_model, r.note});
            flagged += r.flagged;
        }
        t.summary.emplace_back("tolerance", f.tolerance);
        t.summary.emplace_back("flagged_rows", flagged);
        return t;
    }

    std::string name;
    std::optional<double> reference;
    SpinQuantum spin = spin_half;
    double j = 0.0;
    if (!f.compound.empty()) {
        const auto& rec = witness::find_compound(f.compound);
        name = rec.name;
        spin = rec.spin;
        j = rec.coupling_kelvin();
        reference = rec.reference_tc_kelvin;
    } else {
        if (f.coupling.empty())
            throw ValidationError("--coupling is required without --compound");
        spin = resolve_spin(f.spin);
        j = positive_coupling(f.coupling, "--coupling");
    }

    double tc = 0.0;
    if (f.model == "pair")
        tc = pair::characteristic_temperature(spin, j);
    else
        tc = witness::solve_tc(correlator_model(f.model, spin, j, f.sites, cfg), spin, j);

    t.columns = {"compound", "spin", "coupling_kelvin", "model", "sites", "tc_kelvin", "tc_over_coupling",
                 "reference_tc_kelvin", "relative_deviation"};
    t.rows.push_back({name, spin.to_string(), j, f.model, static_cast<long long>(f.model == "chain" ? f.sites : 2), tc,
                      tc / j, reference ? Cell(*reference) : Cell(),
                      reference ? Cell((tc - *reference) / *reference) : Cell()});
    return t;
}

// --- sweep ---

struct SweepFlags {
    OutputFlags output;
    std::string spins = "1/2,1,3/2,2,5/2";
    std::string couplings = "10K,20K,30K,40K,50K";
    std::string model = "pair";
    int sites = 6;
};

Table run_sweep(const SweepFlags& f)
{
    std::vector<SpinQuantum> spins;
    for (const auto& s : split_list(f.spins, "--spins"))
        spins.push_back(SpinQuantum::parse(s));
    std::vector<double> couplings;
    for (const auto& c : split_list(f.couplings, "--couplings"))
        couplings.push_back(positive_coupling(c, "--couplings"));

    const auto cfg = chain::Config::from_environment();
    witness::ModelFactory factory = witness::pair_model;
    std::map<int, std::shared_ptr<chain::ThermalModel>> cache;
    if (f.model == "printed") {
        factory = witness::printed_pair_model;
        for (auto s : spins)
            witness::printed_pair_model(s, 1.0); // fail before computing anything
    } else if (f.model == "chain") {
        const ChainSpec probe{f.sites, spin_half, 1.0, Boundary::periodic};
        probe.validate();
        factory = [&](SpinQuantum s, double j) {
            auto& slot = cache[s.twice_spin()];
            if (!slot)
                slot = std::make_shared<chain::ThermalModel>(chain::solve({f.sites, s, 1.0, Boundary::periodic}, cfg));
            return witness::chain_model(slot->rescaled(j));
        };
    }

    const auto res = witness::sweep_tc(spins, couplings, factory);
    Table t;
    t.columns = {"spin", "coupling_kelvin", "tc_kelvin", "tc_over_coupling"};
    for (const auto& p : res.grid)
        t.rows.push_back({p.spin.to_string(), p.coupling_kelvin, p.tc_kelvin, p.tc_kelvin / p.coupling_kelvin});
    t.summary = {{"command", std::string("sweep")},
                 {"model", f.model},
                 {"a0", res.linear_fit.a0},
                 {"b0", res.linear_fit.b0},
                 {"r_squared", res.linear_fit.r_squared},
                 {"degenerate", res.linear_fit.degenerate}};
    return t;
}

// --- witness / bound ---

struct WitnessFlags {
    OutputFlags output;
    SpinFlags spin;
    double chi = std::nan("");
    std::string unit = "reduced";
    double temp = std::nan("");
    double g = 2.0;
    int n = 2;
    std::string correction_j;
    std::string input;
};

units::Unit susceptibility_unit(const std::string& text)
{
    const auto u = units::parse_unit(text);
    if (u != units::Unit::reduced_susceptibility && u != units::Unit::emu_per_mol)
        throw ValidationError("--unit must be a susceptibility unit (reduced or emu/mol), got " + text);
    return u;
}

std::string witness_status(double w, double threshold)
{
    if (std::abs(w) <= 1e-9 * std::abs(threshold))
        return "separable boundary";
    return w < 0.0 ? "entangled" : "no entanglement detected";
}

Table run_witness(const WitnessFlags& f, const std::string& command)
{
    const auto spin = resolve_spin(f.spin);
    if (!(f.g > 0.0))
        throw ValidationError("--g must be positive");
    std::optional<double> correction;
    if (!f.correction_j.empty())
        correction = positive_coupling(f.correction_j, "--correction-j");
    const double thr_reduced = witness::separability_threshold(f.n, spin);

    Table t;
    t.columns = {"temperature_kelvin", "chi", "unit", "threshold", "witness_value", "entangled",
                 "negativity_lower_bound", "correction_applied", "status"};
    std::string unit_label;

    if (!f.input.empty()) {
        if (!std::isnan(f.chi) || !std::isnan(f.temp))
            throw ValidationError("--input cannot be combined with --chi or --temp");
        const auto series = fit::load_measurements_file(f.input);
        unit_label = std::string(units::unit_name(series.unit));
        const auto pts = fit::bound_series(series, spin, f.g, f.n, correction);
        for (const auto& p : pts) {
            const double thr = units::convert(thr_reduced, units::Unit::reduced_susceptibility, series.unit,
                                              {p.temperature_kelvin, f.g});
            t.rows.push_back({p.temperature_kelvin, p.chi, unit_label, thr, p.witness_value, p.entangled,
                              p.negativity_bound, p.corrected, witness_status(p.witness_value, thr)});
        }
        const auto change = fit::bound_sign_change(pts);
        t.summary.emplace_back("command", command);
        t.summary.emplace_back("points", static_cast<long long>(pts.size()));
        t.summary.emplace_back("sign_change_temperature_kelvin",
                               change ? Cell(pts[*change].temperature_kelvin) : Cell());
        return t;
    }

    if (std::isnan(f.chi))
        throw ValidationError("--chi is required");
    if (std::isnan(f.temp))
        throw ValidationError("--temp is required");
    witness::WitnessInput in{f.chi, susceptibility_unit(f.unit), f.temp, f.g, f.n, spin, correction};
    const auto r = witness::evaluate(in);
    const double thr = units::convert(thr_reduced, units::Unit::reduced_susceptibility, r.unit, {r.temperature_kelvin, f.g});
    t.rows.push_back({r.temperature_kelvin, r.chi_input, std::string(units::unit_name(r.unit)), thr, r.witness_value,
                      r.entangled, r.negativity_lower_bound, r.correction_applied, witness_status(r.witness_value, thr)});
    t.summary.emplace_back("command", command);
    return t;
}

// --- chain ---

struct ChainFlags {
    OutputFlags output;
    SpinFlags spin;
    int sites = 4;
    std::string coupling = "1K";
    std::string boundary = "periodic";
    std::string temps;
    bool log_temps = false;
};

Table run_chain(const ChainFlags& f)
{
    const auto spin = resolve_spin(f.spin);
    const double j = units::parse_coupling_kelvin(f.coupling);
    if (j == 0.0)
        throw ValidationError("--coupling must be nonzero");
    const auto temps = parse_temperatures(f.temps, f.log_temps);
    const ChainSpec spec{f.sites, spin, j, f.boundary == "open" ? Boundary::open : Boundary::periodic};
    spec.validate();
    const auto cfg = chain::Config::from_environment();

    const auto sd = chain::solve(spec, cfg);
    const chain::ThermalModel model(sd);
    Table t;
    t.columns = {"temperature_kelvin", "chi_exact", "chi_nn", "g1", "negativity"};
    for (double temp : temps) {
        const double g1 = model.bond_correlator(temp);
        const auto rho = chain::reduced_pair_state(sd, temp, 0, 1);
        t.rows.push_back({temp, model.susceptibility(temp), chain::susceptibility_nn_approx(f.sites, spin, g1), g1,
                          chain::negativity_bruteforce(rho, spin.dimension(), 2)});
    }
    t.summary = {{"command", std::string("chain")},
                 {"spin", spin.to_string()},
                 {"sites", static_cast<long long>(f.sites)},
                 {"boundary", f.boundary},
                 {"coupling_kelvin", j},
                 {"hilbert_dimension", static_cast<long long>(spec.hilbert_dimension())},
                 {"ground_energy_kelvin", sd.ground_energy()}};
    return t;
}

// --- fit / synth ---

struct FitFlags {
    OutputFlags output;
    SpinFlags spin;
    std::string input;
    std::string model = "pair";
    int sites = 6;
    std::string init_j = "10K";
    double init_g = 2.0;
    std::string window;
    int max_iter = 2000;
};

Table run_fit(const FitFlags& f, std::ostream& err)
{
    const auto spin = resolve_spin(f.spin);
    fit::FitOptions opt;
    opt.init_coupling_kelvin = positive_coupling(f.init_j, "--init-j");
    opt.init_g = f.init_g;
    opt.max_iterations = f.max_iter;
    if (!f.window.empty())
        opt.window = fit::parse_window(f.window);
    if (f.max_iter < 1)
        throw ValidationError("--max-iter must be at least 1");
    const auto series = fit::load_measurements_file(f.input);
    const fit::SusceptibilityModel model(model_spec(f.model, f.sites), spin, chain::Config::from_environment());

    const auto r = fit::fit(series, model, opt);
    if (!r.converged)
        err << "warning: fit did not converge in " << r.iterations << " iterations; reporting the best point found\n";

    Table t;
    t.columns = {"temperature_kelvin", fit::chi_column_name(series.unit), "chi_model", "residual", "in_window"};
    for (const auto& p : series.points) {
        const double m = model.chi(series.unit, r.coupling_kelvin, r.g_factor, p.temperature_kelvin);
        const bool inside = p.temperature_kelvin >= r.fit_window.t_min && p.temperature_kelvin <= r.fit_window.t_max;
        t.rows.push_back({p.temperature_kelvin, p.chi, m, p.chi - m, inside});
    }
    t.summary = {{"command", std::string("fit")},
                 {"compound", series.compound},
                 {"source", series.source},
                 {"unit", std::string(units::unit_name(series.unit))},
                 {"model", f.model},
                 {"spin", spin.to_string()},
                 {"coupling_kelvin", r.coupling_kelvin},
                 {"coupling_wavenumber", units::kelvin_to_wavenumber(r.coupling_kelvin)},
                 {"g_factor", r.g_factor},
                 {"g_fixed", r.g_fixed},
                 {"residual_rms", r.residual_rms},
                 {"iterations", static_cast<long long>(r.iterations)},
                 {"converged", r.converged},
                 {"window_min_kelvin", r.fit_window.t_min},
                 {"window_max_kelvin", r.fit_window.t_max},
                 {"points_used", static_cast<long long>(r.points_used)}};
    return t;
}

struct SynthFlags {
    OutputFlags output;
    SpinFlags spin;
    std::string j;
    double g = 2.0;
    std::string temps;
    bool log_temps = false;
    std::string model = "pair";
    int sites = 6;
    std::string unit = "emu/mol";
    std::string compound = "synthetic";
};

Table run_synth(const SynthFlags& f)
{
    const auto spin = resolve_spin(f.spin);
    const double j = positive_coupling(f.j, "--j");
    if (!(f.g > 0.0))
        throw ValidationError("--g must be positive");
    const auto unit = susceptibility_unit(f.unit);
    const auto temps = parse_temperatures(f.temps, f.log_temps);
    const fit::SusceptibilityModel model(model_spec(f.model, f.sites), spin, chain::Config::from_environment());
    const auto series = fit::synthesize(model, j, f.g, temps, unit);

    Table t;
    t.preamble = {"compound: " + f.compound,
                  "source: synth model=" + f.model + " spin=" + spin.to_string() + " J=" + format_number(j) +
                      "K g=" + format_number(f.g)};
    t.columns = {"temperature_kelvin", fit::chi_column_name(unit)};
    for (const auto& p : series.points)
        t.rows.push_back({p.temperature_kelvin, p.chi});
    t.summary = {{"command", std::string("synth")},
                 {"model", f.model},
                 {"spin", spin.to_string()},
                 {"coupling_kelvin", j},
                 {"g_factor", f.g},
                 {"unit", std::string(units::unit_name(unit))}};
    return t;
}

const std::vector<std::string> model_names = {"pair", "printed", "chain"};

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Thermal entanglement in mixed-spin (S, 1/2) Heisenberg chains", "mixspin"};
    app.require_subcommand(1);

    TcFlags tc;
    auto* tc_cmd = app.add_subcommand("tc", "characteristic temperature below which the witness certifies entanglement");
    add_output(tc_cmd, tc.output);
    add_spin(tc_cmd, tc.spin);
    tc_cmd->add_option("--coupling", tc.coupling, "J with unit, e.g. 81.4cm-1 or 5.12K");
    tc_cmd->add_option("--compound", tc.compound, "built-in compound name, or 'all' for the comparison table");
    tc_cmd->add_option("--model", tc.model, "pair, printed or chain")->check(CLI::IsMember(model_names));
    tc_cmd->add_option("--sites", tc.sites, "ring length for the chain model");
    tc_cmd->add_option("--tolerance", tc.tolerance, "relative deviation that flags a compound row");

    SweepFlags sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "T_c over a grid of spins and couplings with a linear fit of T_c/J in S");
    add_output(sweep_cmd, sweep.output);
    sweep_cmd->add_option("--spins", sweep.spins, "comma-separated spins");
    sweep_cmd->add_option("--couplings", sweep.couplings, "comma-separated couplings with units");
    sweep_cmd->add_option("--model", sweep.model, "pair, printed or chain")->check(CLI::IsMember(model_names));
    sweep_cmd->add_option("--sites", sweep.sites, "ring length for the chain model");

    WitnessFlags wit;
    WitnessFlags bnd;
    auto* witness_cmd = app.add_subcommand("witness", "susceptibility witness for one measurement");
    auto* bound_cmd = app.add_subcommand("bound", "negativity lower bound for one measurement or a data file");
    for (auto [cmd, fl] : {std::pair{witness_cmd, &wit}, std::pair{bound_cmd, &bnd}}) {
        add_output(cmd, fl->output);
        add_spin(cmd, fl->spin);
        cmd->add_option("--chi", fl->chi, "measured susceptibility");
        cmd->add_option("--unit", fl->unit, "reduced or emu/mol");
        cmd->add_option("--temp", fl->temp, "temperature in Kelvin");
        cmd->add_option("--g", fl->g, "g-factor");
        cmd->add_option("--n", fl->n, "spins per formula unit");
        cmd->add_option("--correction-j", fl->correction_j, "apply the empirical correction with this J");
    }
    bound_cmd->add_option("--input", bnd.input, "measurement CSV evaluated point by point");

    ChainFlags ch;
    auto* chain_cmd = app.add_subcommand("chain", "exact diagonalization of a short chain over a temperature grid");
    add_output(chain_cmd, ch.output);
    add_spin(chain_cmd, ch.spin);
    chain_cmd->add_option("--sites", ch.sites, "number of sites (even)");
    chain_cmd->add_option("--coupling", ch.coupling, "J with unit");
    chain_cmd->add_option("--boundary", ch.boundary, "periodic or open")->check(CLI::IsMember({"periodic", "open"}));
    chain_cmd->add_option("--temps", ch.temps, "lo:hi:count or t1,t2,... in Kelvin")->required();
    chain_cmd->add_flag("--log-temps", ch.log_temps, "geometric spacing for lo:hi:count");

    FitFlags ft;
    auto* fit_cmd = app.add_subcommand("fit", "fit J and g to measured susceptibility");
    add_output(fit_cmd, ft.output);
    add_spin(fit_cmd, ft.spin);
    fit_cmd->add_option("--input", ft.input, "measurement CSV")->required();
    fit_cmd->add_option("--model", ft.model, "pair, printed or chain")->check(CLI::IsMember(model_names));
    fit_cmd->add_option("--sites", ft.sites, "ring length for the chain model");
    fit_cmd->add_option("--init-j", ft.init_j, "starting J with unit");
    fit_cmd->add_option("--init-g", ft.init_g, "starting g-factor");
    fit_cmd->add_option("--window", ft.window, "temperature window lo:hi in Kelvin");
    fit_cmd->add_option("--max-iter", ft.max_iter, "iteration limit");

    SynthFlags sy;
    auto* synth_cmd = app.add_subcommand("synth", "write model susceptibility in the measurement CSV format");
    add_output(synth_cmd, sy.output);
    add_spin(synth_cmd, sy.spin);
    synth_cmd->add_option("--j", sy.j, "J with unit")->required();
    synth_cmd->add_option("--g", sy.g, "g-factor");
    synth_cmd->add_option("--temps", sy.temps, "lo:hi:count or t1,t2,... in Kelvin")->required();
    synth_cmd->add_flag("--log-temps", sy.log_temps, "geometric spacing for lo:hi:count");
    synth_cmd->add_option("--model", sy.model, "pair, printed or chain")->check(CLI::IsMember(model_names));
    synth_cmd->add_option("--sites", sy.sites, "ring length for the chain model");
    synth_cmd->add_option("--unit", sy.unit, "emu/mol or reduced");
    synth_cmd->add_option("--compound", sy.compound, "label written to the file header");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (app.got_subcommand(tc_cmd)) {
            if (!tc.compound.empty() && (spin_given(tc.spin) || !tc.coupling.empty()))
                throw ValidationError("--compound cannot be combined with --spin or --coupling");
            emit(run_tc(tc), tc.output, out);
        } else if (app.got_subcommand(sweep_cmd)) {
            emit(run_sweep(sweep), sweep.output, out);
        } else if (app.got_subcommand(witness_cmd)) {
            if (!wit.input.empty())
                throw ValidationError("witness takes a single measurement; use bound --input for files");
            emit(run_witness(wit, "witness"), wit.output, out);
        } else if (app.got_subcommand(bound_cmd)) {
            emit(run_witness(bnd, "bound"), bnd.output, out);
        } else if (app.got_subcommand(chain_cmd)) {
            emit(run_chain(ch), ch.output, out);
        } else if (app.got_subcommand(fit_cmd)) {
            emit(run_fit(ft, err), ft.output, out);
        } else if (app.got_subcommand(synth_cmd)) {
            emit(run_synth(sy), sy.output, out);
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ComputationError& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

} // namespace mixspin::cli
