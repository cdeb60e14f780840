#include "mixspin/fitdata.hpp"
#include "mixspin/error.hpp"
#include "mixspin/pair_model.hpp"
#include "mixspin/witness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <sstream>

namespace mixspin::fit {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

std::optional<double> to_double(std::string_view s)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

std::string line_error(int line, const std::string& what) { return "line " + std::to_string(line) + ": " + what; }

// Nelder-Mead with reflection 1, expansion 2, contraction 0.5, shrink 0.5.
struct SimplexResult {
    std::vector<double> best;
    double value;
    int iterations;
    bool converged;
    std::vector<double> history;
};

template <class F>
SimplexResult nelder_mead(F&& f, std::vector<double> start, const std::vector<double>& steps, int max_iter, double tol)
{
    const std::size_t dim = start.size();
    std::vector<std::vector<double>> x(dim + 1, start);
    for (std::size_t i = 0; i < dim; ++i)
        x[i + 1][i] += steps[i];
    std::vector<double> fx(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i)
        fx[i] = f(x[i]);

    auto order = [&] {
        std::vector<std::size_t> idx(dim + 1);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return fx[a] < fx[b]; });
        std::vector<std::vector<double>> xs;
        std::vector<double> fs;
        for (auto i : idx) {
            xs.push_back(x[i]);
            fs.push_back(fx[i]);
        }
        x = std::move(xs);
        fx = std::move(fs);
    };
    auto diameter = [&] {
        double d = 0.0;
        for (std::size_t i = 1; i <= dim; ++i)
            for (std::size_t k = 0; k < dim; ++k)
                d = std::max(d, std::abs(x[i][k] - x[0][k]) / std::max(1.0, std::abs(x[0][k])));
        return d;
    };
    auto affine = [&](const std::vector<double>& c, const std::vector<double>& p, double t) {
        std::vector<double> out(dim);
        for (std::size_t k = 0; k < dim; ++k)
            out[k] = c[k] + t * (p[k] - c[k]);
        return out;
    };

    SimplexResult res;
    order();
    int iter = 0;
    bool converged = diameter() < tol;
    while (!converged && iter < max_iter) {
        ++iter;
        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t k = 0; k < dim; ++k)
                centroid[k] += x[i][k] / static_cast<double>(dim);

        const auto xr = affine(centroid, x[dim], -1.0);
        const double fr = f(xr);
        if (fr < fx[0]) {
            const auto xe = affine(centroid, x[dim], -2.0);
            const double fe = f(xe);
            if (fe < fr) {
                x[dim] = xe;
                fx[dim] = fe;
            } else {
                x[dim] = xr;
                fx[dim] = fr;
            }
        } else if (fr < fx[dim - 1]) {
            x[dim] = xr;
            fx[dim] = fr;
        } else {
            const bool outside = fr < fx[dim];
            const auto xc = outside ? affine(centroid, xr, 0.5) : affine(centroid, x[dim], 0.5);
            const double fc = f(xc);
            if (fc < (outside ? fr : fx[dim])) {
                x[dim] = xc;
                fx[dim] = fc;
            } else {
                for (std::size_t i = 1; i <= dim; ++i) {
                    x[i] = affine(x[0], x[i], 0.5);
                    fx[i] = f(x[i]);
                }
            }
        }
        order();
        res.history.push_back(fx[0]);
        converged = diameter() < tol;
    }
    res.best = x[0];
    res.value = fx[0];
    res.iterations = iter;
    res.converged = converged;
    return res;
}

} // namespace

std::string chi_column_name(units::Unit unit)
{
    switch (unit) {
    case units::Unit::emu_per_mol: return "chi_emu_per_mol";
    case units::Unit::reduced_susceptibility: return "chi_reduced";
    default: throw ValidationError("series unit must be emu/mol or reduced");
    }
}

MeasurementSeries load_measurements(std::istream& in)
{
    MeasurementSeries series;
    std::string raw;
    int line_no = 0;
    bool have_header = false;
    std::optional<double> prev_t;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line_no == 1 && line.substr(0, 3) == "\xEF\xBB\xBF")
            line.remove_prefix(3);
        if (line.empty())
            continue;
        if (line.front() == '#') {
            auto body = trim(line.substr(1));
            auto colon = body.find(':');
            if (colon != std::string_view::npos) {
                auto key = trim(body.substr(0, colon));
                auto value = std::string(trim(body.substr(colon + 1)));
                if (key == "compound")
                    series.compound = value;
                else if (key == "source")
                    series.source = value;
            }
            continue;
        }
        const auto fields = split_commas(line);
        if (!have_header) {
            if (fields.size() < 2 || fields[0] != "temperature_kelvin")
                throw ValidationError(line_error(line_no, "expected header 'temperature_kelvin,chi_emu_per_mol' or "
                                                          "'temperature_kelvin,chi_reduced'"));
            if (fields[1] == "chi_emu_per_mol")
                series.unit = units::Unit::emu_per_mol;
            else if (fields[1] == "chi_reduced")
                series.unit = units::Unit::reduced_susceptibility;
            else
                throw ValidationError(line_error(line_no, "unknown susceptibility column '" + std::string(fields[1]) + "'"));
            have_header = true;
            continue;
        }
        if (fields.size() < 2)
            throw ValidationError(line_error(line_no, "expected at least 2 fields, got " + std::to_string(fields.size())));
        const auto t = to_double(fields[0]);
        const auto chi = to_double(fields[1]);
        if (!t || !chi)
            throw ValidationError(line_error(line_no, "malformed row '" + std::string(line) + "'"));
        if (!(*t > 0.0))
            throw ValidationError(line_error(line_no, "non-positive temperature " + std::string(fields[0])));
        if (prev_t && *t == *prev_t)
            throw ValidationError(line_error(line_no, "duplicate temperature " + std::string(fields[0])));
        if (prev_t && *t < *prev_t) {
            std::ostringstream msg;
            msg.precision(9);
            msg << "temperatures out of order: " << *t << " after " << *prev_t;
            throw ValidationError(line_error(line_no, msg.str()));
        }
        prev_t = t;
        series.points.push_back({*t, *chi});
    }
    if (!have_header)
        throw ValidationError("empty input: missing header");
    return series;
}

MeasurementSeries load_measurements_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open '" + path + "'");
    return load_measurements(in);
}

SusceptibilityModel::SusceptibilityModel(const ModelSpec& model, SpinQuantum spin, const chain::Config& config)
    : model_(model), spin_(spin)
{
    if (model.kind == ModelKind::chain) {
        ChainSpec spec{model.chain_sites, spin, 1.0, Boundary::periodic};
        chain_ = std::make_shared<const chain::ThermalModel>(chain::solve(spec, config));
    } else if (model.printed_correlator) {
        (void)pair::pair_correlator_printed(spin, 1.0, 1.0);
    }
}

double SusceptibilityModel::chi_reduced(double coupling_kelvin, double temperature_kelvin) const
{
    if (!(temperature_kelvin > 0.0))
        throw ValidationError("temperature must be positive");
    if (chain_) {
        if (!(coupling_kelvin > 0.0))
            throw ValidationError("chain model needs J > 0");
        const double per_chain = chain_->susceptibility(temperature_kelvin / coupling_kelvin);
        return per_chain * 2.0 / model_.chain_sites;
    }
    const double g1 = model_.printed_correlator ? pair::pair_correlator_printed(spin_, coupling_kelvin, temperature_kelvin)
                                                : pair::pair_correlator(spin_, coupling_kelvin, temperature_kelvin);
    return chain::susceptibility_nn_approx(2, spin_, g1);
}

double SusceptibilityModel::chi_molar(double coupling_kelvin, double g_factor, double temperature_kelvin) const
{
    return units::reduced_to_molar(chi_reduced(coupling_kelvin, temperature_kelvin), temperature_kelvin, g_factor);
}

double SusceptibilityModel::chi(units::Unit unit, double coupling_kelvin, double g_factor, double temperature_kelvin) const
{
    if (unit == units::Unit::reduced_susceptibility)
        return chi_reduced(coupling_kelvin, temperature_kelvin);
    if (unit == units::Unit::emu_per_mol)
        return chi_molar(coupling_kelvin, g_factor, temperature_kelvin);
    throw ValidationError("susceptibility unit must be emu/mol or reduced");
}

double model_chi(const ModelSpec& model, SpinQuantum spin, double coupling_kelvin, double g_factor,
                 double temperature_kelvin)
{
    return SusceptibilityModel(model, spin).chi_molar(coupling_kelvin, g_factor, temperature_kelvin);
}

MeasurementSeries synthesize(const SusceptibilityModel& model, double coupling_kelvin, double g_factor,
                             const std::vector<double>& temperatures_kelvin, units::Unit unit)
{
    MeasurementSeries out;
    out.unit = unit;
    out.source = "synthetic";
    double prev = 0.0;
    for (double t : temperatures_kelvin) {
        if (!(t > prev))
            throw ValidationError("synthetic temperatures must be positive and strictly increasing");
        prev = t;
        out.points.push_back({t, model.chi(unit, coupling_kelvin, g_factor, t)});
    }
    return out;
}

FitWindow parse_window(std::string_view text)
{
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw ValidationError("window must look like T_MIN:T_MAX, got '" + std::string(text) + "'");
    FitWindow w{0.0, std::numeric_limits<double>::infinity()};
    const auto lo = trim(text.substr(0, colon));
    const auto hi = trim(text.substr(colon + 1));
    if (!lo.empty()) {
        auto v = to_double(lo);
        if (!v)
            throw ValidationError("bad window lower bound '" + std::string(lo) + "'");
        w.t_min = *v;
    }
    if (!hi.empty()) {
        auto v = to_double(hi);
        if (!v)
            throw ValidationError("bad window upper bound '" + std::string(hi) + "'");
        w.t_max = *v;
    }
    if (!(w.t_min < w.t_max))
        throw ValidationError("window lower bound must be below the upper bound");
    return w;
}

FitResult fit(const MeasurementSeries& series, const SusceptibilityModel& model, const FitOptions& options)
{
    if (!(options.init_coupling_kelvin > 0.0))
        throw ValidationError("initial J must be positive");
    if (!(options.init_g > 0.0))
        throw ValidationError("initial g must be positive");

    std::vector<MeasurementPoint> used;
    for (const auto& p : series.points)
        if (!options.window || (p.temperature_kelvin >= options.window->t_min && p.temperature_kelvin <= options.window->t_max))
            used.push_back(p);
    if (used.size() < 4)
        throw ValidationError("fit needs at least 4 points in the window, have " + std::to_string(used.size()));

    const bool g_fixed = series.unit == units::Unit::reduced_susceptibility;
    auto unpack = [&](const std::vector<double>& x) {
        return std::pair{std::exp(x[0]), g_fixed ? options.init_g : x[1]};
    };
    auto objective = [&](const std::vector<double>& x) {
        const auto [j, g] = unpack(x);
        double ss = 0.0;
        for (const auto& p : used) {
            const double r = model.chi(series.unit, j, g, p.temperature_kelvin) - p.chi;
            ss += r * r;
        }
        return std::isfinite(ss) ? ss : std::numeric_limits<double>::infinity();
    };

    std::vector<double> start{std::log(options.init_coupling_kelvin)};
    std::vector<double> steps{std::log(1.05)};
    if (!g_fixed) {
        start.push_back(options.init_g);
        steps.push_back(0.05 * options.init_g);
    }
    auto nm = nelder_mead(objective, start, steps, options.max_iterations, options.tolerance);
    const auto [j, g] = unpack(nm.best);

    FitResult out;
    out.coupling_kelvin = j;
    out.g_factor = g;
    out.g_fixed = g_fixed;
    out.residual_rms = std::sqrt(nm.value / static_cast<double>(used.size()));
    out.iterations = nm.iterations;
    out.converged = nm.converged && std::isfinite(out.residual_rms);
    out.fit_window = {used.front().temperature_kelvin, used.back().temperature_kelvin};
    out.points_used = static_cast<int>(used.size());
    out.best_objective = std::move(nm.history);
    return out;
}

std::vector<BoundPoint> bound_series(const MeasurementSeries& series, SpinQuantum spin, double g_factor,
                                     int sites_per_formula_unit, std::optional<double> correction_coupling_kelvin)
{
    std::vector<BoundPoint> out;
    out.reserve(series.points.size());
    for (const auto& p : series.points) {
        witness::WitnessInput in{p.chi, series.unit, p.temperature_kelvin, g_factor, sites_per_formula_unit, spin,
                                 correction_coupling_kelvin};
        const auto r = witness::evaluate(in);
        out.push_back({p.temperature_kelvin, p.chi, r.witness_value, r.entangled, r.negativity_lower_bound,
                       r.correction_applied});
    }
    return out;
}

std::optional<std::size_t> bound_sign_change(const std::vector<BoundPoint>& points)
{
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i - 1].negativity_bound > 0.0 && points[i].negativity_bound <= 0.0)
            return i;
    return std::nullopt;
}

} // namespace mixspin::fit
