#include "mixspin/error.hpp"
#include "mixspin/fitdata.hpp"
#include "mixspin/pair_model.hpp"
#include "mixspin/units.hpp"
#include "mixspin/witness.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace mixspin;
using namespace mixspin::fit;

namespace {

std::vector<double> linear_grid(double lo, double hi, int count)
{
    std::vector<double> out;
    for (int k = 0; k < count; ++k)
        out.push_back(lo + (hi - lo) * k / (count - 1));
    return out;
}

MeasurementSeries parse(const std::string& text)
{
    std::istringstream in(text);
    return load_measurements(in);
}

std::string error_of(const std::string& text)
{
    try {
        parse(text);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("CSV loading")
{
    SUBCASE("valid file with metadata, comments and extra columns")
    {
        const auto s = parse("# compound: NiCu\n# source: lab notebook 3\n"
                             "temperature_kelvin,chi_emu_per_mol,note\n"
                             "2.0,0.01,a\n\n# mid comment\n3.5, 0.02 ,b\r\n10,0.015,c\n");
        CHECK(s.points.size() == 3);
        CHECK(s.unit == units::Unit::emu_per_mol);
        CHECK(s.compound == "NiCu");
        CHECK(s.source == "lab notebook 3");
        CHECK(s.points[1].temperature_kelvin == 3.5);
        CHECK(s.points[1].chi == 0.02);
    }
    SUBCASE("reduced column")
    {
        const auto s = parse("temperature_kelvin,chi_reduced\n1,0.3\n");
        CHECK(s.unit == units::Unit::reduced_susceptibility);
    }
    SUBCASE("errors name the line")
    {
        CHECK(error_of("temperature_kelvin,chi_emu_per_mol\n1,0.1\nabc,0.01\n").find("line 3") != std::string::npos);
        const auto order = error_of("temperature_kelvin,chi_emu_per_mol\n5,0.1\n4,0.01\n");
        CHECK(order.find("line 3") != std::string::npos);
        CHECK(order.find('4') != std::string::npos);
        CHECK(order.find('5') != std::string::npos);
        CHECK(error_of("temperature_kelvin,chi_emu_per_mol\n5,0.1\n5,0.2\n").find("duplicate") != std::string::npos);
        CHECK(error_of("temperature_kelvin,chi_emu_per_mol\n0,0.1\n").find("non-positive") != std::string::npos);
        CHECK(error_of("temperature_kelvin,chi_emu_per_mol\n-2,0.1\n").find("line 2") != std::string::npos);
        CHECK(error_of("temperature_kelvin,chi_emu_per_mol\n2\n").find("line 2") != std::string::npos);
        CHECK(error_of("temp,chi\n1,2\n").find("line 1") != std::string::npos);
        CHECK(error_of("temperature_kelvin,chi_bananas\n").find("chi_bananas") != std::string::npos);
        CHECK(error_of("").find("header") != std::string::npos);
        CHECK(error_of("temperature_kelvin,chi_emu_per_mol\n1;0.1\n").find("line 2") != std::string::npos);
        CHECK_THROWS_AS(load_measurements_file("/nonexistent/file.csv"), ValidationError);
    }
}

TEST_CASE("model susceptibility")
{
    const ModelSpec pair_spec;
    SUBCASE("Curie limit per (1/2, 1/2) cell")
    {
        const double t = 1e7;
        CHECK(model_chi(pair_spec, spin_half, 1.0, 2.0, t) * t == doctest::Approx(units::curie_factor * 4.0 * 0.25 * 2.0).epsilon(1e-6));
        CHECK(model_chi(pair_spec, spin_half, 1.0, 2.0, t) * t == doctest::Approx(0.750296).epsilon(1e-5));
        CHECK(model_chi(pair_spec, spin_half, 1.0, 1.0, t) * t == doctest::Approx(0.1876).epsilon(1e-3));
    }
    SUBCASE("singlet and g^2 scaling")
    {
        CHECK(std::abs(model_chi(pair_spec, spin_half, 10.0, 2.0, 1e-2)) < 1e-12);
        const double a = model_chi(pair_spec, SpinQuantum(2), 100.0, 2.0, 50.0);
        CHECK(model_chi(pair_spec, SpinQuantum(2), 100.0, 4.0, 50.0) == doctest::Approx(4.0 * a).epsilon(1e-14));
    }
    SUBCASE("chain model per formula unit")
    {
        const SusceptibilityModel ring({ModelKind::chain, 4, false}, SpinQuantum(2));
        const double t = 1e6;
        const SpinQuantum s(2);
        CHECK(ring.chi_reduced(1.0, t) == doctest::Approx(s.casimir() / 3.0 + 0.25).epsilon(1e-5));
        const auto direct = chain::susceptibility_exact(chain::solve({4, s, 3.0, Boundary::periodic}), 2.0);
        CHECK(ring.chi_reduced(3.0, 2.0) == doctest::Approx(direct / 2.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(model_chi(pair_spec, spin_half, 1.0, 2.0, 0.0), ValidationError);
    CHECK_THROWS_AS(SusceptibilityModel({ModelKind::pair, 6, true}, SpinQuantum(3)), ValidationError);
}

TEST_CASE("fit round trips")
{
    SUBCASE("Cu-HTS parameters, S = 1/2")
    {
        const double j = units::wavenumber_to_kelvin(10.2);
        const SusceptibilityModel model({}, spin_half);
        const auto series = synthesize(model, j, 2.06, linear_grid(2.0, 100.0, 50));
        FitOptions opt;
        opt.init_coupling_kelvin = 20.0;
        opt.init_g = 1.9;
        const auto r = fit::fit(series, model, opt);
        CHECK(r.converged);
        CHECK(std::abs(r.coupling_kelvin / j - 1.0) < 1e-3);
        CHECK(std::abs(r.g_factor / 2.06 - 1.0) < 1e-3);
        CHECK(r.points_used == 50);
        for (std::size_t k = 1; k < r.best_objective.size(); ++k)
            CHECK(r.best_objective[k] <= r.best_objective[k - 1]);
        // the true parameters have zero residual, which no iterate can beat
        for (double v : r.best_objective)
            CHECK(v >= 0.0);
    }
    SUBCASE("NiCu parameters, S = 1, window 25-250 K")
    {
        const double j = units::wavenumber_to_kelvin(81.4);
        const SusceptibilityModel model({}, SpinQuantum(2));
        const auto series = synthesize(model, j, 2.15, linear_grid(5.0, 300.0, 60));
        FitOptions opt;
        opt.init_coupling_kelvin = 90.0;
        opt.init_g = 2.0;
        opt.window = parse_window("25:250");
        const auto r = fit::fit(series, model, opt);
        CHECK(r.converged);
        CHECK(std::abs(r.coupling_kelvin / j - 1.0) < 1e-3);
        CHECK(std::abs(r.g_factor / 2.15 - 1.0) < 1e-3);
        CHECK(r.fit_window.t_min >= 25.0);
        CHECK(r.fit_window.t_max <= 250.0);
        CHECK(r.points_used < 60);
    }
    SUBCASE("scaling chi by 1.1 scales g by sqrt(1.1)")
    {
        const double j = units::wavenumber_to_kelvin(10.2);
        const SusceptibilityModel model({}, spin_half);
        auto series = synthesize(model, j, 2.06, linear_grid(2.0, 100.0, 40));
        for (auto& p : series.points)
            p.chi *= 1.1;
        FitOptions opt;
        opt.init_coupling_kelvin = 12.0;
        const auto r = fit::fit(series, model, opt);
        CHECK(std::abs(r.g_factor / (2.06 * std::sqrt(1.1)) - 1.0) < 5e-3);
        CHECK(std::abs(r.coupling_kelvin / j - 1.0) < 5e-3);
    }
    SUBCASE("chain model")
    {
        const SusceptibilityModel model({ModelKind::chain, 4, false}, SpinQuantum(3));
        const auto series = synthesize(model, 20.0, 2.0, linear_grid(5.0, 150.0, 30));
        FitOptions opt;
        opt.init_coupling_kelvin = 15.0;
        opt.init_g = 2.2;
        const auto r = fit::fit(series, model, opt);
        CHECK(std::abs(r.coupling_kelvin / 20.0 - 1.0) < 1e-3);
        CHECK(std::abs(r.g_factor / 2.0 - 1.0) < 1e-3);
    }
    SUBCASE("reduced data fix g")
    {
        const SusceptibilityModel model({}, spin_half);
        const auto series = synthesize(model, 7.0, 2.0, linear_grid(1.0, 30.0, 20), units::Unit::reduced_susceptibility);
        FitOptions opt;
        opt.init_coupling_kelvin = 3.0;
        opt.init_g = 2.3;
        const auto r = fit::fit(series, model, opt);
        CHECK(r.g_fixed);
        CHECK(r.g_factor == 2.3);
        CHECK(r.coupling_kelvin == doctest::Approx(7.0).epsilon(1e-6));
    }
    SUBCASE("deterministic")
    {
        const SusceptibilityModel model({}, spin_half);
        const auto series = synthesize(model, 5.0, 2.1, linear_grid(1.0, 30.0, 12));
        const auto a = fit::fit(series, model, {});
        const auto b = fit::fit(series, model, {});
        CHECK(a.coupling_kelvin == b.coupling_kelvin);
        CHECK(a.g_factor == b.g_factor);
        CHECK(a.iterations == b.iterations);
    }
    SUBCASE("iteration cap reports non-convergence with best-so-far")
    {
        const SusceptibilityModel model({}, spin_half);
        const auto series = synthesize(model, 5.0, 2.1, linear_grid(1.0, 30.0, 12));
        FitOptions opt;
        opt.max_iterations = 3;
        const auto r = fit::fit(series, model, opt);
        CHECK_FALSE(r.converged);
        CHECK(r.iterations == 3);
        CHECK(std::isfinite(r.residual_rms));
    }
    SUBCASE("insufficient data")
    {
        const SusceptibilityModel model({}, spin_half);
        const auto three = synthesize(model, 5.0, 2.1, {1.0, 2.0, 3.0});
        CHECK_THROWS_AS(fit::fit(three, model, {}), ValidationError);
        const auto many = synthesize(model, 5.0, 2.1, linear_grid(1.0, 30.0, 12));
        FitOptions opt;
        opt.window = FitWindow{100.0, 200.0};
        CHECK_THROWS_AS(fit::fit(many, model, opt), ValidationError);
        opt.window.reset();
        opt.init_coupling_kelvin = -1.0;
        CHECK_THROWS_AS(fit::fit(many, model, opt), ValidationError);
    }
}

TEST_CASE("window parsing")
{
    const auto w = parse_window("25:250");
    CHECK(w.t_min == 25.0);
    CHECK(w.t_max == 250.0);
    CHECK(std::isinf(parse_window("10:").t_max));
    CHECK(parse_window(":40").t_min == 0.0);
    CHECK_THROWS_AS(parse_window("25-250"), ValidationError);
    CHECK_THROWS_AS(parse_window("30:20"), ValidationError);
    CHECK_THROWS_AS(parse_window("x:20"), ValidationError);
}

TEST_CASE("bound series")
{
    for (int tw : {1, 2, 5}) {
        const SpinQuantum s(tw);
        const double j = 50.0;
        const double g = 2.1;
        const double tc = pair::characteristic_temperature(s, j);
        const SusceptibilityModel model({}, s);

        const auto below = bound_series(synthesize(model, j, g, linear_grid(0.1 * tc, 0.95 * tc, 20)), s, g);
        for (const auto& p : below) {
            CHECK(p.negativity_bound > 0.0);
            CHECK(p.entangled);
        }
        const auto above = bound_series(synthesize(model, j, g, linear_grid(1.05 * tc, 5.0 * tc, 20)), s, g);
        for (const auto& p : above) {
            CHECK(p.negativity_bound <= 0.0);
            CHECK_FALSE(p.entangled);
        }

        // sign change within one grid step of T_c
        const auto grid = linear_grid(0.2 * tc, 3.0 * tc, 57);
        const auto pts = bound_series(synthesize(model, j, g, grid), s, g);
        const auto idx = bound_sign_change(pts);
        REQUIRE(idx.has_value());
        CHECK(pts[*idx - 1].temperature_kelvin < tc);
        CHECK(pts[*idx].temperature_kelvin >= tc);
        CHECK(pts[*idx].temperature_kelvin - pts[*idx - 1].temperature_kelvin <= grid[1] - grid[0] + 1e-9);

        // threshold data give a zero bound
        MeasurementSeries at_threshold;
        at_threshold.unit = units::Unit::reduced_susceptibility;
        at_threshold.points = {{10.0, witness::separability_threshold(2, s)}, {20.0, witness::separability_threshold(2, s)}};
        for (const auto& p : bound_series(at_threshold, s, g))
            CHECK(std::abs(p.negativity_bound) < 1e-14);
    }

    SUBCASE("correction applied when J given")
    {
        const SpinQuantum s(2);
        const double j = units::wavenumber_to_kelvin(81.4);
        const SusceptibilityModel model({}, s);
        const auto series = synthesize(model, j, 2.15, {30.0, 60.0, 90.0});
        const auto plain = bound_series(series, s, 2.15);
        const auto corr = bound_series(series, s, 2.15, 2, j);
        for (std::size_t k = 0; k < series.points.size(); ++k) {
            CHECK(corr[k].corrected);
            const double t = series.points[k].temperature_kelvin;
            CHECK(corr[k].negativity_bound ==
                  doctest::Approx(plain[k].negativity_bound + witness::correction_polynomial(j / t) * pair::pair_correlator(s, j, t))
                      .epsilon(1e-9));
        }
    }
}
