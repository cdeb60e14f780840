#include "mixspin/error.hpp"
#include "mixspin/lattice.hpp"
#include "mixspin/spin.hpp"
#include "mixspin/units.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace mixspin;

TEST_CASE("spin parsing is exact")
{
    CHECK(SpinQuantum::parse("1/2").twice_spin() == 1);
    CHECK(SpinQuantum::parse("5/2").twice_spin() == 5);
    CHECK(SpinQuantum::parse("2").twice_spin() == 4);
    CHECK(SpinQuantum::parse(" 3/2 ").dimension() == 4);
    CHECK(SpinQuantum::parse("4/2").twice_spin() == 4);
    CHECK(SpinQuantum(3).to_string() == "3/2");
    CHECK(SpinQuantum(4).to_string() == "2");

    CHECK_THROWS_AS(SpinQuantum::parse("1.5"), ValidationError);
    CHECK_THROWS_AS(SpinQuantum::parse("0"), ValidationError);
    CHECK_THROWS_AS(SpinQuantum::parse("1/3"), ValidationError);
    CHECK_THROWS_AS(SpinQuantum::parse(""), ValidationError);
    CHECK_THROWS_AS(SpinQuantum::parse("-1/2"), ValidationError);
    CHECK_THROWS_AS(SpinQuantum(0), ValidationError);
}

TEST_CASE("spin matrices")
{
    SUBCASE("S = 1/2")
    {
        const auto ops = spin_matrices(spin_half);
        CHECK(ops.sz(0, 0) == 0.5);
        CHECK(ops.sz(1, 1) == -0.5);
        CHECK(ops.sz(0, 1) == 0.0);
        CHECK(ops.sp(0, 1) == doctest::Approx(1.0));
    }
    SUBCASE("S = 1 ladder")
    {
        const auto ops = spin_matrices(SpinQuantum(2));
        CHECK(ops.sp(0, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
        CHECK(ops.sp(1, 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
        CHECK(ops.sp(0, 2) == 0.0);
        CHECK((ops.sm - ops.sp.transpose()).norm() == 0.0);
    }
    SUBCASE("Casimir and su(2) proxy for 2S = 1..5")
    {
        for (int tw = 1; tw <= 5; ++tw) {
            const SpinQuantum s(tw);
            const auto ops = spin_matrices(s);
            const Matrix casimir = ops.sz * ops.sz + 0.5 * (ops.sp * ops.sm + ops.sm * ops.sp);
            const Matrix expected = s.casimir() * Matrix::Identity(s.dimension(), s.dimension());
            CHECK((casimir - expected).cwiseAbs().maxCoeff() < 1e-12);

            const Matrix c1 = ops.sz * ops.sx - ops.sx * ops.sz;
            const Matrix c2 = ops.sz * c1 - c1 * ops.sz;
            CHECK((c2 - ops.sx).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("embed")
{
    ChainSpec two{2, spin_half, 1.0, Boundary::open};
    const auto ops = spin_matrices(spin_half);

    SUBCASE("Sz on site 0 of a (1/2, 1/2) pair")
    {
        const Matrix e = embed(ops.sz, 0, two);
        Vector expected(4);
        expected << 0.5, 0.5, -0.5, -0.5;
        CHECK((e - Matrix(expected.asDiagonal())).norm() == 0.0);
    }

    SUBCASE("trace multiplicativity and exact symmetry")
    {
        ChainSpec spec{4, SpinQuantum(3), 1.0, Boundary::periodic};
        const auto big = spin_matrices(SpinQuantum(3));
        const Matrix op = big.sx + 0.3 * big.sz * big.sz;
        for (int site : {0, 2}) {
            const Matrix e = embed(op, site, spec);
            const double ratio = static_cast<double>(spec.hilbert_dimension()) / op.rows();
            CHECK(e.trace() == doctest::Approx(op.trace() * ratio));
            CHECK((e - e.transpose()).cwiseAbs().maxCoeff() == 0.0);
        }
        CHECK(embed(ops.sz, 3, spec).rows() == static_cast<Eigen::Index>(spec.hilbert_dimension()));
    }

    SUBCASE("operators on different sites commute")
    {
        std::mt19937 rng(7);
        ChainSpec spec{4, SpinQuantum(2), 1.0, Boundary::periodic};
        for (int trial = 0; trial < 5; ++trial) {
            const int i = trial % 4;
            const int j = (trial + 1 + trial / 2) % 4;
            if (i == j)
                continue;
            const Matrix a = Matrix::Random(spec.site_dimension(i), spec.site_dimension(i));
            const Matrix b = oracle::random_symmetric(spec.site_dimension(j), rng);
            const Matrix ea = embed(a, i, spec);
            const Matrix eb = embed(b, j, spec);
            CHECK((ea * eb - eb * ea).cwiseAbs().maxCoeff() < 1e-12);
        }
    }

    SUBCASE("errors")
    {
        CHECK_THROWS_AS(embed(ops.sz, 2, two), ValidationError);
        ChainSpec spin_one{2, SpinQuantum(2), 1.0, Boundary::open};
        CHECK_THROWS_AS(embed(ops.sz, 0, spin_one), ValidationError);
    }
}

TEST_CASE("eig_sym")
{
    SUBCASE("identity and diagonal")
    {
        auto id = eig_sym(DenseSymMatrix(Matrix::Identity(4, 4)));
        CHECK((id.eigenvalues.array() - 1.0).abs().maxCoeff() < 1e-15);

        Vector d(3);
        d << 3, 1, 2;
        auto eig = eig_sym(DenseSymMatrix(Matrix(d.asDiagonal())));
        CHECK(eig.eigenvalues[0] == doctest::Approx(1.0));
        CHECK(eig.eigenvalues[1] == doctest::Approx(2.0));
        CHECK(eig.eigenvalues[2] == doctest::Approx(3.0));
    }
    SUBCASE("random 50x50 reconstruction and trace")
    {
        std::mt19937 rng(2024);
        const Matrix m = oracle::random_symmetric(50, rng);
        const auto eig = eig_sym(DenseSymMatrix(m));
        const Matrix rec = eig.eigenvectors * eig.eigenvalues.asDiagonal() * eig.eigenvectors.transpose();
        const double scale = m.cwiseAbs().maxCoeff();
        CHECK((rec - m).cwiseAbs().maxCoeff() <= 1e-10 * scale);
        CHECK((eig.eigenvectors.transpose() * eig.eigenvectors - Matrix::Identity(50, 50)).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(std::abs(eig.eigenvalues.sum() - m.trace()) <= 1e-9 * std::max(1.0, std::abs(m.trace())));
        for (Eigen::Index k = 1; k < 50; ++k)
            CHECK(eig.eigenvalues[k] >= eig.eigenvalues[k - 1]);
    }
    SUBCASE("rejects bad input")
    {
        Matrix bad = Matrix::Identity(2, 2);
        bad(0, 1) = std::nan("");
        CHECK_THROWS_AS(DenseSymMatrix{bad}, ValidationError);
        Matrix asym = Matrix::Identity(2, 2);
        asym(0, 1) = 1e-3;
        CHECK_THROWS_AS(DenseSymMatrix{asym}, ValidationError);
        CHECK_THROWS_AS(DenseSymMatrix{Matrix::Zero(2, 3)}, ValidationError);
    }
    SUBCASE("construction symmetrizes exactly")
    {
        Matrix m(2, 2);
        m << 1.0, 0.1 + 1e-16, 0.1, 2.0;
        const DenseSymMatrix s(m);
        CHECK(s(0, 1) == s(1, 0));
    }
}

TEST_CASE("unit constants and conversions")
{
    CHECK(units::kelvin_per_wavenumber == doctest::Approx(1.438777).epsilon(1e-6));
    CHECK(units::curie_factor == doctest::Approx(0.375150).epsilon(1e-5));

    using units::Unit;
    CHECK(units::convert(81.4, Unit::wavenumber, Unit::kelvin) == doctest::Approx(117.12).epsilon(1e-4));
    CHECK(units::convert(23.44, Unit::wavenumber, Unit::kelvin) == doctest::Approx(33.72493).epsilon(1e-6));
    CHECK(units::convert(0.0, Unit::wavenumber, Unit::kelvin) == 0.0);
    CHECK(units::convert(0.0, Unit::emu_per_mol, Unit::reduced_susceptibility, {10.0, 2.0}) == 0.0);

    CHECK_THROWS_AS(units::convert(1.0, Unit::kelvin, Unit::emu_per_mol, {10.0, 2.0}), ValidationError);
    CHECK_THROWS_AS(units::convert(1.0, Unit::reduced_susceptibility, Unit::emu_per_mol), ValidationError);
    CHECK_THROWS_AS(units::parse_unit("furlong"), ValidationError);

    SUBCASE("round trips are identity to 1e-12 relative")
    {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> val(-500.0, 500.0), temp(0.5, 300.0), g(1.5, 2.5);
        for (int k = 0; k < 200; ++k) {
            const double v = val(rng);
            const double back = units::convert(units::convert(v, Unit::wavenumber, Unit::kelvin), Unit::kelvin, Unit::wavenumber);
            CHECK(std::abs(back - v) <= 1e-12 * std::abs(v));
            const units::ConversionContext ctx{temp(rng), g(rng)};
            const double chi = units::convert(units::convert(v, Unit::reduced_susceptibility, Unit::emu_per_mol, ctx),
                                              Unit::emu_per_mol, Unit::reduced_susceptibility, ctx);
            CHECK(std::abs(chi - v) <= 1e-12 * std::abs(v));
        }
    }

    SUBCASE("coupling strings")
    {
        CHECK(units::parse_coupling_kelvin("81.4cm-1") == doctest::Approx(117.1164378));
        CHECK(units::parse_coupling_kelvin("5.12K") == 5.12);
        CHECK(units::parse_coupling_kelvin("-3K") == -3.0);
        CHECK(units::parse_coupling_kelvin("7") == 7.0);
        CHECK_THROWS_AS(units::parse_coupling_kelvin("abcK"), ValidationError);
        CHECK_THROWS_AS(units::parse_coupling_kelvin("K"), ValidationError);
    }
}
