#include "mixspin/spin.hpp"
#include "mixspin/error.hpp"
#include "mixspin/lattice.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace mixspin {

namespace {

int parse_nonnegative_int(std::string_view text, std::string_view whole)
{
    int value = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc{} || ptr != last || value < 0)
        throw ValidationError("invalid spin '" + std::string(whole) + "': expected forms like 1/2, 1, 3/2");
    return value;
}

} // namespace

SpinQuantum::SpinQuantum(int twice_spin) : twice_spin_(twice_spin)
{
    if (twice_spin < 1)
        throw ValidationError("spin must be positive (2S >= 1), got 2S = " + std::to_string(twice_spin));
}

SpinQuantum SpinQuantum::parse(std::string_view text)
{
    while (!text.empty() && text.front() == ' ')
        text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ')
        text.remove_suffix(1);

    auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return SpinQuantum(2 * parse_nonnegative_int(text, text));

    const int num = parse_nonnegative_int(text.substr(0, slash), text);
    const int den = parse_nonnegative_int(text.substr(slash + 1), text);
    if (den == 2)
        return SpinQuantum(num);
    if (den == 1)
        return SpinQuantum(2 * num);
    throw ValidationError("invalid spin '" + std::string(text) + "': denominator must be 1 or 2");
}

std::string SpinQuantum::to_string() const
{
    if (twice_spin_ % 2 == 0)
        return std::to_string(twice_spin_ / 2);
    return std::to_string(twice_spin_) + "/2";
}

DenseSymMatrix::DenseSymMatrix(Matrix m)
{
    if (m.rows() != m.cols())
        throw ValidationError("symmetric matrix must be square");
    if (!m.allFinite())
        throw ValidationError("matrix has non-finite entries");
    const double scale = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
    const double asym = m.size() ? (m - m.transpose()).cwiseAbs().maxCoeff() : 0.0;
    if (asym > 1e-12 * std::max(scale, 1.0))
        throw ValidationError("matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
    // (a + b) / 2 is commutative in IEEE arithmetic, so the result is exactly symmetric.
    m_ = 0.5 * (m + m.transpose());
}

DenseSymMatrix DenseSymMatrix::from_upper(const Matrix& m)
{
    Matrix full = m.triangularView<Eigen::Upper>();
    full.triangularView<Eigen::StrictlyLower>() = full.transpose();
    return DenseSymMatrix(std::move(full));
}

SpinMatrices spin_matrices(SpinQuantum s)
{
    const int d = s.dimension();
    const double S = s.value();
    SpinMatrices out{Matrix::Zero(d, d), Matrix::Zero(d, d), Matrix::Zero(d, d), Matrix::Zero(d, d)};
    for (int k = 0; k < d; ++k)
        out.sz(k, k) = S - k;
    // index k holds m = S - k; Sp takes index k to k - 1
    for (int k = 1; k < d; ++k) {
        const double m = S - k;
        out.sp(k - 1, k) = std::sqrt(S * (S + 1.0) - m * (m + 1.0));
    }
    out.sm = out.sp.transpose();
    out.sx = 0.5 * (out.sp + out.sm);
    return out;
}

EigenDecomposition eig_sym(const DenseSymMatrix& m)
{
    if (!m.matrix().allFinite())
        throw ValidationError("eig_sym: non-finite entries");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix(), Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw ComputationError("eig_sym: eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

Vector eigvals_sym(const DenseSymMatrix& m)
{
    if (!m.matrix().allFinite())
        throw ValidationError("eig_sym: non-finite entries");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw ComputationError("eig_sym: eigensolver did not converge");
    return solver.eigenvalues();
}

// ---------------------------------------------------------------------------

std::size_t ChainSpec::hilbert_dimension() const
{
    std::size_t dim = 1;
    for (int i = 0; i < sites; ++i) {
        const auto d = static_cast<std::size_t>(site_dimension(i));
        if (dim > std::numeric_limits<std::size_t>::max() / d)
            throw ValidationError("Hilbert dimension overflows");
        dim *= d;
    }
    return dim;
}

std::vector<std::pair<int, int>> ChainSpec::bonds() const
{
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i + 1 < sites; ++i)
        out.emplace_back(i, i + 1);
    if (boundary == Boundary::periodic)
        out.emplace_back(sites - 1, 0);
    return out;
}

bool ChainSpec::adjacent(int i, int j) const
{
    for (auto [a, b] : bonds())
        if ((a == i && b == j) || (a == j && b == i))
            return true;
    return false;
}

void ChainSpec::validate() const
{
    if (sites < 2 || sites % 2 != 0)
        throw ValidationError("chain needs an even number of sites >= 2, got " + std::to_string(sites));
    if (!std::isfinite(coupling_kelvin))
        throw ValidationError("coupling must be finite");
}

Matrix embed(const Matrix& op, int site, const ChainSpec& spec)
{
    if (site < 0 || site >= spec.sites)
        throw ValidationError("embed: site " + std::to_string(site) + " outside chain of " +
                              std::to_string(spec.sites));
    if (op.rows() != spec.site_dimension(site) || op.cols() != op.rows())
        throw ValidationError("embed: operator dimension " + std::to_string(op.rows()) +
                              " does not match site dimension " + std::to_string(spec.site_dimension(site)));
    Matrix out = Matrix::Identity(1, 1);
    for (int i = 0; i < spec.sites; ++i) {
        const Matrix factor = i == site ? op : Matrix::Identity(spec.site_dimension(i), spec.site_dimension(i));
        Matrix next(out.rows() * factor.rows(), out.cols() * factor.cols());
        for (Eigen::Index r = 0; r < out.rows(); ++r)
            for (Eigen::Index c = 0; c < out.cols(); ++c)
                next.block(r * factor.rows(), c * factor.cols(), factor.rows(), factor.cols()) = out(r, c) * factor;
        out = std::move(next);
    }
    return out;
}

} // namespace mixspin
