#include "mixspin/chain.hpp"
#include "mixspin/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <string>
#include <string_view>

namespace mixspin::chain {

namespace {

void require_positive_temperature(double t)
{
    if (!(t > 0.0) || !std::isfinite(t))
        throw ValidationError("temperature must be positive and finite, got " + std::to_string(t));
}

// Ladder amplitudes per site: raise[k] = <k-1|S+|k>, zero for k = 0.
struct LocalLadders {
    std::vector<std::vector<double>> raise;

    explicit LocalLadders(const ChainSpec& spec)
    {
        for (int i = 0; i < spec.sites; ++i) {
            const auto ops = spin_matrices(spec.site_spin(i));
            std::vector<double> r(ops.sp.rows(), 0.0);
            for (Eigen::Index k = 1; k < ops.sp.rows(); ++k)
                r[k] = ops.sp(k - 1, k);
            raise.push_back(std::move(r));
        }
    }

    // <k+1|S-|k>
    double lower(int site, int k) const { return raise[site][k + 1]; }
};

// sum_b a(b) rho(b, b') over product states b of one sector for the operator
// S+_i S-_j (i != j), where S+_i S-_j |b> = a(b) |b'>.
double ladder_expectation(const SpectralData& sd, const LocalLadders& ladders, int sector, const Matrix& rho,
                          int raise_site, int lower_site)
{
    const auto& basis = sd.basis();
    const auto& sec = sd.sectors()[sector];
    const int d_low = basis.local_dimension(lower_site);
    double acc = 0.0;
    for (std::size_t p = 0; p < sec.basis.size(); ++p) {
        const auto b = sec.basis[p];
        const int ki = basis.local_state(b, raise_site);
        const int kj = basis.local_state(b, lower_site);
        if (ki == 0 || kj == d_low - 1)
            continue;
        const double amp = ladders.raise[raise_site][ki] * ladders.lower(lower_site, kj);
        auto target = basis.with_local_state(basis.with_local_state(b, raise_site, ki - 1), lower_site, kj + 1);
        acc += amp * rho(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(sd.position_of(target)));
    }
    return acc;
}

Matrix sector_density(const Sector& sec, const Vector& w)
{
    return sec.eigenvectors * w.asDiagonal() * sec.eigenvectors.transpose();
}

} // namespace

Config Config::from_environment()
{
    Config cfg;
    if (const char* env = std::getenv("MIXSPIN_DIM_CAP")) {
        std::string_view text(env);
        std::size_t value = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || value == 0)
            throw ValidationError("MIXSPIN_DIM_CAP must be a positive integer, got '" + std::string(text) + "'");
        cfg.dimension_cap = value;
    }
    return cfg;
}

ProductBasis::ProductBasis(const ChainSpec& spec)
{
    const int n = spec.sites;
    dims_.resize(n);
    twice_spin_.resize(n);
    strides_.resize(n);
    for (int i = 0; i < n; ++i) {
        dims_[i] = spec.site_dimension(i);
        twice_spin_[i] = spec.site_spin(i).twice_spin();
    }
    std::uint64_t stride = 1;
    for (int i = n - 1; i >= 0; --i) {
        strides_[i] = static_cast<std::uint32_t>(stride);
        stride *= static_cast<std::uint64_t>(dims_[i]);
        if (stride > 0xffffffffULL)
            throw ComputationError("product basis too large for 32-bit indexing");
    }
    size_ = static_cast<std::size_t>(stride);
}

int ProductBasis::twice_total_sz(std::uint32_t index) const
{
    int total = 0;
    for (int i = 0; i < sites(); ++i)
        total += twice_m(index, i);
    return total;
}

std::uint32_t ProductBasis::with_local_state(std::uint32_t index, int site, int k) const
{
    const int old = local_state(index, site);
    return index + static_cast<std::uint32_t>((k - old)) * strides_[site];
}

SpectralData::SpectralData(ChainSpec spec, std::vector<Sector> sectors)
    : spec_(std::move(spec)), basis_(spec_), sectors_(std::move(sectors)),
      sector_of_(basis_.size(), -1), position_(basis_.size(), 0)
{
    for (std::size_t s = 0; s < sectors_.size(); ++s)
        for (std::size_t p = 0; p < sectors_[s].basis.size(); ++p) {
            sector_of_[sectors_[s].basis[p]] = static_cast<int>(s);
            position_[sectors_[s].basis[p]] = static_cast<std::uint32_t>(p);
        }
    if (std::find(sector_of_.begin(), sector_of_.end(), -1) != sector_of_.end())
        throw ValidationError("spectral data sectors do not cover the product basis");
}

double SpectralData::ground_energy() const
{
    double e0 = std::numeric_limits<double>::infinity();
    for (const auto& s : sectors_)
        if (s.eigenvalues.size())
            e0 = std::min(e0, s.eigenvalues.minCoeff());
    return e0;
}

std::vector<double> SpectralData::all_eigenvalues() const
{
    std::vector<double> out;
    for (const auto& s : sectors_)
        out.insert(out.end(), s.eigenvalues.data(), s.eigenvalues.data() + s.eigenvalues.size());
    std::sort(out.begin(), out.end());
    return out;
}

ChainHamiltonian build_hamiltonian(const ChainSpec& spec, const Config& config)
{
    spec.validate();
    const std::size_t dim = spec.hilbert_dimension();
    if (dim > config.dimension_cap)
        throw ComputationError("Hilbert dimension " + std::to_string(dim) + " exceeds cap " +
                               std::to_string(config.dimension_cap) + " (set MIXSPIN_DIM_CAP to raise it)");

    const ProductBasis basis(spec);
    const LocalLadders ladders(spec);

    std::map<int, std::vector<std::uint32_t>> by_sector;
    for (std::uint32_t b = 0; b < basis.size(); ++b)
        by_sector[basis.twice_total_sz(b)].push_back(b);

    std::vector<std::uint32_t> position(basis.size());
    for (auto& [sz, states] : by_sector)
        for (std::size_t p = 0; p < states.size(); ++p)
            position[states[p]] = static_cast<std::uint32_t>(p);

    const double J = spec.coupling_kelvin;
    const auto bonds = spec.bonds();

    ChainHamiltonian out{spec, {}};
    for (auto& [sz, states] : by_sector) {
        const auto d = static_cast<Eigen::Index>(states.size());
        Matrix h = Matrix::Zero(d, d);
        for (Eigen::Index p = 0; p < d; ++p) {
            const auto b = states[p];
            for (auto [i, j] : bonds) {
                h(p, p) += J * 0.25 * basis.twice_m(b, i) * basis.twice_m(b, j);
                const int ki = basis.local_state(b, i);
                const int kj = basis.local_state(b, j);
                // S+_i S-_j
                if (ki > 0 && kj < basis.local_dimension(j) - 1) {
                    auto t = basis.with_local_state(basis.with_local_state(b, i, ki - 1), j, kj + 1);
                    h(position[t], p) += 0.5 * J * ladders.raise[i][ki] * ladders.lower(j, kj);
                }
                // S-_i S+_j
                if (kj > 0 && ki < basis.local_dimension(i) - 1) {
                    auto t = basis.with_local_state(basis.with_local_state(b, j, kj - 1), i, ki + 1);
                    h(position[t], p) += 0.5 * J * ladders.raise[j][kj] * ladders.lower(i, ki);
                }
            }
        }
        out.sectors.push_back({sz, std::move(states), DenseSymMatrix(std::move(h))});
    }
    return out;
}

SpectralData diagonalize(const ChainHamiltonian& h)
{
    std::vector<Sector> sectors;
    sectors.reserve(h.sectors.size());
    for (const auto& block : h.sectors) {
        auto eig = eig_sym(block.hamiltonian);
        sectors.push_back({block.twice_total_sz, block.basis, std::move(eig.eigenvalues), std::move(eig.eigenvectors)});
    }
    return SpectralData(h.spec, std::move(sectors));
}

SpectralData solve(const ChainSpec& spec, const Config& config) { return diagonalize(build_hamiltonian(spec, config)); }

Matrix assemble_dense(const ChainHamiltonian& h)
{
    const ProductBasis basis(h.spec);
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Matrix out = Matrix::Zero(dim, dim);
    for (const auto& block : h.sectors)
        for (std::size_t r = 0; r < block.basis.size(); ++r)
            for (std::size_t c = 0; c < block.basis.size(); ++c)
                out(block.basis[r], block.basis[c]) = block.hamiltonian(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    return out;
}

double ThermalWeights::log_partition_function() const
{
    return -ground_energy / temperature_kelvin + std::log(shifted_partition_function);
}

ThermalWeights thermal_weights(const SpectralData& sd, double temperature_kelvin)
{
    require_positive_temperature(temperature_kelvin);
    ThermalWeights out{temperature_kelvin, sd.ground_energy(), 0.0, {}};
    for (const auto& s : sd.sectors()) {
        Vector w = (-(s.eigenvalues.array() - out.ground_energy) / temperature_kelvin).exp().matrix();
        out.shifted_partition_function += w.sum();
        out.weights.push_back(std::move(w));
    }
    for (auto& w : out.weights)
        w /= out.shifted_partition_function;
    return out;
}

double mean_energy(const SpectralData& sd, double temperature_kelvin)
{
    const auto tw = thermal_weights(sd, temperature_kelvin);
    double e = 0.0;
    for (std::size_t s = 0; s < sd.sectors().size(); ++s)
        e += tw.weights[s].dot(sd.sectors()[s].eigenvalues);
    return e;
}

CorrelatorMatrix correlator_matrix(const SpectralData& sd, double temperature_kelvin)
{
    const auto tw = thermal_weights(sd, temperature_kelvin);
    const auto& basis = sd.basis();
    const int n = sd.spec().sites;
    const LocalLadders ladders(sd.spec());

    Matrix zz = Matrix::Zero(n, n);
    Matrix transverse = Matrix::Zero(n, n); // <S+_i S-_j + S-_i S+_j>
    std::vector<double> m(n);

    for (std::size_t s = 0; s < sd.sectors().size(); ++s) {
        const auto& sec = sd.sectors()[s];
        const Matrix rho = sector_density(sec, tw.weights[s]);
        for (std::size_t p = 0; p < sec.basis.size(); ++p) {
            const double prob = rho(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
            const auto b = sec.basis[p];
            for (int i = 0; i < n; ++i)
                m[i] = 0.5 * basis.twice_m(b, i);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j)
                    zz(i, j) += prob * m[i] * m[j];
                // on-site S+S- + S-S+ is diagonal in the product basis
                const int k = basis.local_state(b, i);
                const double up = ladders.raise[i][k];
                const double down = k + 1 < basis.local_dimension(i) ? ladders.lower(i, k) : 0.0;
                transverse(i, i) += prob * (up * up + down * down);
            }
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j)
                    transverse(i, j) += ladder_expectation(sd, ladders, static_cast<int>(s), rho, i, j) +
                                        ladder_expectation(sd, ladders, static_cast<int>(s), rho, j, i);
    }

    CorrelatorMatrix out{temperature_kelvin, {}, {}, {}};
    out.g_zz = 0.5 * (zz + zz.transpose());
    out.g_xx = 0.25 * (transverse + transverse.transpose()) * 0.5;
    out.g_dot = out.g_zz + 2.0 * out.g_xx;
    return out;
}

double susceptibility_exact(const SpectralData& sd, double temperature_kelvin)
{
    const auto tw = thermal_weights(sd, temperature_kelvin);
    double acc = 0.0;
    for (std::size_t s = 0; s < sd.sectors().size(); ++s) {
        const double mz = 0.5 * sd.sectors()[s].twice_total_sz;
        acc += tw.weights[s].sum() * mz * mz;
    }
    return acc;
}

double susceptibility_nn_approx(int sites, SpinQuantum spin, double g1)
{
    const double s = spin.value();
    return sites * (1.0 / 8.0 + s * s / 2.0 + g1 / 3.0);
}

double susceptibility_nn_exact_diagonal(int sites, SpinQuantum spin, double g1)
{
    return sites * (1.0 / 8.0 + spin.casimir() / 6.0 + g1 / 3.0);
}

Matrix reduced_pair_state(const SpectralData& sd, double temperature_kelvin, int site_a, int site_b)
{
    const auto& spec = sd.spec();
    if (site_a < 0 || site_b < 0 || site_a >= spec.sites || site_b >= spec.sites || !spec.adjacent(site_a, site_b))
        throw ValidationError("reduced_pair_state: sites " + std::to_string(site_a) + " and " +
                              std::to_string(site_b) + " are not a bond of the chain");
    const auto tw = thermal_weights(sd, temperature_kelvin);
    const auto& basis = sd.basis();
    const int da = basis.local_dimension(site_a);
    const int db = basis.local_dimension(site_b);
    Matrix out = Matrix::Zero(da * db, da * db);

    for (std::size_t s = 0; s < sd.sectors().size(); ++s) {
        const auto& sec = sd.sectors()[s];
        const Matrix rho = sector_density(sec, tw.weights[s]);
        for (std::size_t p = 0; p < sec.basis.size(); ++p) {
            const auto b = sec.basis[p];
            const int ka = basis.local_state(b, site_a);
            const int kb = basis.local_state(b, site_b);
            const int local_sum = ka + kb; // fixed within a sector when the rest is fixed
            for (int ka2 = 0; ka2 < da; ++ka2) {
                const int kb2 = local_sum - ka2;
                if (kb2 < 0 || kb2 >= db)
                    continue;
                auto b2 = basis.with_local_state(basis.with_local_state(b, site_a, ka2), site_b, kb2);
                out(ka * db + kb, ka2 * db + kb2) +=
                    rho(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(sd.position_of(b2)));
            }
        }
    }
    return 0.5 * (out + out.transpose());
}

Matrix partial_transpose(const Matrix& rho, int dim_a, int dim_b)
{
    if (dim_a < 1 || dim_b < 1 || rho.rows() != static_cast<Eigen::Index>(dim_a) * dim_b || rho.cols() != rho.rows())
        throw ValidationError("partial_transpose: matrix is " + std::to_string(rho.rows()) + "x" +
                              std::to_string(rho.cols()) + ", expected " + std::to_string(dim_a * dim_b) + " square");
    Matrix out(rho.rows(), rho.cols());
    for (int a = 0; a < dim_a; ++a)
        for (int b = 0; b < dim_b; ++b)
            for (int a2 = 0; a2 < dim_a; ++a2)
                for (int b2 = 0; b2 < dim_b; ++b2)
                    out(a * dim_b + b2, a2 * dim_b + b) = rho(a * dim_b + b, a2 * dim_b + b2);
    return out;
}

double negativity_bruteforce(const Matrix& rho, int dim_a, int dim_b)
{
    const Vector ev = eigvals_sym(DenseSymMatrix(partial_transpose(rho, dim_a, dim_b)));
    double neg = 0.0;
    for (Eigen::Index k = 0; k < ev.size(); ++k)
        if (ev[k] < 0.0)
            neg += ev[k];
    return std::abs(neg);
}

// ---------------------------------------------------------------------------

ThermalModel::ThermalModel(const SpectralData& sd) : spec_(sd.spec())
{
    const auto& basis = sd.basis();
    const LocalLadders ladders(spec_);
    const auto total = static_cast<Eigen::Index>(basis.size());
    energies_.resize(total);
    bond_dot_.resize(total);
    mz_squared_.resize(total);

    Eigen::Index k = 0;
    for (const auto& sec : sd.sectors()) {
        const auto d = static_cast<Eigen::Index>(sec.basis.size());
        const double mz = 0.5 * sec.twice_total_sz;
        // (S_0 . S_1) restricted to the sector, applied to all eigenvectors at once
        Matrix op = Matrix::Zero(d, d);
        for (Eigen::Index p = 0; p < d; ++p) {
            const auto b = sec.basis[p];
            op(p, p) += 0.25 * basis.twice_m(b, 0) * basis.twice_m(b, 1);
            const int k0 = basis.local_state(b, 0);
            const int k1 = basis.local_state(b, 1);
            if (k0 > 0 && k1 < basis.local_dimension(1) - 1) {
                auto t = basis.with_local_state(basis.with_local_state(b, 0, k0 - 1), 1, k1 + 1);
                op(sd.position_of(t), p) += 0.5 * ladders.raise[0][k0] * ladders.lower(1, k1);
            }
            if (k1 > 0 && k0 < basis.local_dimension(0) - 1) {
                auto t = basis.with_local_state(basis.with_local_state(b, 1, k1 - 1), 0, k0 + 1);
                op(sd.position_of(t), p) += 0.5 * ladders.raise[1][k1] * ladders.lower(0, k0);
            }
        }
        const Vector diag = (sec.eigenvectors.transpose() * op * sec.eigenvectors).diagonal();
        energies_.segment(k, d) = sec.eigenvalues;
        bond_dot_.segment(k, d) = diag;
        mz_squared_.segment(k, d).setConstant(mz * mz);
        k += d;
    }
}

ThermalModel ThermalModel::rescaled(double coupling_kelvin) const
{
    if (!std::isfinite(coupling_kelvin))
        throw ValidationError("coupling must be finite");
    ThermalModel out = *this;
    if (spec_.coupling_kelvin == 0.0)
        throw ValidationError("cannot rescale a model built with J = 0");
    out.energies_ *= coupling_kelvin / spec_.coupling_kelvin;
    out.spec_.coupling_kelvin = coupling_kelvin;
    return out;
}

Vector ThermalModel::weights(double temperature_kelvin) const
{
    require_positive_temperature(temperature_kelvin);
    const double e0 = energies_.minCoeff();
    Vector w = (-(energies_.array() - e0) / temperature_kelvin).exp().matrix();
    return w / w.sum();
}

double ThermalModel::bond_correlator(double temperature_kelvin) const
{
    return weights(temperature_kelvin).dot(bond_dot_);
}

double ThermalModel::susceptibility(double temperature_kelvin) const
{
    return weights(temperature_kelvin).dot(mz_squared_);
}

} // namespace mixspin::chain
