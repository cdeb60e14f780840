#pragma once

#include "mixspin/lattice.hpp"
#include "mixspin/spin.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mixspin::chain {

struct Config {
    std::size_t dimension_cap = 32768;

    // Reads MIXSPIN_DIM_CAP when set; throws ValidationError if it is not a positive integer.
    static Config from_environment();
};

// Product states are indexed in mixed radix with site 0 most significant; the
// local index k at a site of spin S stands for m = S - k. Within a sector the
// basis is therefore in lexicographic order of the local states.
class ProductBasis {
public:
    explicit ProductBasis(const ChainSpec& spec);

    std::size_t size() const { return size_; }
    int sites() const { return static_cast<int>(dims_.size()); }
    int local_dimension(int site) const { return dims_[site]; }
    int local_state(std::uint32_t index, int site) const { return static_cast<int>(index / strides_[site]) % dims_[site]; }
    // 2 m at `site`
    int twice_m(std::uint32_t index, int site) const { return twice_spin_[site] - 2 * local_state(index, site); }
    int twice_total_sz(std::uint32_t index) const;
    std::uint32_t with_local_state(std::uint32_t index, int site, int k) const;

private:
    std::vector<int> dims_;
    std::vector<int> twice_spin_;
    std::vector<std::uint32_t> strides_;
    std::size_t size_ = 1;
};

struct SectorBlock {
    int twice_total_sz;
    std::vector<std::uint32_t> basis;
    DenseSymMatrix hamiltonian; // Kelvin
};

struct ChainHamiltonian {
    ChainSpec spec;
    std::vector<SectorBlock> sectors; // ascending twice_total_sz
};

struct Sector {
    int twice_total_sz;
    std::vector<std::uint32_t> basis;
    Vector eigenvalues;  // Kelvin, ascending
    Matrix eigenvectors; // columns
};

// Eigen-decomposition of a chain Hamiltonian, grouped by total Sz. Immutable
// after construction.
class SpectralData {
public:
    SpectralData(ChainSpec spec, std::vector<Sector> sectors);

    const ChainSpec& spec() const { return spec_; }
    const ProductBasis& basis() const { return basis_; }
    const std::vector<Sector>& sectors() const { return sectors_; }

    // Sector index and position of a product state.
    int sector_of(std::uint32_t product_index) const { return sector_of_[product_index]; }
    std::uint32_t position_of(std::uint32_t product_index) const { return position_[product_index]; }

    double ground_energy() const;
    std::vector<double> all_eigenvalues() const; // ascending

private:
    ChainSpec spec_;
    ProductBasis basis_;
    std::vector<Sector> sectors_;
    std::vector<int> sector_of_;
    std::vector<std::uint32_t> position_;
};

// Throws ValidationError for a malformed spec and ComputationError when the
// Hilbert dimension exceeds the cap.
ChainHamiltonian build_hamiltonian(const ChainSpec& spec, const Config& config = {});
SpectralData diagonalize(const ChainHamiltonian& h);
SpectralData solve(const ChainSpec& spec, const Config& config = {});

// Full Hamiltonian in the product basis, assembled from the sector blocks.
Matrix assemble_dense(const ChainHamiltonian& h);

struct ThermalWeights {
    double temperature_kelvin;
    double ground_energy;
    double shifted_partition_function; // sum_k exp(-(E_k - E_0)/T)
    std::vector<Vector> weights;       // per sector, aligned with eigenvalues; sum to 1

    double log_partition_function() const;
};

ThermalWeights thermal_weights(const SpectralData& sd, double temperature_kelvin);

double mean_energy(const SpectralData& sd, double temperature_kelvin);

struct CorrelatorMatrix {
    double temperature_kelvin;
    Matrix g_zz;  // <S_i^z S_j^z>
    Matrix g_xx;  // <S_i^x S_j^x>, from the ladder operators
    Matrix g_dot; // <S_i . S_j>
};

CorrelatorMatrix correlator_matrix(const SpectralData& sd, double temperature_kelvin);

// sum_ij <S_i^z S_j^z> = <M_z^2>, i.e. chi k_B T / (g^2 mu_B^2) for the whole chain.
double susceptibility_exact(const SpectralData& sd, double temperature_kelvin);

// n (1/8 + S^2/2 + g1/3), the nearest-neighbour approximation.
double susceptibility_nn_approx(int sites, SpinQuantum spin, double g1);

// Same, with the exact diagonal <(S^z)^2> = S(S+1)/3 in place of S^2/2, kept
// for comparison.
double susceptibility_nn_exact_diagonal(int sites, SpinQuantum spin, double g1);

// Thermal state of sites (a, b), ordered as a x b. The pair must be a bond.
Matrix reduced_pair_state(const SpectralData& sd, double temperature_kelvin, int site_a, int site_b);

// Transpose on the second factor: ((a,b),(a',b')) -> ((a,b'),(a',b)).
Matrix partial_transpose(const Matrix& rho, int dim_a, int dim_b);

// Absolute sum of the negative eigenvalues of the partial transpose.
double negativity_bruteforce(const Matrix& rho, int dim_a, int dim_b);

// Per-eigenstate observables cached for fast temperature scans. The
// Hamiltonian is linear in J, so rescaled() reuses eigenvectors for a new J.
class ThermalModel {
public:
    explicit ThermalModel(const SpectralData& sd);

    const ChainSpec& spec() const { return spec_; }
    ThermalModel rescaled(double coupling_kelvin) const;

    // <S_0 . S_1>
    double bond_correlator(double temperature_kelvin) const;
    // <M_z^2>
    double susceptibility(double temperature_kelvin) const;

private:
    Vector weights(double temperature_kelvin) const;

    ChainSpec spec_;
    Vector energies_;
    Vector bond_dot_;
    Vector mz_squared_;
};

} // namespace mixspin::chain
