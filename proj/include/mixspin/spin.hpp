#pragma once

#include <Eigen/Dense>

#include <string>
#include <string_view>

namespace mixspin {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// A spin magnitude stored exactly as 2S.
class SpinQuantum {
public:
    constexpr SpinQuantum() = default;
    explicit SpinQuantum(int twice_spin);

    // Accepts "1/2", "3/2", "2", ... Decimal forms such as "1.5" are rejected.
    static SpinQuantum parse(std::string_view text);

    constexpr int twice_spin() const { return twice_spin_; }
    constexpr int dimension() const { return twice_spin_ + 1; }
    constexpr double value() const { return 0.5 * twice_spin_; }
    // S(S+1)
    constexpr double casimir() const { return value() * (value() + 1.0); }

    std::string to_string() const;

    friend constexpr bool operator==(SpinQuantum, SpinQuantum) = default;

private:
    int twice_spin_ = 1;
};

inline const SpinQuantum spin_half{1};

// Real symmetric matrix. Construction symmetrizes exactly and rejects inputs
// whose asymmetry exceeds 1e-12 of the largest entry.
class DenseSymMatrix {
public:
    DenseSymMatrix() = default;
    explicit DenseSymMatrix(Matrix m);

    static DenseSymMatrix from_upper(const Matrix& m);

    Eigen::Index dimension() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

private:
    Matrix m_;
};

// Angular-momentum operators in the basis |S>, |S-1>, ..., |-S>. Sy is never
// formed; Sy Sy' = (Sp Sm' + Sm Sp')/2 - Sx Sx' keeps everything real.
struct SpinMatrices {
    Matrix sz;
    Matrix sp;
    Matrix sm;
    Matrix sx;
};

SpinMatrices spin_matrices(SpinQuantum s);

struct EigenDecomposition {
    Vector eigenvalues;  // ascending
    Matrix eigenvectors; // orthonormal columns
};

EigenDecomposition eig_sym(const DenseSymMatrix& m);
// Eigenvalues only.
Vector eigvals_sym(const DenseSymMatrix& m);

} // namespace mixspin
