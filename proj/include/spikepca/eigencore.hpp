#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace spikepca {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// d x n data matrix, one observation per column.
using DataMatrix = Eigen::MatrixXd;

/// Square symmetric matrix. Construction symmetrizes the input as (M + M^T)/2,
/// so the stored entries are exactly symmetric.
class SymMatrix {
public:
    explicit SymMatrix(const Matrix& m);

    static SymMatrix identity(Eigen::Index order);
    static SymMatrix diagonal(const Vector& diag);

    Eigen::Index order() const noexcept { return m_.rows(); }
    const Matrix& matrix() const noexcept { return m_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

    SymMatrix operator+(const SymMatrix& other) const;

private:
    struct Trusted {};
    SymMatrix(Matrix m, Trusted) : m_(std::move(m)) {}
    Matrix m_;
};

enum class EigenPath { Direct, Dual };

const char* to_string(EigenPath path);

/// Eigenvalues in descending order with matching orthonormal eigenvectors as
/// columns. Each vector's largest-magnitude component is positive (lowest index
/// wins ties).
struct EigenResult {
    Vector values;
    Matrix vectors;
    EigenPath path = EigenPath::Direct;
};

enum class SolverMethod {
    Auto,           ///< Jacobi up to kJacobiMaxOrder, tridiagonal QL above.
    Jacobi,         ///< Cyclic Jacobi rotations.
    TridiagonalQL,  ///< Householder reduction followed by implicit QL.
};

inline constexpr Eigen::Index kJacobiMaxOrder = 64;
inline constexpr int kJacobiMaxSweeps = 64;
inline constexpr double kJacobiTolerance = 1e-12;

/// Relative threshold below which a sample eigenvalue counts as zero.
inline constexpr double kZeroEigenvalueRel = 1e-12;

EigenResult sym_eigen(const SymMatrix& m, SolverMethod method = SolverMethod::Auto);

/// n^{-1} X X^T, no centering.
SymMatrix sample_cov(const DataMatrix& x);

/// n^{-1} X^T X.
SymMatrix dual_cov(const DataMatrix& x);

/// Nonzero eigenpairs of n^{-1} X X^T through the n x n dual matrix. Returns at
/// most min(n, d) values; values <= kZeroEigenvalueRel * lambda_1 are dropped
/// together with their (unrecoverable) eigenvectors.
EigenResult dual_eigen(const DataMatrix& x, SolverMethod method = SolverMethod::Auto);

/// Direct path truncated to the same nonzero set as dual_eigen.
EigenResult direct_eigen(const DataMatrix& x, SolverMethod method = SolverMethod::Auto);

/// Count of leading values above kZeroEigenvalueRel * values[0].
Eigen::Index nonzero_count(const Vector& descending_values);

struct WielandtBounds {
    double lower = 0.0;
    double upper = 0.0;
    double value = 0.0;  ///< lambda_j(A + B)
    bool holds = false;
};

/// Sandwich bounds on the j-th (1-based) largest eigenvalue of A + B:
///   max_k lambda_{j+k}(A) + lambda_{p-k}(B)  <=  lambda_j(A+B)
///   <=  min_k lambda_{j-k}(A) + lambda_{1+k}(B).
/// `holds` allows 1e-10 slack, scaled by max(1, |A|_F + |B|_F).
WielandtBounds wielandt_check(const SymMatrix& a, const SymMatrix& b, Eigen::Index j);

namespace detail {
// Both routines take a full symmetric matrix and return unsorted eigenpairs.
void jacobi_eigen(Matrix a, Vector& values, Matrix& vectors);
void tridiagonal_ql_eigen(const Matrix& a, Vector& values, Matrix& vectors);
}  // namespace detail

}  // namespace spikepca
