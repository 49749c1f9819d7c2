#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mcread {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Domain error with a stable category tag so the CLI can map it to an
/// exit code. what() carries the human-readable detail.
class Error : public std::runtime_error {
public:
    enum class Code {
        invalid_dimension,
        dimension_mismatch,
        singularity,
        precondition,
        integrator_instability,
        degenerate,
        fit_failure,
        config,
        io,
    };

    Error(Code code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    Code code() const { return code_; }

private:
    Code code_;
};

/// Kronecker product with row-major index semantics:
/// out(i*b.rows()+k, j*b.cols()+l) = a(i,j) * b(k,l).
template <typename DerivedA, typename DerivedB>
Matrix kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b.derived();
    return out;
}

/// Bosonic annihilation operator on a truncated Fock space:
/// a(n, n+1) = sqrt(n+1), zero elsewhere. Requires dim >= 2.
Matrix annihilation(int dim);

/// diag(0, 1, ..., dim-1); equals adjoint(a)*a on the truncated space
/// except for the absent top rung.
Matrix number_operator(int dim);

/// |i><j| on a dim-dimensional space.
Matrix ket_bra(int dim, int i, int j);

/// Normalized coherent state sum_n alpha^n/sqrt(n!) |n> (truncated).
Vector coherent_state(int dim, Complex alpha);

/// Truncated displacement operator exp(alpha a^dag - conj(alpha) a),
/// evaluated through the eigendecomposition of the Hermitian generator.
Matrix displacement_operator(int dim, Complex alpha);

/// tr(op * rho) without forming the product.
template <typename DerivedA, typename DerivedB>
Complex expectation_unchecked(const Eigen::MatrixBase<DerivedA>& op,
                              const Eigen::MatrixBase<DerivedB>& rho) {
    return op.derived().cwiseProduct(rho.derived().transpose()).sum();
}

/// tr(op * rho) with a dimension check.
Complex expectation(const Matrix& op, const Matrix& rho);

/// max_ij |m(i,j) - conj(m(j,i))|.
double hermiticity_residual(const Matrix& m);

/// Smallest eigenvalue of a (nearly) Hermitian matrix; used as a
/// positivity diagnostic for density matrices.
double min_eigenvalue(const Matrix& m);

inline bool is_hermitian(const Matrix& m, double tol = 1e-12) {
    return hermiticity_residual(m) <= tol;
}

}  // namespace mcread
