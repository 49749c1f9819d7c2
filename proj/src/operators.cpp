#include "mcread/operators.hpp"

#include <cmath>

namespace mcread {

Matrix annihilation(int dim) {
    if (dim < 2)
        throw Error(Error::Code::invalid_dimension,
                    "annihilation operator needs dim >= 2, got " + std::to_string(dim));
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 0; n + 1 < dim; ++n) a(n, n + 1) = std::sqrt(double(n + 1));
    return a;
}

Matrix number_operator(int dim) {
    if (dim < 1)
        throw Error(Error::Code::invalid_dimension, "number operator needs dim >= 1");
    Matrix n = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) n(k, k) = double(k);
    return n;
}

Matrix ket_bra(int dim, int i, int j) {
    if (i < 0 || j < 0 || i >= dim || j >= dim)
        throw Error(Error::Code::invalid_dimension, "ket_bra index out of range");
    Matrix m = Matrix::Zero(dim, dim);
    m(i, j) = 1.0;
    return m;
}

Vector coherent_state(int dim, Complex alpha) {
    Vector v(dim);
    Complex term = 1.0;  // alpha^n / sqrt(n!)
    v(0) = term;
    for (int n = 1; n < dim; ++n) {
        term *= alpha / std::sqrt(double(n));
        v(n) = term;
    }
    v.normalize();
    return v;
}

Matrix displacement_operator(int dim, Complex alpha) {
    // K = alpha a^dag - conj(alpha) a is anti-Hermitian, so iK is Hermitian
    // and exp(K) = V exp(-i diag) V^dag.
    Matrix a = annihilation(dim);
    Matrix k = alpha * a.adjoint() - std::conj(alpha) * a;
    Matrix ik = Complex(0, 1) * k;
    Eigen::SelfAdjointEigenSolver<Matrix> es(ik);
    Vector phases(dim);
    for (int n = 0; n < dim; ++n) phases(n) = std::exp(Complex(0, -1) * es.eigenvalues()(n));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Complex expectation(const Matrix& op, const Matrix& rho) {
    if (op.rows() != rho.rows() || op.cols() != rho.cols() || op.rows() != op.cols())
        throw Error(Error::Code::dimension_mismatch,
                    "expectation: operator and density matrix dimensions differ");
    return expectation_unchecked(op, rho);
}

double hermiticity_residual(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace mcread
