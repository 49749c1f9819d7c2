#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mcread/operators.hpp"

using namespace mcread;

namespace {

Matrix random_matrix(int rows, int cols, std::mt19937_64& eng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = Complex(u(eng), u(eng));
    return m;
}

Matrix random_density(int dim, std::mt19937_64& eng) {
    Matrix v = random_matrix(dim, dim, eng);
    Matrix rho = v * v.adjoint();
    return rho / rho.trace();
}

// Independent oracle: coherent amplitudes from the power series, not via
// the library constructor.
Vector series_coherent(int dim, Complex alpha) {
    Vector v(dim);
    double log_fact = 0;
    for (int n = 0; n < dim; ++n) {
        if (n > 0) log_fact += std::log(double(n));
        v(n) = std::pow(alpha, n) * std::exp(-0.5 * log_fact);
    }
    v *= std::exp(-0.5 * std::norm(alpha));
    return v;
}

}  // namespace

TEST_CASE("kron identity blocks") {
    Matrix i2 = Matrix::Identity(2, 2), i3 = Matrix::Identity(3, 3);
    CHECK((kron(i2, i3) - Matrix::Identity(6, 6)).norm() == 0.0);

    Matrix d(2, 2);
    d << 0, 0, 0, 1;
    Matrix expect = Matrix::Zero(4, 4);
    expect(2, 2) = 1;
    expect(3, 3) = 1;
    CHECK((kron(d, i2) - expect).norm() == 0.0);
}

TEST_CASE("kron of a two-level lowering operator, expanded by hand") {
    Matrix a2 = annihilation(2);
    Matrix k = kron(a2, Matrix::Identity(2, 2));
    Matrix expect = Matrix::Zero(4, 4);
    expect(0, 2) = 1;
    expect(1, 3) = 1;
    CHECK((k - expect).norm() == 0.0);
}

TEST_CASE("kron is associative on integer matrices") {
    std::mt19937_64 eng(11);
    std::uniform_int_distribution<int> ints(-3, 3);
    for (int trial = 0; trial < 5; ++trial) {
        Matrix a(2, 3), b(2, 2), c(3, 2);
        for (auto* m : {&a, &b, &c})
            for (int i = 0; i < m->rows(); ++i)
                for (int j = 0; j < m->cols(); ++j) (*m)(i, j) = double(ints(eng));
        CHECK((kron(kron(a, b), c) - kron(a, kron(b, c))).norm() == 0.0);
    }
}

TEST_CASE("annihilation ladder") {
    Matrix a = annihilation(2);
    CHECK(a(0, 1) == Complex(1));
    CHECK(a(0, 0) == Complex(0));
    CHECK(a(1, 0) == Complex(0));
    CHECK(a(1, 1) == Complex(0));
    CHECK(annihilation(3)(1, 2) == Complex(std::sqrt(2.0)));
    CHECK_THROWS_AS((void)annihilation(1), Error);
}

TEST_CASE("coherent state recovers its amplitude through the ladder") {
    Complex alpha(0.3, -0.4);  // |alpha| = 0.5
    Vector v = series_coherent(30, alpha);
    Matrix rho = v * v.adjoint();
    Complex mean_a = expectation(annihilation(30), rho);
    CHECK(std::abs(mean_a - alpha) < 1e-10);

    Matrix a = annihilation(30);
    Complex n = expectation(Matrix(a.adjoint() * a), rho);
    CHECK(std::abs(n.real() - std::norm(alpha)) < 1e-10);
    CHECK(std::abs(n.imag()) < 1e-12);
}

TEST_CASE("photon number of a small coherent state") {
    Vector v = series_coherent(30, Complex(0.3, 0));
    Matrix rho = v * v.adjoint();
    Matrix a = annihilation(30);
    Complex n = expectation(Matrix(a.adjoint() * a), rho);
    CHECK(n.real() == doctest::Approx(0.09).epsilon(1e-9));
}

TEST_CASE("library coherent_state matches the series oracle") {
    Complex alpha(0.7, 0.2);
    CHECK((coherent_state(25, alpha) - series_coherent(25, alpha)).norm() < 1e-12);
}

TEST_CASE("expectation basics and dimension checks") {
    std::mt19937_64 eng(5);
    Matrix rho = random_density(6, eng);
    CHECK(std::abs(expectation(Matrix::Identity(6, 6), rho) - Complex(1)) < 1e-12);

    Matrix vac = Matrix::Zero(4, 4);
    vac(0, 0) = 1;
    CHECK(std::abs(expectation(annihilation(4), vac)) == 0.0);

    CHECK_THROWS_AS((void)expectation(Matrix::Identity(3, 3), rho), Error);
}

TEST_CASE("expectation of a Hermitian operator is real on densities") {
    std::mt19937_64 eng(17);
    for (int trial = 0; trial < 10; ++trial) {
        Matrix rho = random_density(5, eng);
        Matrix h = random_matrix(5, 5, eng);
        h = (h + h.adjoint()).eval();
        CHECK(std::abs(expectation(h, rho).imag()) < 1e-9);
    }
}

TEST_CASE("product adjoint identity") {
    std::mt19937_64 eng(23);
    for (int trial = 0; trial < 10; ++trial) {
        Matrix a = random_matrix(4, 4, eng), b = random_matrix(4, 4, eng);
        CHECK((Matrix((a * b).adjoint()) - Matrix(b.adjoint() * a.adjoint())).norm() < 1e-14);
    }
}

TEST_CASE("double adjoint is the identity map") {
    std::mt19937_64 eng(31);
    Matrix m = random_matrix(5, 3, eng);
    CHECK((Matrix(m.adjoint().adjoint()) - m).norm() == 0.0);
}

TEST_CASE("displacement operator is unitary and displaces vacuum") {
    Complex alpha(0.6, -0.3);
    int dim = 30;
    Matrix d = displacement_operator(dim, alpha);
    CHECK((Matrix(d.adjoint() * d) - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() <
          1e-12);
    Vector vac = Vector::Unit(dim, 0);
    Vector displaced = d * vac;
    CHECK((displaced - series_coherent(dim, alpha)).norm() < 1e-9);
}

TEST_CASE("hermiticity residual and min eigenvalue diagnostics") {
    std::mt19937_64 eng(41);
    Matrix rho = random_density(5, eng);
    CHECK(hermiticity_residual(rho) < 1e-14);
    CHECK(min_eigenvalue(rho) >= -1e-12);
    Matrix skew = rho;
    skew(0, 1) += Complex(0, 1e-3);
    CHECK(hermiticity_residual(skew) > 1e-4);
}
