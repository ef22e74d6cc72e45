#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace p2wave {

using cplx = std::complex<double>;

// Dense row-major matrix.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    T* row(std::size_t i) { return data_.data() + i * cols_; }
    const T* row(std::size_t i) const { return data_.data() + i * cols_; }
    const std::vector<T>& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RMatrix = Matrix<double>;
using CMatrix = Matrix<cplx>;

template <class T>
std::vector<T> matvec(const Matrix<T>& a, const std::vector<T>& x);

template <class T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b);

// Conjugate transpose (plain transpose for real matrices).
template <class T>
Matrix<T> adjoint(const Matrix<T>& a);

// x* A y
template <class T>
T quadratic_form(const Matrix<T>& a, const std::vector<T>& x, const std::vector<T>& y);

// Lower Cholesky factor of a Hermitian positive definite matrix, A = L L*.
// Throws NumericalError when a pivot is not positive.
template <class T>
class Cholesky {
public:
    explicit Cholesky(const Matrix<T>& a);
    std::vector<T> solve(const std::vector<T>& b) const;
    // Forward substitution L y = b.
    std::vector<T> solve_lower(const std::vector<T>& b) const;
    // Back substitution L* x = y.
    std::vector<T> solve_upper(const std::vector<T>& y) const;
    const Matrix<T>& factor() const { return l_; }
    double min_pivot() const { return min_pivot_; }
    double max_pivot() const { return max_pivot_; }

private:
    Matrix<T> l_;
    double min_pivot_ = 0.0;
    double max_pivot_ = 0.0;
};

template <class T>
struct EigenDecomposition {
    std::vector<double> values;  // ascending
    Matrix<T> vectors;           // column i pairs with values[i]
    int sweeps = 0;
};

// Cyclic Jacobi for Hermitian (or real symmetric) input. Stops when the
// off-diagonal Frobenius norm drops below tol times the diagonal norm.
template <class T>
EigenDecomposition<T> jacobi_eigen(const Matrix<T>& a, double tol = 1e-12, int max_sweeps = 100);

// Pentadiagonal symmetric matrix stored by diagonals: band_[d][i] = A(i, i+d).
class BandedSymMatrix {
public:
    static constexpr int bandwidth = 2;

    BandedSymMatrix() = default;
    explicit BandedSymMatrix(std::size_t n);

    std::size_t order() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const;
    // Sets A(i,j) and A(j,i); |i-j| must not exceed the bandwidth.
    void set(std::size_t i, std::size_t j, double value);
    void add(std::size_t i, std::size_t j, double value);

    std::vector<double> apply(const std::vector<double>& x) const;
    RMatrix dense() const;
    BandedSymMatrix scaled_sum(double a, const BandedSymMatrix& other, double b) const;

private:
    std::size_t n_ = 0;
    std::vector<double> band_[bandwidth + 1];
};

// Banded LDL^T without pivoting. Refuses factorization when a pivot is
// not above 1e-14 times the largest pivot magnitude.
class BandedLDLT {
public:
    explicit BandedLDLT(const BandedSymMatrix& a);
    std::vector<double> solve(const std::vector<double>& b) const;
    const std::vector<double>& pivots() const { return d_; }

private:
    std::size_t n_;
    std::vector<double> d_;
    std::vector<double> l1_, l2_;  // subdiagonals of the unit lower factor
};

double norm2(const std::vector<double>& x);
double norm2(const std::vector<cplx>& x);
double dot(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace p2wave
