#pragma once

#include <cstddef>
#include <vector>

namespace sharpssl {

// Dense row-major matrix of doubles. Everything here is small (d x d blocks
// up to ~50, p x p up to a few thousand), so there is no blocking and no
// external BLAS; plain loops are fast enough and keep the numerics auditable.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(const std::vector<double>& entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row_ptr(std::size_t i) { return data_.data() + i * cols_; }
    const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool all_finite() const;

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

Matrix transpose(const Matrix& a);
double trace(const Matrix& a);
double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x);
double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);

// Full spectral decomposition of a symmetric matrix.
// Eigenvalues sorted descending; eigenvector columns orthonormal and in the
// matching order, each with its largest-magnitude component made positive so
// the decomposition is reproducible bit for bit.
struct SymEigen {
    std::vector<double> values;
    Matrix vectors;  // columns are eigenvectors
};

// Cyclic Jacobi rotations; accurate to near machine precision at these sizes.
// Throws NotSymmetric if the asymmetry exceeds 1e-9 relative to the largest
// entry, NotFinite on NaN/Inf input.
SymEigen sym_eigen(const Matrix& a);

// Lower Cholesky factor of a symmetric positive-definite matrix. A pivot at
// or below 1e-12 * trace(a)/rows throws SingularWithinCovariance: the input
// is rank-deficient at working precision and silently regularizing it would
// mask a modelling error.
Matrix cholesky(const Matrix& a);

// Solves a x = b for SPD a via Cholesky.
Matrix solve_spd(const Matrix& a, const Matrix& b);
std::vector<double> solve_spd(const Matrix& a, const std::vector<double>& b);

// In-place triangular solves with a lower factor l.
void forward_substitute(const Matrix& l, std::vector<double>& x);
void back_substitute_transposed(const Matrix& l, std::vector<double>& x);

// Largest singular value, computed as sqrt of the top eigenvalue of a^T a.
double op_norm(const Matrix& a);

// Thin Q from a Householder QR of a (rows >= cols), with the sign convention
// diag(R) > 0. Feeding it a standard Gaussian matrix yields a Haar-distributed
// orthogonal matrix.
Matrix orthonormal_q(const Matrix& a);

}  // namespace sharpssl
