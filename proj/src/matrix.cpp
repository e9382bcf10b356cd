#include "sharpssl/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sharpssl/errors.hpp"

namespace sharpssl {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows * cols) {
        throw DimensionMismatch("entry count does not match rows*cols");
    }
    if (!all_finite()) {
        throw NotFinite("matrix entries must be finite");
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(const std::vector<double>& entries) {
    Matrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return m;
}

bool Matrix::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

namespace {

void require_same_shape(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch("matrix shapes differ");
    }
}

}  // namespace

Matrix operator+(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b);
    Matrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] = a.data()[i] + b.data()[i];
    return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b);
    Matrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] = a.data()[i] - b.data()[i];
    return r;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionMismatch("inner dimensions differ");
    }
    Matrix r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const double* brow = b.row_ptr(k);
            double* rrow = r.row_ptr(i);
            for (std::size_t j = 0; j < b.cols(); ++j) rrow[j] += aik * brow[j];
        }
    }
    return r;
}

Matrix operator*(double s, const Matrix& a) {
    Matrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] = s * a.data()[i];
    return r;
}

Matrix transpose(const Matrix& a) {
    Matrix r(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
    }
    return r;
}

double trace(const Matrix& a) {
    const std::size_t n = std::min(a.rows(), a.cols());
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) t += a(i, i);
    return t;
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double v : a.data()) m = std::max(m, std::abs(v));
    return m;
}

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
    if (a.cols() != x.size()) {
        throw DimensionMismatch("matvec dimensions differ");
    }
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* row = a.row_ptr(i);
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("dot dimensions differ");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) {
    return std::sqrt(dot(a, a));
}

SymEigen sym_eigen(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw DimensionMismatch("sym_eigen needs a square matrix");
    }
    if (!a.all_finite()) {
        throw NotFinite("sym_eigen input has NaN/Inf entries");
    }
    const std::size_t n = a.rows();
    const double scale = max_abs(a);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(a(i, j) - a(j, i)) > 1e-9 * (1.0 + scale)) {
                throw NotSymmetric("asymmetry exceeds tolerance in sym_eigen");
            }
        }
    }

    // Work on the symmetrized copy so the rotations see an exactly symmetric
    // matrix regardless of roundoff in the input.
    Matrix w(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) w(i, j) = 0.5 * (a(i, j) + a(j, i));
    }
    Matrix v = Matrix::identity(n);

    auto off_norm2 = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) s += w(i, j) * w(i, j);
        }
        return s;
    };

    const double total = frobenius_norm(w);
    const double stop = (total == 0.0) ? 0.0 : 1e-30 * total * total;
    for (int sweep = 0; sweep < 64 && off_norm2() > stop; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = w(p, q);
                if (apq == 0.0) continue;
                const double theta = (w(q, q) - w(p, p)) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e154) {
                    t = 1.0 / (2.0 * theta);
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = w(p, p), aqq = w(q, q);
                w(p, p) = app - t * apq;
                w(q, q) = aqq + t * apq;
                w(p, q) = 0.0;
                w(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = w(k, p), akq = w(k, q);
                    w(k, p) = akp - s * (akq + tau * akp);
                    w(p, k) = w(k, p);
                    w(k, q) = akq + s * (akp - tau * akq);
                    w(q, k) = w(k, q);
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp - s * (vkq + tau * vkp);
                    v(k, q) = vkq + s * (vkp - tau * vkq);
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return w(i, i) > w(j, j); });

    SymEigen out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t src = order[c];
        out.values[c] = w(src, src);
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t r = 0; r < n; ++r) {
            if (std::abs(v(r, src)) > best) {
                best = std::abs(v(r, src));
                arg = r;
            }
        }
        const double sign = (v(arg, src) < 0.0) ? -1.0 : 1.0;
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = sign * v(r, src);
    }
    return out;
}

Matrix cholesky(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw DimensionMismatch("cholesky needs a square matrix");
    }
    const std::size_t n = a.rows();
    const double threshold = 1e-12 * (n > 0 ? trace(a) / static_cast<double>(n) : 0.0);
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a(j, j);
        for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        if (!(diag > threshold)) {
            throw SingularWithinCovariance("Cholesky pivot " + std::to_string(j) +
                                           " below threshold: matrix is singular at working precision");
        }
        const double ljj = std::sqrt(diag);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return l;
}

void forward_substitute(const Matrix& l, std::vector<double>& x) {
    const std::size_t n = l.rows();
    for (std::size_t i = 0; i < n; ++i) {
        double s = x[i];
        const double* row = l.row_ptr(i);
        for (std::size_t k = 0; k < i; ++k) s -= row[k] * x[k];
        x[i] = s / row[i];
    }
}

void back_substitute_transposed(const Matrix& l, std::vector<double>& x) {
    const std::size_t n = l.rows();
    for (std::size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
        x[ii] = s / l(ii, ii);
    }
}

Matrix solve_spd(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) {
        throw DimensionMismatch("solve_spd: right-hand side row count differs");
    }
    const Matrix l = cholesky(a);
    Matrix x(b.rows(), b.cols());
    std::vector<double> col(b.rows());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b(i, j);
        forward_substitute(l, col);
        back_substitute_transposed(l, col);
        for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = col[i];
    }
    return x;
}

std::vector<double> solve_spd(const Matrix& a, const std::vector<double>& b) {
    if (a.rows() != b.size()) {
        throw DimensionMismatch("solve_spd: right-hand side size differs");
    }
    const Matrix l = cholesky(a);
    std::vector<double> x = b;
    forward_substitute(l, x);
    back_substitute_transposed(l, x);
    return x;
}

double op_norm(const Matrix& a) {
    if (!a.all_finite()) {
        throw NotFinite("op_norm input has NaN/Inf entries");
    }
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    // Gram matrix route: accurate to ~1e-15 relative at these sizes, well
    // inside the 1e-9 contract.
    const Matrix g = transpose(a) * a;
    const SymEigen e = sym_eigen(g);
    const double top = e.values.empty() ? 0.0 : std::max(0.0, e.values.front());
    return std::sqrt(top);
}

Matrix orthonormal_q(const Matrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    if (m < n) {
        throw DimensionMismatch("orthonormal_q needs rows >= cols");
    }
    Matrix r = a;
    std::vector<std::vector<double>> reflectors;
    reflectors.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> v(m, 0.0);
        double norm = 0.0;
        for (std::size_t i = j; i < m; ++i) {
            v[i] = r(i, j);
            norm += v[i] * v[i];
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            reflectors.push_back(std::move(v));
            continue;
        }
        const double alpha = (v[j] >= 0.0) ? -norm : norm;
        v[j] -= alpha;
        double vnorm2 = 0.0;
        for (std::size_t i = j; i < m; ++i) vnorm2 += v[i] * v[i];
        if (vnorm2 > 0.0) {
            for (std::size_t c = j; c < n; ++c) {
                double proj = 0.0;
                for (std::size_t i = j; i < m; ++i) proj += v[i] * r(i, c);
                proj *= 2.0 / vnorm2;
                for (std::size_t i = j; i < m; ++i) r(i, c) -= proj * v[i];
            }
        }
        reflectors.push_back(std::move(v));
    }
    // Accumulate Q = H_0 H_1 ... H_{n-1} applied to the first n columns of I.
    Matrix q(m, n);
    for (std::size_t j = 0; j < n; ++j) q(j, j) = 1.0;
    for (std::size_t j = n; j-- > 0;) {
        const std::vector<double>& v = reflectors[j];
        double vnorm2 = 0.0;
        for (std::size_t i = j; i < m; ++i) vnorm2 += v[i] * v[i];
        if (vnorm2 == 0.0) continue;
        for (std::size_t c = 0; c < n; ++c) {
            double proj = 0.0;
            for (std::size_t i = j; i < m; ++i) proj += v[i] * q(i, c);
            proj *= 2.0 / vnorm2;
            for (std::size_t i = j; i < m; ++i) q(i, c) -= proj * v[i];
        }
    }
    // Fix signs so diag(R) > 0; makes the factorization (and Haar sampling
    // built on it) unique.
    for (std::size_t j = 0; j < n; ++j) {
        if (r(j, j) < 0.0) {
            for (std::size_t i = 0; i < m; ++i) q(i, j) = -q(i, j);
        }
    }
    return q;
}

}  // namespace sharpssl
