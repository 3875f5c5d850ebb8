#include "ccg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ccg::num {

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double norm1(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += std::fabs(x);
    return s;
}

double norm_inf(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::fabs(x));
    return s;
}

double norm_p(std::span<const double> v, double p) {
    if (p < 1.0) throw std::invalid_argument("norm_p: p must be >= 1");
    if (std::isinf(p)) return norm_inf(v);
    if (p == 1.0) return norm1(v);
    if (p == 2.0) return norm2(v);
    double s = 0.0;
    for (double x : v) s += std::pow(std::fabs(x), p);
    return std::pow(s, 1.0 / p);
}

Vec axpy(double a, const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i] + y[i];
    return r;
}

Vec scale(double a, const Vec& x) {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i];
    return r;
}

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

bool all_finite(const Mat& m) {
    for (double x : m.a)
        if (!std::isfinite(x)) return false;
    return true;
}

bool is_symmetric(const Mat& m, double tol) {
    if (m.rows != m.cols) return false;
    double scale = 0.0;
    for (double x : m.a) scale = std::max(scale, std::fabs(x));
    const double bound = tol * std::max(1.0, scale);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = i + 1; j < m.cols; ++j)
            if (std::fabs(m.at(i, j) - m.at(j, i)) > bound) return false;
    return true;
}

Mat matmul(const Mat& A, const Mat& B) {
    if (A.cols != B.rows) throw std::invalid_argument("matmul: shape mismatch");
    Mat C(A.rows, B.cols);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t k = 0; k < A.cols; ++k) {
            const double aik = A.at(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < B.cols; ++j)
                C.at(i, j) += aik * B.at(k, j);
        }
    return C;
}

Vec matvec(const Mat& A, std::span<const double> x) {
    if (A.cols != x.size()) throw std::invalid_argument("matvec: shape mismatch");
    Vec y(A.rows, 0.0);
    for (std::size_t i = 0; i < A.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < A.cols; ++j) s += A.at(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Mat transpose(const Mat& A) {
    Mat T(A.cols, A.rows);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j) T.at(j, i) = A.at(i, j);
    return T;
}

SymEig jacobi_eigensym(Mat m, double tol) {
    if (m.rows != m.cols) throw std::invalid_argument("jacobi: not square");
    if (!all_finite(m)) throw std::invalid_argument("jacobi: non-finite entries");
    if (!is_symmetric(m, 1e-12))
        throw std::invalid_argument("jacobi: matrix not symmetric");
    const std::size_t n = m.rows;
    Mat V = Mat::identity(n);

    double fro = 0.0;
    for (double x : m.a) fro += x * x;
    fro = std::sqrt(fro);
    const double stop = tol * std::max(fro, 1e-300);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * m.at(i, j) * m.at(i, j);
        if (std::sqrt(off) <= stop) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = m.at(p, q);
                if (std::fabs(apq) <= stop / (n * n)) continue;
                const double app = m.at(p, p);
                const double aqq = m.at(q, q);
                const double theta = 0.5 * (aqq - app) / apq;
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = m.at(k, p);
                    const double akq = m.at(k, q);
                    m.at(k, p) = c * akp - s * akq;
                    m.at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = m.at(p, k);
                    const double aqk = m.at(q, k);
                    m.at(p, k) = c * apk - s * aqk;
                    m.at(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = V.at(k, p);
                    const double vkq = V.at(k, q);
                    V.at(k, p) = c * vkp - s * vkq;
                    V.at(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    SymEig e;
    e.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) e.values[i] = m.at(i, i);
    e.vectors = std::move(V);
    return e;
}

double operator_norm_sym(const Mat& m, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("operator_norm_sym: tol must be > 0");
    const SymEig e = jacobi_eigensym(m, std::min(tol, 1e-13));
    double r = 0.0;
    for (double v : e.values) r = std::max(r, std::fabs(v));
    return r;
}

double operator_norm_sym_power(const Mat& m, int iters) {
    if (m.rows != m.cols) throw std::invalid_argument("power: not square");
    const std::size_t n = m.rows;
    Vec v(n, 0.0);
    // Fixed deterministic start with nonzero overlap with every eigenvector.
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * static_cast<double>(i % 7);
    double lam = 0.0;
    for (int it = 0; it < iters; ++it) {
        Vec w = matvec(m, v);
        const double nw = norm2(w);
        if (nw == 0.0) return 0.0;
        for (auto& x : w) x /= nw;
        lam = std::fabs(dot(w, matvec(m, w)));
        v = std::move(w);
    }
    return lam;
}

namespace {
Mat sym_pow(const Mat& m, double expo, double tol) {
    const SymEig e = jacobi_eigensym(m, tol);
    const std::size_t n = m.rows;
    Mat d(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = e.values[i];
        if (v <= 0.0)
            throw std::domain_error("sym_pow: matrix not positive definite");
        d.at(i, i) = std::pow(v, expo);
    }
    return matmul(matmul(e.vectors, d), transpose(e.vectors));
}
}  // namespace

Mat sym_sqrt(const Mat& m, double tol) { return sym_pow(m, 0.5, tol); }
Mat sym_inv_sqrt(const Mat& m, double tol) { return sym_pow(m, -0.5, tol); }

double lu_det(Mat m) {
    if (m.rows != m.cols) throw std::invalid_argument("lu_det: not square");
    const std::size_t n = m.rows;
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(m.at(i, k)) > std::fabs(m.at(piv, k))) piv = i;
        if (m.at(piv, k) == 0.0) return 0.0;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(k, j));
            det = -det;
        }
        det *= m.at(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = m.at(i, k) / m.at(k, k);
            for (std::size_t j = k; j < n; ++j) m.at(i, j) -= f * m.at(k, j);
        }
    }
    return det;
}

Mat orthonormal_completion(const Vec& unit) {
    const std::size_t n = unit.size();
    if (n == 0) throw std::invalid_argument("orthonormal_completion: empty");
    // Householder H mapping e_sign to the given vector; its columns are an
    // orthonormal basis with column 0 == unit (up to sign fixup below).
    Vec v = unit;
    const double s = (v[0] >= 0.0) ? 1.0 : -1.0;
    v[0] += s;  // v = unit + s*e_0
    double vn2 = dot(v, v);
    Mat H = Mat::identity(n);
    if (vn2 > 0.0) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                H.at(i, j) -= 2.0 * v[i] * v[j] / vn2;
    }
    // H e_0 = -s * unit; flip column 0 so it equals unit exactly.
    for (std::size_t i = 0; i < n; ++i) H.at(i, 0) *= -s;
    return H;
}

Mat orthonormalize_columns(Mat m) {
    for (std::size_t j = 0; j < m.cols; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < m.rows; ++i) s += m.at(i, k) * m.at(i, j);
            for (std::size_t i = 0; i < m.rows; ++i) m.at(i, j) -= s * m.at(i, k);
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < m.rows; ++i) nrm += m.at(i, j) * m.at(i, j);
        nrm = std::sqrt(nrm);
        if (nrm < 1e-12)
            throw std::runtime_error("orthonormalize_columns: rank deficient");
        for (std::size_t i = 0; i < m.rows; ++i) m.at(i, j) /= nrm;
    }
    return m;
}

}  // namespace ccg::num
