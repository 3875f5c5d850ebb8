#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace ccg::num {

using Vec = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double norm1(std::span<const double> v);
double norm_inf(std::span<const double> v);
double norm_p(std::span<const double> v, double p);  // p in [1, inf]

Vec axpy(double a, const Vec& x, const Vec& y);  // a*x + y
Vec scale(double a, const Vec& x);

// Dense row-major matrix. Small n only (<= a few hundred); everything here
// trades speed for being exactly reproducible.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static Mat identity(std::size_t n);
};

bool all_finite(const Mat& m);
bool is_symmetric(const Mat& m, double tol = 1e-12);

Mat matmul(const Mat& A, const Mat& B);
Vec matvec(const Mat& A, std::span<const double> x);
Mat transpose(const Mat& A);

struct SymEig {
    Vec values;   // unordered
    Mat vectors;  // columns are eigenvectors, same order as values
};

// Cyclic Jacobi; stops when the off-diagonal Frobenius mass drops below
// tol times the matrix Frobenius norm.
SymEig jacobi_eigensym(Mat m, double tol = 1e-14);

// max |eigenvalue| of a symmetric matrix.
double operator_norm_sym(const Mat& m, double tol = 1e-12);

// Power-iteration estimate of the same quantity; kept as an independent
// cross-check of the Jacobi route.
double operator_norm_sym_power(const Mat& m, int iters = 2000);

Mat sym_sqrt(const Mat& m, double tol = 1e-14);
Mat sym_inv_sqrt(const Mat& m, double tol = 1e-14);

// Determinant by LU with partial pivoting (general square matrices).
double lu_det(Mat m);

// Orthonormal basis whose first column is the given unit vector; remaining
// columns span its orthogonal complement (Householder completion).
Mat orthonormal_completion(const Vec& unit);

// Modified Gram-Schmidt; throws on rank deficiency.
Mat orthonormalize_columns(Mat m);

}  // namespace ccg::num
