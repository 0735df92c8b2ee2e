#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "ergokit/errors.hpp"

namespace ergokit::kernel {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Cap on the linear dimension of any dense object the library will allocate.
// Defaults to 65536; the PASSIVITY_MAX_DIM environment variable (read once at
// first use) or set_max_dim overrides it.
std::size_t max_dim();
void set_max_dim(std::size_t cap);
void require_dim(std::size_t dim, const char* what = "object");

double hs_norm(const Matrix& m);
Complex hs_inner(const Matrix& a, const Matrix& b);  // tr(a† b)

void require_square(const Matrix& m, const char* what = "matrix");
void require_finite(const Matrix& m, const char* what = "matrix");
// Throws unless ||m - m†||_HS <= 1e-10 * max(||m||_HS, 1); returns (m + m†)/2.
Matrix require_hermitian(const Matrix& m, const char* what = "matrix");
void require_unitary(const Matrix& u, const char* what = "matrix");  // ||u†u - 1||_HS <= 1e-10

Matrix identity(int d);

struct EigenDecomposition {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // columns, unitary
};

// Hermiticity is enforced (with symmetrization) before solving.
EigenDecomposition hermitian_eig(const Matrix& m);

Matrix tensor_product(const Matrix& a, const Matrix& b);
Matrix tensor_power(const Matrix& a, int n);  // n >= 0; n == 0 gives the 1x1 identity
Vector tensor_product_vec(const Vector& a, const Vector& b);

// sum_k 1^{⊗(k-1)} ⊗ omega ⊗ 1^{⊗(n-k)} on n copies.
Matrix extensive_sum(const Matrix& omega, int n);

// Trace out the subsystems not listed in `keep`. `dims` are the factor
// dimensions (product must equal the matrix dimension); `keep` holds indices
// into `dims`, and the output keeps the original factor order.
Matrix partial_trace(const Matrix& m, const std::vector<int>& dims, const std::vector<int>& keep);

// T (a ⊗ b) = b ⊗ a on two d-dimensional factors.
Matrix swap_operator(int d);

Matrix herm_log(const Matrix& m);  // requires all eigenvalues > 1e-12
Matrix herm_exp(const Matrix& m);

// HS-orthogonal projection of target onto span(basis); returns the projection
// and the HS norm of the residual. Gram-matrix eigenvalues below 1e-10 of the
// largest are treated as zero (dependent directions are dropped). An empty
// basis yields (0, ||target||_HS).
std::pair<Matrix, double> project_onto_span(const Matrix& target, const std::vector<Matrix>& basis);

// Apply op^{⊗copies} to a vector on dim(op)^copies without materializing the power.
Vector apply_tensor_power(const Matrix& op, const Vector& v, int copies);

}  // namespace ergokit::kernel
