#include "ergokit/gge.hpp"

#include <cmath>

namespace ergokit::gge {

using kernel::Complex;

GGEFit gge_fit(const QuantumState& rho, const Hamiltonian& h, const std::vector<Matrix>& charges,
               double tolerance) {
  if (rho.dim() != h.dim()) throw ShapeError("state and Hamiltonian dimensions differ");
  if (!rho.positive_definite()) {
    throw DomainError("state must be positive definite to take its logarithm");
  }
  if (!(tolerance > 0)) throw ValidationError("tolerance must be positive");

  std::vector<Matrix> raw;
  raw.push_back(Matrix::Identity(rho.dim(), rho.dim()));
  raw.push_back(h.matrix());
  for (const Matrix& q : charges) {
    Matrix qh = kernel::require_hermitian(q, "charge");
    if (qh.rows() != rho.dim()) throw ShapeError("charge dimension does not match the state");
    if ((h.matrix() * qh - qh * h.matrix()).norm() >
        1e-9 * std::max(1.0, h.matrix().norm() * qh.norm())) {
      throw CommutationError("charge does not commute with the Hamiltonian");
    }
    raw.push_back(qh);
  }

  Matrix xi = -kernel::herm_log(rho.matrix());

  // Sequential orthonormalization; each kept direction remembers its
  // expansion in the raw family so coefficients can be read back. Raw
  // elements that are linearly dependent on earlier ones are dropped and
  // keep coefficient zero.
  const std::size_t n = raw.size();
  std::vector<Matrix> ortho;
  std::vector<std::vector<Complex>> expansion;  // ortho[k] = sum_i expansion[k][i] raw[i]
  for (std::size_t i = 0; i < n; ++i) {
    Matrix rem = raw[i];
    std::vector<Complex> coeffs(n, Complex(0.0));
    coeffs[i] = 1.0;
    for (std::size_t k = 0; k < ortho.size(); ++k) {
      Complex overlap = kernel::hs_inner(ortho[k], raw[i]);
      rem -= overlap * ortho[k];
      for (std::size_t j = 0; j < n; ++j) coeffs[j] -= overlap * expansion[k][j];
    }
    double norm = rem.norm();
    if (norm < 1e-10 * std::max(raw[i].norm(), 1e-300)) continue;
    for (Complex& c : coeffs) c /= norm;
    ortho.push_back(rem / norm);
    expansion.push_back(std::move(coeffs));
  }

  std::vector<Complex> alpha(n, Complex(0.0));
  Matrix projection = Matrix::Zero(rho.dim(), rho.dim());
  for (std::size_t k = 0; k < ortho.size(); ++k) {
    Complex c = kernel::hs_inner(ortho[k], xi);
    projection += c * ortho[k];
    for (std::size_t j = 0; j < n; ++j) alpha[j] += c * expansion[k][j];
  }

  GGEFit fit;
  fit.residual = (xi - projection).norm();
  fit.params.log_partition = alpha[0].real();
  fit.params.beta = alpha[1].real();
  for (std::size_t i = 0; i < charges.size(); ++i) fit.params.mu.push_back(alpha[2 + i].real());
  fit.beta_nonneg = fit.params.beta >= -1e-9;
  fit.is_gge = fit.beta_nonneg && fit.residual <= tolerance * xi.norm();
  return fit;
}

double gge_distance(const QuantumState& rho, const GGEFit& fit, const Hamiltonian& h,
                    const std::vector<Matrix>& charges) {
  states::GGEParams params = fit.params;
  QuantumState target = states::gge_state(h, charges, params);
  kernel::EigenDecomposition eig = kernel::hermitian_eig(rho.matrix() - target.matrix());
  return eig.eigenvalues.cwiseAbs().sum() / 2.0;
}

}  // namespace ergokit::gge
