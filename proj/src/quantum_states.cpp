#include "ergokit/quantum_states.hpp"

#include <cmath>
#include <string>

namespace ergokit::states {

using kernel::Complex;
using kernel::Vector;

QuantumState::QuantumState(const Matrix& rho) {
  kernel::require_dim(static_cast<std::size_t>(rho.rows()), "state");
  Matrix sym = kernel::require_hermitian(rho, "state");
  double tr = sym.trace().real();
  if (std::abs(tr - 1.0) > 1e-8) {
    throw ValidationError("state trace " + std::to_string(tr) + " is not 1");
  }
  rho_ = sym / tr;
  kernel::EigenDecomposition eig = kernel::hermitian_eig(rho_);
  min_eig_ = eig.eigenvalues.minCoeff();
  if (min_eig_ < -1e-12) throw DomainError("state has a negative eigenvalue");
}

Hamiltonian::Hamiltonian(const Matrix& h) {
  kernel::require_dim(static_cast<std::size_t>(h.rows()), "Hamiltonian");
  h_ = kernel::require_hermitian(h, "Hamiltonian");
}

namespace {

double real_trace(const Matrix& product, const char* what) {
  Complex tr = product.trace();
  if (std::abs(tr.imag()) > 1e-10 * std::max(1.0, std::abs(tr.real()))) {
    throw ValidationError(std::string(what) + " has a nonreal trace");
  }
  return tr.real();
}

}  // namespace

double extracted_work(const QuantumState& rho, const Hamiltonian& h, const Matrix& u) {
  if (rho.dim() != h.dim() || u.rows() != rho.dim()) {
    throw ShapeError("state, Hamiltonian and unitary dimensions differ");
  }
  kernel::require_unitary(u, "work-extraction unitary");
  double before = real_trace(rho.matrix() * h.matrix(), "initial energy");
  double after = real_trace(u * rho.matrix() * u.adjoint() * h.matrix(), "final energy");
  return before - after;
}

QuantumState gibbs_state(const Hamiltonian& h, double beta) {
  if (!std::isfinite(beta)) throw ValidationError("inverse temperature must be finite");
  kernel::EigenDecomposition eig = kernel::hermitian_eig(h.matrix());
  // Shift by the smallest exponent so no weight overflows.
  kernel::RealVector exponents = beta * eig.eigenvalues;
  kernel::RealVector weights = (-(exponents.array() - exponents.minCoeff())).exp();
  weights /= weights.sum();
  Matrix rho = eig.eigenvectors * weights.asDiagonal() * eig.eigenvectors.adjoint();
  return QuantumState(rho);
}

QuantumState gge_state(const Hamiltonian& h, const std::vector<Matrix>& charges,
                       GGEParams& params) {
  if (params.mu.size() != charges.size()) {
    throw ShapeError("one chemical potential per charge is required");
  }
  if (!std::isfinite(params.beta)) throw ValidationError("inverse temperature must be finite");
  Matrix xi = params.beta * h.matrix();
  for (std::size_t i = 0; i < charges.size(); ++i) {
    Matrix q = kernel::require_hermitian(charges[i], "charge");
    if (q.rows() != h.dim()) throw ShapeError("charge dimension does not match the Hamiltonian");
    if (kernel::hs_norm(h.matrix() * q - q * h.matrix()) > 1e-10) {
      throw CommutationError("charge does not commute with the Hamiltonian");
    }
    if (!std::isfinite(params.mu[i])) throw ValidationError("chemical potential must be finite");
    xi += params.mu[i] * q;
  }
  kernel::EigenDecomposition eig = kernel::hermitian_eig(xi);
  double shift = eig.eigenvalues.minCoeff();
  kernel::RealVector weights = (-(eig.eigenvalues.array() - shift)).exp();
  double z_shifted = weights.sum();
  params.log_partition = std::log(z_shifted) - shift;
  weights /= z_shifted;
  Matrix rho = eig.eigenvectors * weights.asDiagonal() * eig.eigenvectors.adjoint();
  return QuantumState(rho);
}

}  // namespace ergokit::states
