#pragma once

#include <vector>

#include "ergokit/matrix_kernel.hpp"

namespace ergokit::states {

using kernel::Matrix;

// Density matrix. Construction enforces Hermiticity (||rho - rho†|| within
// 1e-10 relative, then symmetrized), spectrum >= -1e-12, and unit trace;
// traces off by at most 1e-8 are renormalized, larger deviations rejected.
class QuantumState {
 public:
  explicit QuantumState(const Matrix& rho);

  const Matrix& matrix() const { return rho_; }
  int dim() const { return static_cast<int>(rho_.rows()); }
  double min_eigenvalue() const { return min_eig_; }
  bool positive_definite() const { return min_eig_ > 1e-12; }

 private:
  Matrix rho_;
  double min_eig_ = 0.0;
};

class Hamiltonian {
 public:
  explicit Hamiltonian(const Matrix& h);

  const Matrix& matrix() const { return h_; }
  int dim() const { return static_cast<int>(h_.rows()); }

 private:
  Matrix h_;
};

struct GGEParams {
  double beta = 0.0;
  std::vector<double> mu;
  double log_partition = 0.0;
};

// tr(rho h) - tr(u rho u† h); u must be unitary to 1e-10. The imaginary
// residue of both traces is checked against 1e-10 and discarded.
double extracted_work(const QuantumState& rho, const Hamiltonian& h, const Matrix& u);

// exp(-beta h)/Z computed on the shifted spectrum exp(-beta (E - E_min)).
QuantumState gibbs_state(const Hamiltonian& h, double beta);

// exp(-beta h - sum_i mu_i q_i)/Z. Charges must be Hermitian and commute with
// h to 1e-10 in HS norm. params.log_partition is filled with log Z.
QuantumState gge_state(const Hamiltonian& h, const std::vector<Matrix>& charges, GGEParams& params);

}  // namespace ergokit::states
