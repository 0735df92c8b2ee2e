#pragma once

#include <vector>

#include "ergokit/quantum_states.hpp"

namespace ergokit::gge {

using kernel::Matrix;
using states::Hamiltonian;
using states::QuantumState;

struct GGEFit {
  states::GGEParams params;  // beta, mu, log_partition
  double residual = 0.0;     // HS norm of -log(rho) outside span{1, h, q_i}
  bool beta_nonneg = false;  // beta >= -1e-9
  bool is_gge = false;       // residual within tolerance AND beta_nonneg
};

// Projects -log(rho) onto span{1, h, q_1, ...} (sequential Gram-Schmidt on the
// HS inner product; elements whose orthogonal remainder falls below 1e-10 of
// their norm are dropped and get coefficient zero). rho must be positive
// definite; charges must commute with h to 1e-9. The tolerance is relative to
// ||log rho||_HS.
GGEFit gge_fit(const QuantumState& rho, const Hamiltonian& h, const std::vector<Matrix>& charges,
               double tolerance = 1e-7);

// Trace distance ||rho - rho_fit||_1 / 2 to the state rebuilt from fit.params.
double gge_distance(const QuantumState& rho, const GGEFit& fit, const Hamiltonian& h,
                    const std::vector<Matrix>& charges);

}  // namespace ergokit::gge
