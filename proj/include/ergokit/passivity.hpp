#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ergokit/quantum_states.hpp"
#include "ergokit/symmetry_reps.hpp"

namespace ergokit::passivity {

using kernel::Matrix;
using states::Hamiltonian;
using states::QuantumState;

struct PassivityReport {
  double ergotropy = 0.0;
  Matrix optimal_unitary;
  bool is_passive = false;  // ergotropy <= 1e-9
  std::vector<std::pair<std::string, double>> per_block;  // block contributions (restricted variants)
};

// Unrestricted ergotropy tr(rho h) - sum_j p_j^down E_j^up. The optimal
// unitary maps the descending rho eigenbasis onto the ascending h eigenbasis;
// degenerate spectra are paired by index after a stable sort, and when
// [rho, h] = 0 a simultaneous eigenbasis is used so the optimizer permutes
// energy eigenspaces.
PassivityReport ergotropy(const QuantumState& rho, const Hamiltonian& h);

// Ergotropy over symmetry-respecting unitaries: sum over blocks of the
// ergotropy of the unnormalized reduced block against the block Hamiltonian.
// The optimal unitary is assembled as sum_b iota (1_r ⊗ u_b) iota†.
PassivityReport sp_ergotropy(const QuantumState& rho, const Hamiltonian& h,
                             const symmetry::SymmetryModel& model);

// Ergotropy over time-reversal-respecting unitaries: ergotropy of
// (rho + conj rho)/2, with a real orthogonal optimizer in the conjugation
// basis. h must be real in that basis.
PassivityReport tr_ergotropy(const QuantumState& rho, const Hamiltonian& h,
                             const symmetry::SymmetryModel& model);

// Ergotropy of an unnormalized positive operator (linear under scaling).
double ergotropy_value(const Matrix& rho_pos, const Matrix& h);

}  // namespace ergokit::passivity
