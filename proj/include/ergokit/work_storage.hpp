#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ergokit/quantum_states.hpp"
#include "ergokit/symmetry_reps.hpp"

namespace ergokit::storage {

using kernel::Matrix;
using states::Hamiltonian;
using states::QuantumState;
using symmetry::SymmetryModel;

// Momentum distribution of the weight degree of freedom. A point mass at q
// shifts the system by the conjugation e^{-iqH} . e^{iqH}; a position
// eigenstate is the flat limit (complete dephasing in energy); a general
// weighted distribution mixes point-mass conjugations.
struct MomentumDistribution {
  enum class Kind { point_mass, position_eigenstate, weighted };
  Kind kind = Kind::position_eigenstate;
  double q = 0.0;                                 // point_mass only
  std::vector<std::pair<double, double>> points;  // weighted: (q, probability)

  static MomentumDistribution point(double q);
  static MomentumDistribution position();
  static MomentumDistribution weighted(std::vector<std::pair<double, double>> points);
};

// Effect of coupling to the weight, traced back to the system:
// point_mass -> e^{-iqH} rho e^{iqH}; position_eigenstate -> sum_E P_E rho P_E
// over energy eigenspaces (levels clustered at 1e-9); weighted -> the convex
// combination of point-mass conjugations.
QuantumState apply_D(const QuantumState& rho, const Hamiltonian& h,
                     const MomentumDistribution& dist);

struct WSWorkReport {
  double ws_work = 0.0;     // computed through apply_D
  double dense_work = 0.0;  // computed with the system-side conjugated unitary
  bool equal = false;       // |ws_work - dense_work| <= 1e-9
};

// Work extracted by a weight-conjugated unitary: tr(apply_D(rho) h) -
// tr(u apply_D(rho) u† h), cross-checked against conjugating u point by point.
WSWorkReport ws_work_kitaev(const QuantumState& rho, const Hamiltonian& h,
                            const MomentumDistribution& dist, const Matrix& u);

// Maximal work over weight-conjugated unitaries = ergotropy of apply_D(rho).
double ws_ergotropy(const QuantumState& rho, const Hamiltonian& h,
                    const MomentumDistribution& dist);

// Symmetry-respecting variant: ergotropy of apply_D(rho) restricted to the
// model's commutant (time reversal uses the real-orthogonal optimizer).
double ws_ergotropy(const QuantumState& rho, const Hamiltonian& h,
                    const MomentumDistribution& dist, const SymmetryModel& model);

}  // namespace ergokit::storage
