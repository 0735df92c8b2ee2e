#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ergokit/gge.hpp"
#include "ergokit/quantum_states.hpp"
#include "ergokit/symmetry_reps.hpp"

namespace ergokit::probe {

using kernel::Matrix;
using kernel::Vector;
using states::Hamiltonian;
using states::QuantumState;
using symmetry::BlockDecomposition;
using symmetry::BlockOperator;
using symmetry::SymmetryModel;

// Tensor product of column vectors with repeat counts. The represented state
// lives on (C^d)^{⊗ total_copies} but is only ever contracted factor by
// factor, so multi-copy states never have to fit under the dense cap.
struct ProductState {
  struct Factor {
    Vector column;   // vector on d^copies
    int copies = 1;  // copies of the single system under this column
    int repeat = 1;  // tensor-power repetition of the column
  };
  std::vector<Factor> factors;
  double energy = 0.0;  // extensive-Hamiltonian eigenvalue on all copies
  std::string label;

  int total_copies() const;
  // <psi| rho^{⊗N} |psi> computed factor by factor.
  double overlap(const Matrix& rho) const;
  // Dense vector; throws SizeLimitError above the cap.
  Vector materialize(int d) const;
};

enum class Variant { A, B };

// Swap-projector quartet. Variant A acts on 2mM + L copies with
// c_ij = r_ij^{⊗m} ⊗ |psi_i><psi_j| where r_ij is built from the projector p
// and the two-block swap; variant B acts on m L + m' L' copies with
// c_ij = (|psi_i><psi_j|)^{⊗m} ⊗ (|psi'_{1-i}><psi'_{1-j}|)^{⊗m'}.
struct QuartetSpec {
  Variant variant = Variant::A;
  int dim = 0;  // single-copy dimension
  int m = 0;
  int m_prime = 0;
  int M = 0;  // copies under the projector (variant A)
  Matrix P;   // projector on dim^M (variant A)
  ProductState psi0, psi1;    // main pair, energy(psi0) < energy(psi1)
  ProductState psi0p, psi1p;  // second pair (variant B with m_prime > 0)
};

int total_copies(const QuartetSpec& spec);

struct QuartetUnitary {
  QuartetSpec spec;
  std::optional<Matrix> dense;    // materialized when dim^N <= dense_limit
  double algebra_residual = 0.0;  // worst verified-relation residual
};

// Validates the quartet (projector algebra, eigenvector property, pair
// ordering) and materializes / verifies densely below dense_limit; above it
// the relations are verified structurally from the factors.
QuartetUnitary build_quartet_unitary(const QuartetSpec& spec, const Hamiltonian& h_single,
                                     int dense_limit = 4096);

// Extracted work of the quartet unitary on rho^{⊗N} from factorized traces:
// variant A: (e1-e0) [ (tr rho^{⊗2M} r_11)^m g_1 - (tr rho^{⊗2M} r_00)^m g_0 ]
// variant B: (m de - m' de') [ g_1^m g'_0^{m'} - g_0^m g'_1^{m'} ].
double work_closed_form(const QuartetSpec& spec, const QuantumState& rho);

// Normalized antisymmetrizer over r orthonormal vectors (determinant state).
Vector antisym_state(const std::vector<Vector>& basis);

// Dense Phi(n) for an occupation over the flattened (block, level) index set;
// n_k copies of chi_k, each on D = prod_b r_b copies. Cap-checked.
Vector phi_state(const BlockDecomposition& decomp, const BlockOperator& h_blocks,
                 const std::vector<int>& occupation);

// (S1 - S0)/(E1 - E0) with S_i = -log <psi_i| rho^{⊗L} |psi_i>, E_i = <psi_i| h_ext |psi_i>.
// Throws DomainError for a degenerate pair (E1 == E0).
double virtual_beta(const QuantumState& rho, const Vector& psi0, const Vector& psi1,
                    const Matrix& h_ext);

// Commuting projector candidates, in emission order: energy eigenprojectors
// of h (M = 1); Casimir eigenprojectors (M = 2, Lie kinds); F(t)-derived
// projectors pi_z (real z) and pi_z + pi_z* (finite kinds, M = 1); real energy
// eigenprojectors (time reversal). Each candidate is verified to commute with
// the symmetry operators and the extensive Hamiltonian to 1e-9.
std::vector<std::pair<std::string, Matrix>> omega_candidates(const SymmetryModel& model,
                                                             const Hamiltonian& h, int M);

// Charges used for the generalized Gibbs fit: Lie generators for u1/su2,
// character projectors of the rotation subgroup for finite kinds, none for
// time reversal and trivial.
std::vector<Matrix> fit_charges(const SymmetryModel& model);

struct ProbeBudget {
  int m_max = 40;
  int mprime_max = 8;
};

enum class Verdict { gge_consistent, witness_found, inconclusive };

std::string verdict_name(Verdict verdict);

struct Witness {
  QuartetSpec spec;
  double work = 0.0;
  int copies = 0;
  std::string description;
};

struct ProbeReport {
  Verdict verdict = Verdict::inconclusive;
  gge::GGEFit fit;
  std::optional<Witness> witness;
  std::vector<std::pair<std::string, double>> log;  // probe description -> work / diagnostic
};

// Decision flow: fit a generalized Gibbs form (verdict gge_consistent if it
// fits and no budgeted probe extracts work); otherwise sweep commuting
// projector candidates whose commutator with rho^{⊗M} is visible (variant A,
// m = 0..m_max); otherwise enumerate occupation pairs with matched global
// charges and mismatched virtual temperature (variant B, the four sign cases);
// otherwise inconclusive. rho must be positive definite and h must not lie in
// span{1, charges}.
ProbeReport cp_probe(const QuantumState& rho, const Hamiltonian& h, const SymmetryModel& model,
                     const ProbeBudget& budget = {}, double fit_tolerance = 1e-7,
                     std::uint64_t seed = 0x00e56015u);

}  // namespace ergokit::probe
