#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ergokit/matrix_kernel.hpp"
#include "ergokit/quantum_states.hpp"

namespace ergokit::symmetry {

using kernel::Matrix;

enum class Kind { u1, su2, cyclic, dihedral, time_reversal, trivial };

std::string kind_name(Kind kind);
Kind kind_from_name(const std::string& name);

struct SymmetryModel {
  Kind kind = Kind::trivial;
  int dim = 0;
  int order = 0;  // n for cyclic/dihedral, otherwise 0

  // Lie kinds: Hermitian generators (u1: mutually commuting; su2: exactly
  // three with [q_x, q_y] = i q_z cyclically).
  std::vector<Matrix> charges;

  // Finite kinds: unitary representation matrices, closed under products.
  // elements[0] is the identity, elements[1] the rotation generator t, and
  // (dihedral) elements[order] the reflection generator r.
  std::vector<Matrix> elements;

  // time_reversal: unitary whose columns give the basis in which conjugation
  // acts entrywise; empty means the computational basis.
  Matrix conjugation_basis;
};

// Presets: su2-dimer, u1-qubit, cyclic-N, dihedral-N, time-reversal-D, trivial-D.
SymmetryModel preset(const std::string& name);

// Checks the defining relations of the kind (commutators, closure, unitarity).
void validate_model(const SymmetryModel& model);

// Entrywise conjugation in the model's conjugation basis.
Matrix conj_in_basis(const Matrix& op, const SymmetryModel& model);

SymmetryModel tensor_power_model(const SymmetryModel& model, int n);

struct Block {
  std::string label;
  int r = 1;        // irrep dimension
  int m = 1;        // multiplicity
  Matrix isometry;  // dim x (r*m); column (i,a) sits at index i*m + a
};

struct BlockDecomposition {
  int dim = 0;
  std::vector<Block> blocks;
};

// Decomposes the representation into isotypic blocks: isometries satisfy
// iota† iota = 1, sum iota iota† = 1, and iota† F(g) iota = F_block(g) ⊗ 1_m
// for every generator/element. The seed fixes the random commutant element
// used to split the space; the result is deterministic given the seed.
BlockDecomposition block_decompose(const SymmetryModel& model, std::uint64_t seed = 0x00e56015u);

int block_index(const BlockDecomposition& decomp, const std::string& label);

struct BlockOperator {
  std::vector<Matrix> components;  // aligned with decomposition blocks; m x m each
};

// Components h_b = tr_R(iota† op iota)/r. Throws CommutationError unless the
// reassembled operator matches op to 1e-9.
BlockOperator blocks_of(const Matrix& op, const BlockDecomposition& decomp);
Matrix reassemble(const BlockOperator& op, const BlockDecomposition& decomp);

// Unnormalized reduced block tr_R(iota† rho iota); traces sum to 1 over blocks.
Matrix reduced_state(const states::QuantumState& rho, const BlockDecomposition& decomp, int block);
std::vector<Matrix> reduced_states(const states::QuantumState& rho, const BlockDecomposition& decomp);

// Projection onto the commutant: block form for Lie kinds, group average for
// finite kinds, (rho + conj rho)/2 for time reversal, identity for trivial.
states::QuantumState symmetrize(const states::QuantumState& rho, const SymmetryModel& model);
states::QuantumState time_reversal_symmetrize(const states::QuantumState& rho, const SymmetryModel& model);

// sum_ij (G^{-1})_ij q_i ⊗ q_j with G_ij = tr(q_i q_j); commutes with the
// extensive charges on two copies. Lie kinds only; singular G raises RankError.
Matrix casimir_two_copy(const SymmetryModel& model);

struct SymmetryCheck {
  bool respects = false;
  double max_violation = 0.0;
};

// Max violation over generators: commutators with charges/elements, or
// distance from the entrywise conjugate for time reversal. Threshold 1e-9.
SymmetryCheck is_symmetry_respecting(const Matrix& op, const SymmetryModel& model);

}  // namespace ergokit::symmetry
