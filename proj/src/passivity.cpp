#include "ergokit/passivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ergokit::passivity {

using kernel::Complex;
using kernel::RealVector;
using symmetry::Block;
using symmetry::BlockDecomposition;
using symmetry::BlockOperator;

namespace {

struct Pairing {
  Matrix unitary;
  double final_energy = 0.0;
};

// Descending-population onto ascending-energy pairing. When the two operators
// commute, both are diagonalized in one basis first, so the unitary only
// permutes energy eigenspaces and acts as the identity on passive input.
Pairing optimal_pairing(const Matrix& rho, const Matrix& h) {
  const int d = static_cast<int>(rho.rows());
  RealVector populations(d), energies(d);
  Matrix vectors(d, d);

  double comm_scale = std::max(1.0, rho.norm() * h.norm());
  if ((rho * h - h * rho).norm() <= 1e-10 * comm_scale) {
    kernel::EigenDecomposition eh = kernel::hermitian_eig(h);
    double spread = eh.eigenvalues(d - 1) - eh.eigenvalues(0);
    double tol = 1e-9 * std::max(1.0, spread);
    int start = 0;
    for (int k = 1; k <= d; ++k) {
      if (k < d && eh.eigenvalues(k) - eh.eigenvalues(k - 1) <= tol) continue;
      const int size = k - start;
      Matrix basis = eh.eigenvectors.middleCols(start, size);
      kernel::EigenDecomposition sub = kernel::hermitian_eig(basis.adjoint() * rho * basis);
      vectors.middleCols(start, size) = basis * sub.eigenvectors;
      populations.segment(start, size) = sub.eigenvalues;
      energies.segment(start, size) = eh.eigenvalues.segment(start, size);
      start = k;
    }
  } else {
    kernel::EigenDecomposition er = kernel::hermitian_eig(rho);
    kernel::EigenDecomposition eh = kernel::hermitian_eig(h);
    vectors = eh.eigenvectors;
    energies = eh.eigenvalues;
    // Populations must be re-expressed in the h eigenbasis pairing below, so
    // keep them with their own vectors and pair through two index orders.
    Pairing out;
    std::vector<int> desc(d);
    std::iota(desc.begin(), desc.end(), 0);
    std::stable_sort(desc.begin(), desc.end(),
                     [&](int a, int b) { return er.eigenvalues(a) > er.eigenvalues(b); });
    out.unitary = Matrix::Zero(d, d);
    out.final_energy = 0.0;
    for (int j = 0; j < d; ++j) {
      out.unitary += eh.eigenvectors.col(j) * er.eigenvectors.col(desc[j]).adjoint();
      out.final_energy += er.eigenvalues(desc[j]) * eh.eigenvalues(j);
    }
    return out;
  }

  std::vector<int> by_population(d), by_energy(d);
  std::iota(by_population.begin(), by_population.end(), 0);
  std::iota(by_energy.begin(), by_energy.end(), 0);
  std::stable_sort(by_population.begin(), by_population.end(),
                   [&](int a, int b) { return populations(a) > populations(b); });

  Pairing out;
  out.unitary = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    out.unitary += vectors.col(by_energy[j]) * vectors.col(by_population[j]).adjoint();
    out.final_energy += populations(by_population[j]) * energies(by_energy[j]);
  }
  return out;
}

double initial_energy(const Matrix& rho, const Matrix& h) {
  return (rho * h).trace().real();
}

}  // namespace

PassivityReport ergotropy(const QuantumState& rho, const Hamiltonian& h) {
  if (rho.dim() != h.dim()) throw ShapeError("state and Hamiltonian dimensions differ");
  Pairing pairing = optimal_pairing(rho.matrix(), h.matrix());
  PassivityReport report;
  report.ergotropy = initial_energy(rho.matrix(), h.matrix()) - pairing.final_energy;
  report.optimal_unitary = std::move(pairing.unitary);
  report.is_passive = report.ergotropy <= 1e-9;
  return report;
}

double ergotropy_value(const Matrix& rho_pos, const Matrix& h) {
  kernel::EigenDecomposition er = kernel::hermitian_eig(rho_pos);
  kernel::EigenDecomposition eh = kernel::hermitian_eig(h);
  const int d = static_cast<int>(rho_pos.rows());
  if (er.eigenvalues.minCoeff() < -1e-9 * std::max(1.0, rho_pos.norm())) {
    throw DomainError("weight operator has a negative eigenvalue");
  }
  double final_energy = 0.0;
  for (int j = 0; j < d; ++j) final_energy += er.eigenvalues(d - 1 - j) * eh.eigenvalues(j);
  return initial_energy(rho_pos, h) - final_energy;
}

PassivityReport sp_ergotropy(const QuantumState& rho, const Hamiltonian& h,
                             const symmetry::SymmetryModel& model) {
  if (rho.dim() != model.dim || h.dim() != model.dim) {
    throw ShapeError("state, Hamiltonian and model dimensions differ");
  }
  BlockDecomposition decomp = symmetry::block_decompose(model);
  BlockOperator h_blocks = symmetry::blocks_of(h.matrix(), decomp);

  PassivityReport report;
  report.optimal_unitary = Matrix::Zero(model.dim, model.dim);
  for (std::size_t b = 0; b < decomp.blocks.size(); ++b) {
    const Block& block = decomp.blocks[b];
    Matrix reduced = symmetry::reduced_state(rho, decomp, static_cast<int>(b));
    Pairing pairing = optimal_pairing(reduced, h_blocks.components[b]);
    double work = initial_energy(reduced, h_blocks.components[b]) - pairing.final_energy;
    report.ergotropy += work;
    report.per_block.emplace_back(block.label, work);
    Matrix lifted = kernel::tensor_product(Matrix::Identity(block.r, block.r), pairing.unitary);
    report.optimal_unitary += block.isometry * lifted * block.isometry.adjoint();
  }
  report.is_passive = report.ergotropy <= 1e-9;
  return report;
}

PassivityReport tr_ergotropy(const QuantumState& rho, const Hamiltonian& h,
                             const symmetry::SymmetryModel& model) {
  if (model.kind != symmetry::Kind::time_reversal) {
    throw ValidationError("conjugation-restricted ergotropy needs a time-reversal model");
  }
  if (rho.dim() != model.dim || h.dim() != model.dim) {
    throw ShapeError("state, Hamiltonian and model dimensions differ");
  }
  if (!symmetry::is_symmetry_respecting(h.matrix(), model).respects) {
    throw CommutationError("Hamiltonian is not real in the conjugation basis");
  }

  Matrix basis = model.conjugation_basis.size() == 0
                     ? Matrix(Matrix::Identity(model.dim, model.dim))
                     : model.conjugation_basis;

  // Only the conjugation-even part of the state couples to a real unitary and
  // a real Hamiltonian, so the optimum is the real pairing on that part.
  QuantumState sym = symmetry::time_reversal_symmetrize(rho, model);
  Matrix rho_r = basis.adjoint() * sym.matrix() * basis;
  Matrix h_r = basis.adjoint() * h.matrix() * basis;
  if (rho_r.imag().norm() > 1e-9 || h_r.imag().norm() > 1e-9 * std::max(1.0, h_r.norm())) {
    throw ValidationError("conjugation basis did not realify the inputs");
  }

  Eigen::SelfAdjointEigenSolver<kernel::RealMatrix> er(rho_r.real());
  Eigen::SelfAdjointEigenSolver<kernel::RealMatrix> eh(h_r.real());
  const int d = model.dim;
  std::vector<int> desc(d);
  std::iota(desc.begin(), desc.end(), 0);
  std::stable_sort(desc.begin(), desc.end(),
                   [&](int a, int b) { return er.eigenvalues()(a) > er.eigenvalues()(b); });

  kernel::RealMatrix real_u = kernel::RealMatrix::Zero(d, d);
  double final_energy = 0.0;
  for (int j = 0; j < d; ++j) {
    real_u += eh.eigenvectors().col(j) * er.eigenvectors().col(desc[j]).transpose();
    final_energy += er.eigenvalues()(desc[j]) * eh.eigenvalues()(j);
  }

  PassivityReport report;
  report.ergotropy = initial_energy(rho.matrix(), h.matrix()) - final_energy;
  report.optimal_unitary = basis * real_u.cast<Complex>() * basis.adjoint();
  report.is_passive = report.ergotropy <= 1e-9;
  report.per_block.emplace_back("all", report.ergotropy);
  return report;
}

}  // namespace ergokit::passivity
