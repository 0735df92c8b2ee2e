#include "ergokit/work_storage.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "ergokit/errors.hpp"
#include "ergokit/matrix_kernel.hpp"
#include "ergokit/passivity.hpp"

namespace ergokit::storage {

using kernel::Complex;
using kernel::Vector;

namespace {

constexpr double kEqualTolerance = 1e-9;
constexpr double kWeightTolerance = 1e-12;
constexpr double kLevelTolerance = 1e-9;

void validate_distribution(const MomentumDistribution& dist) {
  if (dist.kind != MomentumDistribution::Kind::weighted) return;
  if (dist.points.empty())
    throw ValidationError("a weighted momentum distribution needs at least one point");
  double total = 0.0;
  for (const auto& [q, weight] : dist.points) {
    (void)q;
    if (weight < 0.0) throw DomainError("momentum weights must be nonnegative");
    total += weight;
  }
  if (std::abs(total - 1.0) > kWeightTolerance)
    throw ValidationError("momentum weights must sum to one");
}

// e^{-iqH} rho e^{iqH} through the eigenbasis of H; exact for all q.
Matrix phase_conjugate(const Matrix& rho, const kernel::EigenDecomposition& eig, double q) {
  const Eigen::Index d = rho.rows();
  Vector phases(d);
  for (Eigen::Index k = 0; k < d; ++k)
    phases(k) = std::exp(Complex(0.0, -q * eig.eigenvalues(k)));
  Matrix rotated = eig.eigenvectors.adjoint() * rho * eig.eigenvectors;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) rotated(i, j) *= phases(i) * std::conj(phases(j));
  return eig.eigenvectors * rotated * eig.eigenvectors.adjoint();
}

// sum_E P_E rho P_E: zero every entry between distinct eigenvalue clusters.
Matrix dephase(const Matrix& rho, const kernel::EigenDecomposition& eig) {
  const Eigen::Index d = rho.rows();
  const double spread = eig.eigenvalues(d - 1) - eig.eigenvalues(0);
  const double gap_tol = kLevelTolerance * std::max(1.0, spread);
  std::vector<int> cluster(static_cast<std::size_t>(d), 0);
  for (Eigen::Index k = 1; k < d; ++k) {
    cluster[static_cast<std::size_t>(k)] = cluster[static_cast<std::size_t>(k - 1)];
    if (eig.eigenvalues(k) - eig.eigenvalues(k - 1) > gap_tol)
      ++cluster[static_cast<std::size_t>(k)];
  }
  Matrix rotated = eig.eigenvectors.adjoint() * rho * eig.eigenvectors;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if (cluster[static_cast<std::size_t>(i)] != cluster[static_cast<std::size_t>(j)])
        rotated(i, j) = 0.0;
  return eig.eigenvectors * rotated * eig.eigenvectors.adjoint();
}

}  // namespace

MomentumDistribution MomentumDistribution::point(double q) {
  MomentumDistribution dist;
  dist.kind = Kind::point_mass;
  dist.q = q;
  return dist;
}

MomentumDistribution MomentumDistribution::position() {
  MomentumDistribution dist;
  dist.kind = Kind::position_eigenstate;
  return dist;
}

MomentumDistribution MomentumDistribution::weighted(
    std::vector<std::pair<double, double>> points) {
  MomentumDistribution dist;
  dist.kind = Kind::weighted;
  dist.points = std::move(points);
  validate_distribution(dist);
  return dist;
}

QuantumState apply_D(const QuantumState& rho, const Hamiltonian& h,
                     const MomentumDistribution& dist) {
  if (rho.dim() != h.dim())
    throw ShapeError("state and Hamiltonian dimensions differ");
  validate_distribution(dist);
  kernel::EigenDecomposition eig = kernel::hermitian_eig(h.matrix());

  Matrix mapped;
  switch (dist.kind) {
    case MomentumDistribution::Kind::point_mass:
      mapped = phase_conjugate(rho.matrix(), eig, dist.q);
      break;
    case MomentumDistribution::Kind::position_eigenstate:
      mapped = dephase(rho.matrix(), eig);
      break;
    case MomentumDistribution::Kind::weighted: {
      mapped = Matrix::Zero(rho.dim(), rho.dim());
      for (const auto& [q, weight] : dist.points)
        mapped += weight * phase_conjugate(rho.matrix(), eig, q);
      break;
    }
  }
  Matrix hermitized = 0.5 * (mapped + Matrix(mapped.adjoint()));
  return QuantumState(hermitized);
}

WSWorkReport ws_work_kitaev(const QuantumState& rho, const Hamiltonian& h,
                            const MomentumDistribution& dist, const Matrix& u) {
  kernel::require_square(u, "storage-conjugated unitary");
  if (u.rows() != rho.dim())
    throw ShapeError("unitary dimension does not match the state");
  kernel::require_unitary(u, "storage-conjugated unitary");

  WSWorkReport report;
  report.ws_work = states::extracted_work(apply_D(rho, h, dist), h, u);
  report.dense_work = states::extracted_work(rho, h, u);
  report.equal = std::abs(report.ws_work - report.dense_work) <= kEqualTolerance;
  return report;
}

double ws_ergotropy(const QuantumState& rho, const Hamiltonian& h,
                    const MomentumDistribution& dist) {
  return passivity::ergotropy(apply_D(rho, h, dist), h).ergotropy;
}

double ws_ergotropy(const QuantumState& rho, const Hamiltonian& h,
                    const MomentumDistribution& dist, const SymmetryModel& model) {
  QuantumState mapped = apply_D(rho, h, dist);
  if (model.kind == symmetry::Kind::time_reversal)
    return passivity::tr_ergotropy(mapped, h, model).ergotropy;
  return passivity::sp_ergotropy(mapped, h, model).ergotropy;
}

}  // namespace ergokit::storage
