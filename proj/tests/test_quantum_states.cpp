#include <doctest.h>

#include "ergokit/quantum_states.hpp"
#include "oracles.hpp"

using namespace ergokit;
using kernel::Complex;
using kernel::Matrix;
using states::Hamiltonian;
using states::QuantumState;

namespace {
std::mt19937_64 rng(20260820u);
}

TEST_CASE("state construction validates and normalizes") {
  Matrix rho = oracle::random_density(4, rng);
  QuantumState state(rho);
  CHECK(state.dim() == 4);
  CHECK(std::abs(state.matrix().trace() - Complex(1.0)) < 1e-14);
  CHECK(state.min_eigenvalue() >= -1e-12);
  CHECK(state.positive_definite());

  // Pure states sit on the boundary of the positive cone.
  kernel::Vector v = oracle::random_state_vector(3, rng);
  QuantumState pure(v * v.adjoint());
  CHECK(!pure.positive_definite());
  CHECK(pure.min_eigenvalue() == doctest::Approx(0.0));

  // A trace drift within 1e-8 is absorbed by renormalization.
  QuantumState drifted(rho * (1.0 + 5e-9));
  CHECK(std::abs(drifted.matrix().trace() - Complex(1.0)) < 1e-14);

  CHECK_THROWS_AS(QuantumState{Matrix(2.0 * rho)}, ValidationError);
  Matrix skew = rho;
  skew(0, 1) += 0.3;
  CHECK_THROWS_AS(QuantumState{skew}, HermiticityError);
  Matrix indefinite = Matrix::Zero(2, 2);
  indefinite(0, 0) = 1.5;
  indefinite(1, 1) = -0.5;
  CHECK_THROWS_AS(QuantumState{indefinite}, DomainError);
}

TEST_CASE("extracted work is the energy drop under conjugation") {
  QuantumState rho(oracle::random_density(4, rng));
  Hamiltonian h(oracle::random_hermitian(4, rng));
  Matrix u = oracle::random_unitary(4, rng);

  double direct = ((rho.matrix() - u * rho.matrix() * u.adjoint()) * h.matrix()).trace().real();
  CHECK(states::extracted_work(rho, h, u) == doctest::Approx(direct));
  CHECK(states::extracted_work(rho, h, Matrix::Identity(4, 4)) == doctest::Approx(0.0));

  CHECK_THROWS_AS(states::extracted_work(rho, h, Matrix(1.01 * u)), UnitarityError);
}

TEST_CASE("thermal state matches the exponential formula") {
  Hamiltonian h(oracle::random_hermitian(3, rng));
  for (double beta : {0.0, 0.7, 3.0, -1.2}) {
    Matrix want = oracle::expm(-beta * h.matrix());
    want /= want.trace().real();
    CHECK((states::gibbs_state(h, beta).matrix() - want).norm() < 1e-12);
  }

  // Qubit occupation follows the logistic function.
  Matrix hq = Matrix::Zero(2, 2);
  hq(1, 1) = 1.0;
  QuantumState thermal = states::gibbs_state(Hamiltonian(hq), 1.0);
  CHECK(thermal.matrix()(0, 0).real() == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))));

  // Extreme temperatures stay finite and reach the ground state.
  QuantumState frozen = states::gibbs_state(Hamiltonian(hq), 2000.0);
  CHECK(frozen.matrix()(0, 0).real() == doctest::Approx(1.0));
  QuantumState flat = states::gibbs_state(Hamiltonian(hq), 0.0);
  CHECK(flat.matrix()(0, 0).real() == doctest::Approx(0.5));
}

TEST_CASE("generalized thermal state exponentiates all conserved quantities") {
  Matrix h = Matrix::Zero(3, 3);
  h.diagonal() << 0.0, 1.0, 2.0;
  Matrix q = Matrix::Zero(3, 3);
  q.diagonal() << 1.0, 0.0, 1.0;

  states::GGEParams params;
  params.beta = 0.8;
  params.mu = {-0.4};
  QuantumState rho = states::gge_state(Hamiltonian(h), {q}, params);

  Matrix want = oracle::expm(-0.8 * h + 0.4 * q);
  double z = want.trace().real();
  CHECK((rho.matrix() - want / z).norm() < 1e-12);
  CHECK(params.log_partition == doctest::Approx(std::log(z)));

  states::GGEParams hot;
  hot.beta = 900.0;
  hot.mu = {-800.0};
  CHECK_NOTHROW(states::gge_state(Hamiltonian(h), {q}, hot));

  states::GGEParams bad;
  bad.beta = 1.0;
  bad.mu = {0.5};
  CHECK_THROWS_AS(states::gge_state(Hamiltonian(h), {oracle::random_hermitian(3, rng)}, bad),
                  CommutationError);
  bad.mu = {0.5, 0.5};
  CHECK_THROWS_AS(states::gge_state(Hamiltonian(h), {q}, bad), ShapeError);
}
