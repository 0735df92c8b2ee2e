#include <doctest.h>

#include "ergokit/passivity.hpp"
#include "oracles.hpp"

using namespace ergokit;
using kernel::Complex;
using kernel::Matrix;
using states::Hamiltonian;
using states::QuantumState;
using symmetry::SymmetryModel;

namespace {

std::mt19937_64 rng(20260822u);

// Symmetry-respecting unitary drawn from the commutant: Haar on each block.
Matrix random_block_unitary(const symmetry::BlockDecomposition& decomp, std::mt19937_64& gen) {
  Matrix u = Matrix::Zero(decomp.dim, decomp.dim);
  for (const symmetry::Block& block : decomp.blocks) {
    Matrix lifted = oracle::kron(Matrix::Identity(block.r, block.r),
                                 oracle::random_unitary(block.m, gen));
    u += block.isometry * lifted * block.isometry.adjoint();
  }
  return u;
}

}  // namespace

TEST_CASE("extractable work matches the exhaustive pairing search") {
  for (int d : {3, 4, 5}) {
    for (int trial = 0; trial < 4; ++trial) {
      QuantumState rho(oracle::random_density(d, rng));
      Hamiltonian h(oracle::random_hermitian(d, rng));
      passivity::PassivityReport report = passivity::ergotropy(rho, h);
      double want = oracle::ergotropy_by_permutation(rho.matrix(), h.matrix());
      CHECK(report.ergotropy == doctest::Approx(want).epsilon(1e-10));

      // The reported unitary actually extracts the reported work.
      CHECK(states::extracted_work(rho, h, report.optimal_unitary) ==
            doctest::Approx(report.ergotropy).epsilon(1e-10));
    }
  }
}

TEST_CASE("hand-computed qutrit value") {
  Matrix rho = Matrix::Zero(3, 3);
  rho.diagonal() << 0.5, 0.2, 0.3;
  Matrix h = Matrix::Zero(3, 3);
  h.diagonal() << 0.0, 1.0, 2.0;
  // Initial energy 0.8; passive arrangement (0.5, 0.3, 0.2) has energy 0.7.
  passivity::PassivityReport report = passivity::ergotropy(QuantumState(rho), Hamiltonian(h));
  CHECK(report.ergotropy == doctest::Approx(0.1));
  CHECK(!report.is_passive);
}

TEST_CASE("thermal states are passive and stay untouched") {
  Hamiltonian h(oracle::random_hermitian(4, rng));
  for (double beta : {0.0, 0.5, 4.0}) {
    QuantumState rho = states::gibbs_state(h, beta);
    passivity::PassivityReport report = passivity::ergotropy(rho, h);
    CHECK(report.is_passive);
    CHECK(std::abs(report.ergotropy) < 1e-9);
    Matrix rotated = report.optimal_unitary * rho.matrix() * report.optimal_unitary.adjoint();
    CHECK((rotated - rho.matrix()).norm() < 1e-9);
  }

  // Degenerate spectrum: the pairing must not shuffle a passive state.
  Matrix hd = Matrix::Zero(4, 4);
  hd.diagonal() << 0.0, 1.0, 1.0, 2.0;
  QuantumState rho = states::gibbs_state(Hamiltonian(hd), 1.3);
  passivity::PassivityReport report = passivity::ergotropy(rho, Hamiltonian(hd));
  CHECK(std::abs(report.ergotropy) < 1e-12);
  Matrix rotated = report.optimal_unitary * rho.matrix() * report.optimal_unitary.adjoint();
  CHECK((rotated - rho.matrix()).norm() < 1e-10);
}

TEST_CASE("no sampled unitary beats the reported maximum") {
  QuantumState rho(oracle::random_density(4, rng));
  Hamiltonian h(oracle::random_hermitian(4, rng));
  double best = passivity::ergotropy(rho, h).ergotropy;
  CHECK(best >= 0.0);
  for (int trial = 0; trial < 200; ++trial) {
    Matrix u = oracle::random_unitary(4, rng);
    CHECK(states::extracted_work(rho, h, u) <= best + 1e-9);
  }

  // A fully excited qubit gives up exactly the gap.
  Matrix hq = Matrix::Zero(2, 2);
  hq(1, 1) = 1.0;
  Matrix excited = Matrix::Zero(2, 2);
  excited(1, 1) = 1.0;
  CHECK(passivity::ergotropy(QuantumState(excited), Hamiltonian(hq)).ergotropy ==
        doctest::Approx(1.0));
}

TEST_CASE("weight-operator work is linear in the operator") {
  Matrix rho = oracle::random_density(4, rng);
  Matrix h = oracle::random_hermitian(4, rng);
  double w1 = passivity::ergotropy_value(rho, h);
  double w2 = passivity::ergotropy_value(Matrix(2.5 * rho), h);
  CHECK(w2 == doctest::Approx(2.5 * w1));
  CHECK(passivity::ergotropy_value(Matrix::Zero(4, 4), h) == doctest::Approx(0.0));
}

TEST_CASE("single spin pair admits no symmetric extraction") {
  // Both commutant blocks are one dimensional, so symmetric unitaries are
  // phases and extract nothing, even from highly active states.
  SymmetryModel model = symmetry::preset("su2-dimer");
  Matrix hh = Matrix::Zero(4, 4);
  for (const Matrix& s : model.charges) hh += s * s;  // shifted exchange coupling
  Hamiltonian h(hh);

  // Population inversion: the triplet holds almost all the weight.
  symmetry::BlockDecomposition decomp = symmetry::block_decompose(model);
  const symmetry::Block& singlet = decomp.blocks[symmetry::block_index(decomp, "spin0")];
  Matrix p_singlet = singlet.isometry * singlet.isometry.adjoint();
  QuantumState rho(0.05 * p_singlet + (0.95 / 3.0) * (Matrix::Identity(4, 4) - p_singlet));

  passivity::PassivityReport sp = passivity::sp_ergotropy(rho, h, model);
  CHECK(std::abs(sp.ergotropy) < 1e-12);
  CHECK(sp.is_passive);
  CHECK(sp.per_block.size() == 2);

  // The unrestricted optimum is strictly positive for the inverted state.
  CHECK(passivity::ergotropy(rho, h).ergotropy > 0.5);
}

TEST_CASE("charge sectors bound the symmetric extraction exactly") {
  // One charge with eigenvalues {0, 1, 1}: the q=1 sector is a qubit block
  // and the symmetric optimum is the plain optimum inside that block.
  SymmetryModel model;
  model.kind = symmetry::Kind::u1;
  model.dim = 3;
  Matrix q = Matrix::Zero(3, 3);
  q.diagonal() << 0.0, 1.0, 1.0;
  model.charges.push_back(q);

  Matrix rho = Matrix::Zero(3, 3);
  rho(0, 0) = 0.3;
  Matrix inner = oracle::random_density(2, rng);
  rho.block(1, 1, 2, 2) = 0.7 * inner;

  Matrix h = Matrix::Zero(3, 3);
  h(0, 0) = -0.5;
  h.block(1, 1, 2, 2) = oracle::random_hermitian(2, rng);

  passivity::PassivityReport sp =
      passivity::sp_ergotropy(QuantumState(rho), Hamiltonian(h), model);
  double want = passivity::ergotropy_value(Matrix(0.7 * inner), Matrix(h.block(1, 1, 2, 2)));
  CHECK(sp.ergotropy == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("symmetric optimum is achieved and unbeaten over the commutant") {
  SymmetryModel model = symmetry::tensor_power_model(symmetry::preset("su2-dimer"), 2);
  symmetry::BlockDecomposition decomp = symmetry::block_decompose(model);

  // Symmetric Hamiltonian with distinct block components.
  symmetry::BlockOperator comps;
  for (const symmetry::Block& block : decomp.blocks) {
    comps.components.push_back(oracle::random_hermitian(block.m, rng));
  }
  Hamiltonian h(symmetry::reassemble(comps, decomp));
  QuantumState rho(oracle::random_density(16, rng));

  passivity::PassivityReport sp = passivity::sp_ergotropy(rho, h, model);
  CHECK(sp.ergotropy > 1e-6);  // multiplicities 2 and 3 leave room to work

  // The reported unitary is symmetry respecting and extracts the total.
  CHECK(symmetry::is_symmetry_respecting(sp.optimal_unitary, model).respects);
  CHECK(states::extracted_work(rho, h, sp.optimal_unitary) ==
        doctest::Approx(sp.ergotropy).epsilon(1e-10));

  // No sampled commutant unitary does better.
  double best_sampled = 0.0;
  for (int trial = 0; trial < 400; ++trial) {
    Matrix u = random_block_unitary(decomp, rng);
    double work = states::extracted_work(rho, h, u);
    CHECK(work <= sp.ergotropy + 1e-9);
    best_sampled = std::max(best_sampled, work);
  }
  CHECK(best_sampled > 0.25 * sp.ergotropy);

  // Block contributions add up to the total.
  double sum = 0.0;
  for (const auto& [label, work] : sp.per_block) sum += work;
  CHECK(sum == doctest::Approx(sp.ergotropy));

  CHECK_THROWS_AS(passivity::sp_ergotropy(rho, Hamiltonian(oracle::random_hermitian(16, rng)),
                                          model),
                  CommutationError);
}

TEST_CASE("trivial symmetry reproduces the unrestricted optimum") {
  SymmetryModel model = symmetry::preset("trivial-4");
  QuantumState rho(oracle::random_density(4, rng));
  Hamiltonian h(oracle::random_hermitian(4, rng));
  CHECK(passivity::sp_ergotropy(rho, h, model).ergotropy ==
        doctest::Approx(passivity::ergotropy(rho, h).ergotropy).epsilon(1e-12));
}

TEST_CASE("conjugation-respecting extraction works on the even part") {
  SymmetryModel model = symmetry::preset("time-reversal-4");
  Matrix h_real = oracle::random_hermitian(4, rng).real().cast<Complex>();
  Hamiltonian h(h_real);
  QuantumState rho(oracle::random_density(4, rng));

  passivity::PassivityReport tr = passivity::tr_ergotropy(rho, h, model);
  passivity::PassivityReport full = passivity::ergotropy(rho, h);

  // Restricting the unitaries can only lose work.
  CHECK(tr.ergotropy <= full.ergotropy + 1e-12);

  // The value is the plain optimum of the conjugation-even part.
  QuantumState even = symmetry::time_reversal_symmetrize(rho, model);
  CHECK(tr.ergotropy == doctest::Approx(passivity::ergotropy(even, h).ergotropy).epsilon(1e-10));

  // The optimizer is a real matrix and extracts the reported value.
  CHECK(tr.optimal_unitary.imag().norm() < 1e-10);
  CHECK(symmetry::is_symmetry_respecting(tr.optimal_unitary, model).respects);
  CHECK(states::extracted_work(rho, h, tr.optimal_unitary) ==
        doctest::Approx(tr.ergotropy).epsilon(1e-10));

  // Real states lose nothing under the restriction.
  QuantumState real_rho(Matrix(oracle::random_density(4, rng).real().cast<Complex>()));
  CHECK(passivity::tr_ergotropy(real_rho, h, model).ergotropy ==
        doctest::Approx(passivity::ergotropy(real_rho, h).ergotropy).epsilon(1e-10));

  CHECK_THROWS_AS(passivity::tr_ergotropy(rho, Hamiltonian(oracle::random_hermitian(4, rng)),
                                          model),
                  CommutationError);
}
