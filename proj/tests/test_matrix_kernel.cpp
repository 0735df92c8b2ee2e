#include <doctest.h>

#include "ergokit/matrix_kernel.hpp"
#include "oracles.hpp"

using namespace ergokit;
using kernel::Complex;
using kernel::Matrix;
using kernel::Vector;

namespace {
std::mt19937_64 rng(20260819u);
}

TEST_CASE("tensor product matches the index formula") {
  Matrix a = oracle::ginibre(3, 2, rng);
  Matrix b = oracle::ginibre(2, 4, rng);
  CHECK((kernel::tensor_product(a, b) - oracle::kron(a, b)).norm() == doctest::Approx(0.0));

  Matrix c = oracle::ginibre(2, 2, rng);
  CHECK((kernel::tensor_power(c, 3) - oracle::kron_power(c, 3)).norm() == doctest::Approx(0.0));
  CHECK(kernel::tensor_power(c, 0).rows() == 1);
  CHECK(kernel::tensor_power(c, 0)(0, 0) == Complex(1.0));

  Vector u = oracle::random_state_vector(3, rng);
  Vector v = oracle::random_state_vector(2, rng);
  Vector uv = kernel::tensor_product_vec(u, v);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(uv(i * 2 + j) - u(i) * v(j)) < 1e-14);
}

TEST_CASE("extensive sum matches the one-site embedding formula") {
  Matrix omega = oracle::random_hermitian(3, rng);
  for (int n : {1, 2, 3}) {
    CHECK((kernel::extensive_sum(omega, n) - oracle::extensive(omega, n)).norm() < 1e-12);
  }
}

TEST_CASE("partial trace agrees with the index formula and preserves trace") {
  std::vector<int> dims{2, 3, 2};
  Matrix m = oracle::ginibre(12, 12, rng);

  for (const std::vector<int>& keep : {std::vector<int>{0, 2}, {1}, {0}, {0, 1, 2}}) {
    Matrix got = kernel::partial_trace(m, dims, keep);
    Matrix want = oracle::partial_trace(m, dims, keep);
    CHECK((got - want).norm() < 1e-12);
    CHECK(std::abs(got.trace() - m.trace()) < 1e-12);
  }

  // On a product operator the complement factor traces out to a scalar.
  Matrix a = oracle::ginibre(2, 2, rng);
  Matrix b = oracle::ginibre(3, 3, rng);
  Matrix left = kernel::partial_trace(oracle::kron(a, b), {2, 3}, {0});
  CHECK((left - b.trace() * a).norm() < 1e-12);
}

TEST_CASE("swap operator exchanges the two factors") {
  Matrix t = kernel::swap_operator(3);
  CHECK((t * t - Matrix::Identity(9, 9)).norm() < 1e-14);

  Matrix a = oracle::ginibre(3, 3, rng);
  Matrix b = oracle::ginibre(3, 3, rng);
  CHECK((t * oracle::kron(a, b) * t - oracle::kron(b, a)).norm() < 1e-12);

  Vector u = oracle::random_state_vector(3, rng);
  Vector v = oracle::random_state_vector(3, rng);
  CHECK((t * kernel::tensor_product_vec(u, v) - kernel::tensor_product_vec(v, u)).norm() < 1e-14);
}

TEST_CASE("hermitian eigendecomposition reconstructs with ascending eigenvalues") {
  Matrix h = oracle::random_hermitian(5, rng);
  kernel::EigenDecomposition eig = kernel::hermitian_eig(h);
  Matrix rebuilt = eig.eigenvectors * eig.eigenvalues.asDiagonal() * eig.eigenvectors.adjoint();
  CHECK((rebuilt - h).norm() < 1e-12);
  for (int i = 0; i + 1 < 5; ++i) CHECK(eig.eigenvalues(i) <= eig.eigenvalues(i + 1));
  Matrix gram = eig.eigenvectors.adjoint() * eig.eigenvectors;
  CHECK((gram - Matrix::Identity(5, 5)).norm() < 1e-12);
}

TEST_CASE("matrix exponential and logarithm invert each other") {
  Matrix h = oracle::random_hermitian(4, rng);
  CHECK((kernel::herm_exp(h) - oracle::expm(h)).norm() < 1e-12);
  CHECK((kernel::herm_log(kernel::herm_exp(h)) - h).norm() < 1e-11);

  Matrix singular = Matrix::Zero(2, 2);
  singular(0, 0) = 1.0;
  CHECK_THROWS_AS(kernel::herm_log(singular), DomainError);
}

TEST_CASE("hermiticity and unitarity validation") {
  Matrix h = oracle::random_hermitian(4, rng);
  Matrix almost = h;
  almost(0, 1) += Complex(0.0, 1e-13);
  Matrix fixed = kernel::require_hermitian(almost, "test");
  CHECK((fixed - fixed.adjoint()).norm() == doctest::Approx(0.0));

  Matrix bad = h;
  bad(0, 1) += Complex(0.0, 1e-6);
  CHECK_THROWS_AS(kernel::require_hermitian(bad, "test"), HermiticityError);

  Matrix u = oracle::random_unitary(4, rng);
  CHECK_NOTHROW(kernel::require_unitary(u, "test"));
  CHECK_THROWS_AS(kernel::require_unitary(Matrix(1.001 * u), "test"), UnitarityError);
}

TEST_CASE("span projection splits a matrix into component and residual") {
  Matrix h = oracle::random_hermitian(4, rng);
  Matrix q = oracle::random_hermitian(4, rng);
  Matrix id = Matrix::Identity(4, 4);

  // Exact member of the span comes back with zero residual.
  Matrix target = 0.7 * id - 1.3 * h + 0.2 * q;
  auto [proj, residual] = kernel::project_onto_span(target, {id, h, q});
  CHECK(residual < 1e-10);
  CHECK((proj - target).norm() < 1e-10);

  // The residual part is orthogonal to every basis element.
  Matrix outside = oracle::random_hermitian(4, rng);
  auto [proj2, res2] = kernel::project_onto_span(outside, {id, h});
  Matrix rem = outside - proj2;
  CHECK(std::abs(kernel::hs_inner(id, rem)) < 1e-10);
  CHECK(std::abs(kernel::hs_inner(h, rem)) < 1e-10);
  CHECK(res2 == doctest::Approx(rem.norm()));

  // A repeated basis element must not break the solve.
  auto [proj3, res3] = kernel::project_onto_span(target, {id, h, h, q});
  CHECK(res3 < 1e-10);

  auto [zero, full] = kernel::project_onto_span(target, {});
  CHECK(zero.norm() == 0.0);
  CHECK(full == doctest::Approx(target.norm()));
}

TEST_CASE("streamed tensor-power application equals the dense product") {
  Matrix op = oracle::ginibre(2, 2, rng);
  Vector v = oracle::random_state_vector(8, rng);
  Vector got = kernel::apply_tensor_power(op, v, 3);
  Vector want = oracle::kron_power(op, 3) * v;
  CHECK((got - want).norm() < 1e-12);

  Vector scalar(1);
  scalar(0) = 2.5;
  CHECK(kernel::apply_tensor_power(op, scalar, 0)(0) == Complex(2.5));
}

TEST_CASE("inner product is the trace pairing") {
  Matrix a = oracle::ginibre(3, 3, rng);
  Matrix b = oracle::ginibre(3, 3, rng);
  CHECK(std::abs(kernel::hs_inner(a, b) - (a.adjoint() * b).trace()) < 1e-13);
  CHECK(kernel::hs_norm(a) == doctest::Approx(std::sqrt(kernel::hs_inner(a, a).real())));
}

TEST_CASE("dimension cap rejects oversized allocations") {
  std::size_t before = kernel::max_dim();
  kernel::set_max_dim(8);
  Matrix a = Matrix::Identity(4, 4);
  CHECK_THROWS_AS(kernel::tensor_product(a, a), SizeLimitError);
  CHECK_NOTHROW(kernel::tensor_product(a, Matrix::Identity(2, 2)));
  kernel::set_max_dim(before);
  CHECK_NOTHROW(kernel::tensor_product(a, a));
}
