#include "ergokit/matrix_kernel.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace ergokit::kernel {

namespace {

std::size_t initial_max_dim() {
  if (const char* env = std::getenv("PASSIVITY_MAX_DIM")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 65536;
}

std::size_t& max_dim_ref() {
  static std::size_t cap = initial_max_dim();
  return cap;
}

}  // namespace

std::size_t max_dim() { return max_dim_ref(); }

void set_max_dim(std::size_t cap) {
  if (cap == 0) throw ValidationError("dimension cap must be positive");
  max_dim_ref() = cap;
}

void require_dim(std::size_t dim, const char* what) {
  if (dim > max_dim()) {
    throw SizeLimitError(std::string(what) + " dimension " + std::to_string(dim) +
                         " exceeds the cap " + std::to_string(max_dim()));
  }
}

double hs_norm(const Matrix& m) { return m.norm(); }

Complex hs_inner(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("inner product of differently shaped matrices");
  }
  return a.conjugate().cwiseProduct(b).sum();
}

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ShapeError(std::string(what) + " must be square and nonempty, got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw ValidationError(std::string(what) + " has nonfinite entries");
}

Matrix require_hermitian(const Matrix& m, const char* what) {
  require_square(m, what);
  require_finite(m, what);
  double scale = std::max(hs_norm(m), 1.0);
  if (hs_norm(m - m.adjoint()) > 1e-10 * scale) {
    throw HermiticityError(std::string(what) + " is not Hermitian");
  }
  return (m + m.adjoint()) / 2.0;
}

void require_unitary(const Matrix& u, const char* what) {
  require_square(u, what);
  require_finite(u, what);
  Matrix gram = u.adjoint() * u;
  gram.diagonal().array() -= 1.0;
  if (gram.norm() > 1e-10) throw UnitarityError(std::string(what) + " is not unitary");
}

Matrix identity(int d) {
  if (d <= 0) throw ShapeError("identity needs a positive dimension");
  require_dim(static_cast<std::size_t>(d), "identity");
  return Matrix::Identity(d, d);
}

EigenDecomposition hermitian_eig(const Matrix& m) {
  Matrix h = require_hermitian(m, "eigensolver input");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) throw ValidationError("eigensolver failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix tensor_product(const Matrix& a, const Matrix& b) {
  std::size_t rows = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(b.rows());
  std::size_t cols = static_cast<std::size_t>(a.cols()) * static_cast<std::size_t>(b.cols());
  require_dim(std::max(rows, cols), "tensor product");
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix tensor_power(const Matrix& a, int n) {
  if (n < 0) throw ValidationError("tensor power needs a nonnegative exponent");
  Matrix out = Matrix::Identity(1, 1);
  for (int k = 0; k < n; ++k) out = tensor_product(out, a);
  return out;
}

Vector tensor_product_vec(const Vector& a, const Vector& b) {
  std::size_t size = static_cast<std::size_t>(a.size()) * static_cast<std::size_t>(b.size());
  require_dim(size, "tensor product");
  Vector out(size);
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Matrix extensive_sum(const Matrix& omega, int n) {
  require_square(omega, "summand");
  if (n <= 0) throw ValidationError("extensive sum needs at least one copy");
  const Eigen::Index d = omega.rows();
  Matrix out = tensor_power(omega, 1);
  for (int k = 2; k <= n; ++k) {
    // out_{k} = out_{k-1} ⊗ 1_d + 1_{d^{k-1}} ⊗ omega
    Matrix grown = tensor_product(out, Matrix::Identity(d, d));
    grown += tensor_product(Matrix::Identity(out.rows(), out.rows()), omega);
    out = std::move(grown);
  }
  return out;
}

Matrix partial_trace(const Matrix& m, const std::vector<int>& dims, const std::vector<int>& keep) {
  require_square(m, "partial trace input");
  Eigen::Index total = 1;
  for (int d : dims) {
    if (d <= 0) throw ShapeError("factor dimensions must be positive");
    total *= d;
  }
  if (total != m.rows()) throw ShapeError("factor dimensions do not match the matrix");

  std::vector<bool> kept(dims.size(), false);
  for (int k : keep) {
    if (k < 0 || k >= static_cast<int>(dims.size()) || kept[k]) {
      throw ShapeError("invalid subsystem index in partial trace");
    }
    kept[k] = true;
  }

  std::vector<Eigen::Index> stride(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) {
    stride[k] = stride[k + 1] * dims[k + 1];
  }

  // Flat offsets of every kept and every traced multi-index, in row-major
  // order over the respective factors.
  auto offsets = [&](bool want_kept) {
    std::vector<Eigen::Index> offs{0};
    for (std::size_t k = 0; k < dims.size(); ++k) {
      if (kept[k] != want_kept) continue;
      std::vector<Eigen::Index> grown;
      grown.reserve(offs.size() * dims[k]);
      for (Eigen::Index base : offs) {
        for (int a = 0; a < dims[k]; ++a) grown.push_back(base + a * stride[k]);
      }
      offs = std::move(grown);
    }
    return offs;
  };
  std::vector<Eigen::Index> keep_offs = offsets(true);
  std::vector<Eigen::Index> trace_offs = offsets(false);

  Matrix out = Matrix::Zero(keep_offs.size(), keep_offs.size());
  for (std::size_t a = 0; a < keep_offs.size(); ++a) {
    for (std::size_t b = 0; b < keep_offs.size(); ++b) {
      Complex sum = 0.0;
      for (Eigen::Index t : trace_offs) sum += m(keep_offs[a] + t, keep_offs[b] + t);
      out(a, b) = sum;
    }
  }
  return out;
}

Matrix swap_operator(int d) {
  if (d <= 0) throw ShapeError("swap needs a positive dimension");
  require_dim(static_cast<std::size_t>(d) * d, "swap");
  Matrix t = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) t(i * d + j, j * d + i) = 1.0;
  }
  return t;
}

Matrix herm_log(const Matrix& m) {
  EigenDecomposition eig = hermitian_eig(m);
  if (eig.eigenvalues.minCoeff() <= 1e-12) {
    throw DomainError("logarithm needs a positive definite matrix");
  }
  return eig.eigenvectors * eig.eigenvalues.array().log().matrix().asDiagonal() *
         eig.eigenvectors.adjoint();
}

Matrix herm_exp(const Matrix& m) {
  EigenDecomposition eig = hermitian_eig(m);
  return eig.eigenvectors * eig.eigenvalues.array().exp().matrix().asDiagonal() *
         eig.eigenvectors.adjoint();
}

std::pair<Matrix, double> project_onto_span(const Matrix& target,
                                            const std::vector<Matrix>& basis) {
  if (basis.empty()) {
    return {Matrix::Zero(target.rows(), target.cols()), hs_norm(target)};
  }
  const std::size_t n = basis.size();
  Matrix gram(n, n);
  Vector rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) gram(i, j) = hs_inner(basis[i], basis[j]);
    rhs(i) = hs_inner(basis[i], target);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver((gram + gram.adjoint()) / 2.0);
  if (solver.info() != Eigen::Success) throw ValidationError("Gram eigensolver failed");
  RealVector evals = solver.eigenvalues();
  double cut = 1e-10 * std::max(evals.maxCoeff(), 0.0);
  Vector coords = solver.eigenvectors().adjoint() * rhs;
  for (Eigen::Index k = 0; k < coords.size(); ++k) {
    coords(k) = evals(k) > cut ? coords(k) / evals(k) : Complex(0.0);
  }
  Vector coeff = solver.eigenvectors() * coords;
  Matrix projection = Matrix::Zero(target.rows(), target.cols());
  for (std::size_t i = 0; i < n; ++i) projection += coeff(i) * basis[i];
  return {projection, hs_norm(target - projection)};
}

Vector apply_tensor_power(const Matrix& op, const Vector& v, int copies) {
  require_square(op, "operator");
  if (copies < 0) throw ValidationError("copies must be nonnegative");
  const Eigen::Index d = op.rows();
  Eigen::Index expect = 1;
  for (int k = 0; k < copies; ++k) expect *= d;
  if (v.size() != expect) throw ShapeError("vector size does not match op^copies");

  Vector cur = v;
  Eigen::Index inner = expect / std::max<Eigen::Index>(d, 1);
  for (int k = 0; k < copies; ++k) {
    Vector next(expect);
    Vector slot(d);
    const Eigen::Index outer = expect / (inner * d);
    for (Eigen::Index o = 0; o < outer; ++o) {
      for (Eigen::Index i = 0; i < inner; ++i) {
        const Eigen::Index base = o * d * inner + i;
        for (Eigen::Index a = 0; a < d; ++a) slot(a) = cur(base + a * inner);
        slot = (op * slot).eval();
        for (Eigen::Index a = 0; a < d; ++a) next(base + a * inner) = slot(a);
      }
    }
    cur = std::move(next);
    inner /= d;
    if (inner == 0) break;
  }
  return cur;
}

}  // namespace ergokit::kernel
