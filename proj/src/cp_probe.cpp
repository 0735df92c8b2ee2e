#include "ergokit/cp_probe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ergokit/errors.hpp"

namespace ergokit::probe {

using kernel::Complex;
using kernel::RealMatrix;
using kernel::RealVector;
using symmetry::Block;
using symmetry::Kind;

namespace {

constexpr double kWorkThreshold = 1e-9;    // minimum extractable work that counts
constexpr double kCommutatorTrigger = 1e-8;  // ||[rho^{⊗M}, P]|| that arms a projector probe

// op applied to one tensor axis; stride = d^(axes to the right).
Vector apply_axis(const Matrix& op, const Vector& v, Eigen::Index stride) {
  const Eigen::Index d = op.rows();
  const Eigen::Index block = stride * d;
  Vector out = Vector::Zero(v.size());
  for (Eigen::Index base = 0; base < v.size(); base += block)
    for (Eigen::Index s = 0; s < stride; ++s)
      for (Eigen::Index j = 0; j < d; ++j) {
        Complex acc = 0.0;
        for (Eigen::Index i = 0; i < d; ++i) acc += op(j, i) * v[base + i * stride + s];
        out[base + j * stride + s] = acc;
      }
  return out;
}

// sum_k 1 ⊗ .. ⊗ op ⊗ .. ⊗ 1 applied to a vector on d^copies.
Vector apply_extensive(const Matrix& op, const Vector& v, int copies) {
  const Eigen::Index d = op.rows();
  Vector out = Vector::Zero(v.size());
  Eigen::Index stride = 1;
  for (int k = 0; k < copies; ++k) {
    out += apply_axis(op, v, stride);
    stride *= d;
  }
  return out;
}

int copies_for_dim(Eigen::Index total, int d, const char* what) {
  Eigen::Index acc = 1;
  int copies = 0;
  while (acc < total) {
    acc *= d;
    ++copies;
  }
  if (acc != total) throw ShapeError(std::string(what) + " is not a tensor power of the system");
  return std::max(copies, 1);
}

double pow_int(double base, int n) {
  double out = 1.0;
  for (int k = 0; k < n; ++k) out *= base;
  return out;
}

std::string occupation_label(const std::vector<int>& occupation) {
  std::string out = "Phi[";
  for (std::size_t k = 0; k < occupation.size(); ++k) {
    if (k) out += ",";
    out += std::to_string(occupation[k]);
  }
  return out + "]";
}

// <a|b> slot by slot when both states tile the copies identically.
std::optional<Complex> aligned_inner(const ProductState& a, const ProductState& b) {
  struct Slot {
    const Vector* column;
    int copies;
  };
  auto expand = [](const ProductState& s) {
    std::vector<Slot> slots;
    for (const auto& f : s.factors)
      for (int k = 0; k < f.repeat; ++k) slots.push_back({&f.column, f.copies});
    return slots;
  };
  std::vector<Slot> sa = expand(a), sb = expand(b);
  if (sa.size() != sb.size()) return std::nullopt;
  Complex prod = 1.0;
  for (std::size_t k = 0; k < sa.size(); ++k) {
    if (sa[k].copies != sb[k].copies) return std::nullopt;
    prod *= sa[k].column->dot(*sb[k].column);
  }
  return prod;
}

void validate_product_state(const ProductState& psi, const Hamiltonian& h, double* worst) {
  const double h_scale = kernel::hs_norm(h.matrix());
  double energy = 0.0;
  for (const auto& f : psi.factors) {
    if (f.copies < 1 || f.repeat < 1) throw ValidationError("product factor with nonpositive copies");
    const double norm_err = std::abs(f.column.norm() - 1.0);
    if (norm_err > 1e-10) throw ValidationError("product factor is not normalized");
    Vector hv = apply_extensive(h.matrix(), f.column, f.copies);
    const double e = f.column.dot(hv).real();
    const double resid = (hv - e * f.column).norm();
    const double tol = 1e-8 * std::max(1.0, f.copies * h_scale);
    if (resid > tol)
      throw ValidationError("product factor is not an eigenvector of the extensive Hamiltonian");
    if (worst) *worst = std::max(*worst, std::max(norm_err, resid));
    energy += e * f.repeat;
  }
  if (std::abs(energy - psi.energy) > 1e-8 * std::max(1.0, std::abs(energy)))
    throw ValidationError("product state energy does not match its factors");
}

}  // namespace

int ProductState::total_copies() const {
  int total = 0;
  for (const auto& f : factors) total += f.copies * f.repeat;
  return total;
}

double ProductState::overlap(const Matrix& rho) const {
  double prod = 1.0;
  for (const auto& f : factors) {
    Vector w = kernel::apply_tensor_power(rho, f.column, f.copies);
    const double o = f.column.dot(w).real();
    prod *= pow_int(o, f.repeat);
  }
  return prod;
}

Vector ProductState::materialize(int d) const {
  const int total = total_copies();
  if (total < 1) throw ValidationError("cannot materialize an empty product state");
  double dims = 1.0;
  for (int k = 0; k < total; ++k) {
    dims *= d;
    if (dims > static_cast<double>(kernel::max_dim()))
      throw SizeLimitError("product state exceeds the dense dimension cap");
  }
  Vector out;
  bool first = true;
  for (const auto& f : factors)
    for (int k = 0; k < f.repeat; ++k) {
      out = first ? f.column : kernel::tensor_product_vec(out, f.column);
      first = false;
    }
  return out;
}

int total_copies(const QuartetSpec& spec) {
  if (spec.variant == Variant::A) return 2 * spec.m * spec.M + spec.psi0.total_copies();
  return spec.m * spec.psi0.total_copies() + spec.m_prime * spec.psi0p.total_copies();
}

Vector antisym_state(const std::vector<Vector>& basis) {
  const int r = static_cast<int>(basis.size());
  if (r < 1) throw ValidationError("antisymmetrizer needs at least one vector");
  const Eigen::Index d = basis[0].size();
  for (int i = 0; i < r; ++i) {
    if (basis[i].size() != d) throw ShapeError("antisymmetrizer vectors differ in dimension");
    for (int j = 0; j <= i; ++j) {
      const double expected = (i == j) ? 1.0 : 0.0;
      if (std::abs(basis[i].dot(basis[j]) - Complex(expected)) > 1e-10)
        throw ValidationError("antisymmetrizer vectors are not orthonormal");
    }
  }
  double total = 1.0;
  for (int k = 0; k < r; ++k) {
    total *= static_cast<double>(d);
    kernel::require_dim(static_cast<std::size_t>(total), "antisymmetrized state");
  }

  std::vector<int> perm(r);
  for (int i = 0; i < r; ++i) perm[i] = i;
  Vector out;
  bool first = true;
  double factorial = 1.0;
  for (int k = 2; k <= r; ++k) factorial *= k;
  do {
    int inversions = 0;
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j)
        if (perm[i] > perm[j]) ++inversions;
    const double sign = (inversions % 2 == 0) ? 1.0 : -1.0;
    Vector term = basis[perm[0]];
    for (int k = 1; k < r; ++k) term = kernel::tensor_product_vec(term, basis[perm[k]]);
    if (first) {
      out = sign * term;
      first = false;
    } else {
      out += sign * term;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  out /= std::sqrt(factorial);
  if (std::abs(out.norm() - 1.0) > 1e-8)
    throw ValidationError("antisymmetrized state failed to normalize");
  return out;
}

namespace {

// Determinant state over the level-j eigenline of one block: the r columns
// iota(e_i ⊗ phi_j) fill the irrep factor, so the result is a joint eigenvector
// of the extensive Hamiltonian (value r * eps) and of every extensive charge.
struct ChiState {
  Vector column;  // on d^r
  double eps = 0.0;  // single-copy energy
};

ChiState chi_for(const BlockDecomposition& decomp, const BlockOperator& h_blocks, int block,
                 int level, const Matrix* level_basis = nullptr) {
  const Block& b = decomp.blocks[static_cast<std::size_t>(block)];
  ChiState chi;
  Vector phi;
  if (level_basis) {
    phi = level_basis->col(level);
    chi.eps = phi.dot(h_blocks.components[static_cast<std::size_t>(block)] * phi).real();
  } else {
    kernel::EigenDecomposition eig =
        kernel::hermitian_eig(h_blocks.components[static_cast<std::size_t>(block)]);
    phi = eig.eigenvectors.col(level);
    chi.eps = eig.eigenvalues[level];
  }
  std::vector<Vector> filled;
  filled.reserve(static_cast<std::size_t>(b.r));
  for (int i = 0; i < b.r; ++i) filled.push_back(b.isometry.middleCols(i * b.m, b.m) * phi);
  chi.column = antisym_state(filled);
  return chi;
}

}  // namespace

Vector phi_state(const BlockDecomposition& decomp, const BlockOperator& h_blocks,
                 const std::vector<int>& occupation) {
  std::size_t levels = 0;
  long long unit_copies = 1;
  for (const auto& b : decomp.blocks) {
    levels += static_cast<std::size_t>(b.m);
    unit_copies *= b.r;
  }
  if (occupation.size() != levels)
    throw ShapeError("occupation length must match the number of (block, level) slots");
  int total_units = 0;
  for (int n : occupation) {
    if (n < 0) throw ValidationError("occupation numbers must be nonnegative");
    total_units += n;
  }
  if (total_units < 1) throw ValidationError("occupation must fill at least one unit");

  Vector out;
  bool first = true;
  std::size_t k = 0;
  for (std::size_t bi = 0; bi < decomp.blocks.size(); ++bi) {
    const Block& b = decomp.blocks[bi];
    for (int level = 0; level < b.m; ++level, ++k) {
      if (occupation[k] == 0) continue;
      ChiState chi = chi_for(decomp, h_blocks, static_cast<int>(bi), level);
      const int repeat = occupation[k] * static_cast<int>(unit_copies / b.r);
      for (int rep = 0; rep < repeat; ++rep) {
        out = first ? chi.column : kernel::tensor_product_vec(out, chi.column);
        first = false;
      }
    }
  }
  return out;
}

double virtual_beta(const QuantumState& rho, const Vector& psi0, const Vector& psi1,
                    const Matrix& h_ext) {
  kernel::require_square(h_ext, "extensive Hamiltonian");
  if (psi0.size() != h_ext.rows() || psi1.size() != h_ext.rows())
    throw ShapeError("virtual temperature vectors must match the Hamiltonian dimension");
  const int copies = copies_for_dim(h_ext.rows(), rho.dim(), "virtual temperature pair");
  const double h_scale = std::max(1.0, kernel::hs_norm(h_ext));
  double energy[2];
  double surprisal[2];
  const Vector* psis[2] = {&psi0, &psi1};
  for (int i = 0; i < 2; ++i) {
    const Vector& psi = *psis[i];
    if (std::abs(psi.norm() - 1.0) > 1e-10)
      throw ValidationError("virtual temperature vectors must be normalized");
    Vector hv = h_ext * psi;
    energy[i] = psi.dot(hv).real();
    if ((hv - energy[i] * psi).norm() > 1e-8 * h_scale)
      throw ValidationError("virtual temperature vectors must be energy eigenstates");
    Vector rv = kernel::apply_tensor_power(rho.matrix(), psi, copies);
    const double g = psi.dot(rv).real();
    if (g <= 0.0) throw DomainError("virtual temperature needs strictly positive overlaps");
    surprisal[i] = -std::log(g);
  }
  const double de = energy[1] - energy[0];
  if (std::abs(de) <= 1e-12 * std::max(1.0, std::max(std::abs(energy[0]), std::abs(energy[1]))))
    throw DomainError("virtual temperature is undefined for a degenerate pair");
  return (surprisal[1] - surprisal[0]) / de;
}

namespace {

std::vector<std::pair<std::string, Matrix>> character_projectors(const SymmetryModel& model) {
  const int n = model.order;
  const Matrix t = model.elements[1];
  std::vector<Matrix> t_pow(static_cast<std::size_t>(n));
  t_pow[0] = kernel::identity(model.dim);
  for (int j = 1; j < n; ++j) t_pow[static_cast<std::size_t>(j)] = t_pow[static_cast<std::size_t>(j - 1)] * t;

  std::vector<std::pair<std::string, Matrix>> out;
  auto emit = [&](const std::string& label, const Matrix& p) {
    if (kernel::hs_norm(p) > 1e-9) out.emplace_back(label, p);
  };

  if (model.kind == Kind::cyclic) {
    for (int k = 0; k < n; ++k) {
      Matrix p = Matrix::Zero(model.dim, model.dim);
      for (int j = 0; j < n; ++j) {
        const double angle = -2.0 * M_PI * k * j / n;
        p += std::exp(Complex(0.0, angle)) * t_pow[static_cast<std::size_t>(j)];
      }
      p /= n;
      emit("sector[w" + std::to_string(k) + "]", p);
    }
    return out;
  }

  const Matrix r = model.elements[static_cast<std::size_t>(n)];
  const int group = 2 * n;
  auto one_dim = [&](const std::string& label, double rot_sign, double ref_sign) {
    Matrix p = Matrix::Zero(model.dim, model.dim);
    for (int j = 0; j < n; ++j) {
      const double chi_t = (rot_sign < 0.0 && j % 2 == 1) ? -1.0 : 1.0;
      p += chi_t * t_pow[static_cast<std::size_t>(j)];
      p += chi_t * ref_sign * t_pow[static_cast<std::size_t>(j)] * r;
    }
    p /= group;
    emit(label, p);
  };
  one_dim("sector[a1]", 1.0, 1.0);
  one_dim("sector[a2]", 1.0, -1.0);
  if (n % 2 == 0) {
    one_dim("sector[b1]", -1.0, 1.0);
    one_dim("sector[b2]", -1.0, -1.0);
  }
  const int pairs = (n - 1) / 2;
  for (int k = 1; k <= pairs; ++k) {
    Matrix p = Matrix::Zero(model.dim, model.dim);
    for (int j = 0; j < n; ++j)
      p += 2.0 * std::cos(2.0 * M_PI * k * j / n) * t_pow[static_cast<std::size_t>(j)];
    p *= 2.0 / group;
    emit("sector[e" + std::to_string(k) + "]", p);
  }
  return out;
}

std::vector<std::pair<std::string, Matrix>> eigenprojectors(const Matrix& op, double cluster_tol) {
  kernel::EigenDecomposition eig = kernel::hermitian_eig(op);
  const int d = static_cast<int>(eig.eigenvalues.size());
  const double spread = eig.eigenvalues[d - 1] - eig.eigenvalues[0];
  const double gap = cluster_tol * std::max(1.0, spread);
  std::vector<std::pair<std::string, Matrix>> out;
  int start = 0;
  int index = 0;
  for (int k = 1; k <= d; ++k) {
    if (k == d || eig.eigenvalues[k] - eig.eigenvalues[k - 1] > gap) {
      Matrix v = eig.eigenvectors.middleCols(start, k - start);
      out.emplace_back("[" + std::to_string(index) + "]", Matrix(v * v.adjoint()));
      start = k;
      ++index;
    }
  }
  return out;
}

}  // namespace

std::vector<Matrix> fit_charges(const SymmetryModel& model) {
  switch (model.kind) {
    case Kind::u1:
    case Kind::su2:
      return model.charges;
    case Kind::cyclic:
    case Kind::dihedral: {
      std::vector<Matrix> charges;
      for (auto& labeled : character_projectors(model)) charges.push_back(std::move(labeled.second));
      return charges;
    }
    case Kind::time_reversal:
    case Kind::trivial:
      return {};
  }
  return {};
}

std::vector<std::pair<std::string, Matrix>> omega_candidates(const SymmetryModel& model,
                                                             const Hamiltonian& h, int M) {
  symmetry::validate_model(model);
  if (h.dim() != model.dim) throw ShapeError("Hamiltonian dimension does not match the model");
  if (M != 1 && M != 2) throw ValidationError("projector candidates exist for one or two copies");

  std::vector<std::pair<std::string, Matrix>> raw;
  const bool lie = model.kind == Kind::u1 || model.kind == Kind::su2;
  if (M == 1) {
    for (auto& [suffix, p] : eigenprojectors(h.matrix(), 1e-9))
      raw.emplace_back("energy" + suffix, std::move(p));
    if (model.kind == Kind::cyclic || model.kind == Kind::dihedral)
      for (auto& [label, p] : character_projectors(model)) raw.emplace_back(label, std::move(p));
  } else if (lie) {
    Matrix casimir = symmetry::casimir_two_copy(model);
    for (auto& [suffix, p] : eigenprojectors(casimir, 1e-8))
      raw.emplace_back("casimir" + suffix, std::move(p));
  }

  const Matrix h_ext = kernel::extensive_sum(h.matrix(), M);
  const double h_scale = std::max(1.0, kernel::hs_norm(h_ext));
  SymmetryModel powered = (M == 1) ? model : symmetry::tensor_power_model(model, M);
  const Eigen::Index dM = h_ext.rows();

  std::vector<std::pair<std::string, Matrix>> out;
  for (auto& [label, p] : raw) {
    const double rank = p.trace().real();
    if (rank < 0.5 || rank > static_cast<double>(dM) - 0.5) continue;  // trivial projector
    if (kernel::hs_norm(h_ext * p - p * h_ext) > 1e-9 * h_scale) continue;
    if (!symmetry::is_symmetry_respecting(p, powered).respects) continue;
    out.emplace_back(label, std::move(p));
  }
  return out;
}

QuartetUnitary build_quartet_unitary(const QuartetSpec& spec, const Hamiltonian& h_single,
                                     int dense_limit) {
  const int d = spec.dim;
  if (d < 2 || h_single.dim() != d) throw ShapeError("quartet dimension does not match the Hamiltonian");
  if (spec.m < 0 || spec.m_prime < 0) throw ValidationError("quartet powers must be nonnegative");

  QuartetUnitary result;
  result.spec = spec;
  double worst = 0.0;

  validate_product_state(spec.psi0, h_single, &worst);
  validate_product_state(spec.psi1, h_single, &worst);
  if (spec.psi0.total_copies() != spec.psi1.total_copies())
    throw ShapeError("quartet pair must live on the same number of copies");
  const double de = spec.psi1.energy - spec.psi0.energy;

  double eps = 0.0;
  if (spec.variant == Variant::A) {
    if (spec.M < 1) throw ValidationError("variant A needs a projector copy count");
    if (de <= 1e-12) throw DomainError("quartet pair must have a strict energy gap");
    double dM = 1.0;
    for (int k = 0; k < spec.M; ++k) dM *= d;
    if (spec.P.rows() != static_cast<Eigen::Index>(dM) || spec.P.cols() != spec.P.rows())
      throw ShapeError("projector dimension must be the copy-count tensor power");
    const Matrix p = kernel::require_hermitian(spec.P, "quartet projector");
    const double p_scale = std::max(1.0, kernel::hs_norm(p));
    const double idem = kernel::hs_norm(p * p - p);
    if (idem > 1e-9 * p_scale) throw ValidationError("quartet projector is not idempotent");
    const Matrix h_m = kernel::extensive_sum(h_single.matrix(), spec.M);
    const double comm = kernel::hs_norm(h_m * p - p * h_m);
    if (comm > 1e-9 * std::max(1.0, kernel::hs_norm(h_m)))
      throw CommutationError("quartet projector must commute with the extensive Hamiltonian");
    worst = std::max(worst, std::max(idem, comm));
    eps = de;
  } else {
    if (spec.m + spec.m_prime < 1) throw ValidationError("variant B needs at least one power");
    if (de <= 1e-12) throw DomainError("quartet pair must have a strict energy gap");
    if (spec.m_prime > 0) {
      validate_product_state(spec.psi0p, h_single, &worst);
      validate_product_state(spec.psi1p, h_single, &worst);
      if (spec.psi0p.total_copies() != spec.psi1p.total_copies())
        throw ShapeError("quartet second pair must live on the same number of copies");
      const double dep = spec.psi1p.energy - spec.psi0p.energy;
      if (dep < -1e-12) throw DomainError("quartet second pair must not have an inverted gap");
      if (std::abs(dep) <= 1e-12) {
        std::optional<Complex> inner = aligned_inner(spec.psi0p, spec.psi1p);
        if (inner && std::abs(*inner) > 1e-8)
          throw ValidationError("degenerate quartet pair must be orthogonal");
      }
      eps = spec.m * de - spec.m_prime * dep;
    } else {
      eps = spec.m * de;
    }
  }

  const int n_total = total_copies(spec);
  if (n_total < 1) throw ValidationError("quartet acts on at least one copy");
  double dim_total = 1.0;
  for (int k = 0; k < n_total; ++k) dim_total *= d;

  if (dim_total <= static_cast<double>(dense_limit)) {
    const Eigen::Index dn = static_cast<Eigen::Index>(dim_total);
    const Matrix h_n = kernel::extensive_sum(h_single.matrix(), n_total);
    const double h_scale = std::max(1.0, kernel::hs_norm(h_n));
    Matrix o = kernel::identity(static_cast<int>(dn));

    Matrix r_factor[2][2];
    if (spec.variant == Variant::A && spec.m > 0) {
      double dM = 1.0;
      for (int k = 0; k < spec.M; ++k) dM *= d;
      const Matrix t = kernel::swap_operator(static_cast<int>(dM));
      const Matrix two = kernel::identity(static_cast<int>(dM * dM));
      const Matrix pq =
          kernel::tensor_product(spec.P, kernel::identity(static_cast<int>(dM)) - spec.P);
      const Matrix minus = two - t;
      const Matrix plus = two + t;
      r_factor[0][0] = 0.5 * minus * pq * minus;
      r_factor[0][1] = 0.5 * minus * pq * plus;
      r_factor[1][0] = 0.5 * plus * pq * minus;
      r_factor[1][1] = 0.5 * plus * pq * plus;
    }
    Vector v0 = spec.psi0.materialize(d);
    Vector v1 = spec.psi1.materialize(d);
    Vector v0p, v1p;
    if (spec.variant == Variant::B && spec.m_prime > 0) {
      v0p = spec.psi0p.materialize(d);
      v1p = spec.psi1p.materialize(d);
    }
    const Vector* v[2] = {&v0, &v1};
    const Vector* vp[2] = {&v0p, &v1p};

    auto c_of = [&](int i, int j) {
      if (spec.variant == Variant::A) {
        Matrix outer = (*v[i]) * v[j]->adjoint();
        if (spec.m == 0) return outer;
        return kernel::tensor_product(kernel::tensor_power(r_factor[i][j], spec.m), outer);
      }
      Matrix left = kernel::tensor_power(Matrix((*v[i]) * v[j]->adjoint()), spec.m);
      if (spec.m_prime == 0) return left;
      Matrix right = kernel::tensor_power(Matrix((*vp[1 - i]) * vp[1 - j]->adjoint()), spec.m_prime);
      return kernel::tensor_product(left, right);
    };

    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        Matrix c = c_of(i, j);
        const double sign = (i == j) ? -1.0 : 1.0;
        o += sign * c;
        Matrix adj_gap = c.adjoint() - c_of(j, i);
        worst = std::max(worst, kernel::hs_norm(adj_gap));
        const double ladder =
            kernel::hs_norm(h_n * c - c * h_n - (eps * (i - j)) * c) / h_scale;
        if (ladder > 1e-8)
          throw ValidationError("quartet block is not an eigenoperator of the Hamiltonian ladder");
        worst = std::max(worst, ladder);
      }

    const double o_scale = std::max(1.0, kernel::hs_norm(o));
    const double herm = kernel::hs_norm(o - o.adjoint());
    const double unit = kernel::hs_norm(o * o.adjoint() - kernel::identity(static_cast<int>(dn)));
    if (herm > 1e-10 * o_scale) throw ValidationError("quartet unitary is not Hermitian");
    if (unit > 1e-10 * o_scale) throw UnitarityError("quartet unitary failed the unitarity check");
    worst = std::max(worst, std::max(herm, unit) / o_scale);
    result.dense = std::move(o);
  }

  result.algebra_residual = worst;
  return result;
}

double work_closed_form(const QuartetSpec& spec, const QuantumState& rho) {
  if (rho.dim() != spec.dim) throw ShapeError("state dimension does not match the quartet");
  const double de = spec.psi1.energy - spec.psi0.energy;
  const double g0 = spec.psi0.overlap(rho.matrix());
  const double g1 = spec.psi1.overlap(rho.matrix());
  if (spec.variant == Variant::A) {
    const Matrix rho_m = kernel::tensor_power(rho.matrix(), spec.M);
    const Matrix q = kernel::identity(static_cast<int>(rho_m.rows())) - spec.P;
    const double p = (spec.P * rho_m).trace().real();
    const double cross = (spec.P * rho_m * q * rho_m).trace().real();
    const double t = std::max(cross, 0.0);
    const double r00 = p * (1.0 - p) - t;
    const double r11 = p * (1.0 - p) + t;
    return de * (pow_int(r11, spec.m) * g1 - pow_int(r00, spec.m) * g0);
  }
  const double dep = spec.m_prime > 0 ? spec.psi1p.energy - spec.psi0p.energy : 0.0;
  const double g0p = spec.m_prime > 0 ? spec.psi0p.overlap(rho.matrix()) : 1.0;
  const double g1p = spec.m_prime > 0 ? spec.psi1p.overlap(rho.matrix()) : 1.0;
  const double eps = spec.m * de - spec.m_prime * dep;
  return eps * (pow_int(g1, spec.m) * pow_int(g0p, spec.m_prime) -
                pow_int(g0, spec.m) * pow_int(g1p, spec.m_prime));
}

std::string verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::gge_consistent: return "gge_consistent";
    case Verdict::witness_found: return "witness_found";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

struct Unit {
  std::string label;
  Vector chi;
  int r = 1;
  int base_repeat = 1;  // repeats of chi in one unit; one unit spans scale * prod_b r_b copies
  double unit_energy = 0.0;
  double chi_overlap = 1.0;  // <chi| rho^{⊗r} |chi>
  std::vector<double> charge;
};

std::vector<Unit> build_units(const SymmetryModel& model, const BlockDecomposition& decomp,
                              const BlockOperator& h_blocks, const QuantumState& rho,
                              std::vector<std::pair<std::string, double>>& log) {
  long long unit_copies = 1;
  for (const auto& b : decomp.blocks) unit_copies *= b.r;
  // Repeating a unit `scale` times trivializes its one-dimensional character:
  // cyclic characters are order-n roots of unity, and every dihedral phase
  // (including the determinant of a planar irrep) squares to one.  Keeping the
  // exponent minimal keeps pair overlaps, and with them the detectable work,
  // as large as possible.
  int scale = 1;
  if (model.kind == Kind::cyclic) scale = static_cast<int>(model.elements.size());
  if (model.kind == Kind::dihedral) scale = 2;

  std::vector<Unit> units;
  for (std::size_t bi = 0; bi < decomp.blocks.size(); ++bi) {
    const Block& b = decomp.blocks[bi];
    std::optional<Matrix> level_basis;
    if (model.kind == Kind::time_reversal) {
      // Real eigenbasis in the conjugation frame keeps the pair states fixed
      // under time reversal.
      Matrix frame = model.conjugation_basis.size() > 0
                         ? model.conjugation_basis
                         : kernel::identity(model.dim);
      Matrix rotated = frame.adjoint() * h_blocks.components[bi] * frame;
      Eigen::SelfAdjointEigenSolver<RealMatrix> solver(rotated.real());
      level_basis = frame * solver.eigenvectors().cast<Complex>();
    }
    for (int level = 0; level < b.m; ++level) {
      Unit unit;
      unit.label = b.label + ":" + std::to_string(level);
      try {
        ChiState chi =
            chi_for(decomp, h_blocks, static_cast<int>(bi),
                    level, level_basis ? &*level_basis : nullptr);
        unit.chi = std::move(chi.column);
        unit.r = b.r;
        unit.base_repeat = static_cast<int>(unit_copies / b.r) * scale;
        unit.unit_energy = static_cast<double>(unit_copies) * scale * chi.eps;
        Vector w = kernel::apply_tensor_power(rho.matrix(), unit.chi, b.r);
        unit.chi_overlap = unit.chi.dot(w).real();
      } catch (const SizeLimitError&) {
        log.emplace_back("unit " + unit.label + " skipped: dimension cap", 0.0);
        continue;
      }
      if (unit.chi_overlap <= 0.0) {
        log.emplace_back("unit " + unit.label + " skipped: vanishing overlap", 0.0);
        continue;
      }
      // One chi carries the trace of the charge over the filled irrep factor;
      // a unit repeats it base_repeat times.
      for (const Matrix& q : model.charges) {
        const double per_chi = (b.isometry.adjoint() * q * b.isometry).trace().real() / b.m;
        unit.charge.push_back(per_chi * unit.base_repeat);
      }
      units.push_back(std::move(unit));
    }
  }
  return units;
}

struct PairRecord {
  ProductState lo, hi;
  double d_energy = 0.0;
  double d_entropy = 0.0;  // S(hi) - S(lo), S = -log overlap
  double g_lo = 0.0, g_hi = 0.0;
  std::string label;
};

struct Occupation {
  std::vector<int> n;
  double energy = 0.0;
  double log_overlap = 0.0;
  std::vector<double> charge;
};

ProductState occupation_state(const std::vector<Unit>& units, const Occupation& occ) {
  ProductState psi;
  for (std::size_t k = 0; k < units.size(); ++k) {
    if (occ.n[k] == 0) continue;
    ProductState::Factor f;
    f.column = units[k].chi;
    f.copies = units[k].r;
    f.repeat = occ.n[k] * units[k].base_repeat;
    psi.factors.push_back(std::move(f));
  }
  psi.energy = occ.energy;
  psi.label = occupation_label(occ.n);
  return psi;
}

std::vector<PairRecord> enumerate_pairs(const std::vector<Unit>& units, int max_units,
                                        std::size_t pair_cap) {
  const std::size_t k_units = units.size();
  std::vector<Occupation> occupations;
  std::vector<int> current(k_units, 0);
  std::function<void(std::size_t, int)> recurse = [&](std::size_t idx, int remaining) {
    if (idx == k_units) {
      if (remaining == 0) {
        Occupation occ;
        occ.n = current;
        for (std::size_t k = 0; k < k_units; ++k) {
          occ.energy += current[k] * units[k].unit_energy;
          occ.log_overlap +=
              current[k] * units[k].base_repeat * std::log(units[k].chi_overlap);
          for (std::size_t c = 0; c < units[k].charge.size(); ++c) {
            if (occ.charge.size() <= c) occ.charge.resize(units[k].charge.size(), 0.0);
            occ.charge[c] += current[k] * units[k].charge[c];
          }
        }
        occupations.push_back(std::move(occ));
      }
      return;
    }
    for (int n = 0; n <= remaining; ++n) {
      current[idx] = n;
      recurse(idx + 1, remaining - n);
    }
    current[idx] = 0;
  };

  std::vector<PairRecord> pairs;
  double energy_scale = 1.0;
  for (const auto& u : units) energy_scale = std::max(energy_scale, std::abs(u.unit_energy));
  const double tol_e = 1e-9 * energy_scale * max_units;

  for (int total = 1; total <= max_units && pairs.size() < pair_cap; ++total) {
    const std::size_t first = occupations.size();
    recurse(0, total);
    for (std::size_t a = first; a < occupations.size() && pairs.size() < pair_cap; ++a)
      for (std::size_t b = a + 1; b < occupations.size() && pairs.size() < pair_cap; ++b) {
        const Occupation& oa = occupations[a];
        const Occupation& ob = occupations[b];
        bool matched = true;
        for (std::size_t c = 0; c < oa.charge.size() && matched; ++c) {
          const double ref = std::max({1.0, std::abs(oa.charge[c]), std::abs(ob.charge[c])});
          matched = std::abs(oa.charge[c] - ob.charge[c]) <= 1e-9 * ref;
        }
        if (!matched) continue;
        const Occupation* lo = &oa;
        const Occupation* hi = &ob;
        if (hi->energy < lo->energy) std::swap(lo, hi);
        double d_energy = hi->energy - lo->energy;
        double d_entropy = -hi->log_overlap + lo->log_overlap;
        if (d_energy <= tol_e) {
          d_energy = 0.0;
          if (d_entropy < 0.0) {  // orient a degenerate pair toward growing surprisal
            std::swap(lo, hi);
            d_entropy = -d_entropy;
          }
          if (d_entropy <= 1e-12) continue;
        }
        PairRecord rec;
        rec.lo = occupation_state(units, *lo);
        rec.hi = occupation_state(units, *hi);
        rec.d_energy = d_energy;
        rec.d_entropy = d_entropy;
        rec.g_lo = std::exp(lo->log_overlap);
        rec.g_hi = std::exp(hi->log_overlap);
        rec.label = rec.lo.label + ">" + rec.hi.label;
        pairs.push_back(std::move(rec));
      }
  }
  return pairs;
}

}  // namespace

ProbeReport cp_probe(const QuantumState& rho, const Hamiltonian& h, const SymmetryModel& model,
                     const ProbeBudget& budget, double fit_tolerance, std::uint64_t seed) {
  symmetry::validate_model(model);
  if (h.dim() != model.dim || rho.dim() != model.dim)
    throw ShapeError("state, Hamiltonian and model dimensions must agree");
  if (!rho.positive_definite())
    throw DomainError("the probe requires a positive definite state");
  if (!symmetry::is_symmetry_respecting(h.matrix(), model).respects)
    throw CommutationError("the Hamiltonian must respect the symmetry");

  std::vector<Matrix> charges = fit_charges(model);
  {
    std::vector<Matrix> span;
    span.push_back(kernel::identity(model.dim));
    for (const Matrix& q : charges) span.push_back(q);
    const double residual = kernel::project_onto_span(h.matrix(), span).second;
    if (residual <= fit_tolerance * std::max(1.0, kernel::hs_norm(h.matrix())))
      throw ValidationError(
          "Hamiltonian lies in the span of the conserved charges; every state the symmetry "
          "allows is already passive, so the probe is vacuous");
  }

  ProbeReport report;
  report.fit = gge::gge_fit(rho, h, charges, fit_tolerance);
  report.log.emplace_back("fit residual", report.fit.residual);
  report.log.emplace_back("fit beta", report.fit.params.beta);

  BlockDecomposition decomp = symmetry::block_decompose(model, seed);
  BlockOperator h_blocks = symmetry::blocks_of(h.matrix(), decomp);
  std::vector<Unit> units = build_units(model, decomp, h_blocks, rho, report.log);
  std::vector<PairRecord> pairs = enumerate_pairs(units, 3, 120);
  report.log.emplace_back("pairs enumerated", static_cast<double>(pairs.size()));

  const PairRecord* eigenpair = nullptr;
  for (const PairRecord& pair : pairs) {
    if (pair.d_energy <= 0.0) continue;
    if (!eigenpair) {
      eigenpair = &pair;
      continue;
    }
    const int cur = pair.lo.total_copies();
    const int best = eigenpair->lo.total_copies();
    if (cur < best || (cur == best && pair.d_energy > eigenpair->d_energy)) eigenpair = &pair;
  }

  std::optional<Witness> witness;
  auto certify = [&](QuartetSpec&& spec, double work, const std::string& description) {
    QuartetUnitary built = build_quartet_unitary(spec, h, 256);
    Witness w;
    w.spec = std::move(built.spec);
    w.work = work;
    w.copies = total_copies(w.spec);
    w.description = description;
    witness = std::move(w);
  };

  // Projector probes: a visible commutator with rho^{⊗M} powers the swap quartet.
  for (int m_copies = 1; m_copies <= 2 && !witness; ++m_copies) {
    std::vector<std::pair<std::string, Matrix>> candidates =
        omega_candidates(model, h, m_copies);
    if (candidates.empty()) continue;
    const Matrix rho_m = kernel::tensor_power(rho.matrix(), m_copies);
    for (auto& [label, p] : candidates) {
      const double delta = kernel::hs_norm(rho_m * p - p * rho_m);
      report.log.emplace_back("A1 " + label + " delta", delta);
      if (delta <= kCommutatorTrigger || !eigenpair) continue;

      const Matrix q = kernel::identity(static_cast<int>(rho_m.rows())) - p;
      const double pop = (p * rho_m).trace().real();
      const double t = std::max(((p * rho_m * q * rho_m).trace()).real(), 0.0);
      const double r00 = pop * (1.0 - pop) - t;
      const double r11 = pop * (1.0 - pop) + t;
      const double g0 = eigenpair->g_lo;
      const double g1 = eigenpair->g_hi;
      const double de = eigenpair->d_energy;

      double predicted;
      if (de * (g1 - g0) > kWorkThreshold)
        predicted = 0.0;
      else if (r00 <= 0.0)
        predicted = r11 > 0.0 ? 1.0 : budget.m_max + 1.0;
      else if (r11 <= r00)
        predicted = budget.m_max + 1.0;
      else
        predicted = std::ceil(std::log(g0 / g1) / std::log(r11 / r00));
      predicted = std::min(std::max(predicted, 0.0), budget.m_max + 1.0);
      report.log.emplace_back("A1 " + label + " predicted m", predicted);

      for (int m = 0; m <= budget.m_max && !witness; ++m) {
        const double work = de * (pow_int(r11, m) * g1 - pow_int(r00, m) * g0);
        report.log.emplace_back("A1 " + label + " m=" + std::to_string(m), work);
        if (work > kWorkThreshold) {
          QuartetSpec spec;
          spec.variant = Variant::A;
          spec.dim = model.dim;
          spec.m = m;
          spec.M = m_copies;
          spec.P = p;
          spec.psi0 = eigenpair->lo;
          spec.psi1 = eigenpair->hi;
          certify(std::move(spec),
                  work, "A1 " + label + " M=" + std::to_string(m_copies) +
                            " m=" + std::to_string(m) + " pair " + eigenpair->label);
        }
      }
      if (witness) break;
    }
  }

  // Occupation-pair probes: matched charges with mismatched virtual temperature.
  if (!witness) {
    for (const PairRecord& pair : pairs) {
      if (pair.d_energy <= 0.0) {
        report.log.emplace_back("A2 degenerate " + pair.label + " dS", pair.d_entropy);
        continue;
      }
      report.log.emplace_back("A2 beta " + pair.label, pair.d_entropy / pair.d_energy);
    }
    for (const PairRecord& pair : pairs) {
      if (witness) break;
      if (pair.d_energy <= 0.0) continue;
      const double work = pair.d_energy * (pair.g_hi - pair.g_lo);
      report.log.emplace_back("A2 B(1,0) " + pair.label, work);
      if (work > kWorkThreshold) {
        QuartetSpec spec;
        spec.variant = Variant::B;
        spec.dim = model.dim;
        spec.m = 1;
        spec.m_prime = 0;
        spec.psi0 = pair.lo;
        spec.psi1 = pair.hi;
        certify(std::move(spec), work, "A2 B(1,0) pair " + pair.label);
      }
    }

    if (!witness && !pairs.empty()) {
      struct Combo {
        std::size_t p, pp;
        double mismatch;
      };
      std::vector<Combo> combos;
      for (std::size_t a = 0; a < pairs.size(); ++a) {
        if (pairs[a].d_energy <= 0.0) continue;
        const double beta_a = pairs[a].d_entropy / pairs[a].d_energy;
        for (std::size_t b = 0; b < pairs.size(); ++b) {
          if (a == b) continue;
          const PairRecord& pp = pairs[b];
          double mismatch;
          if (pp.d_energy <= 0.0)
            mismatch = std::numeric_limits<double>::infinity();  // degenerate pair, dS > 0
          else
            mismatch = std::abs(pp.d_entropy / pp.d_energy - beta_a);
          if (mismatch <= 1e-9) continue;
          combos.push_back({a, b, mismatch});
        }
      }
      std::stable_sort(combos.begin(), combos.end(),
                       [](const Combo& x, const Combo& y) { return x.mismatch > y.mismatch; });
      if (combos.size() > 64) combos.resize(64);

      for (const Combo& combo : combos) {
        if (witness) break;
        const PairRecord& p = pairs[combo.p];
        const PairRecord& pp = pairs[combo.pp];
        const double lo_ratio = pp.d_energy / p.d_energy;
        for (int mp = 1; mp <= budget.mprime_max && !witness; ++mp) {
          const int m = static_cast<int>(std::floor(lo_ratio * mp)) + 1;
          if (m > budget.m_max) continue;
          const double eps = m * p.d_energy - mp * pp.d_energy;
          if (eps <= 0.0) continue;
          const double direct = eps * (pow_int(p.g_hi, m) * pow_int(pp.g_lo, mp) -
                                       pow_int(p.g_lo, m) * pow_int(pp.g_hi, mp));
          const std::string stem = "A2 B(" + std::to_string(m) + "," + std::to_string(mp) +
                                   ") " + p.label + "/" + pp.label;
          report.log.emplace_back(stem, direct);
          double swapped = -std::numeric_limits<double>::infinity();
          if (pp.d_energy <= 0.0) {  // both orientations of a degenerate pair are admissible
            swapped = eps * (pow_int(p.g_hi, m) * pow_int(pp.g_hi, mp) -
                             pow_int(p.g_lo, m) * pow_int(pp.g_lo, mp));
            report.log.emplace_back(stem + " exchanged", swapped);
          }
          const bool use_swapped = swapped > direct && swapped > kWorkThreshold;
          const double work = use_swapped ? swapped : direct;
          if (work <= kWorkThreshold) continue;
          QuartetSpec spec;
          spec.variant = Variant::B;
          spec.dim = model.dim;
          spec.m = m;
          spec.m_prime = mp;
          spec.psi0 = p.lo;
          spec.psi1 = p.hi;
          spec.psi0p = use_swapped ? pp.hi : pp.lo;
          spec.psi1p = use_swapped ? pp.lo : pp.hi;
          certify(std::move(spec), work, stem + (use_swapped ? " exchanged" : ""));
        }
      }
    }
  }

  if (witness) {
    report.witness = std::move(witness);
    report.verdict = Verdict::witness_found;
  } else if (report.fit.is_gge) {
    report.verdict = Verdict::gge_consistent;
  } else {
    report.verdict = Verdict::inconclusive;
  }
  return report;
}

}  // namespace ergokit::probe
