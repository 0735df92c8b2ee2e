#include "ergokit/symmetry_reps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <tuple>

namespace ergokit::symmetry {

using kernel::Complex;
using kernel::RealVector;
using states::QuantumState;

std::string kind_name(Kind kind) {
  switch (kind) {
    case Kind::u1: return "u1";
    case Kind::su2: return "su2";
    case Kind::cyclic: return "cyclic";
    case Kind::dihedral: return "dihedral";
    case Kind::time_reversal: return "time-reversal";
    case Kind::trivial: return "trivial";
  }
  throw ValidationError("unknown symmetry kind");
}

Kind kind_from_name(const std::string& name) {
  if (name == "u1") return Kind::u1;
  if (name == "su2") return Kind::su2;
  if (name == "cyclic") return Kind::cyclic;
  if (name == "dihedral") return Kind::dihedral;
  if (name == "time-reversal") return Kind::time_reversal;
  if (name == "trivial") return Kind::trivial;
  throw ValidationError("unknown symmetry kind '" + name + "'");
}

namespace {

Matrix pauli(int axis) {
  Matrix s(2, 2);
  switch (axis) {
    case 0: s << 0, 1, 1, 0; break;
    case 1: s << 0, Complex(0, -1), Complex(0, 1), 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

// Cyclic shift t|j> = |j+1 mod n| and point reflection r|j> = |-j mod n>.
Matrix shift_matrix(int n) {
  Matrix t = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) t((j + 1) % n, j) = 1.0;
  return t;
}

Matrix reflection_matrix(int n) {
  Matrix r = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) r((n - j) % n, j) = 1.0;
  return r;
}

// "prefix-N" -> N, or -1 when the name does not match.
int parse_suffix(const std::string& name, const std::string& prefix) {
  if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) return -1;
  const std::string tail = name.substr(prefix.size());
  if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos) return -1;
  return std::stoi(tail);
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v + 0.0);  // +0.0 collapses -0
  return buf;
}

}  // namespace

SymmetryModel preset(const std::string& name) {
  SymmetryModel model;
  if (name == "su2-dimer") {
    model.kind = Kind::su2;
    model.dim = 4;
    Matrix id2 = Matrix::Identity(2, 2);
    for (int axis : {0, 1, 2}) {
      Matrix s = 0.5 * pauli(axis);
      model.charges.push_back(kernel::tensor_product(s, id2) + kernel::tensor_product(id2, s));
    }
  } else if (name == "u1-qubit") {
    model.kind = Kind::u1;
    model.dim = 2;
    model.charges.push_back(0.5 * pauli(2));
  } else if (int n = parse_suffix(name, "cyclic-"); n > 0) {
    model.kind = Kind::cyclic;
    model.dim = n;
    model.order = n;
    Matrix t = shift_matrix(n);
    Matrix power = Matrix::Identity(n, n);
    for (int k = 0; k < n; ++k) {
      model.elements.push_back(power);
      power = t * power;
    }
  } else if (int n = parse_suffix(name, "dihedral-"); n > 0) {
    model.kind = Kind::dihedral;
    model.dim = n;
    model.order = n;
    Matrix t = shift_matrix(n);
    Matrix refl = reflection_matrix(n);
    Matrix power = Matrix::Identity(n, n);
    for (int k = 0; k < n; ++k) {
      model.elements.push_back(power);
      power = t * power;
    }
    for (int k = 0; k < n; ++k) model.elements.push_back(model.elements[k] * refl);
  } else if (int d = parse_suffix(name, "time-reversal-"); d > 0) {
    model.kind = Kind::time_reversal;
    model.dim = d;
  } else if (int d = parse_suffix(name, "trivial-"); d > 0) {
    model.kind = Kind::trivial;
    model.dim = d;
  } else {
    throw ValidationError("unknown preset '" + name + "'");
  }
  validate_model(model);
  return model;
}

void validate_model(const SymmetryModel& model) {
  if (model.dim <= 0) throw ValidationError("model dimension must be positive");
  kernel::require_dim(static_cast<std::size_t>(model.dim), "model");

  auto check_charge_dims = [&] {
    for (const Matrix& q : model.charges) {
      kernel::require_hermitian(q, "charge");
      if (q.rows() != model.dim) throw ShapeError("charge dimension mismatch");
    }
  };

  switch (model.kind) {
    case Kind::u1: {
      if (model.charges.empty()) throw ValidationError("u1 model needs at least one charge");
      check_charge_dims();
      for (std::size_t i = 0; i < model.charges.size(); ++i) {
        for (std::size_t j = i + 1; j < model.charges.size(); ++j) {
          Matrix comm = model.charges[i] * model.charges[j] - model.charges[j] * model.charges[i];
          if (comm.norm() > 1e-10 * std::max(1.0, model.charges[i].norm() * model.charges[j].norm())) {
            throw CommutationError("u1 charges must commute");
          }
        }
      }
      break;
    }
    case Kind::su2: {
      if (model.charges.size() != 3) throw ValidationError("su2 model needs exactly three charges");
      check_charge_dims();
      for (int a = 0; a < 3; ++a) {
        const Matrix& x = model.charges[a];
        const Matrix& y = model.charges[(a + 1) % 3];
        const Matrix& z = model.charges[(a + 2) % 3];
        Matrix comm = x * y - y * x - Complex(0, 1) * z;
        if (comm.norm() > 1e-10 * std::max(1.0, x.norm() * y.norm())) {
          throw CommutationError("su2 charges must satisfy the angular momentum algebra");
        }
      }
      break;
    }
    case Kind::cyclic:
    case Kind::dihedral: {
      const bool has_reflections = model.kind == Kind::dihedral;
      const int n = model.order;
      if (n <= 0) throw ValidationError("finite model needs a positive order");
      std::size_t expected = has_reflections ? 2 * static_cast<std::size_t>(n) : n;
      if (model.elements.size() != expected) {
        throw ValidationError("finite model element count does not match its order");
      }
      for (const Matrix& f : model.elements) {
        if (f.rows() != model.dim) throw ShapeError("element dimension mismatch");
        kernel::require_unitary(f, "group element");
      }
      Matrix id = Matrix::Identity(model.dim, model.dim);
      if ((model.elements[0] - id).norm() > 1e-10) {
        throw ValidationError("elements[0] must be the identity");
      }
      const Matrix& t = model.elements[n > 1 ? 1 : 0];
      Matrix power = id;
      for (int k = 0; k < n; ++k) {
        if ((model.elements[k] - power).norm() > 1e-10) {
          throw ValidationError("rotation elements must be successive powers of the generator");
        }
        power = t * power;
      }
      if ((power - id).norm() > 1e-10) throw ValidationError("generator order mismatch");
      if (has_reflections) {
        const Matrix& r = model.elements[n];
        if ((r * r - id).norm() > 1e-10) throw ValidationError("reflection must square to one");
        if ((r * t * r - t.adjoint()).norm() > 1e-10) {
          throw ValidationError("reflection must invert the rotation");
        }
        for (int k = 0; k < n; ++k) {
          if ((model.elements[n + k] - model.elements[k] * r).norm() > 1e-10) {
            throw ValidationError("reflection elements must be t^k r");
          }
        }
      }
      break;
    }
    case Kind::time_reversal: {
      if (model.conjugation_basis.size() != 0) {
        if (model.conjugation_basis.rows() != model.dim) {
          throw ShapeError("conjugation basis dimension mismatch");
        }
        kernel::require_unitary(model.conjugation_basis, "conjugation basis");
      }
      break;
    }
    case Kind::trivial:
      break;
  }
}

Matrix conj_in_basis(const Matrix& op, const SymmetryModel& model) {
  if (model.conjugation_basis.size() == 0) return op.conjugate();
  const Matrix& b = model.conjugation_basis;
  return b * (b.adjoint() * op * b).conjugate() * b.adjoint();
}

SymmetryModel tensor_power_model(const SymmetryModel& model, int n) {
  if (n <= 0) throw ValidationError("tensor power needs at least one copy");
  validate_model(model);
  SymmetryModel out;
  out.kind = model.kind;
  out.order = model.order;
  std::size_t dim = 1;
  for (int k = 0; k < n; ++k) dim *= static_cast<std::size_t>(model.dim);
  kernel::require_dim(dim, "model power");
  out.dim = static_cast<int>(dim);
  for (const Matrix& q : model.charges) out.charges.push_back(kernel::extensive_sum(q, n));
  for (const Matrix& f : model.elements) out.elements.push_back(kernel::tensor_power(f, n));
  if (model.conjugation_basis.size() != 0) {
    out.conjugation_basis = kernel::tensor_power(model.conjugation_basis, n);
  }
  return out;
}

namespace {

std::vector<Matrix> symmetry_generators(const SymmetryModel& model) {
  if (model.kind == Kind::u1 || model.kind == Kind::su2) return model.charges;
  return model.elements;
}

// Orthonormal basis of {x : [x, a] = 0 for all generators a}, found as the
// null space of sum_a l_a† l_a with l_a = 1 ⊗ a - a^T ⊗ 1 on col-major vec(x).
std::vector<Matrix> commutant_basis(const std::vector<Matrix>& gens, int d) {
  Matrix quad = Matrix::Zero(d * d, d * d);
  Matrix id = Matrix::Identity(d, d);
  for (const Matrix& raw : gens) {
    Matrix a = raw / std::max(1.0, raw.norm());
    Matrix l = kernel::tensor_product(id, a) - kernel::tensor_product(a.transpose(), id);
    quad += l.adjoint() * l;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(quad);
  if (solver.info() != Eigen::Success) throw ValidationError("commutant eigensolver failed");
  double cutoff = 1e-10 * std::max(1.0, solver.eigenvalues().maxCoeff());
  std::vector<Matrix> basis;
  for (int k = 0; k < solver.eigenvalues().size(); ++k) {
    if (solver.eigenvalues()(k) >= cutoff) continue;
    basis.push_back(Eigen::Map<const Matrix>(solver.eigenvectors().col(k).data(), d, d));
  }
  return basis;
}

Matrix random_commutant_hermitian(const std::vector<Matrix>& basis, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Matrix x = Matrix::Zero(basis.front().rows(), basis.front().cols());
  for (const Matrix& b : basis) x += Complex(gauss(rng), gauss(rng)) * b;
  Matrix herm = (x + x.adjoint()) / 2.0;
  double norm = herm.norm();
  if (norm > 1e-12) herm /= norm;
  return herm;
}

struct LabeledBlock {
  Block block;
  double numeric = 0.0;  // secondary sort key within equal irrep dimension
};

// Irrep-type label read off the factorized generators.
LabeledBlock label_block(const SymmetryModel& model, Block block) {
  LabeledBlock out;
  const int r = block.r;
  const int m = block.m;
  switch (model.kind) {
    case Kind::su2: {
      block.label = (r % 2 == 1) ? "spin" + std::to_string((r - 1) / 2)
                                 : "spin" + std::to_string(r - 1) + "/2";
      out.numeric = (r - 1) / 2.0;
      break;
    }
    case Kind::u1: {
      std::string label = "q=";
      bool first = true;
      for (const Matrix& q : model.charges) {
        double value = (block.isometry.adjoint() * q * block.isometry).trace().real() /
                       static_cast<double>(r * m);
        if (first) out.numeric = value;
        label += (first ? "" : ",") + format_value(value);
        first = false;
      }
      block.label = label;
      break;
    }
    case Kind::cyclic: {
      int k = 0;
      if (model.order > 1) {
        Complex z = (block.isometry.adjoint() * model.elements[1] * block.isometry).trace() /
                    static_cast<double>(r * m);
        double angle = std::arg(z);
        if (angle < 0) angle += 2.0 * M_PI;
        k = static_cast<int>(std::lround(angle * model.order / (2.0 * M_PI))) % model.order;
      }
      block.label = "w" + std::to_string(k);
      out.numeric = k;
      break;
    }
    case Kind::dihedral: {
      const int n = model.order;
      double chi_t = (block.isometry.adjoint() * model.elements[n > 1 ? 1 : 0] * block.isometry)
                         .trace().real() / m;
      double chi_r = (block.isometry.adjoint() * model.elements[n] * block.isometry)
                         .trace().real() / m;
      if (r == 1) {
        if (chi_t > 0) {
          block.label = chi_r > 0 ? "a1" : "a2";
          out.numeric = chi_r > 0 ? 0 : 1;
        } else {
          block.label = chi_r > 0 ? "b1" : "b2";
          out.numeric = chi_r > 0 ? 2 : 3;
        }
      } else {
        double c = std::clamp(chi_t / 2.0, -1.0, 1.0);
        int k = static_cast<int>(std::lround(std::acos(c) * n / (2.0 * M_PI)));
        block.label = "e" + std::to_string(k);
        out.numeric = 10 + k;
      }
      break;
    }
    case Kind::time_reversal:
    case Kind::trivial:
      block.label = "all";
      break;
  }
  out.block = std::move(block);
  return out;
}

}  // namespace

BlockDecomposition block_decompose(const SymmetryModel& model, std::uint64_t seed) {
  validate_model(model);
  const int d = model.dim;

  BlockDecomposition decomp;
  decomp.dim = d;

  if (model.kind == Kind::trivial || model.kind == Kind::time_reversal) {
    Block all;
    all.label = "all";
    all.r = 1;
    all.m = d;
    all.isometry = Matrix::Identity(d, d);
    decomp.blocks.push_back(std::move(all));
    return decomp;
  }

  std::vector<Matrix> gens = symmetry_generators(model);
  std::vector<Matrix> com = commutant_basis(gens, d);
  if (com.empty()) throw DecompositionError("commutant is empty; representation is inconsistent");

  std::string failure = "could not certify a block decomposition";
  for (std::uint64_t attempt = 0; attempt < 6; ++attempt) {
    std::mt19937_64 rng(seed + attempt * 0x9e3779b97f4a7c15ull);
    Matrix x = random_commutant_hermitian(com, rng);
    std::vector<Matrix> probes;
    for (int k = 0; k < 3; ++k) probes.push_back(random_commutant_hermitian(com, rng));

    // Eigenvalue clusters of a generic commutant element are single irrep copies.
    kernel::EigenDecomposition eig = kernel::hermitian_eig(x);
    double spread = eig.eigenvalues.maxCoeff() - eig.eigenvalues.minCoeff();
    double gap_tol = 1e-7 * std::max(1.0, spread);
    std::vector<std::pair<int, int>> clusters;  // (first index, size)
    int start = 0;
    for (int k = 1; k <= d; ++k) {
      if (k == d || eig.eigenvalues(k) - eig.eigenvalues(k - 1) > gap_tol) {
        clusters.emplace_back(start, k - start);
        start = k;
      }
    }
    std::vector<Matrix> copies;
    for (auto [first, size] : clusters) {
      copies.push_back(eig.eigenvectors.middleCols(first, size));
    }

    // Copies belong to the same isotypic block iff a commutant element maps
    // one into the other.
    const int nc = static_cast<int>(copies.size());
    std::vector<int> parent(nc);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    for (int s = 0; s < nc; ++s) {
      for (int t = s + 1; t < nc; ++t) {
        if (copies[s].cols() != copies[t].cols()) continue;
        for (const Matrix& z : probes) {
          if ((copies[s].adjoint() * z * copies[t]).norm() > 1e-6) {
            parent[find(s)] = find(t);
            break;
          }
        }
      }
    }
    std::vector<std::vector<int>> groups(nc);
    for (int s = 0; s < nc; ++s) groups[find(s)].push_back(s);

    bool ok = true;
    std::vector<LabeledBlock> labeled;
    for (const std::vector<int>& group : groups) {
      if (group.empty()) continue;
      const int r = static_cast<int>(copies[group[0]].cols());
      const int m = static_cast<int>(group.size());

      // Align every copy's internal basis to the first one so the factorized
      // generator matrix is literally identical across copies.
      std::vector<Matrix> aligned;
      aligned.push_back(copies[group[0]]);
      for (int a = 1; a < m && ok; ++a) {
        Matrix t;
        bool found = false;
        for (const Matrix& z : probes) {
          t = copies[group[a]].adjoint() * z * copies[group[0]];
          Eigen::JacobiSVD<Matrix> svd(t, Eigen::ComputeThinU | Eigen::ComputeThinV);
          if (svd.singularValues().minCoeff() > 1e-6 * svd.singularValues().maxCoeff()) {
            aligned.push_back(copies[group[a]] * (svd.matrixU() * svd.matrixV().adjoint()));
            found = true;
            break;
          }
        }
        ok = ok && found;
      }
      if (!ok) { failure = "intertwiner between irrep copies was singular"; break; }

      Block block;
      block.r = r;
      block.m = m;
      block.isometry = Matrix::Zero(d, r * m);
      for (int i = 0; i < r; ++i) {
        for (int a = 0; a < m; ++a) block.isometry.col(i * m + a) = aligned[a].col(i);
      }

      // Certify iota† a iota = b ⊗ 1_m for every generator.
      for (const Matrix& gen : gens) {
        Matrix e = block.isometry.adjoint() * gen * block.isometry;
        Matrix b = Matrix::Zero(r, r);
        for (int i = 0; i < r; ++i) {
          for (int j = 0; j < r; ++j) {
            Complex mean = 0.0;
            for (int a = 0; a < m; ++a) mean += e(i * m + a, j * m + a);
            b(i, j) = mean / static_cast<double>(m);
          }
        }
        Matrix expected = Matrix::Zero(r * m, r * m);
        for (int i = 0; i < r; ++i) {
          for (int j = 0; j < r; ++j) {
            for (int a = 0; a < m; ++a) expected(i * m + a, j * m + a) = b(i, j);
          }
        }
        if ((e - expected).norm() > 1e-8 * std::max(1.0, gen.norm())) {
          ok = false;
          failure = "generator did not factorize over a candidate block";
          break;
        }
      }
      if (!ok) break;
      labeled.push_back(label_block(model, std::move(block)));
    }
    if (!ok) continue;

    std::sort(labeled.begin(), labeled.end(), [](const LabeledBlock& a, const LabeledBlock& b) {
      return std::tie(a.block.r, a.numeric, a.block.label) <
             std::tie(b.block.r, b.numeric, b.block.label);
    });
    for (std::size_t i = 0; i + 1 < labeled.size(); ++i) {
      if (labeled[i].block.label == labeled[i + 1].block.label) {
        ok = false;
        failure = "two blocks received the same irrep label";
        break;
      }
    }
    if (!ok) continue;

    int total = 0;
    decomp.blocks.clear();
    for (LabeledBlock& lb : labeled) {
      total += lb.block.r * lb.block.m;
      decomp.blocks.push_back(std::move(lb.block));
    }
    if (total != d) continue;
    return decomp;
  }
  throw DecompositionError(failure);
}

int block_index(const BlockDecomposition& decomp, const std::string& label) {
  for (std::size_t i = 0; i < decomp.blocks.size(); ++i) {
    if (decomp.blocks[i].label == label) return static_cast<int>(i);
  }
  throw ValidationError("no block labeled '" + label + "'");
}

BlockOperator blocks_of(const Matrix& op, const BlockDecomposition& decomp) {
  kernel::require_square(op, "block operator");
  if (op.rows() != decomp.dim) throw ShapeError("operator does not match the decomposition");
  BlockOperator out;
  for (const Block& block : decomp.blocks) {
    Matrix e = block.isometry.adjoint() * op * block.isometry;
    Matrix h = Matrix::Zero(block.m, block.m);
    for (int i = 0; i < block.r; ++i) h += e.block(i * block.m, i * block.m, block.m, block.m);
    out.components.push_back(h / static_cast<double>(block.r));
  }
  Matrix rebuilt = reassemble(out, decomp);
  if ((rebuilt - op).norm() > 1e-9 * std::max(1.0, op.norm())) {
    throw CommutationError("operator does not factor through the block decomposition");
  }
  return out;
}

Matrix reassemble(const BlockOperator& op, const BlockDecomposition& decomp) {
  if (op.components.size() != decomp.blocks.size()) {
    throw ShapeError("component count does not match the decomposition");
  }
  Matrix out = Matrix::Zero(decomp.dim, decomp.dim);
  for (std::size_t b = 0; b < decomp.blocks.size(); ++b) {
    const Block& block = decomp.blocks[b];
    if (op.components[b].rows() != block.m) throw ShapeError("component has the wrong size");
    Matrix lifted = kernel::tensor_product(Matrix::Identity(block.r, block.r), op.components[b]);
    out += block.isometry * lifted * block.isometry.adjoint();
  }
  return out;
}

Matrix reduced_state(const QuantumState& rho, const BlockDecomposition& decomp, int block) {
  if (rho.dim() != decomp.dim) throw ShapeError("state does not match the decomposition");
  if (block < 0 || block >= static_cast<int>(decomp.blocks.size())) {
    throw ShapeError("block index out of range");
  }
  const Block& blk = decomp.blocks[block];
  Matrix e = blk.isometry.adjoint() * rho.matrix() * blk.isometry;
  Matrix out = Matrix::Zero(blk.m, blk.m);
  for (int i = 0; i < blk.r; ++i) out += e.block(i * blk.m, i * blk.m, blk.m, blk.m);
  return out;
}

std::vector<Matrix> reduced_states(const QuantumState& rho, const BlockDecomposition& decomp) {
  std::vector<Matrix> out;
  for (std::size_t b = 0; b < decomp.blocks.size(); ++b) {
    out.push_back(reduced_state(rho, decomp, static_cast<int>(b)));
  }
  return out;
}

QuantumState symmetrize(const QuantumState& rho, const SymmetryModel& model) {
  if (rho.dim() != model.dim) throw ShapeError("state does not match the model");
  switch (model.kind) {
    case Kind::trivial:
      return rho;
    case Kind::time_reversal:
      return time_reversal_symmetrize(rho, model);
    case Kind::u1:
    case Kind::su2: {
      BlockDecomposition decomp = block_decompose(model);
      Matrix out = Matrix::Zero(model.dim, model.dim);
      for (std::size_t b = 0; b < decomp.blocks.size(); ++b) {
        const Block& block = decomp.blocks[b];
        Matrix reduced = reduced_state(rho, decomp, static_cast<int>(b));
        Matrix lifted = kernel::tensor_product(
            Matrix::Identity(block.r, block.r) / static_cast<double>(block.r), reduced);
        out += block.isometry * lifted * block.isometry.adjoint();
      }
      return QuantumState(out);
    }
    case Kind::cyclic:
    case Kind::dihedral: {
      Matrix avg = Matrix::Zero(model.dim, model.dim);
      for (const Matrix& f : model.elements) avg += f * rho.matrix() * f.adjoint();
      return QuantumState(avg / static_cast<double>(model.elements.size()));
    }
  }
  throw ValidationError("unknown symmetry kind");
}

QuantumState time_reversal_symmetrize(const QuantumState& rho, const SymmetryModel& model) {
  if (rho.dim() != model.dim) throw ShapeError("state does not match the model");
  return QuantumState((rho.matrix() + conj_in_basis(rho.matrix(), model)) / 2.0);
}

Matrix casimir_two_copy(const SymmetryModel& model) {
  if (model.kind != Kind::u1 && model.kind != Kind::su2) {
    throw ValidationError("the quadratic invariant needs Hermitian generators");
  }
  const std::size_t n = model.charges.size();
  Matrix gram(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) gram(i, j) = kernel::hs_inner(model.charges[i], model.charges[j]);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver((gram + gram.adjoint()) / 2.0);
  if (solver.eigenvalues().minCoeff() <= 1e-12 * std::max(1.0, solver.eigenvalues().maxCoeff())) {
    throw RankError("charges are linearly dependent");
  }
  Matrix inv = solver.eigenvectors() *
               solver.eigenvalues().cwiseInverse().asDiagonal().toDenseMatrix() *
               solver.eigenvectors().adjoint();
  Matrix out = Matrix::Zero(model.dim * model.dim, model.dim * model.dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out += inv(i, j) * kernel::tensor_product(model.charges[i], model.charges[j]);
    }
  }
  return out;
}

SymmetryCheck is_symmetry_respecting(const Matrix& op, const SymmetryModel& model) {
  kernel::require_square(op, "operator");
  if (op.rows() != model.dim) throw ShapeError("operator does not match the model");
  double violation = 0.0;
  switch (model.kind) {
    case Kind::u1:
    case Kind::su2:
      for (const Matrix& q : model.charges) {
        violation = std::max(violation, (op * q - q * op).norm());
      }
      break;
    case Kind::cyclic:
    case Kind::dihedral:
      for (const Matrix& f : model.elements) {
        violation = std::max(violation, (op * f - f * op).norm());
      }
      break;
    case Kind::time_reversal:
      violation = (op - conj_in_basis(op, model)).norm();
      break;
    case Kind::trivial:
      break;
  }
  return {violation <= 1e-9 * std::max(1.0, op.norm()), violation};
}

}  // namespace ergokit::symmetry
