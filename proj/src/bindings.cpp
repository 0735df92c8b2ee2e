// Python module: numpy-facing wrappers around the core analyses. Reports are
// returned as plain dicts so downstream code can serialize them directly.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ergokit/cp_probe.hpp"
#include "ergokit/errors.hpp"
#include "ergokit/gge.hpp"
#include "ergokit/passivity.hpp"
#include "ergokit/quantum_states.hpp"
#include "ergokit/symmetry_reps.hpp"
#include "ergokit/work_storage.hpp"

namespace py = pybind11;

namespace {

using ergokit::kernel::Matrix;
using ergokit::states::Hamiltonian;
using ergokit::states::QuantumState;
using ergokit::symmetry::SymmetryModel;

namespace states = ergokit::states;
namespace symmetry = ergokit::symmetry;
namespace passivity = ergokit::passivity;
namespace gge = ergokit::gge;
namespace probe = ergokit::probe;
namespace storage = ergokit::storage;

py::dict passivity_dict(const passivity::PassivityReport& report) {
  py::dict out;
  out["ergotropy"] = report.ergotropy;
  out["is_passive"] = report.is_passive;
  out["optimal_unitary"] = report.optimal_unitary;
  py::list blocks;
  for (const auto& [label, work] : report.per_block) blocks.append(py::make_tuple(label, work));
  out["per_block"] = std::move(blocks);
  return out;
}

py::dict fit_dict(const gge::GGEFit& fit) {
  py::dict out;
  out["beta"] = fit.params.beta;
  out["mu"] = fit.params.mu;
  out["log_partition"] = fit.params.log_partition;
  out["residual"] = fit.residual;
  out["beta_nonneg"] = fit.beta_nonneg;
  out["is_gge"] = fit.is_gge;
  return out;
}

storage::MomentumDistribution make_dist(const std::string& kind, double q,
                                        const std::vector<std::pair<double, double>>& points) {
  if (kind == "point") return storage::MomentumDistribution::point(q);
  if (kind == "position") return storage::MomentumDistribution::position();
  if (kind == "weighted") return storage::MomentumDistribution::weighted(points);
  throw ergokit::InputError("distribution kind must be point, position, or weighted");
}

}  // namespace

PYBIND11_MODULE(ergokit, m) {
  m.doc() = "passivity, generalized Gibbs, and work-storage analyses";

  py::register_exception<ergokit::Error>(m, "Error");

  py::class_<SymmetryModel>(m, "Model")
      .def(py::init([](const std::string& kind, int dim, const std::vector<Matrix>& charges,
                       const std::vector<Matrix>& elements, int order,
                       const std::optional<Matrix>& conjugation_basis) {
             SymmetryModel model;
             model.kind = symmetry::kind_from_name(kind);
             model.dim = dim;
             model.charges = charges;
             model.elements = elements;
             model.order = order;
             if (conjugation_basis) model.conjugation_basis = *conjugation_basis;
             symmetry::validate_model(model);
             return model;
           }),
           py::arg("kind"), py::arg("dim"), py::arg("charges") = std::vector<Matrix>{},
           py::arg("elements") = std::vector<Matrix>{}, py::arg("order") = 0,
           py::arg("conjugation_basis") = std::nullopt)
      .def_static("preset", &symmetry::preset, py::arg("name"))
      .def_property_readonly("kind",
                             [](const SymmetryModel& model) { return symmetry::kind_name(model.kind); })
      .def_readonly("dim", &SymmetryModel::dim)
      .def_readonly("order", &SymmetryModel::order)
      .def_readonly("charges", &SymmetryModel::charges)
      .def_readonly("elements", &SymmetryModel::elements);

  m.def(
      "ergotropy",
      [](const Matrix& rho, const Matrix& h) {
        return passivity_dict(passivity::ergotropy(QuantumState(rho), Hamiltonian(h)));
      },
      py::arg("rho"), py::arg("h"), "maximal unitary work extraction");

  m.def(
      "sp_ergotropy",
      [](const Matrix& rho, const Matrix& h, const SymmetryModel& model) {
        return passivity_dict(passivity::sp_ergotropy(QuantumState(rho), Hamiltonian(h), model));
      },
      py::arg("rho"), py::arg("h"), py::arg("model"),
      "work extraction restricted to symmetry-respecting unitaries");

  m.def(
      "tr_ergotropy",
      [](const Matrix& rho, const Matrix& h, const SymmetryModel& model) {
        return passivity_dict(passivity::tr_ergotropy(QuantumState(rho), Hamiltonian(h), model));
      },
      py::arg("rho"), py::arg("h"), py::arg("model"),
      "work extraction restricted to time-reversal-respecting unitaries");

  m.def(
      "extracted_work",
      [](const Matrix& rho, const Matrix& h, const Matrix& u) {
        return states::extracted_work(QuantumState(rho), Hamiltonian(h), u);
      },
      py::arg("rho"), py::arg("h"), py::arg("u"));

  m.def(
      "gibbs_state",
      [](const Matrix& h, double beta) { return states::gibbs_state(Hamiltonian(h), beta).matrix(); },
      py::arg("h"), py::arg("beta"));

  m.def(
      "gge_state",
      [](const Matrix& h, const std::vector<Matrix>& charges, double beta,
         const std::vector<double>& mu) {
        states::GGEParams params;
        params.beta = beta;
        params.mu = mu;
        return states::gge_state(Hamiltonian(h), charges, params).matrix();
      },
      py::arg("h"), py::arg("charges"), py::arg("beta"), py::arg("mu"));

  m.def(
      "symmetrize",
      [](const Matrix& rho, const SymmetryModel& model) {
        return symmetry::symmetrize(QuantumState(rho), model).matrix();
      },
      py::arg("rho"), py::arg("model"), "projection onto the commutant of the symmetry");

  m.def(
      "gge_fit",
      [](const Matrix& rho, const Matrix& h, const SymmetryModel& model, double tolerance) {
        QuantumState state(rho);
        Hamiltonian ham(h);
        std::vector<Matrix> charges = probe::fit_charges(model);
        gge::GGEFit fit = gge::gge_fit(state, ham, charges, tolerance);
        py::dict out = fit_dict(fit);
        out["distance"] = gge::gge_distance(state, fit, ham, charges);
        return out;
      },
      py::arg("rho"), py::arg("h"), py::arg("model"), py::arg("tolerance") = 1e-7);

  m.def(
      "cp_probe",
      [](const Matrix& rho, const Matrix& h, const SymmetryModel& model, int m_max, int mprime_max,
         double tolerance, std::uint64_t seed) {
        probe::ProbeBudget budget;
        budget.m_max = m_max;
        budget.mprime_max = mprime_max;
        probe::ProbeReport report =
            probe::cp_probe(QuantumState(rho), Hamiltonian(h), model, budget, tolerance, seed);
        py::dict out;
        out["verdict"] = probe::verdict_name(report.verdict);
        out["fit"] = fit_dict(report.fit);
        if (report.witness) {
          py::dict w;
          w["variant"] = report.witness->spec.variant == probe::Variant::A ? "A" : "B";
          w["m"] = report.witness->spec.m;
          w["m_prime"] = report.witness->spec.m_prime;
          w["copies"] = report.witness->copies;
          w["work"] = report.witness->work;
          w["description"] = report.witness->description;
          out["witness"] = std::move(w);
        } else {
          out["witness"] = py::none();
        }
        py::list log;
        for (const auto& [description, work] : report.log)
          log.append(py::make_tuple(description, work));
        out["log"] = std::move(log);
        return out;
      },
      py::arg("rho"), py::arg("h"), py::arg("model"), py::arg("m_max") = 40,
      py::arg("mprime_max") = 8, py::arg("tolerance") = 1e-7,
      py::arg("seed") = std::uint64_t{0x00e56015u},
      "constructive probe for symmetry-protected complete passivity");

  m.def(
      "apply_D",
      [](const Matrix& rho, const Matrix& h, const std::string& kind, double q,
         const std::vector<std::pair<double, double>>& points) {
        return storage::apply_D(QuantumState(rho), Hamiltonian(h), make_dist(kind, q, points))
            .matrix();
      },
      py::arg("rho"), py::arg("h"), py::arg("kind"), py::arg("q") = 0.0,
      py::arg("points") = std::vector<std::pair<double, double>>{},
      "system state after coupling to the storage degree of freedom");

  m.def(
      "ws_ergotropy",
      [](const Matrix& rho, const Matrix& h, const std::string& kind, double q,
         const std::vector<std::pair<double, double>>& points,
         const std::optional<SymmetryModel>& model) {
        QuantumState state(rho);
        Hamiltonian ham(h);
        storage::MomentumDistribution dist = make_dist(kind, q, points);
        if (model) return storage::ws_ergotropy(state, ham, dist, *model);
        return storage::ws_ergotropy(state, ham, dist);
      },
      py::arg("rho"), py::arg("h"), py::arg("kind"), py::arg("q") = 0.0,
      py::arg("points") = std::vector<std::pair<double, double>>{},
      py::arg("model") = std::nullopt,
      "maximal work extractable through the storage coupling");
}
