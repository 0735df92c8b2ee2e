#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "ergokit/gge.hpp"
#include "ergokit/json_io.hpp"
#include "ergokit/quantum_states.hpp"
#include "ergokit/symmetry_reps.hpp"

using namespace ergokit;
using io::Json;
using kernel::Matrix;
using kernel::Vector;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

// Runs the installed binary with stderr dropped; reports exit code and stdout.
RunResult run_cli(const std::string& args, bool keep_stderr = false) {
  const std::string cmd =
      std::string(ERGOKIT_CLI_PATH) + " " + args + (keep_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buffer[4096];
  std::size_t n = 0;
  while ((n = fread(buffer, 1, sizeof(buffer), pipe)) > 0) result.out.append(buffer, n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

// Scratch directory unique to this process; inputs are written through the
// same serializer the binary uses.
std::filesystem::path scratch_dir() {
  static std::filesystem::path dir = [] {
    std::filesystem::path d =
        std::filesystem::temp_directory_path() / ("ergokit_cli_" + std::to_string(::getpid()));
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_json(const std::string& name, const Json& j) {
  const std::filesystem::path path = scratch_dir() / name;
  std::ofstream out(path);
  out << io::dump(j) << "\n";
  return path.string();
}

std::string write_matrix(const std::string& name, const Matrix& m) {
  return write_json(name, io::matrix_to_json(m));
}

std::string write_text(const std::string& name, const std::string& text) {
  const std::filesystem::path path = scratch_dir() / name;
  std::ofstream out(path);
  out << text;
  return path.string();
}

Matrix dimer_hamiltonian(const symmetry::SymmetryModel& model) {
  Matrix ss = Matrix::Zero(4, 4);
  for (const Matrix& q : model.charges) ss += q * q;
  return 0.5 * ss - 0.75 * Matrix::Identity(4, 4);
}

Matrix inverted_dimer_state() {
  Vector s = Vector::Zero(4);
  s(1) = 1.0 / std::sqrt(2.0);
  s(2) = -1.0 / std::sqrt(2.0);
  Matrix proj = s * s.adjoint();
  return 0.05 * proj + (0.95 / 3.0) * (Matrix::Identity(4, 4) - proj);
}

}  // namespace

TEST_CASE("reports are byte-identical across reruns") {
  symmetry::SymmetryModel model = symmetry::preset("su2-dimer");
  const std::string ham = write_matrix("h.json", dimer_hamiltonian(model));
  const std::string state = write_matrix("inv.json", inverted_dimer_state());

  const std::string args = "cp-probe --state " + state + " --ham " + ham + " --model su2-dimer";
  RunResult first = run_cli(args);
  RunResult second = run_cli(args);
  CHECK(first.exit_code == 1);
  CHECK(second.exit_code == 1);
  CHECK(first.out == second.out);
  CHECK(first.out.find("witness_found") != std::string::npos);
}

TEST_CASE("ergotropy report round-trips through its own unitary") {
  Matrix h = Matrix::Zero(3, 3);
  h(1, 1) = 0.7;
  h(2, 2) = 1.9;
  Matrix rho = Matrix::Zero(3, 3);
  rho(0, 0) = 0.2;
  rho(1, 1) = 0.3;
  rho(2, 2) = 0.5;
  rho(0, 2) = rho(2, 0) = 0.1;
  const std::string ham = write_matrix("rt_h.json", h);
  const std::string state = write_matrix("rt_rho.json", rho);

  RunResult result = run_cli("ergotropy --state " + state + " --ham " + ham);
  REQUIRE(result.exit_code == 0);
  Json report = Json::parse(result.out);
  CHECK(report["command"] == "ergotropy");
  CHECK(report["variant"] == "plain");

  const double claimed = report["ergotropy"].get<double>();
  Matrix u = io::matrix_from_json(report["optimal_unitary"]);
  const double replayed =
      states::extracted_work(states::QuantumState(rho), states::Hamiltonian(h), u);
  CHECK(claimed == doctest::Approx(replayed).epsilon(1e-12));
  CHECK(claimed > 0.1);
  CHECK(report["is_passive"].get<bool>() == (claimed <= 1e-9));
}

TEST_CASE("gge fit subcommand recovers planted parameters") {
  symmetry::SymmetryModel model = symmetry::preset("su2-dimer");
  Matrix h = dimer_hamiltonian(model);
  states::GGEParams truth;
  truth.beta = 1.3;
  truth.mu = {0.2, -0.1, 0.05};
  states::QuantumState rho = states::gge_state(states::Hamiltonian(h), model.charges, truth);

  const std::string ham = write_matrix("fit_h.json", h);
  const std::string state = write_matrix("fit_rho.json", rho.matrix());
  RunResult result = run_cli("gge-fit --state " + state + " --ham " + ham + " --model su2-dimer");
  REQUIRE(result.exit_code == 0);
  Json report = Json::parse(result.out);
  CHECK(report["fit"]["beta"].get<double>() == doctest::Approx(1.3).epsilon(1e-8));
  REQUIRE(report["fit"]["mu"].size() == 3);
  CHECK(report["fit"]["mu"][0].get<double>() == doctest::Approx(0.2).epsilon(1e-7));
  CHECK(report["fit"]["mu"][1].get<double>() == doctest::Approx(-0.1).epsilon(1e-7));
  CHECK(report["fit"]["mu"][2].get<double>() == doctest::Approx(0.05).epsilon(1e-7));
  CHECK(report["fit"]["is_gge"].get<bool>());
  CHECK(report["distance"].get<double>() <= 1e-9);

  // A population inversion fits with negative beta and is flagged, not hidden.
  states::QuantumState hot = states::gibbs_state(states::Hamiltonian(h), -0.4);
  const std::string hot_path = write_matrix("fit_hot.json", hot.matrix());
  RunResult flagged = run_cli("gge-fit --state " + hot_path + " --ham " + ham + " --model su2-dimer");
  REQUIRE(flagged.exit_code == 0);
  Json hot_report = Json::parse(flagged.out);
  CHECK(hot_report["fit"]["beta"].get<double>() == doctest::Approx(-0.4).epsilon(1e-8));
  CHECK_FALSE(hot_report["fit"]["beta_nonneg"].get<bool>());
  CHECK_FALSE(hot_report["fit"]["is_gge"].get<bool>());
}

TEST_CASE("probe subcommand maps verdicts to exit codes") {
  symmetry::SymmetryModel model = symmetry::preset("su2-dimer");
  Matrix h = dimer_hamiltonian(model);
  const std::string ham = write_matrix("probe_h.json", h);

  states::QuantumState gibbs = states::gibbs_state(states::Hamiltonian(h), 0.9);
  const std::string gibbs_path = write_matrix("probe_gibbs.json", gibbs.matrix());
  RunResult thermal = run_cli("cp-probe --state " + gibbs_path + " --ham " + ham + " --model su2-dimer");
  CHECK(thermal.exit_code == 0);
  Json thermal_report = Json::parse(thermal.out);
  CHECK(thermal_report["verdict"] == "gge_consistent");
  CHECK(thermal_report["witness"].is_null());
  for (const Json& entry : thermal_report["log"])
    if (entry[0].get<std::string>().find("B(") != std::string::npos)
      CHECK(entry[1].get<double>() <= 1e-9);

  const std::string inv_path = write_matrix("probe_inv.json", inverted_dimer_state());
  RunResult witnessed =
      run_cli("cp-probe --state " + inv_path + " --ham " + ham + " --model su2-dimer --dense-check");
  CHECK(witnessed.exit_code == 1);
  Json witness_report = Json::parse(witnessed.out);
  CHECK(witness_report["verdict"] == "witness_found");
  CHECK(witness_report["witness"]["work"].get<double>() > 1e-9);
  CHECK(witness_report["dense_check"]["performed"].get<bool>());
  CHECK(witness_report["dense_check"]["matches"].get<bool>());
  CHECK(witness_report["dense_check"]["difference"].get<double>() <= 1e-9);
}

TEST_CASE("input failures exit with code two") {
  symmetry::SymmetryModel model = symmetry::preset("su2-dimer");
  const std::string ham = write_matrix("err_h.json", dimer_hamiltonian(model));
  const std::string state =
      write_matrix("err_rho.json", Matrix(Matrix::Identity(4, 4) * 0.25));

  CHECK(run_cli("ergotropy --state missing.json --ham " + ham).exit_code == 2);

  const std::string broken = write_text("broken.json", "{\"dim\": 2, \"re\": [1, 0");
  CHECK(run_cli("ergotropy --state " + broken + " --ham " + ham).exit_code == 2);

  const std::string short_re = write_text("short.json", "{\"dim\": 2, \"re\": [1, 0, 0]}");
  RunResult shape = run_cli("ergotropy --state " + short_re + " --ham " + ham, true);
  CHECK(shape.exit_code == 2);
  CHECK(shape.out.find("re") != std::string::npos);

  CHECK(run_cli("ergotropy --state " + state + " --ham " + ham + " --model no-such-preset")
            .exit_code == 2);

  // A Hamiltonian inside the charge span leaves nothing to probe.
  const std::string ident = write_matrix("ident.json", Matrix(Matrix::Identity(4, 4)));
  RunResult trivial =
      run_cli("cp-probe --state " + state + " --ham " + ident + " --model su2-dimer", true);
  CHECK(trivial.exit_code == 2);
  CHECK(trivial.out.find("span") != std::string::npos);

  CHECK(run_cli("ergotropy --ham " + ham).exit_code == 2);
}

TEST_CASE("ws subcommand reports locking and distribution effects") {
  Matrix h = Matrix::Zero(2, 2);
  h(1, 1) = 1.0;
  Matrix plus = Matrix::Constant(2, 2, 0.5);
  Matrix flip = Matrix::Zero(2, 2);
  flip(0, 1) = flip(1, 0) = 1.0;
  const std::string ham = write_matrix("ws_h.json", h);
  const std::string state = write_matrix("ws_plus.json", plus);
  const std::string unitary = write_matrix("ws_x.json", flip);

  RunResult sharp = run_cli("ws --state " + state + " --ham " + ham + " --dist point:0.0");
  REQUIRE(sharp.exit_code == 0);
  Json sharp_report = Json::parse(sharp.out);
  CHECK(sharp_report["ws_ergotropy"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sharp_report["locked"].get<double>() == doctest::Approx(0.0).epsilon(1e-12));

  RunResult flat =
      run_cli("ws --state " + state + " --ham " + ham + " --dist position --unitary " + unitary);
  REQUIRE(flat.exit_code == 0);
  Json flat_report = Json::parse(flat.out);
  CHECK(flat_report["ws_ergotropy"].get<double>() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(flat_report["locked"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(flat_report["work"]["equal"].get<bool>());
  CHECK(flat_report["work"]["ws_work"].get<double>() == doctest::Approx(0.0).epsilon(1e-12));

  Json dist;
  dist["kind"] = "weighted";
  dist["points"] = Json::array({Json::array({-1.0, 0.25}), Json::array({0.0, 0.5}),
                                Json::array({1.0, 0.25})});
  const std::string dist_path = write_json("ws_dist.json", dist);
  RunResult mixed = run_cli("ws --state " + state + " --ham " + ham + " --dist " + dist_path);
  REQUIRE(mixed.exit_code == 0);
  Json mixed_report = Json::parse(mixed.out);
  const double stored = mixed_report["ws_ergotropy"].get<double>();
  CHECK(stored > 1e-3);
  CHECK(stored < 0.5 - 1e-3);
  CHECK(mixed_report["distribution"]["kind"] == "weighted");
}

TEST_CASE("model documents parse like presets") {
  symmetry::SymmetryModel model = symmetry::preset("su2-dimer");
  Json doc;
  doc["kind"] = "su2";
  doc["dim"] = 4;
  Json charges = Json::array();
  for (const Matrix& q : model.charges) charges.push_back(io::matrix_to_json(q));
  doc["charges"] = std::move(charges);
  const std::string model_path = write_json("model.json", doc);

  const std::string ham = write_matrix("mdl_h.json", dimer_hamiltonian(model));
  const std::string state = write_matrix("mdl_rho.json", inverted_dimer_state());
  RunResult from_doc =
      run_cli("ergotropy --state " + state + " --ham " + ham + " --model " + model_path);
  RunResult from_preset =
      run_cli("ergotropy --state " + state + " --ham " + ham + " --model su2-dimer");
  REQUIRE(from_doc.exit_code == 0);
  REQUIRE(from_preset.exit_code == 0);
  CHECK(from_doc.out == from_preset.out);
}

TEST_CASE("demo subcommand reproduces the pinned dimer numbers") {
  RunResult result = run_cli("demo-dimer");
  REQUIRE(result.exit_code == 0);
  Json report = Json::parse(result.out);
  CHECK(report["all_match"].get<bool>());
  CHECK(report["spectrum"]["max_error"].get<double>() <= 1e-12);
  CHECK(report["paired_levels"]["max_error"].get<double>() <= 1e-10);
  CHECK(report["paired_levels"]["max_charge_norm"].get<double>() <= 1e-10);
  CHECK(report["thermal_work"]["relative_error"].get<double>() <= 1e-9);
  CHECK(report["thermal_work"]["closed_form"].get<double>() < 0.0);
  CHECK(report["parameter_formulas"]["max_error"].get<double>() <= 1e-9);
  CHECK(report["witness_demo"]["verdict"] == "witness_found");

  RunResult text = run_cli("demo-dimer --format text");
  REQUIRE(text.exit_code == 0);
  CHECK(text.out.find("all match: yes") != std::string::npos);
}
