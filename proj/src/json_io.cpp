#include "ergokit/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "ergokit/errors.hpp"

namespace ergokit::io {

namespace {

// Accepts either a flat row-major list of d*d numbers or d rows of d numbers.
Eigen::MatrixXd parse_component(const Json& j, Eigen::Index d, const char* key) {
  if (!j.is_array()) throw InputError(std::string("matrix field \"") + key + "\" must be an array");
  Eigen::MatrixXd out(d, d);
  const auto n = static_cast<Eigen::Index>(j.size());
  if (n == d * d && (d == 0 || !j.front().is_array())) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const Json& cell = j[static_cast<std::size_t>(k)];
      if (!cell.is_number()) throw InputError(std::string("matrix field \"") + key + "\" has a non-numeric entry");
      out(k / d, k % d) = cell.get<double>();
    }
    return out;
  }
  if (n != d) throw InputError(std::string("matrix field \"") + key + "\" has wrong length");
  for (Eigen::Index r = 0; r < d; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d)
      throw InputError(std::string("matrix field \"") + key + "\" has a malformed row");
    for (Eigen::Index c = 0; c < d; ++c) {
      const Json& cell = row[static_cast<std::size_t>(c)];
      if (!cell.is_number()) throw InputError(std::string("matrix field \"") + key + "\" has a non-numeric entry");
      out(r, c) = cell.get<double>();
    }
  }
  return out;
}

void write_value(std::string& out, const Json& j, int indent, int depth);

void write_indent(std::string& out, int indent, int depth) {
  out.append(static_cast<std::size_t>(indent) * static_cast<std::size_t>(depth), ' ');
}

void write_object(std::string& out, const Json& j, int indent, int depth) {
  if (j.empty()) {
    out += "{}";
    return;
  }
  out += "{\n";
  bool first = true;
  for (const auto& [key, value] : j.items()) {
    if (!first) out += ",\n";
    first = false;
    write_indent(out, indent, depth + 1);
    out += Json(key).dump();
    out += ": ";
    write_value(out, value, indent, depth + 1);
  }
  out += '\n';
  write_indent(out, indent, depth);
  out += '}';
}

void write_array(std::string& out, const Json& j, int indent, int depth) {
  if (j.empty()) {
    out += "[]";
    return;
  }
  out += "[\n";
  bool first = true;
  for (const Json& value : j) {
    if (!first) out += ",\n";
    first = false;
    write_indent(out, indent, depth + 1);
    write_value(out, value, indent, depth + 1);
  }
  out += '\n';
  write_indent(out, indent, depth);
  out += ']';
}

void write_value(std::string& out, const Json& j, int indent, int depth) {
  switch (j.type()) {
    case Json::value_t::object:
      write_object(out, j, indent, depth);
      return;
    case Json::value_t::array:
      write_array(out, j, indent, depth);
      return;
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
        return;
      }
      out += format_double(x);
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

kernel::Matrix matrix_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("matrix document must be a JSON object");
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw InputError("matrix document needs an integer \"dim\" field");
  const auto d = j["dim"].get<Eigen::Index>();
  if (d < 1) throw InputError("matrix \"dim\" must be positive");
  if (!j.contains("re")) throw InputError("matrix document needs a \"re\" field");
  kernel::Matrix m = parse_component(j["re"], d, "re").cast<std::complex<double>>();
  if (j.contains("im")) m += std::complex<double>(0.0, 1.0) * parse_component(j["im"], d, "im");
  return m;
}

Json matrix_to_json(const kernel::Matrix& m) {
  Json j;
  const Eigen::Index d = m.rows();
  j["dim"] = d;
  Json re = Json::array();
  Json im = Json::array();
  bool complex_entries = false;
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
      if (m(r, c).imag() != 0.0) complex_entries = true;
    }
  }
  j["re"] = std::move(re);
  if (complex_entries) j["im"] = std::move(im);
  return j;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("parse failure in " + path + ": " + e.what());
  }
}

kernel::Matrix load_matrix(const std::string& path) { return matrix_from_json(load_json(path)); }

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.16e", x);
  return buf;
}

std::string dump(const Json& j, int indent) {
  std::string out;
  write_value(out, j, indent, 0);
  return out;
}

}  // namespace ergokit::io
