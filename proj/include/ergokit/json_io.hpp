#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "ergokit/matrix_kernel.hpp"

namespace ergokit::io {

// Insertion-ordered documents keep emitted key order deterministic.
using Json = nlohmann::ordered_json;

// Matrix wire format: {"dim": d, "re": [d*d row-major], "im": [d*d row-major]}.
// "im" may be omitted for real matrices.
kernel::Matrix matrix_from_json(const Json& j);
Json matrix_to_json(const kernel::Matrix& m);

Json load_json(const std::string& path);         // throws InputError on i/o or parse failure
kernel::Matrix load_matrix(const std::string& path);

// Scientific notation with 17 significant digits; round-trips any double.
std::string format_double(double x);

// Serializer that routes every number through format_double.
std::string dump(const Json& j, int indent = 2);

}  // namespace ergokit::io
