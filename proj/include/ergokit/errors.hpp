#pragma once

#include <stdexcept>
#include <string>

namespace ergokit {

// Every validation failure surfaces as a subclass of Error; the CLI maps them to exit code 2.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeError : Error { using Error::Error; };          // wrong or incompatible dimensions
struct SizeLimitError : Error { using Error::Error; };      // dense dimension cap exceeded
struct HermiticityError : Error { using Error::Error; };    // matrix not Hermitian within tolerance
struct UnitarityError : Error { using Error::Error; };      // matrix not unitary within tolerance
struct DomainError : Error { using Error::Error; };         // spectrum outside the required domain
struct CommutationError : Error { using Error::Error; };    // required commutation relation violated
struct DecompositionError : Error { using Error::Error; };  // block structure could not be certified
struct RankError : Error { using Error::Error; };           // singular Gram matrix or dependent basis
struct ValidationError : Error { using Error::Error; };     // other violated field constraints
struct InputError : Error { using Error::Error; };          // malformed file, JSON, or CLI input

}  // namespace ergokit
