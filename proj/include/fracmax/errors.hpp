#pragma once

#include <stdexcept>
#include <string>

namespace fracmax {

/// Broad failure class, used by the CLI to pick an exit code.
enum class ErrorClass {
  validation,  ///< bad input or configuration (exit 1)
  numerical,   ///< numerical breakdown (exit 2)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

#define FRACMAX_DEFINE_ERROR(Name, Class)                                                  \
  class Name : public Error {                                                              \
   public:                                                                                 \
    explicit Name(const std::string& what) : Error(ErrorClass::Class, #Name ": " + what) {} \
  };

FRACMAX_DEFINE_ERROR(InvalidArgument, validation)
FRACMAX_DEFINE_ERROR(DegenerateInput, validation)
FRACMAX_DEFINE_ERROR(EmptyWindow, validation)
FRACMAX_DEFINE_ERROR(OutOfRange, validation)
FRACMAX_DEFINE_ERROR(EmptySelection, validation)
FRACMAX_DEFINE_ERROR(MissingGrid, validation)
FRACMAX_DEFINE_ERROR(InsufficientData, validation)
FRACMAX_DEFINE_ERROR(ConfigError, validation)
FRACMAX_DEFINE_ERROR(FactorizationFailure, numerical)
FRACMAX_DEFINE_ERROR(DegenerateTriangle, numerical)
FRACMAX_DEFINE_ERROR(NumericalGuard, numerical)
FRACMAX_DEFINE_ERROR(QuadratureFailure, numerical)
FRACMAX_DEFINE_ERROR(IdentityViolation, numerical)

#undef FRACMAX_DEFINE_ERROR

}  // namespace fracmax
