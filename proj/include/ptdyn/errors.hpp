#pragma once

#include <stdexcept>
#include <string>

namespace ptdyn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InvalidDimension : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct NumericError : Error { using Error::Error; };
struct MetricViolation : Error { using Error::Error; };
struct ExceptionalPointError : Error { using Error::Error; };
struct InvalidParameter : Error { using Error::Error; };
struct GridError : Error { using Error::Error; };
struct NotInvariantBasis : Error { using Error::Error; };
struct IncompleteBasis : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace ptdyn
