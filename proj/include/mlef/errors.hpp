#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mlef {

  // Malformed arguments: degree mismatch, not a subgroup, bad chain, ...
  class InvalidArgument : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
  };

  // An enumeration or search would exceed a configured size cap.
  class CapExceeded : public std::length_error {
   public:
    CapExceeded(std::string const& what, std::size_t cap)
        : std::length_error(what + " (cap " + std::to_string(cap) + ")"),
          cap_(cap) {}

    std::size_t cap() const noexcept {
      return cap_;
    }

   private:
    std::size_t cap_;
  };

  // A constructive solver found no solution for its instance.
  class NoSolution : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // The base group of a lamplighter construction fails one of (S1)-(S4).
  class UnsupportedBase : public std::runtime_error {
   public:
    UnsupportedBase(std::string const& statement, std::string const& detail)
        : std::runtime_error("base group fails " + statement + ": " + detail),
          statement_(statement) {}

    std::string const& statement() const noexcept {
      return statement_;
    }

   private:
    std::string statement_;
  };

}  // namespace mlef
