#pragma once

#include <stdexcept>
#include <string>

namespace ncplan {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed topology / demand / plan / config text. Carries the 1-based line.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// The topology is not 2-edge-connected.
class ConnectivityError : public Error {
 public:
  using Error::Error;
};

/// No wavelength index is free along a demand's routes.
class CapacityExhausted : public Error {
 public:
  CapacityExhausted(int demand, const std::string& what)
      : Error(what), demand_(demand) {}
  int demand() const noexcept { return demand_; }

 private:
  int demand_;
};

/// A size cap (ILP variable budget, exact-search demand cap) was exceeded.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace ncplan
