#pragma once

#include <stdexcept>
#include <string>

namespace bsz2d {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Weight or config violates a declared invariant.
class InvalidWeight : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class BasisMismatch : public Error {
 public:
  BasisMismatch() : Error("polynomial basis mismatch") {}
};

// A closed form was requested below the index where it is valid.
class BelowThreshold : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

class EliminationBreakdown : public Error {
 public:
  EliminationBreakdown(int where, const std::string& what)
      : Error(what), where_(where) {}
  int where() const { return where_; }

 private:
  int where_;
};

class DegenerateWindow : public Error {
 public:
  DegenerateWindow(int nullity, const std::string& what)
      : Error(what), nullity_(nullity) {}
  int nullity() const { return nullity_; }

 private:
  int nullity_;
};

class AccuracyFailure : public Error {
 public:
  using Error::Error;
};

class UnreliableOracle : public Error {
 public:
  using Error::Error;
};

class ConstructionInconsistency : public Error {
 public:
  using Error::Error;
};

}  // namespace bsz2d
