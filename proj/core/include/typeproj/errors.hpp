#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace typeproj {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AlphabetMismatchError : public Error {
 public:
  AlphabetMismatchError() : Error("operands are defined on different alphabets") {}
  explicit AlphabetMismatchError(const std::string& what) : Error(what) {}
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Separating-hyperplane witness of infeasibility: for every pmf p on the
/// alphabet, sum_j row_combination[j] * (u_j . p - bound_j) >= gap > 0,
/// where bound_j is the bound the combination presses against.
struct InfeasibilityCertificate {
  std::vector<double> row_combination;  // one weight per inequality direction, >= 0
  double gap = 0.0;
  std::string detail;
};

class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, InfeasibilityCertificate cert)
      : Error(what), certificate(std::move(cert)) {}
  explicit InfeasibleError(const std::string& what) : Error(what) {}
  InfeasibilityCertificate certificate;
};

class ResourceCapError : public Error {
 public:
  ResourceCapError(double estimated_count, double cap)
      : Error("type lattice size " + std::to_string(estimated_count) +
              " exceeds cap " + std::to_string(cap)),
        estimated_count(estimated_count),
        cap(cap) {}
  double estimated_count;
  double cap;
};

class MaxIterationsError : public Error {
 public:
  using Error::Error;
};

class DomainBoundaryError : public Error {
 public:
  DomainBoundaryError(const std::string& what, int atom_index)
      : Error(what), atom_index(atom_index) {}
  int atom_index;  // offending alphabet/sample atom
};

class EmptySetError : public Error {
 public:
  using Error::Error;
};

}  // namespace typeproj
