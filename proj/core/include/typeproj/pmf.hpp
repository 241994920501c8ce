#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "typeproj/errors.hpp"

namespace typeproj {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Finite ordered outcome set x_1 < x_2 < ... < x_m, m >= 2.
class Alphabet {
 public:
  explicit Alphabet(std::vector<double> points);

  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  const std::vector<double>& points() const { return points_; }

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.points_ == b.points_;
  }

 private:
  std::vector<double> points_;
};

/// Probability mass function on an Alphabet. Immutable after construction.
class Pmf {
 public:
  Pmf(Alphabet alphabet, std::vector<double> probs);

  static Pmf uniform(Alphabet alphabet);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

  /// Mean of the outcome labels under this pmf.
  double mean() const;

 private:
  Alphabet alphabet_;
  std::vector<double> probs_;
};

/// Count vector [n_1..n_m] of an n-sample; sum of counts == n >= 1.
class EmpiricalType {
 public:
  EmpiricalType(Alphabet alphabet, std::vector<std::int64_t> counts);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return counts_.size(); }
  std::int64_t operator[](std::size_t i) const { return counts_[i]; }
  const std::vector<std::int64_t>& counts() const { return counts_; }
  std::int64_t n() const { return n_; }

  /// The type as a pmf, counts / n.
  Pmf pmf() const;

 private:
  Alphabet alphabet_;
  std::vector<std::int64_t> counts_;
  std::int64_t n_;
};

/// Ordered sample of outcome indices (0-based) into an Alphabet.
class Sample {
 public:
  Sample(Alphabet alphabet, std::vector<std::size_t> draws);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return draws_.size(); }
  std::size_t index(std::size_t l) const { return draws_[l]; }
  double value(std::size_t l) const { return alphabet_[draws_[l]]; }
  const std::vector<std::size_t>& draws() const { return draws_; }

  EmpiricalType type() const;

 private:
  Alphabet alphabet_;
  std::vector<std::size_t> draws_;
};

inline void require_same_alphabet(const Alphabet& a, const Alphabet& b) {
  if (!(a == b)) throw AlphabetMismatchError();
}

}  // namespace typeproj
