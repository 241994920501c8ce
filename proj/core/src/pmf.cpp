#include "typeproj/pmf.hpp"

#include <cmath>
#include <numeric>

namespace typeproj {

Alphabet::Alphabet(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw ValidationError("alphabet needs at least 2 points");
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    if (!(points_[i] < points_[i + 1]))
      throw ValidationError("alphabet points must be strictly increasing");
  }
}

Pmf::Pmf(Alphabet alphabet, std::vector<double> probs)
    : alphabet_(std::move(alphabet)), probs_(std::move(probs)) {
  if (probs_.size() != alphabet_.size())
    throw ValidationError("pmf length does not match alphabet size");
  double sum = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (!(probs_[i] >= 0.0))
      throw ValidationError("pmf entry " + std::to_string(i) + " is negative or NaN");
    sum += probs_[i];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw ValidationError("pmf does not sum to 1 (sum = " + std::to_string(sum) + ")");
}

Pmf Pmf::uniform(Alphabet alphabet) {
  const std::size_t m = alphabet.size();
  std::vector<double> p(m, 1.0 / static_cast<double>(m));
  // repair rounding so the sum is exactly representable as 1
  double sum = std::accumulate(p.begin(), p.end(), 0.0);
  p[0] += 1.0 - sum;
  return Pmf(std::move(alphabet), std::move(p));
}

double Pmf::mean() const {
  double mu = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) mu += probs_[i] * alphabet_[i];
  return mu;
}

EmpiricalType::EmpiricalType(Alphabet alphabet, std::vector<std::int64_t> counts)
    : alphabet_(std::move(alphabet)), counts_(std::move(counts)), n_(0) {
  if (counts_.size() != alphabet_.size())
    throw ValidationError("count vector length does not match alphabet size");
  for (auto c : counts_) {
    if (c < 0) throw ValidationError("negative count");
    n_ += c;
  }
  if (n_ < 1) throw ValidationError("empty type (n must be >= 1)");
}

Pmf EmpiricalType::pmf() const {
  std::vector<double> p(counts_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i)
    p[i] = static_cast<double>(counts_[i]) / static_cast<double>(n_);
  double sum = std::accumulate(p.begin(), p.end(), 0.0);
  // counts/n can miss 1 by a few ulps; push the defect into the largest entry
  std::size_t imax = 0;
  for (std::size_t i = 1; i < p.size(); ++i)
    if (p[i] > p[imax]) imax = i;
  p[imax] += 1.0 - sum;
  return Pmf(alphabet_, std::move(p));
}

Sample::Sample(Alphabet alphabet, std::vector<std::size_t> draws)
    : alphabet_(std::move(alphabet)), draws_(std::move(draws)) {
  if (draws_.empty()) throw ValidationError("empty sample");
  for (auto d : draws_)
    if (d >= alphabet_.size()) throw ValidationError("sample index out of range");
}

EmpiricalType Sample::type() const {
  std::vector<std::int64_t> counts(alphabet_.size(), 0);
  for (auto d : draws_) ++counts[d];
  return EmpiricalType(alphabet_, std::move(counts));
}

}  // namespace typeproj
