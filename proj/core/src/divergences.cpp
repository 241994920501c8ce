#include "typeproj/divergences.hpp"

#include <cmath>

namespace typeproj {

double i_divergence(const Pmf& p, const Pmf& q) {
  require_same_alphabet(p.alphabet(), q.alphabet());
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;  // 0 log 0 = 0
    if (q[i] == 0.0) return kInf;
    d += p[i] * std::log(p[i] / q[i]);
  }
  return d < 0.0 ? 0.0 : d;  // clamp tiny negative rounding at p ~ q
}

double l_divergence(const Pmf& q, const Pmf& p) {
  require_same_alphabet(p.alphabet(), q.alphabet());
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return kInf;
    d -= p[i] * std::log(q[i]);
  }
  return d;
}

double total_variation(const Pmf& p1, const Pmf& p2) {
  require_same_alphabet(p1.alphabet(), p2.alphabet());
  double s = 0.0;
  for (std::size_t i = 0; i < p1.size(); ++i) s += std::abs(p1[i] - p2[i]);
  return 0.5 * s;
}

double shannon_entropy(const Pmf& p) {
  double h = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    h -= p[i] * std::log(p[i]);
  }
  return h < 0.0 ? 0.0 : h;
}

}  // namespace typeproj
