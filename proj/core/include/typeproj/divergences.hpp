#pragma once

#include "typeproj/pmf.hpp"

namespace typeproj {

/// Kullback-Leibler divergence sum_i p_i log(p_i/q_i), natural log,
/// 0 log 0 = 0. Returns +inf iff p puts mass where q does not.
double i_divergence(const Pmf& p, const Pmf& q);

/// L-divergence -sum_i p_i log(q_i). Equals shannon_entropy(p) +
/// i_divergence(p, q) when finite. +inf iff p puts mass where q does not.
double l_divergence(const Pmf& q, const Pmf& p);

/// Total variation distance, half-sum convention: (1/2) sum |p1_i - p2_i|,
/// so values live in [0, 1].
double total_variation(const Pmf& p1, const Pmf& p2);

/// -sum_i p_i log p_i with 0 log 0 = 0.
double shannon_entropy(const Pmf& p);

}  // namespace typeproj
