#pragma once

#include <algorithm>
#include <future>
#include <vector>

#include "typeproj/typespace.hpp"

namespace typeproj {

namespace detail {

/// Visits compositions of rem into coordinates [idx..m) of c, in
/// lexicographically decreasing order, invoking visit on the full vector.
void visit_compositions(std::vector<std::int64_t>& c, std::size_t idx,
                        std::int64_t rem,
                        const std::function<void(const std::vector<std::int64_t>&)>& visit);

}  // namespace detail

/// Deterministic reduction over the size-n type lattice. The lattice is
/// partitioned by first count into a fixed set of chunks whose boundaries do
/// not depend on the thread count; chunk accumulators are always kept
/// separate and merged in enumeration order, so the result is bit-identical
/// at any thread count. Threads only control how many chunks run at once.
/// step must be pure in the type; merge consumes the right accumulator.
template <class Acc, class Step, class Merge>
Acc reduce_types(const Alphabet& alphabet, std::int64_t n,
                 const EnumerationOptions& opts, Acc init, Step step, Merge merge) {
  const int m = static_cast<int>(alphabet.size());
  const double total = count_types(m, n);
  if (total > opts.cap) throw ResourceCapError(total, opts.cap);

  auto run_range = [&](std::int64_t c0_hi, std::int64_t c0_lo) {
    Acc acc = init;
    std::vector<std::int64_t> c(m);
    for (std::int64_t c0 = c0_hi; c0 >= c0_lo; --c0) {
      c[0] = c0;
      detail::visit_compositions(
          c, 1, n - c0, [&](const std::vector<std::int64_t>& counts) {
            step(acc, EmpiricalType(alphabet, counts));
          });
    }
    return acc;
  };

  const std::int64_t parts = n + 1;
  const int chunks = static_cast<int>(std::min<std::int64_t>(64, parts));
  std::vector<Acc> accs;
  accs.reserve(chunks);

  const int threads = std::max(1, opts.threads);
  if (threads == 1) {
    for (int k = 0; k < chunks; ++k) {
      const std::int64_t lo_idx = parts * k / chunks;  // c0 = n - idx, [lo, hi)
      const std::int64_t hi_idx = parts * (k + 1) / chunks;
      accs.push_back(run_range(n - lo_idx, n - hi_idx + 1));
    }
  } else {
    std::vector<std::future<Acc>> futs(chunks);
    for (int wave = 0; wave < chunks; wave += threads) {
      const int hi = std::min(chunks, wave + threads);
      for (int k = wave; k < hi; ++k) {
        const std::int64_t lo_idx = parts * k / chunks;
        const std::int64_t hi_idx = parts * (k + 1) / chunks;
        futs[k] = std::async(std::launch::async, [=, &run_range] {
          return run_range(n - lo_idx, n - hi_idx + 1);
        });
      }
      for (int k = wave; k < hi; ++k) accs.push_back(futs[k].get());
    }
  }
  Acc acc = std::move(accs[0]);
  for (int k = 1; k < chunks; ++k) merge(acc, std::move(accs[k]));
  return acc;
}

}  // namespace typeproj
