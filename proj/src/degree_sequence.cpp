#include "cagm/degree_sequence.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace cagm {

std::vector<double> isotonic_regression(std::span<const double> values) {
  struct Block {
    double sum;
    std::size_t count;
  };
  std::vector<Block> blocks;
  blocks.reserve(values.size());
  for (double v : values) {
    blocks.push_back({v, 1});
    while (blocks.size() > 1) {
      const Block& last = blocks.back();
      const Block& prev = blocks[blocks.size() - 2];
      // prev.mean > last.mean, cross-multiplied.
      if (prev.sum * static_cast<double>(last.count) <= last.sum * static_cast<double>(prev.count)) {
        break;
      }
      Block merged{prev.sum + last.sum, prev.count + last.count};
      blocks.pop_back();
      blocks.back() = merged;
    }
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (const Block& b : blocks) {
    out.insert(out.end(), b.count, b.sum / static_cast<double>(b.count));
  }
  return out;
}

bool is_graphical(std::span<const std::size_t> degrees) {
  const std::size_t n = degrees.size();
  std::vector<std::size_t> d(degrees.begin(), degrees.end());
  std::sort(d.begin(), d.end(), std::greater<>());
  std::size_t total = 0;
  for (std::size_t x : d) {
    if (x >= n && x > 0) return false;
    total += x;
  }
  if (total % 2 != 0) return false;

  std::vector<std::size_t> suffix(n + 1, 0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + d[i];
  std::size_t prefix = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    prefix += d[k - 1];
    // Entries after position k that are >= k contribute k each; find where
    // the (descending) tail drops below k.
    auto first_small = std::lower_bound(d.begin() + static_cast<std::ptrdiff_t>(k), d.end(), k,
                                        std::greater<>());
    const std::size_t big = static_cast<std::size_t>(first_small - d.begin()) - k;
    const std::size_t rhs = k * (k - 1) + big * k + suffix[static_cast<std::size_t>(first_small - d.begin())];
    if (prefix > rhs) return false;
  }
  return true;
}

std::vector<std::size_t> make_graphical(std::span<const std::int64_t> degrees,
                                        std::span<const std::size_t> caps) {
  if (degrees.size() != caps.size()) {
    throw std::invalid_argument("make_graphical: degrees and caps differ in length");
  }
  const std::size_t n = degrees.size();
  std::vector<std::size_t> d(n);
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t v = std::max<std::int64_t>(0, degrees[i]);
    d[i] = std::min(static_cast<std::size_t>(v), caps[i]);
    total += d[i];
  }

  auto decrement_largest = [&] {
    std::size_t at = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (d[i] > d[at]) at = i;
    }
    --d[at];
    --total;
  };

  while (true) {
    if (total % 2 != 0) {
      std::size_t at = n;
      std::size_t best_slack = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t slack = caps[i] - d[i];
        if (slack > 0 && slack >= best_slack) {
          best_slack = slack;
          at = i;
        }
      }
      if (at < n) {
        ++d[at];
        if (is_graphical(d)) return d;
        --d[at];
      }
      decrement_largest();
      continue;
    }
    if (is_graphical(d)) return d;
    decrement_largest();
  }
}

}  // namespace cagm
