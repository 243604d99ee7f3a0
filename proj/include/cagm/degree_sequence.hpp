#pragma once

// Post-processing of noisy degree sequences: monotone fitting and repair to
// graphical sequences with even sum.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cagm {

/// L2-closest non-decreasing sequence (pool adjacent violators).
std::vector<double> isotonic_regression(std::span<const double> values);

/// Erdős–Gallai test, including the even-sum condition. Order of the input
/// does not matter.
bool is_graphical(std::span<const std::size_t> degrees);

/// Clamps each entry to [0, caps[i]] and repairs the sequence until it is
/// graphical with an even sum. An odd sum is fixed by adding one to the
/// entry with the most slack (cap - d, ties to the last index) when that
/// yields a graphical sequence; otherwise the largest entry (ties to the
/// first index) is decremented and the check repeats. On a non-decreasing
/// input with a common cap both moves keep the order.
std::vector<std::size_t> make_graphical(std::span<const std::int64_t> degrees,
                                        std::span<const std::size_t> caps);

}  // namespace cagm
