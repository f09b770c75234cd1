#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace topdom {

/**
 * Exact r-th largest value (1-indexed) across lists sorted descending,
 * found with an m-way heap in O((m + r) log m) without touching the
 * rest of the lists. Throws std::out_of_range if r is 0 or exceeds
 * the total element count.
 */
std::int64_t kth_largest(const std::vector<std::vector<std::int64_t>>& lists, std::size_t r);

/**
 * Selection threshold over lists sorted descending: the smallest t such
 * that at least L values are strictly below t (t = L-th smallest value,
 * plus one). With nearly distinct values the count below t stays within
 * [L, 2L]; heavy ties at the cut can push it higher, and an all-equal
 * input makes any such two-sided bound unattainable. Throws
 * std::out_of_range if L is 0 or exceeds the total element count.
 */
std::int64_t frederickson_select(const std::vector<std::vector<std::int64_t>>& lists,
                                 std::size_t L);

} // namespace topdom
