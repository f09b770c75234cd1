#pragma once

#include "topdom/geometry.hpp"

#include <vector>

namespace topdom {

/**
 * Layers of maxima in O(n log n): process points in (x asc, y asc) order and
 * binary-search the deepest layer whose smallest y so far is <= the point's y;
 * the point lands one layer below it. Per-layer minima form an ascending
 * sequence, which keeps the search valid. Matches oracle_layers exactly.
 */
std::vector<std::vector<Point>> compute_maxima_layers(std::vector<Point> pts);

} // namespace topdom
