#pragma once

#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

#include "topdom/geometry.hpp"

namespace topdom::testutil {

/** Points from coordinate pairs; ids assigned 1..n in order, scores 0. */
inline std::vector<Point> pts(std::initializer_list<std::pair<std::int64_t, std::int64_t>> xs) {
    std::vector<Point> out;
    std::uint64_t id = 1;
    for (auto [x, y] : xs) out.push_back(Point{id++, x, y, 0});
    return out;
}

inline std::vector<std::pair<std::int64_t, std::int64_t>> coords(
    const std::vector<Point>& v) {
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    for (const Point& p : v) out.emplace_back(p.x, p.y);
    return out;
}

inline std::vector<std::pair<std::int64_t, std::int64_t>> coords(
    const std::vector<ScoredPoint>& v) {
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    for (const ScoredPoint& p : v) out.emplace_back(p.x, p.y);
    return out;
}

/** (x, y, score) triples for exact answer comparisons. */
struct Triple {
    std::int64_t x, y, score;
    bool operator==(const Triple&) const = default;
};

inline std::vector<Triple> triples(const std::vector<ScoredPoint>& v) {
    std::vector<Triple> out;
    for (const ScoredPoint& p : v) out.push_back({p.x, p.y, p.score});
    return out;
}

inline std::vector<Triple> triples(const std::vector<Point>& v) {
    std::vector<Triple> out;
    for (const Point& p : v) out.push_back({p.x, p.y, p.base_score});
    return out;
}

} // namespace topdom::testutil
