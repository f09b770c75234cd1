#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace topdom {

/**
 * A 2D point with integer coordinates. Smaller coordinates are preferred:
 * p dominates q when p is no worse in both dimensions and strictly better
 * in at least one. `base_score` is the number of points p dominates, as of
 * the moment it was last resolved; structures that store points lazily may
 * keep it relative to pending add tags.
 */
struct Point {
    std::uint64_t id = 0;
    std::int64_t x = 0;
    std::int64_t y = 0;
    std::int64_t base_score = 0;
};

/** A fully resolved query answer: point plus its true dominance score. */
struct ScoredPoint {
    std::uint64_t id = 0;
    std::int64_t x = 0;
    std::int64_t y = 0;
    std::int64_t score = 0;
};

inline bool dominates(std::int64_t px, std::int64_t py, std::int64_t qx, std::int64_t qy) {
    return (px <= qx && py < qy) || (px < qx && py <= qy);
}

inline bool dominates(const Point& p, const Point& q) {
    return dominates(p.x, p.y, q.x, q.y);
}

/** Ranking order for answers: score descending, then x ascending, then y ascending. */
inline bool canonical_less(const ScoredPoint& a, const ScoredPoint& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
}

/** Throws std::invalid_argument if two points share both coordinates. */
void ensure_distinct(std::span<const Point> pts);

/**
 * Brute-force dominance scores, O(n^2) pairwise tests. Result is aligned
 * with the input: out[i] = |{ j : pts[i] dominates pts[j] }|.
 * Parallelized with OpenMP when available; `oracle_scores_serial` is the
 * plain loop kept as the reference implementation.
 */
std::vector<std::int64_t> oracle_scores(std::span<const Point> pts);
std::vector<std::int64_t> oracle_scores_serial(std::span<const Point> pts);

/** Same scores keyed by point id. */
std::unordered_map<std::uint64_t, std::int64_t> oracle_score_map(std::span<const Point> pts);

/**
 * Layers of maxima by iterated peeling: layer 1 holds the non-dominated
 * points, layer i the points dominated only by earlier layers. Each layer
 * comes back sorted by x ascending (hence y descending).
 */
std::vector<std::vector<Point>> oracle_layers(std::span<const Point> pts);

/** The first min(k, n) points under canonical order, with true scores. */
std::vector<ScoredPoint> oracle_topk(std::span<const Point> pts, std::size_t k);

/** Point text format: one point per line, "x y" as decimal integers. */
Point parse_point_line(std::string_view line, std::uint64_t id);
std::vector<Point> read_points(std::istream& in);
void write_points(std::ostream& out, std::span<const Point> pts);

} // namespace topdom
