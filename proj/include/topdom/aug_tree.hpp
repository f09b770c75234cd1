#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "topdom/geometry.hpp"

namespace topdom {

namespace detail {
struct AugNode;
}

/**
 * Fanout bounds and list capacity for an augmented staircase tree.
 * Requires a >= 2 and b >= 2a.
 */
struct TreeParams {
    int a = 2;
    int b = 4;
    std::size_t cap = 1; // entries kept per augmented list
};

/**
 * Balanced leaf-oriented search tree over one staircase (x strictly
 * ascending, y strictly descending), augmented so that the best entries by
 * score are available at the root without touching the leaves.
 *
 * Every leaf stores a base score. Internal nodes may carry a pending "add"
 * that applies to every leaf below them, so a score change over a
 * contiguous run of leaves costs O(log n) instead of O(n). Nodes at height
 * h0 (the lowest height whose subtree can hold `cap` leaves) keep a fully
 * sorted list of their subtree; taller nodes keep only their best `cap`
 * entries, merged from their children. A node's list entry resolves to a
 * true score by adding the "add" tags of that node and its ancestors.
 *
 * Positions are 0-based leaf indices in staircase order. All mutating
 * operations keep the lists and pending tags consistent; `validate()`
 * recomputes everything from scratch and throws std::logic_error on any
 * discrepancy.
 */
class AugTree {
public:
    AugTree() = default;
    explicit AugTree(TreeParams params);
    ~AugTree();
    AugTree(const AugTree&) = delete;
    AugTree& operator=(const AugTree&) = delete;
    AugTree(AugTree&& other) noexcept;
    AugTree& operator=(AugTree&& other) noexcept;

    /**
     * Bulk build. Points must form a staircase in ascending x order;
     * base_score carries each point's true score. Throws
     * std::invalid_argument otherwise.
     */
    static AugTree build(TreeParams params, const std::vector<Point>& staircase);

    const TreeParams& params() const { return params_; }
    std::size_t size() const;
    bool empty() const { return size() == 0; }
    int height() const;

    // Positional boundaries in staircase order. Each returns size() when no
    // leaf qualifies.
    std::size_t first_x_ge(std::int64_t x) const;
    std::size_t first_x_gt(std::int64_t x) const;
    std::size_t first_y_le(std::int64_t y) const;
    std::size_t first_y_lt(std::int64_t y) const;

    /** Leaf at `pos` with its resolved score. Throws std::out_of_range. */
    ScoredPoint at(std::size_t pos) const;
    ScoredPoint front() const { return at(0); }
    ScoredPoint back() const { return at(size() - 1); }

    /** Position of the leaf with exactly these coordinates, or size(). */
    std::size_t find(std::int64_t x, std::int64_t y) const;

    /** True if some stored point dominates (x, y). */
    bool dominates_point(std::int64_t x, std::int64_t y) const;

    /**
     * Inserts a point with the given true score. The point must extend the
     * staircase (no dominance against stored points, no shared
     * coordinates); throws std::logic_error otherwise.
     */
    void insert(const Point& pt, std::int64_t score);

    /** Removes the leaf at `pos`. Throws std::out_of_range. */
    void erase(std::size_t pos);

    /**
     * Adds `delta` to the resolved score of every stored point dominating
     * (x, y); a stored point at exactly (x, y) is left alone. Returns the
     * number of points changed.
     */
    std::int64_t add_to_dominators(std::int64_t x, std::int64_t y, std::int64_t delta);

    /** Adds `delta` to the resolved score of every stored point. */
    void add_to_all(std::int64_t delta);

    /** Best min(cap, size) entries, resolved, best first. */
    std::vector<ScoredPoint> root_top() const;

    /**
     * Candidate replacements after reporting the leaf at `pos`: for every
     * node on the root-to-leaf path, the best entry not in `excluded` from
     * each child list (or from the node's full list at the threshold
     * level). Appends resolved entries to `out`.
     */
    void path_candidates(std::size_t pos, const std::unordered_set<std::uint64_t>& excluded,
                         std::vector<ScoredPoint>& out) const;

    /** All leaves in staircase order with resolved scores. */
    std::vector<ScoredPoint> all_resolved() const;

    /**
     * Joins two trees whose staircases are compatible: every left leaf has
     * smaller x and larger y than every right leaf. Throws
     * std::logic_error otherwise. Consumes both arguments.
     */
    static AugTree concat(AugTree left, AugTree right);

    /**
     * Splits off the first `idx` leaves. Leaves *this empty. Throws
     * std::out_of_range if idx > size().
     */
    std::pair<AugTree, AugTree> split_at(std::size_t idx);

    /** Structural self-check; throws std::logic_error with a description. */
    void validate() const;

    /** validate() plus resolved scores matched against `expected` by id. */
    void validate_scores(const std::unordered_map<std::uint64_t, std::int64_t>& expected) const;

    /** Indented structural dump, one node per line. */
    std::string dump() const;

private:
    TreeParams params_;
    std::unique_ptr<detail::AugNode> root_;

    AugTree(TreeParams params, std::unique_ptr<detail::AugNode> root);
};

/** Nodes touched by tree operations on this thread, cumulative. */
std::uint64_t aug_nodes_visited();

} // namespace topdom
