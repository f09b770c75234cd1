#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "topdom/aug_tree.hpp"
#include "topdom/dominance_counter.hpp"
#include "topdom/geometry.hpp"

namespace topdom {

enum class QueryMode { klist, onelist };
enum class Dynamics { semi, full };

struct EngineConfig {
    std::size_t k = 1;
    QueryMode mode = QueryMode::klist;
    Dynamics dynamics = Dynamics::semi;
    int a = 2;
    int b = 4;
};

struct EngineCounters {
    std::uint64_t tree_node_visits = 0;    // structural work in the layer trees
    std::uint64_t counter_node_visits = 0; // work in the dominance counter
    std::uint64_t rebuilds = 0;
    std::uint64_t cascade_steps = 0;       // layer-to-layer segment moves
    std::uint64_t query_candidates = 0;    // entries examined while answering
};

/**
 * Dynamic set of distinct 2D points answering top-k dominating queries.
 *
 * The first F staircase layers of the dominance order are kept in score-
 * augmented trees with exact scores; the rest of the points sit in an
 * unordered tail. Semi-dynamic engines accept inserts only and fix F = k.
 * Fully dynamic engines also accept deletions, set F = k + max(1, ceil
 * sqrt n0) at every global rebuild, shrink F by one per deletion, and
 * rebuild from scratch every max(1, ceil sqrt n0) updates, so F never
 * drops below k between rebuilds.
 */
class Engine {
public:
    explicit Engine(EngineConfig cfg);
    Engine(EngineConfig cfg, const std::vector<Point>& initial);

    const EngineConfig& config() const { return cfg_; }
    std::size_t size() const { return points_.size(); }
    bool contains(std::int64_t x, std::int64_t y) const;

    /** Current true score of a stored point. Throws if absent. */
    std::int64_t score_of(std::int64_t x, std::int64_t y) const;

    /** Inserts a new point; returns its id. Throws on duplicate coordinates. */
    std::uint64_t insert(std::int64_t x, std::int64_t y);

    /**
     * Removes the point at (x, y). Throws std::logic_error in semi-dynamic
     * mode and std::invalid_argument if the point is not stored.
     */
    void erase(std::int64_t x, std::int64_t y);

    /** Top-k by score (canonical order), using the configured algorithm. */
    std::vector<ScoredPoint> query() const;

    /** Forces a global rebuild (also resets the update budget). */
    void rebuild();

    std::size_t frontier() const { return frontier_; }
    std::size_t maintained_layers() const { return layers_.size(); }
    std::size_t updates_until_rebuild() const;

    std::vector<std::vector<ScoredPoint>> layers_snapshot() const;
    std::vector<std::uint64_t> tail_ids() const;
    std::string dump_layers() const;

    const EngineCounters& counters() const { return counters_; }

    /** Checks every layer tree's internal invariants; throws on failure. */
    void validate_trees() const;

    /** Deliberately offsets stored scores in the first layer (test hook). */
    void corrupt_first_layer_scores(std::int64_t delta);

private:
    EngineConfig cfg_;
    std::vector<AugTree> layers_;
    std::unordered_set<std::uint64_t> tail_;
    DominanceCounter counter_;
    std::unordered_map<std::uint64_t, std::pair<std::int64_t, std::int64_t>> points_;
    std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t> by_coord_;
    std::uint64_t next_id_ = 1;
    std::size_t frontier_ = 0;
    std::size_t n0_ = 0;
    std::size_t rebuild_period_ = 1;
    std::size_t updates_since_rebuild_ = 0;
    mutable EngineCounters counters_;

    TreeParams tree_params() const;
    void global_rebuild();
    void settle_after_update();
    void cascade_insert(AugTree seg, std::size_t layer_idx);
    void dissolve_into_tail(AugTree tree);
    std::vector<ScoredPoint> query_klist() const;
    std::vector<ScoredPoint> query_onelist() const;
};

} // namespace topdom
