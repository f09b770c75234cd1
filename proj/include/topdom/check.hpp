#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "topdom/engine.hpp"
#include "topdom/oplog.hpp"

namespace topdom {

/**
 * Straight-line reference: points in a flat array with true scores, updated
 * in O(n) per change by rescanning. Ids are assigned in insertion order
 * starting at 1, matching the engine.
 */
class ReferenceModel {
public:
    void insert(std::int64_t x, std::int64_t y);
    void erase(std::int64_t x, std::int64_t y);
    bool contains(std::int64_t x, std::int64_t y) const;
    std::size_t size() const { return pts_.size(); }

    std::vector<ScoredPoint> topk(std::size_t k) const;
    std::vector<std::vector<Point>> layers() const;
    std::int64_t score_of(std::int64_t x, std::int64_t y) const;
    const std::vector<Point>& points() const { return pts_; }

private:
    std::vector<Point> pts_; // base_score kept equal to the true score
    std::uint64_t next_id_ = 1;
};

struct CheckOptions {
    /**
     * Paranoid mode additionally validates every layer tree's invariants
     * and compares all maintained layers (points and scores) and the split
     * between layers and tail against the reference after every op.
     */
    bool paranoid = false;
};

struct CheckResult {
    bool ok = true;
    std::size_t ops_run = 0;
    std::size_t queries_checked = 0;
    std::size_t op_index = 0;  // first divergence, when !ok
    std::string message;       // first divergence description, when !ok
};

/**
 * Replays the log on a fresh engine and the reference in lockstep and
 * compares every query answer (and, in paranoid mode, full structure after
 * every op). Stops at the first divergence. `tamper`, when set, runs after
 * each op with the engine and the op index — a test hook for injecting
 * damage the checker is expected to catch.
 */
CheckResult run_check(const OpLog& log, const CheckOptions& opt = {},
                      const std::function<void(Engine&, std::size_t)>& tamper = nullptr);

} // namespace topdom
