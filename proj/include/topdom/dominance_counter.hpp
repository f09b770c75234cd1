#pragma once

#include <cstddef>
#include <cstdint>

namespace topdom {

namespace detail {
struct CounterNode;
}

/**
 * Dynamic counting of dominated points in O(log^2 n) amortized per operation.
 *
 * A weight-balanced search tree keyed by (x, y); every node additionally
 * stores the y values of its whole subtree in a weight-balanced counting
 * tree. Balancing is rebuild-based (scapegoat style, no rotations) so the
 * secondary structures can be reconstructed from sorted data when a subtree
 * is rebuilt.
 */
class DominanceCounter {
public:
    DominanceCounter() = default;
    ~DominanceCounter();
    DominanceCounter(const DominanceCounter&) = delete;
    DominanceCounter& operator=(const DominanceCounter&) = delete;
    DominanceCounter(DominanceCounter&& other) noexcept;
    DominanceCounter& operator=(DominanceCounter&& other) noexcept;

    /** Throws std::invalid_argument if (x, y) is already stored. */
    void insert(std::int64_t x, std::int64_t y);
    /** Throws std::invalid_argument if (x, y) is not stored. */
    void erase(std::int64_t x, std::int64_t y);
    bool contains(std::int64_t x, std::int64_t y) const;
    std::size_t size() const { return size_; }

    /**
     * Number of stored points dominated by (x, y): points in the closed
     * quadrant x' >= x, y' >= y, excluding a point at exactly (x, y).
     */
    std::int64_t count_dominated(std::int64_t x, std::int64_t y) const;

    /** Cumulative node touches, for structural-work reporting. */
    std::uint64_t nodes_visited() const { return visits_; }

private:
    detail::CounterNode* root_ = nullptr;
    std::size_t size_ = 0;
    std::size_t max_size_ = 0; // high-water mark since the last full rebuild
    mutable std::uint64_t visits_ = 0;

    void rebuild_all();
};

} // namespace topdom
