#include "topdom/dominance_counter.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <iterator>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace topdom {

namespace {

constexpr double kAlpha = 0.70;

// Depth past which an insertion triggers a scapegoat search.
std::size_t depth_limit(std::size_t size) {
    return static_cast<std::size_t>(std::log(static_cast<double>(size)) / std::log(1.0 / kAlpha)) + 1;
}

// ---- counting tree over y values (a multiset; duplicates across x's) ----

struct YNode {
    std::int64_t y;
    YNode* left = nullptr;
    YNode* right = nullptr;
    std::size_t size = 1;
};

std::size_t ysize(const YNode* v) { return v ? v->size : 0; }

void yfree(YNode* v) {
    if (!v) return;
    yfree(v->left);
    yfree(v->right);
    delete v;
}

void yflatten(const YNode* v, std::vector<std::int64_t>& out) {
    if (!v) return;
    yflatten(v->left, out);
    out.push_back(v->y);
    yflatten(v->right, out);
}

YNode* ybuild(std::span<const std::int64_t> sorted) {
    if (sorted.empty()) return nullptr;
    std::size_t mid = sorted.size() / 2;
    YNode* v = new YNode{sorted[mid]};
    v->left = ybuild(sorted.first(mid));
    v->right = ybuild(sorted.subspan(mid + 1));
    v->size = sorted.size();
    return v;
}

// Invariant: left subtree < node value <= right subtree.
class YTree {
public:
    YTree() = default;
    ~YTree() { yfree(root_); }
    YTree(const YTree&) = delete;
    YTree& operator=(const YTree&) = delete;

    std::size_t size() const { return ysize(root_); }

    void build_from_sorted(std::span<const std::int64_t> sorted) {
        yfree(root_);
        root_ = ybuild(sorted);
        max_size_ = sorted.size();
    }

    void insert(std::int64_t y, std::uint64_t& visits) {
        YNode** slot = &root_;
        std::vector<YNode**> path;
        while (*slot) {
            ++visits;
            path.push_back(slot);
            (*slot)->size++;
            slot = (y < (*slot)->y) ? &(*slot)->left : &(*slot)->right;
        }
        *slot = new YNode{y};
        path.push_back(slot);
        max_size_ = std::max(max_size_, size());
        if (path.size() > depth_limit(size())) rebalance(path);
    }

    // Removes one instance of y, which must be present.
    void erase(std::int64_t y, std::uint64_t& visits) {
        YNode** slot = &root_;
        while (*slot && (*slot)->y != y) {
            ++visits;
            (*slot)->size--;
            slot = (y < (*slot)->y) ? &(*slot)->left : &(*slot)->right;
        }
        assert(*slot != nullptr && "YTree::erase: value not present");
        YNode* v = *slot;
        v->size--;
        if (v->left && v->right) {
            // Swap in the successor's value and splice the successor out.
            YNode** s = &v->right;
            while ((*s)->left) {
                ++visits;
                (*s)->size--;
                s = &(*s)->left;
            }
            YNode* succ = *s;
            v->y = succ->y;
            *s = succ->right;
            delete succ;
        } else {
            *slot = v->left ? v->left : v->right;
            delete v;
        }
        if (static_cast<double>(size()) < kAlpha * static_cast<double>(max_size_)) {
            std::vector<std::int64_t> vals;
            vals.reserve(size());
            yflatten(root_, vals);
            yfree(root_);
            root_ = ybuild(vals);
            max_size_ = vals.size();
        }
    }

    std::int64_t count_ge(std::int64_t q, std::uint64_t& visits) const {
        std::int64_t n = 0;
        for (const YNode* v = root_; v;) {
            ++visits;
            if (v->y >= q) {
                n += 1 + static_cast<std::int64_t>(ysize(v->right));
                v = v->left;
            } else {
                v = v->right;
            }
        }
        return n;
    }

private:
    YNode* root_ = nullptr;
    std::size_t max_size_ = 0;

    void rebalance(std::vector<YNode**>& path) {
        // Scapegoat: rebuild around the shallowest ancestor that is too lopsided.
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            YNode* v = *path[i];
            YNode* child = *path[i + 1];
            if (static_cast<double>(child->size) > kAlpha * static_cast<double>(v->size)) {
                std::vector<std::int64_t> vals;
                vals.reserve(v->size);
                yflatten(v, vals);
                YNode* fresh = ybuild(vals);
                yfree(v);
                *path[i] = fresh;
                return;
            }
        }
    }
};

} // namespace

// ---- primary tree keyed by (x, y) ----

namespace detail {

struct CounterNode {
    CounterNode(std::int64_t px, std::int64_t py) : x(px), y(py) {}

    std::int64_t x;
    std::int64_t y;
    CounterNode* left = nullptr;
    CounterNode* right = nullptr;
    std::size_t size = 1;
    YTree ys; // y values of the whole subtree, this node included
};

} // namespace detail

namespace {

using detail::CounterNode;

// Lexicographic key order on (x, y); keys are unique.
bool key_less(std::int64_t ax, std::int64_t ay, std::int64_t bx, std::int64_t by) {
    return ax != bx ? ax < bx : ay < by;
}

void xfree(CounterNode* v) {
    if (!v) return;
    xfree(v->left);
    xfree(v->right);
    delete v;
}

void xflatten(const CounterNode* v, std::vector<std::pair<std::int64_t, std::int64_t>>& out) {
    if (!v) return;
    xflatten(v->left, out);
    out.emplace_back(v->x, v->y);
    xflatten(v->right, out);
}

// Rebuilds a perfectly balanced subtree; fills `ys_out` with the subtree's
// y values in ascending order so parents can merge without re-sorting.
CounterNode* xbuild(std::span<const std::pair<std::int64_t, std::int64_t>> sorted,
                    std::vector<std::int64_t>& ys_out) {
    ys_out.clear();
    if (sorted.empty()) return nullptr;
    std::size_t mid = sorted.size() / 2;
    auto* v = new CounterNode{sorted[mid].first, sorted[mid].second};
    std::vector<std::int64_t> left_ys, right_ys;
    v->left = xbuild(sorted.first(mid), left_ys);
    v->right = xbuild(sorted.subspan(mid + 1), right_ys);
    v->size = sorted.size();

    ys_out.reserve(sorted.size());
    std::merge(left_ys.begin(), left_ys.end(), right_ys.begin(), right_ys.end(),
               std::back_inserter(ys_out));
    ys_out.insert(std::lower_bound(ys_out.begin(), ys_out.end(), v->y), v->y);
    v->ys.build_from_sorted(ys_out);
    return v;
}

CounterNode* xbuild_root(std::span<const std::pair<std::int64_t, std::int64_t>> sorted) {
    std::vector<std::int64_t> scratch;
    return xbuild(sorted, scratch);
}

} // namespace

DominanceCounter::~DominanceCounter() { xfree(root_); }

DominanceCounter::DominanceCounter(DominanceCounter&& other) noexcept
    : root_(std::exchange(other.root_, nullptr)),
      size_(std::exchange(other.size_, 0)),
      max_size_(std::exchange(other.max_size_, 0)),
      visits_(other.visits_) {}

DominanceCounter& DominanceCounter::operator=(DominanceCounter&& other) noexcept {
    if (this != &other) {
        xfree(root_);
        root_ = std::exchange(other.root_, nullptr);
        size_ = std::exchange(other.size_, 0);
        max_size_ = std::exchange(other.max_size_, 0);
        visits_ = other.visits_;
    }
    return *this;
}

bool DominanceCounter::contains(std::int64_t x, std::int64_t y) const {
    for (const CounterNode* v = root_; v;) {
        ++visits_;
        if (v->x == x && v->y == y) return true;
        v = key_less(x, y, v->x, v->y) ? v->left : v->right;
    }
    return false;
}

void DominanceCounter::insert(std::int64_t x, std::int64_t y) {
    if (contains(x, y)) throw std::invalid_argument("DominanceCounter: duplicate point");

    CounterNode** slot = &root_;
    std::vector<CounterNode**> path;
    while (*slot) {
        ++visits_;
        path.push_back(slot);
        (*slot)->size++;
        (*slot)->ys.insert(y, visits_);
        slot = key_less(x, y, (*slot)->x, (*slot)->y) ? &(*slot)->left : &(*slot)->right;
    }
    *slot = new CounterNode{x, y};
    (*slot)->ys.insert(y, visits_);
    path.push_back(slot);
    ++size_;
    max_size_ = std::max(max_size_, size_);

    if (path.size() > depth_limit(size_)) {
        // Scapegoat: rebuild the shallowest ancestor that is too lopsided.
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            CounterNode* v = *path[i];
            CounterNode* child = *path[i + 1];
            if (static_cast<double>(child->size) > kAlpha * static_cast<double>(v->size)) {
                std::vector<std::pair<std::int64_t, std::int64_t>> pts;
                pts.reserve(v->size);
                xflatten(v, pts);
                CounterNode* fresh = xbuild_root(pts);
                xfree(v);
                *path[i] = fresh;
                return;
            }
        }
    }
}

void DominanceCounter::erase(std::int64_t x, std::int64_t y) {
    if (!contains(x, y)) throw std::invalid_argument("DominanceCounter: point not stored");

    CounterNode** slot = &root_;
    while ((*slot)->x != x || (*slot)->y != y) {
        ++visits_;
        (*slot)->size--;
        (*slot)->ys.erase(y, visits_);
        slot = key_less(x, y, (*slot)->x, (*slot)->y) ? &(*slot)->left : &(*slot)->right;
    }
    CounterNode* v = *slot;
    v->size--;
    v->ys.erase(y, visits_);

    if (v->left && v->right) {
        // The successor's key moves up into v, leaving every subtree strictly
        // between v and its old node; fix those once the key is known.
        std::vector<CounterNode*> between;
        CounterNode** s = &v->right;
        while ((*s)->left) {
            ++visits_;
            between.push_back(*s);
            s = &(*s)->left;
        }
        CounterNode* succ = *s;
        for (CounterNode* w : between) {
            w->size--;
            w->ys.erase(succ->y, visits_);
        }
        v->x = succ->x;
        v->y = succ->y;
        *s = succ->right;
        delete succ;
    } else {
        *slot = v->left ? v->left : v->right;
        delete v;
    }

    --size_;
    if (static_cast<double>(size_) < kAlpha * static_cast<double>(max_size_)) rebuild_all();
}

void DominanceCounter::rebuild_all() {
    std::vector<std::pair<std::int64_t, std::int64_t>> pts;
    pts.reserve(size_);
    xflatten(root_, pts);
    xfree(root_);
    root_ = xbuild_root(pts);
    max_size_ = pts.size();
}

std::int64_t DominanceCounter::count_dominated(std::int64_t x, std::int64_t y) const {
    // Points in the quadrant x' >= x, y' >= y. In (x, y) lexicographic key
    // order that quadrant is a suffix in x, filtered by y.
    std::int64_t n = 0;
    for (const CounterNode* v = root_; v;) {
        ++visits_;
        if (v->x >= x) {
            if (v->y >= y) ++n;
            if (v->right) n += v->right->ys.count_ge(y, visits_);
            v = v->left;
        } else {
            v = v->right;
        }
    }
    if (contains(x, y)) --n;
    return n;
}

} // namespace topdom
