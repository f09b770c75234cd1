#include "topdom/aug_tree.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace topdom {

namespace {
thread_local std::uint64_t g_visits = 0;
}

std::uint64_t aug_nodes_visited() { return g_visits; }

namespace detail {

enum class Kind : unsigned char { plain, thr, aug };

struct AugEntry {
    std::uint64_t id;
    std::int64_t x;
    std::int64_t y;
    std::int64_t rel; // true score minus the add tags at this node and above
};

struct AugEdge {
    std::unique_ptr<AugNode> child;
    std::int64_t x_max; // largest x in the child's subtree
    std::int64_t y_min; // smallest y in the child's subtree
};

struct AugNode {
    int height = 0;
    Kind kind = Kind::plain;
    std::int64_t add = 0;
    std::size_t size = 1;
    Point leaf{};               // height == 0 only
    std::vector<AugEdge> edges; // height > 0 only
    std::vector<AugEntry> list; // thr: whole subtree; aug: best cap entries

    bool is_leaf() const { return height == 0; }
};

} // namespace detail

namespace {

using detail::AugEdge;
using detail::AugEntry;
using detail::AugNode;
using detail::Kind;

// Derived tree constants: h0 is the lowest height whose subtree capacity
// b^h0 reaches `cap`; nodes below it carry no lists, nodes at it carry the
// whole subtree, nodes above it carry their best `cap` entries.
struct Ctx {
    int a;
    int b;
    std::size_t cap;
    int h0;
};

Ctx make_ctx(const TreeParams& p) {
    int h0 = 0;
    std::size_t reach = 1;
    while (reach < p.cap) {
        reach *= static_cast<std::size_t>(p.b);
        ++h0;
    }
    return {p.a, p.b, p.cap, h0};
}

void check_params(const TreeParams& p) {
    if (p.a < 2 || p.b < 2 * p.a || p.cap == 0) {
        throw std::invalid_argument("AugTree: requires a >= 2, b >= 2a, cap >= 1");
    }
}

// Entries within one list share a resolution offset, so this matches the
// canonical order of their true scores.
bool entry_before(std::int64_t rel_a, std::int64_t xa, std::int64_t ya, std::int64_t rel_b,
                  std::int64_t xb, std::int64_t yb) {
    if (rel_a != rel_b) return rel_a > rel_b;
    if (xa != xb) return xa < xb;
    return ya < yb;
}

bool list_sorted(const std::vector<AugEntry>& list) {
    for (std::size_t i = 1; i < list.size(); ++i) {
        if (entry_before(list[i].rel, list[i].x, list[i].y, list[i - 1].rel, list[i - 1].x,
                         list[i - 1].y)) {
            return false;
        }
    }
    return true;
}

void sort_entries(std::vector<AugEntry>& list) {
    std::sort(list.begin(), list.end(), [](const AugEntry& a, const AugEntry& b) {
        return entry_before(a.rel, a.x, a.y, b.rel, b.x, b.y);
    });
}

std::pair<std::int64_t, std::int64_t> child_keys(const AugNode* child) {
    if (child->is_leaf()) return {child->leaf.x, child->leaf.y};
    // x ascends and y descends across the subtree, so both extremes sit in
    // the last edge.
    return {child->edges.back().x_max, child->edges.back().y_min};
}

void refresh_key(AugEdge& e) {
    auto [xm, ym] = child_keys(e.child.get());
    e.x_max = xm;
    e.y_min = ym;
}

std::size_t sum_child_sizes(const AugNode* v) {
    std::size_t n = 0;
    for (const auto& e : v->edges) n += e.child->size;
    return n;
}

void for_each_leaf(AugNode* v, const std::function<void(AugNode*)>& fn) {
    ++g_visits;
    if (v->is_leaf()) {
        fn(v);
        return;
    }
    for (auto& e : v->edges) for_each_leaf(e.child.get(), fn);
}

void for_each_leaf_const(const AugNode* v, const std::function<void(const AugNode*)>& fn) {
    ++g_visits;
    if (v->is_leaf()) {
        fn(v);
        return;
    }
    for (const auto& e : v->edges) for_each_leaf_const(e.child.get(), fn);
}

// Pushes v's pending add one level down (or into leaf bases at the
// threshold level), keeping every resolved score unchanged.
void flush(AugNode* v) {
    ++g_visits;
    if (v->kind == Kind::plain) {
        assert(v->add == 0);
        return;
    }
    if (v->add == 0) return;
    std::int64_t d = v->add;
    if (v->kind == Kind::thr) {
        for_each_leaf(v, [d](AugNode* leaf) { leaf->leaf.base_score += d; });
        for (auto& e : v->list) e.rel += d;
    } else {
        for (auto& e : v->edges) {
            assert(e.child->kind != Kind::plain);
            e.child->add += d;
        }
        for (auto& e : v->list) e.rel += d;
    }
    v->add = 0;
}

// Rebuilds v's list from scratch: the whole subtree at the threshold
// level, or a cap-bounded merge of the children's lists above it.
void recompute_list(AugNode* v, const Ctx& c) {
    ++g_visits;
    assert(v->kind != Kind::plain);
    v->list.clear();
    if (v->kind == Kind::thr) {
        v->list.reserve(v->size);
        for_each_leaf(v, [v](AugNode* leaf) {
            v->list.push_back({leaf->leaf.id, leaf->leaf.x, leaf->leaf.y, leaf->leaf.base_score});
        });
        sort_entries(v->list);
        return;
    }
    // aug: children are at or above the threshold level, so all have lists.
    std::vector<std::size_t> cursor(v->edges.size(), 0);
    v->list.reserve(std::min(c.cap, v->size));
    while (v->list.size() < c.cap) {
        std::size_t best = v->edges.size();
        std::int64_t brel = 0, bx = 0, by = 0;
        for (std::size_t i = 0; i < v->edges.size(); ++i) {
            const AugNode* ch = v->edges[i].child.get();
            assert(ch->kind != Kind::plain);
            if (cursor[i] >= ch->list.size()) continue;
            const AugEntry& e = ch->list[cursor[i]];
            std::int64_t rel = e.rel + ch->add;
            if (best == v->edges.size() || entry_before(rel, e.x, e.y, brel, bx, by)) {
                best = i;
                brel = rel;
                bx = e.x;
                by = e.y;
            }
        }
        if (best == v->edges.size()) break;
        const AugEntry& e = v->edges[best].child->list[cursor[best]];
        v->list.push_back({e.id, e.x, e.y, brel});
        ++cursor[best];
    }
}

Kind kind_for(int height, bool is_root, const Ctx& c) {
    if (height > c.h0) return Kind::aug;
    if (height == c.h0) return Kind::thr;
    return is_root ? Kind::thr : Kind::plain;
}

// Root nodes below the threshold level carry the full list themselves.
void promote_to_thr(AugNode* v, const Ctx& c) {
    assert(v->kind == Kind::plain);
    v->kind = Kind::thr;
    v->add = 0;
    recompute_list(v, c);
}

void demote_to_plain(AugNode* v) {
    assert(v->kind == Kind::thr);
    flush(v);
    v->list.clear();
    v->list.shrink_to_fit();
    v->kind = Kind::plain;
}

void normalize_root(AugNode* v, const Ctx& c) {
    if (v && v->height < c.h0 && v->kind == Kind::plain) promote_to_thr(v, c);
}

// Splits an overfull node in half; v keeps the left part, the right part is
// returned with the same height and kind.
std::unique_ptr<AugNode> split_node(AugNode* v, const Ctx& c) {
    ++g_visits;
    assert(!v->is_leaf() && v->edges.size() >= 2);
    if (v->kind == Kind::aug) flush(v);
    auto right = std::make_unique<AugNode>();
    right->height = v->height;
    right->kind = v->kind;
    std::size_t keep = (v->edges.size() + 1) / 2;
    right->edges.reserve(v->edges.size() - keep);
    for (std::size_t i = keep; i < v->edges.size(); ++i) {
        right->edges.push_back(std::move(v->edges[i]));
    }
    v->edges.resize(keep);
    v->size = sum_child_sizes(v);
    right->size = sum_child_sizes(right.get());
    if (v->kind == Kind::thr) {
        right->add = v->add; // both halves keep resolving their leaves
        recompute_list(v, c);
        recompute_list(right.get(), c);
    } else if (v->kind == Kind::aug) {
        recompute_list(v, c);
        recompute_list(right.get(), c);
    }
    return right;
}

// Joins two same-height, same-kind siblings into one node (left absorbs
// right). The result may be overfull; the caller splits if needed.
std::unique_ptr<AugNode> merge_nodes(std::unique_ptr<AugNode> left,
                                     std::unique_ptr<AugNode> right, const Ctx& c) {
    ++g_visits;
    assert(left->height == right->height && left->kind == right->kind);
    assert(!left->is_leaf());
    flush(left.get());
    flush(right.get());
    for (auto& e : right->edges) left->edges.push_back(std::move(e));
    left->size += right->size;
    if (left->kind == Kind::thr) {
        std::vector<AugEntry> merged;
        merged.reserve(left->list.size() + right->list.size());
        std::merge(left->list.begin(), left->list.end(), right->list.begin(), right->list.end(),
                   std::back_inserter(merged), [](const AugEntry& a, const AugEntry& b) {
                       return entry_before(a.rel, a.x, a.y, b.rel, b.x, b.y);
                   });
        left->list = std::move(merged);
    } else if (left->kind == Kind::aug) {
        recompute_list(left.get(), c);
    }
    return left;
}

std::unique_ptr<AugNode> make_leaf(const Point& pt, std::int64_t base, const Ctx& c) {
    auto leaf = std::make_unique<AugNode>();
    leaf->height = 0;
    leaf->leaf = Point{pt.id, pt.x, pt.y, base};
    leaf->size = 1;
    leaf->kind = kind_for(0, false, c);
    if (leaf->kind == Kind::thr) {
        leaf->list.push_back({pt.id, pt.x, pt.y, base});
    }
    return leaf;
}

// Wraps two same-height subtrees in a fresh root one level up.
std::unique_ptr<AugNode> grow_root(std::unique_ptr<AugNode> left, std::unique_ptr<AugNode> right,
                                   const Ctx& c) {
    int h = left->height;
    assert(right->height == h);
    if (h < c.h0) {
        // the halves lose root status, and below h0 children carry no lists
        if (left->kind == Kind::thr) demote_to_plain(left.get());
        if (right->kind == Kind::thr) demote_to_plain(right.get());
    }
    auto root = std::make_unique<AugNode>();
    root->height = h + 1;
    root->kind = kind_for(h + 1, true, c);
    root->edges.resize(2);
    root->edges[0].child = std::move(left);
    root->edges[1].child = std::move(right);
    refresh_key(root->edges[0]);
    refresh_key(root->edges[1]);
    root->size = sum_child_sizes(root.get());
    recompute_list(root.get(), c);
    return root;
}

std::unique_ptr<AugNode> insert_rec(AugNode* v, const Point& pt, std::int64_t score,
                                    std::int64_t acc, const Ctx& c) {
    ++g_visits;
    if (v->kind != Kind::plain) acc += v->add;
    if (v->height == 1) {
        std::size_t j = 0;
        while (j < v->edges.size() && v->edges[j].x_max < pt.x) ++j;
        AugEdge e;
        e.child = make_leaf(pt, score - acc, c);
        refresh_key(e);
        v->edges.insert(v->edges.begin() + static_cast<std::ptrdiff_t>(j), std::move(e));
    } else {
        std::size_t j = 0;
        while (j + 1 < v->edges.size() && v->edges[j].x_max < pt.x) ++j;
        auto spill = insert_rec(v->edges[j].child.get(), pt, score, acc, c);
        refresh_key(v->edges[j]);
        if (spill) {
            AugEdge e;
            e.child = std::move(spill);
            refresh_key(e);
            v->edges.insert(v->edges.begin() + static_cast<std::ptrdiff_t>(j) + 1, std::move(e));
        }
    }
    v->size += 1;
    if (v->edges.size() > static_cast<std::size_t>(c.b)) return split_node(v, c);
    if (v->kind != Kind::plain) recompute_list(v, c);
    return nullptr;
}

// Removes the leaf at `pos`; returns whether v dropped below the minimum
// fanout (the root is exempt and handled by the caller).
bool erase_rec(AugNode* v, std::size_t pos, const Ctx& c) {
    ++g_visits;
    v->size -= 1;
    if (v->height == 1) {
        v->edges.erase(v->edges.begin() + static_cast<std::ptrdiff_t>(pos));
        if (v->kind != Kind::plain) recompute_list(v, c);
        return v->edges.size() < static_cast<std::size_t>(c.a);
    }
    std::size_t j = 0;
    std::size_t off = 0;
    while (pos >= off + v->edges[j].child->size) {
        off += v->edges[j].child->size;
        ++j;
    }
    bool under = erase_rec(v->edges[j].child.get(), pos - off, c);
    refresh_key(v->edges[j]);
    if (under) {
        std::size_t l = (j > 0) ? j - 1 : j;
        std::size_t r = l + 1;
        auto merged = merge_nodes(std::move(v->edges[l].child), std::move(v->edges[r].child), c);
        if (merged->edges.size() > static_cast<std::size_t>(c.b)) {
            auto rhalf = split_node(merged.get(), c);
            v->edges[l].child = std::move(merged);
            v->edges[r].child = std::move(rhalf);
            refresh_key(v->edges[l]);
            refresh_key(v->edges[r]);
        } else {
            v->edges[l].child = std::move(merged);
            refresh_key(v->edges[l]);
            v->edges.erase(v->edges.begin() + static_cast<std::ptrdiff_t>(r));
        }
    }
    if (v->kind != Kind::plain) recompute_list(v, c);
    return v->edges.size() < static_cast<std::size_t>(c.a);
}

// Adds delta to every leaf in the position window [lo, hi), carried as a
// pending tag wherever a subtree is fully covered.
void range_add(AugNode* v, std::size_t lo, std::size_t hi, std::int64_t delta, const Ctx& c) {
    ++g_visits;
    assert(lo < hi && hi <= v->size);
    if (lo == 0 && hi == v->size) {
        assert(v->kind != Kind::plain);
        v->add += delta;
        return;
    }
    if (v->kind == Kind::thr) {
        // partial window at the threshold level: adjust bases in place and
        // patch the matching list entries
        std::unordered_set<std::uint64_t> touched;
        std::size_t idx = 0;
        for_each_leaf(v, [&](AugNode* leaf) {
            if (idx >= lo && idx < hi) {
                leaf->leaf.base_score += delta;
                touched.insert(leaf->leaf.id);
            }
            ++idx;
        });
        for (auto& e : v->list) {
            if (touched.count(e.id)) e.rel += delta;
        }
        sort_entries(v->list);
        return;
    }
    assert(v->kind == Kind::aug);
    std::size_t off = 0;
    for (auto& e : v->edges) {
        std::size_t sz = e.child->size;
        std::size_t wlo = std::max(lo, off);
        std::size_t whi = std::min(hi, off + sz);
        if (wlo < whi) range_add(e.child.get(), wlo - off, whi - off, delta, c);
        off += sz;
    }
    recompute_list(v, c);
}

struct SpineStep {
    AugNode* node;
    bool rightmost; // descended through the last edge (vs the first)
};

} // namespace

// ---- AugTree public surface ----

AugTree::AugTree(TreeParams params) : params_(params) { check_params(params); }

AugTree::AugTree(TreeParams params, std::unique_ptr<detail::AugNode> root)
    : params_(params), root_(std::move(root)) {}

AugTree::~AugTree() = default;
AugTree::AugTree(AugTree&&) noexcept = default;
AugTree& AugTree::operator=(AugTree&&) noexcept = default;

std::size_t AugTree::size() const { return root_ ? root_->size : 0; }

int AugTree::height() const { return root_ ? root_->height : -1; }

AugTree AugTree::build(TreeParams params, const std::vector<Point>& staircase) {
    check_params(params);
    for (std::size_t i = 1; i < staircase.size(); ++i) {
        if (staircase[i].x <= staircase[i - 1].x || staircase[i].y >= staircase[i - 1].y) {
            throw std::invalid_argument("AugTree::build: not a staircase");
        }
    }
    AugTree t(params);
    if (staircase.empty()) return t;
    Ctx c = make_ctx(params);

    std::vector<std::unique_ptr<AugNode>> level;
    level.reserve(staircase.size());
    for (const Point& p : staircase) level.push_back(make_leaf(p, p.base_score, c));

    while (level.size() > 1) {
        // chunk sizes within [a, b]; a single undersized final chunk borrows
        // from the previous full one
        std::vector<std::size_t> chunks;
        std::size_t m = level.size();
        if (m <= static_cast<std::size_t>(c.b)) {
            chunks.push_back(m);
        } else {
            std::size_t full = m / static_cast<std::size_t>(c.b);
            std::size_t rest = m % static_cast<std::size_t>(c.b);
            chunks.assign(full, static_cast<std::size_t>(c.b));
            if (rest >= static_cast<std::size_t>(c.a)) {
                chunks.push_back(rest);
            } else if (rest > 0) {
                std::size_t pool = chunks.back() + rest;
                chunks.back() = pool / 2;
                chunks.push_back(pool - pool / 2);
            }
        }
        std::vector<std::unique_ptr<AugNode>> next;
        next.reserve(chunks.size());
        std::size_t at = 0;
        int h = level[0]->height + 1;
        for (std::size_t sz : chunks) {
            auto node = std::make_unique<AugNode>();
            node->height = h;
            node->kind = kind_for(h, false, c);
            node->edges.reserve(sz);
            for (std::size_t i = 0; i < sz; ++i) {
                AugEdge e;
                e.child = std::move(level[at + i]);
                refresh_key(e);
                node->edges.push_back(std::move(e));
            }
            at += sz;
            node->size = sum_child_sizes(node.get());
            if (node->kind != Kind::plain) recompute_list(node.get(), c);
            next.push_back(std::move(node));
        }
        level = std::move(next);
    }
    t.root_ = std::move(level[0]);
    normalize_root(t.root_.get(), c);
    return t;
}

std::size_t AugTree::first_x_ge(std::int64_t x) const {
    std::size_t pos = 0;
    const AugNode* v = root_.get();
    if (!v) return 0;
    while (!v->is_leaf()) {
        ++g_visits;
        const AugNode* next = nullptr;
        for (const auto& e : v->edges) {
            if (e.x_max >= x) {
                next = e.child.get();
                break;
            }
            pos += e.child->size;
        }
        if (!next) return pos;
        v = next;
    }
    ++g_visits;
    return pos + (v->leaf.x >= x ? 0 : 1);
}

std::size_t AugTree::first_x_gt(std::int64_t x) const {
    std::size_t pos = 0;
    const AugNode* v = root_.get();
    if (!v) return 0;
    while (!v->is_leaf()) {
        ++g_visits;
        const AugNode* next = nullptr;
        for (const auto& e : v->edges) {
            if (e.x_max > x) {
                next = e.child.get();
                break;
            }
            pos += e.child->size;
        }
        if (!next) return pos;
        v = next;
    }
    ++g_visits;
    return pos + (v->leaf.x > x ? 0 : 1);
}

std::size_t AugTree::first_y_le(std::int64_t y) const {
    std::size_t pos = 0;
    const AugNode* v = root_.get();
    if (!v) return 0;
    while (!v->is_leaf()) {
        ++g_visits;
        const AugNode* next = nullptr;
        for (const auto& e : v->edges) {
            if (e.y_min <= y) {
                next = e.child.get();
                break;
            }
            pos += e.child->size;
        }
        if (!next) return pos;
        v = next;
    }
    ++g_visits;
    return pos + (v->leaf.y <= y ? 0 : 1);
}

std::size_t AugTree::first_y_lt(std::int64_t y) const {
    std::size_t pos = 0;
    const AugNode* v = root_.get();
    if (!v) return 0;
    while (!v->is_leaf()) {
        ++g_visits;
        const AugNode* next = nullptr;
        for (const auto& e : v->edges) {
            if (e.y_min < y) {
                next = e.child.get();
                break;
            }
            pos += e.child->size;
        }
        if (!next) return pos;
        v = next;
    }
    ++g_visits;
    return pos + (v->leaf.y < y ? 0 : 1);
}

ScoredPoint AugTree::at(std::size_t pos) const {
    if (pos >= size()) throw std::out_of_range("AugTree::at");
    const AugNode* v = root_.get();
    std::int64_t acc = 0;
    while (!v->is_leaf()) {
        ++g_visits;
        if (v->kind != Kind::plain) acc += v->add;
        for (const auto& e : v->edges) {
            if (pos < e.child->size) {
                v = e.child.get();
                break;
            }
            pos -= e.child->size;
        }
    }
    ++g_visits;
    if (v->kind != Kind::plain) acc += v->add;
    return {v->leaf.id, v->leaf.x, v->leaf.y, v->leaf.base_score + acc};
}

std::size_t AugTree::find(std::int64_t x, std::int64_t y) const {
    std::size_t pos = first_x_ge(x);
    if (pos < size()) {
        ScoredPoint p = at(pos);
        if (p.x == x && p.y == y) return pos;
    }
    return size();
}

bool AugTree::dominates_point(std::int64_t x, std::int64_t y) const {
    std::size_t pos = first_x_gt(x);
    if (pos == 0) return false;
    ScoredPoint p = at(pos - 1);
    if (p.x == x && p.y == y) return false; // the point itself
    return p.y <= y;
}

void AugTree::insert(const Point& pt, std::int64_t score) {
    Ctx c = make_ctx(params_);
    if (!root_) {
        root_ = make_leaf(pt, score, c);
        normalize_root(root_.get(), c);
        return;
    }
    std::size_t pos = first_x_ge(pt.x);
    if (pos < size()) {
        ScoredPoint succ = at(pos);
        if (!(succ.x > pt.x && succ.y < pt.y)) {
            throw std::logic_error("AugTree::insert: point breaks the staircase");
        }
    }
    if (pos > 0) {
        ScoredPoint pred = at(pos - 1);
        if (!(pred.x < pt.x && pred.y > pt.y)) {
            throw std::logic_error("AugTree::insert: point breaks the staircase");
        }
    }
    if (root_->is_leaf()) {
        auto other = make_leaf(pt, score, c);
        if (pt.x < root_->leaf.x) {
            root_ = grow_root(std::move(other), std::move(root_), c);
        } else {
            root_ = grow_root(std::move(root_), std::move(other), c);
        }
        return;
    }
    auto spill = insert_rec(root_.get(), pt, score, 0, c);
    if (spill) root_ = grow_root(std::move(root_), std::move(spill), c);
}

void AugTree::erase(std::size_t pos) {
    if (pos >= size()) throw std::out_of_range("AugTree::erase");
    Ctx c = make_ctx(params_);
    if (root_->is_leaf()) {
        root_.reset();
        return;
    }
    erase_rec(root_.get(), pos, c);
    if (!root_->is_leaf() && root_->edges.size() == 1) {
        flush(root_.get());
        auto child = std::move(root_->edges[0].child);
        root_ = std::move(child);
        normalize_root(root_.get(), c);
    }
}

std::int64_t AugTree::add_to_dominators(std::int64_t x, std::int64_t y, std::int64_t delta) {
    if (!root_) return 0;
    std::size_t lo = first_y_le(y);
    std::size_t hi = first_x_gt(x);
    if (lo >= hi) return 0;
    if (hi - lo == 1) {
        ScoredPoint p = at(lo);
        if (p.x == x && p.y == y) return 0; // the point itself, not a dominator
    }
    Ctx c = make_ctx(params_);
    range_add(root_.get(), lo, hi, delta, c);
    return static_cast<std::int64_t>(hi - lo);
}

void AugTree::add_to_all(std::int64_t delta) {
    if (root_) root_->add += delta; // root is never plain, so the tag applies
}

std::vector<ScoredPoint> AugTree::root_top() const {
    std::vector<ScoredPoint> out;
    if (!root_) return out;
    ++g_visits;
    std::size_t n = std::min(params_.cap, root_->list.size());
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const AugEntry& e = root_->list[i];
        out.push_back({e.id, e.x, e.y, e.rel + root_->add});
    }
    return out;
}

void AugTree::path_candidates(std::size_t pos, const std::unordered_set<std::uint64_t>& excluded,
                              std::vector<ScoredPoint>& out) const {
    if (pos >= size()) throw std::out_of_range("AugTree::path_candidates");
    const AugNode* v = root_.get();
    std::int64_t acc = 0;
    for (;;) {
        ++g_visits;
        if (v->kind != Kind::plain) acc += v->add;
        if (v->kind == Kind::thr) {
            // full list: one entry covers the entire remaining path
            for (const AugEntry& e : v->list) {
                if (!excluded.count(e.id)) {
                    out.push_back({e.id, e.x, e.y, e.rel + acc});
                    break;
                }
            }
            return;
        }
        assert(v->kind == Kind::aug);
        const AugNode* next = nullptr;
        std::size_t local = pos;
        for (const auto& e : v->edges) {
            const AugNode* ch = e.child.get();
            for (const AugEntry& le : ch->list) {
                if (!excluded.count(le.id)) {
                    out.push_back({le.id, le.x, le.y, le.rel + ch->add + acc});
                    break;
                }
            }
            if (!next) {
                if (local < ch->size) {
                    next = ch;
                } else {
                    local -= ch->size;
                }
            }
        }
        v = next;
        pos = local;
    }
}

std::vector<ScoredPoint> AugTree::all_resolved() const {
    std::vector<ScoredPoint> out;
    out.reserve(size());
    struct Walk {
        std::vector<ScoredPoint>& out;
        void operator()(const AugNode* v, std::int64_t acc) const {
            ++g_visits;
            if (v->kind != Kind::plain) acc += v->add;
            if (v->is_leaf()) {
                out.push_back({v->leaf.id, v->leaf.x, v->leaf.y, v->leaf.base_score + acc});
                return;
            }
            for (const auto& e : v->edges) (*this)(e.child.get(), acc);
        }
    };
    if (root_) Walk{out}(root_.get(), 0);
    return out;
}

AugTree AugTree::concat(AugTree left, AugTree right) {
    if (left.empty()) return right;
    if (right.empty()) return left;
    if (left.params_.a != right.params_.a || left.params_.b != right.params_.b ||
        left.params_.cap != right.params_.cap) {
        throw std::logic_error("AugTree::concat: parameter mismatch");
    }
    ScoredPoint lb = left.back();
    ScoredPoint rf = right.front();
    if (!(lb.x < rf.x && lb.y > rf.y)) {
        throw std::logic_error("AugTree::concat: staircases not compatible");
    }
    Ctx c = make_ctx(left.params_);
    TreeParams params = left.params_;
    std::unique_ptr<AugNode> lr = std::move(left.root_);
    std::unique_ptr<AugNode> rr = std::move(right.root_);

    if (lr->height == rr->height) {
        std::unique_ptr<AugNode> root;
        if (!lr->is_leaf() && lr->edges.size() + rr->edges.size() <= static_cast<std::size_t>(c.b)) {
            root = merge_nodes(std::move(lr), std::move(rr), c);
        } else if (!lr->is_leaf()) {
            auto merged = merge_nodes(std::move(lr), std::move(rr), c);
            auto rhalf = split_node(merged.get(), c);
            root = grow_root(std::move(merged), std::move(rhalf), c);
        } else {
            root = grow_root(std::move(lr), std::move(rr), c);
        }
        return AugTree(params, std::move(root));
    }

    bool right_taller = rr->height > lr->height;
    std::unique_ptr<AugNode>& tall = right_taller ? rr : lr;
    std::unique_ptr<AugNode>& small = right_taller ? lr : rr;
    int join_h = small->height + 1;

    // flush the attach spine so the incoming subtree gains only zero tags
    std::vector<AugNode*> spine;
    AugNode* node = tall.get();
    for (;;) {
        flush(node);
        spine.push_back(node);
        if (node->height == join_h) break;
        node = right_taller ? node->edges.front().child.get() : node->edges.back().child.get();
    }

    if (small->height < c.h0 && small->kind == Kind::thr) demote_to_plain(small.get());

    if (small->is_leaf() || small->edges.size() >= static_cast<std::size_t>(c.a)) {
        AugEdge e;
        e.child = std::move(small);
        refresh_key(e);
        if (right_taller) {
            node->edges.insert(node->edges.begin(), std::move(e));
        } else {
            node->edges.push_back(std::move(e));
        }
    } else {
        // undersized root: fold it into the boundary child
        std::size_t bidx = right_taller ? 0 : node->edges.size() - 1;
        auto boundary = std::move(node->edges[bidx].child);
        auto merged = right_taller ? merge_nodes(std::move(small), std::move(boundary), c)
                                   : merge_nodes(std::move(boundary), std::move(small), c);
        if (merged->edges.size() > static_cast<std::size_t>(c.b)) {
            auto rhalf = split_node(merged.get(), c);
            node->edges[bidx].child = std::move(merged);
            AugEdge e;
            e.child = std::move(rhalf);
            refresh_key(e);
            node->edges.insert(node->edges.begin() + static_cast<std::ptrdiff_t>(bidx) + 1,
                               std::move(e));
        } else {
            node->edges[bidx].child = std::move(merged);
        }
    }

    // repair the spine bottom-up: sizes, keys, lists, and overflow splits
    std::unique_ptr<AugNode> spill;
    for (std::size_t i = spine.size(); i-- > 0;) {
        AugNode* v = spine[i];
        if (spill) {
            AugEdge e;
            e.child = std::move(spill);
            refresh_key(e);
            if (right_taller) {
                v->edges.insert(v->edges.begin() + 1, std::move(e));
            } else {
                v->edges.push_back(std::move(e));
            }
            spill = nullptr;
        }
        v->size = sum_child_sizes(v);
        for (auto& e : v->edges) refresh_key(e);
        if (v->edges.size() > static_cast<std::size_t>(c.b)) {
            spill = split_node(v, c);
        } else if (v->kind != Kind::plain) {
            recompute_list(v, c);
        }
    }
    if (spill) tall = grow_root(std::move(tall), std::move(spill), c);
    return AugTree(params, std::move(tall));
}

std::pair<AugTree, AugTree> AugTree::split_at(std::size_t idx) {
    if (idx > size()) throw std::out_of_range("AugTree::split_at");
    TreeParams params = params_;
    if (idx == 0) {
        AugTree rest = std::move(*this);
        *this = AugTree(params);
        return {AugTree(params), std::move(rest)};
    }
    if (idx == size()) {
        AugTree rest = std::move(*this);
        *this = AugTree(params);
        return {std::move(rest), AugTree(params)};
    }
    Ctx c = make_ctx(params);
    AugTree a(params);
    AugTree b(params);

    auto tree_from_edges = [&](std::vector<AugEdge>&& es) -> AugTree {
        if (es.empty()) return AugTree(params);
        if (es.size() == 1) {
            auto root = std::move(es[0].child);
            normalize_root(root.get(), c);
            return AugTree(params, std::move(root));
        }
        auto node = std::make_unique<AugNode>();
        node->height = es[0].child->height + 1;
        node->kind = kind_for(node->height, true, c);
        node->edges = std::move(es);
        node->size = sum_child_sizes(node.get());
        recompute_list(node.get(), c);
        return AugTree(params, std::move(node));
    };

    std::unique_ptr<AugNode> cur = std::move(root_);
    *this = AugTree(params);
    std::size_t cut = idx;
    for (;;) {
        assert(cut > 0 && cut < cur->size);
        flush(cur.get());
        std::size_t j = 0;
        std::size_t off = 0;
        while (cut >= off + cur->edges[j].child->size) {
            off += cur->edges[j].child->size;
            ++j;
        }
        std::size_t local = cut - off;
        std::vector<AugEdge> left_part, right_part;
        if (local == 0) {
            // clean boundary: nothing to descend into
            for (std::size_t i = 0; i < j; ++i) left_part.push_back(std::move(cur->edges[i]));
            for (std::size_t i = j; i < cur->edges.size(); ++i) {
                right_part.push_back(std::move(cur->edges[i]));
            }
            a = concat(std::move(a), tree_from_edges(std::move(left_part)));
            b = concat(tree_from_edges(std::move(right_part)), std::move(b));
            break;
        }
        for (std::size_t i = 0; i < j; ++i) left_part.push_back(std::move(cur->edges[i]));
        for (std::size_t i = j + 1; i < cur->edges.size(); ++i) {
            right_part.push_back(std::move(cur->edges[i]));
        }
        std::unique_ptr<AugNode> next = std::move(cur->edges[j].child);
        a = concat(std::move(a), tree_from_edges(std::move(left_part)));
        b = concat(tree_from_edges(std::move(right_part)), std::move(b));
        cur = std::move(next);
        cut = local;
    }
    return {std::move(a), std::move(b)};
}

// ---- validation and debugging ----

namespace {

struct ResolvedLeaf {
    std::uint64_t id;
    std::int64_t x;
    std::int64_t y;
    std::int64_t score;
};

bool resolved_before(const ResolvedLeaf& a, const ResolvedLeaf& b) {
    return entry_before(a.score, a.x, a.y, b.score, b.x, b.y);
}

[[noreturn]] void fail(const std::string& what) { throw std::logic_error("AugTree: " + what); }

// Returns the subtree's leaves sorted canonically by resolved score,
// checking every structural and list invariant on the way up.
std::vector<ResolvedLeaf> validate_node(const AugNode* v, bool is_root, std::int64_t acc,
                                        const Ctx& c) {
    if (v->is_leaf()) {
        if (v->size != 1) fail("leaf size");
        if (!v->edges.empty()) fail("leaf with edges");
    } else {
        std::size_t lo = is_root ? 2 : static_cast<std::size_t>(c.a);
        if (v->edges.size() < lo || v->edges.size() > static_cast<std::size_t>(c.b)) {
            fail("fanout out of range");
        }
        if (v->size != sum_child_sizes(v)) fail("size mismatch");
    }
    if (v->kind != kind_for(v->height, is_root, c)) fail("kind mismatch");
    if (v->kind == Kind::plain) {
        if (v->add != 0) fail("plain node with pending add");
        if (!v->list.empty()) fail("plain node with a list");
    }

    if (v->kind != Kind::plain) acc += v->add;

    std::vector<ResolvedLeaf> resolved;
    if (v->is_leaf()) {
        resolved.push_back({v->leaf.id, v->leaf.x, v->leaf.y, v->leaf.base_score + acc});
    } else {
        for (const auto& e : v->edges) {
            if (e.child->height != v->height - 1) fail("height mismatch");
            auto [xm, ym] = child_keys(e.child.get());
            if (e.x_max != xm || e.y_min != ym) fail("stale routing key");
            auto sub = validate_node(e.child.get(), false, acc, c);
            std::vector<ResolvedLeaf> merged;
            merged.reserve(resolved.size() + sub.size());
            std::merge(resolved.begin(), resolved.end(), sub.begin(), sub.end(),
                       std::back_inserter(merged), resolved_before);
            resolved = std::move(merged);
        }
    }

    if (v->kind == Kind::thr) {
        if (v->list.size() != v->size) fail("threshold list is not the whole subtree");
        if (!list_sorted(v->list)) fail("threshold list out of order");
        std::unordered_map<std::uint64_t, std::int64_t> rels;
        for (const auto& e : v->list) rels[e.id] = e.rel;
        if (rels.size() != v->list.size()) fail("duplicate id in threshold list");
        // rel must equal the stored base of the matching leaf
        for_each_leaf_const(v, [&](const AugNode* leaf) {
            auto it = rels.find(leaf->leaf.id);
            if (it == rels.end()) fail("leaf missing from threshold list");
            if (it->second != leaf->leaf.base_score) fail("threshold rel != leaf base");
        });
    } else if (v->kind == Kind::aug) {
        std::size_t want_n = std::min(c.cap, v->size);
        if (v->list.size() != want_n) fail("augmented list has the wrong length");
        for (std::size_t i = 0; i < want_n; ++i) {
            const AugEntry& e = v->list[i];
            const ResolvedLeaf& r = resolved[i];
            if (e.id != r.id || e.x != r.x || e.y != r.y || e.rel + acc != r.score) {
                fail("augmented list disagrees with the best resolved leaves");
            }
        }
    }
    return resolved;
}

void dump_node(const AugNode* v, int depth, std::ostringstream& out) {
    for (int i = 0; i < depth; ++i) out << "  ";
    switch (v->kind) {
        case Kind::plain: out << "plain"; break;
        case Kind::thr: out << "thr"; break;
        case Kind::aug: out << "aug"; break;
    }
    out << " h=" << v->height << " size=" << v->size;
    if (v->kind != Kind::plain) out << " add=" << v->add;
    if (v->is_leaf()) {
        out << " leaf id=" << v->leaf.id << " x=" << v->leaf.x << " y=" << v->leaf.y
            << " base=" << v->leaf.base_score;
    }
    if (!v->list.empty()) {
        out << " list=[";
        for (std::size_t i = 0; i < v->list.size(); ++i) {
            if (i) out << ' ';
            out << v->list[i].id << ':' << v->list[i].rel;
        }
        out << ']';
    }
    out << '\n';
    if (!v->is_leaf()) {
        for (const auto& e : v->edges) dump_node(e.child.get(), depth + 1, out);
    }
}

} // namespace

void AugTree::validate() const {
    check_params(params_);
    if (!root_) return;
    Ctx c = make_ctx(params_);
    if (root_->kind == Kind::plain) fail("plain root");
    auto resolved = validate_node(root_.get(), true, 0, c);
    // global staircase: strictly ascending x, strictly descending y
    std::vector<ScoredPoint> leaves = all_resolved();
    for (std::size_t i = 1; i < leaves.size(); ++i) {
        if (leaves[i].x <= leaves[i - 1].x || leaves[i].y >= leaves[i - 1].y) {
            fail("leaves do not form a staircase");
        }
    }
    if (resolved.size() != leaves.size()) fail("validation walk lost leaves");
}

void AugTree::validate_scores(
    const std::unordered_map<std::uint64_t, std::int64_t>& expected) const {
    validate();
    std::vector<ScoredPoint> leaves = all_resolved();
    if (leaves.size() != expected.size()) fail("stored point set has the wrong size");
    for (const ScoredPoint& p : leaves) {
        auto it = expected.find(p.id);
        if (it == expected.end()) fail("unexpected point id");
        if (it->second != p.score) fail("resolved score disagrees with expectation");
    }
}

std::string AugTree::dump() const {
    std::ostringstream out;
    if (!root_) {
        out << "(empty)\n";
    } else {
        dump_node(root_.get(), 0, out);
    }
    return out.str();
}

} // namespace topdom
