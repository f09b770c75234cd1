#include "topdom/engine.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "topdom/frederickson.hpp"
#include "topdom/maxima_layers.hpp"

namespace topdom {

namespace {

std::size_t ceil_sqrt(std::size_t n) {
    if (n == 0) return 0;
    auto s = (std::size_t)std::llround(std::ceil(std::sqrt((double)n)));
    while (s > 0 && (s - 1) * (s - 1) >= n) --s;
    while (s * s < n) ++s;
    return s;
}

void check_config(const EngineConfig& c) {
    if (c.k == 0) throw std::invalid_argument("k must be at least 1");
    if (c.a < 2 || c.b < 2 * c.a)
        throw std::invalid_argument("tree degree requires a >= 2 and b >= 2a");
}

// Accumulates the layer-tree node visits performed inside a scope.
struct VisitScope {
    std::uint64_t& sink;
    std::uint64_t start;
    explicit VisitScope(std::uint64_t& s) : sink(s), start(aug_nodes_visited()) {}
    ~VisitScope() { sink += aug_nodes_visited() - start; }
};

} // namespace

Engine::Engine(EngineConfig cfg) : cfg_(cfg) {
    check_config(cfg_);
    global_rebuild();
    counters_.rebuilds = 0; // construction is not an observable rebuild
}

Engine::Engine(EngineConfig cfg, const std::vector<Point>& initial) : cfg_(cfg) {
    check_config(cfg_);
    for (const Point& p : initial) {
        if (by_coord_.count({p.x, p.y}))
            throw std::invalid_argument("duplicate point in initial set");
        std::uint64_t id = next_id_++;
        points_[id] = {p.x, p.y};
        by_coord_[{p.x, p.y}] = id;
        counter_.insert(p.x, p.y);
    }
    global_rebuild();
    counters_.rebuilds = 0;
}

TreeParams Engine::tree_params() const { return TreeParams{cfg_.a, cfg_.b, cfg_.k}; }

bool Engine::contains(std::int64_t x, std::int64_t y) const {
    return by_coord_.count({x, y}) != 0;
}

std::int64_t Engine::score_of(std::int64_t x, std::int64_t y) const {
    if (!contains(x, y)) throw std::invalid_argument("point not stored");
    return counter_.count_dominated(x, y);
}

std::size_t Engine::updates_until_rebuild() const {
    if (cfg_.dynamics == Dynamics::semi) return 0;
    return rebuild_period_ - updates_since_rebuild_;
}

void Engine::dissolve_into_tail(AugTree tree) {
    for (const ScoredPoint& sp : tree.all_resolved()) tail_.insert(sp.id);
}

void Engine::global_rebuild() {
    VisitScope vs(counters_.tree_node_visits);
    std::vector<Point> pts;
    pts.reserve(points_.size());
    for (const auto& [id, xy] : points_) {
        Point p;
        p.id = id;
        p.x = xy.first;
        p.y = xy.second;
        p.base_score = counter_.count_dominated(p.x, p.y);
        pts.push_back(p);
    }
    counters_.counter_node_visits = counter_.nodes_visited();

    n0_ = pts.size();
    frontier_ = cfg_.k;
    if (cfg_.dynamics == Dynamics::full) frontier_ += std::max<std::size_t>(1, ceil_sqrt(n0_));
    rebuild_period_ = std::max<std::size_t>(1, ceil_sqrt(n0_));
    updates_since_rebuild_ = 0;

    std::vector<std::vector<Point>> stair = compute_maxima_layers(pts);
    layers_.clear();
    tail_.clear();
    for (std::size_t i = 0; i < stair.size(); ++i) {
        if (i < frontier_) {
            layers_.push_back(AugTree::build(tree_params(), stair[i]));
        } else {
            for (const Point& p : stair[i]) tail_.insert(p.id);
        }
    }
    ++counters_.rebuilds;
}

void Engine::rebuild() { global_rebuild(); }

void Engine::settle_after_update() {
    if (cfg_.dynamics != Dynamics::full) return;
    ++updates_since_rebuild_;
    if (updates_since_rebuild_ >= rebuild_period_) global_rebuild();
}

void Engine::cascade_insert(AugTree seg, std::size_t layer_idx) {
    // seg is a staircase none of whose points is dominated by layer layer_idx
    // or any deeper one. Splice it in; points it dominates move one layer down.
    while (true) {
        if (layer_idx >= frontier_) {
            dissolve_into_tail(std::move(seg));
            return;
        }
        if (layer_idx >= layers_.size()) {
            layers_.push_back(std::move(seg));
            return;
        }
        AugTree& target = layers_[layer_idx];
        std::size_t w_lo = target.first_x_ge(seg.front().x);
        std::size_t w_hi = target.first_y_lt(seg.back().y);
        if (w_lo >= w_hi) { // nothing dominated: plain splice
            auto [left, right] = std::move(target).split_at(w_lo);
            layers_[layer_idx] =
                AugTree::concat(AugTree::concat(std::move(left), std::move(seg)), std::move(right));
            return;
        }
        auto [head, right] = std::move(target).split_at(w_hi);
        auto [left, out] = std::move(head).split_at(w_lo);
        layers_[layer_idx] =
            AugTree::concat(AugTree::concat(std::move(left), std::move(seg)), std::move(right));
        seg = std::move(out);
        ++layer_idx;
        ++counters_.cascade_steps;
    }
}

std::uint64_t Engine::insert(std::int64_t x, std::int64_t y) {
    if (by_coord_.count({x, y})) throw std::invalid_argument("point already stored");
    VisitScope vs(counters_.tree_node_visits);

    std::uint64_t id = next_id_++;
    std::int64_t base = counter_.count_dominated(x, y);
    counter_.insert(x, y);
    counters_.counter_node_visits = counter_.nodes_visited();
    points_[id] = {x, y};
    by_coord_[{x, y}] = id;

    // First layer that does not dominate the new point is its home.
    std::size_t i = 0;
    while (i < layers_.size() && i < frontier_ && layers_[i].dominates_point(x, y)) ++i;
    for (std::size_t j = 0; j < i; ++j) layers_[j].add_to_dominators(x, y, +1);

    if (i >= frontier_) {
        tail_.insert(id);
    } else {
        Point p;
        p.id = id;
        p.x = x;
        p.y = y;
        p.base_score = base;
        cascade_insert(AugTree::build(tree_params(), {p}), i);
    }
    settle_after_update();
    return id;
}

void Engine::erase(std::int64_t x, std::int64_t y) {
    if (cfg_.dynamics != Dynamics::full)
        throw std::logic_error("deletions require the fully dynamic mode");
    auto it = by_coord_.find({x, y});
    if (it == by_coord_.end()) throw std::invalid_argument("point not stored");
    VisitScope vs(counters_.tree_node_visits);

    std::uint64_t id = it->second;
    counter_.erase(x, y);
    counters_.counter_node_visits = counter_.nodes_visited();
    for (AugTree& t : layers_) t.add_to_dominators(x, y, -1);

    if (tail_.count(id)) {
        tail_.erase(id);
    } else {
        std::size_t li = layers_.size();
        std::size_t pos = 0;
        for (std::size_t j = 0; j < layers_.size(); ++j) {
            pos = layers_[j].find(x, y);
            if (pos != layers_[j].size()) {
                li = j;
                break;
            }
        }
        if (li == layers_.size()) throw std::logic_error("stored point missing from layers");

        // The hole's staircase neighbours bound which deeper points lose
        // their only shallower dominator and must therefore move up.
        std::optional<std::int64_t> hi_x, hi_y;
        if (pos + 1 < layers_[li].size()) hi_x = layers_[li].at(pos + 1).x;
        if (pos > 0) hi_y = layers_[li].at(pos - 1).y;
        layers_[li].erase(pos);
        std::size_t hole = pos;
        std::int64_t lo_x = x, lo_y = y;

        for (std::size_t src = li + 1; src < layers_.size(); ++src) {
            AugTree& s = layers_[src];
            std::size_t w_lo =
                std::max(s.first_x_ge(lo_x), hi_y ? s.first_y_lt(*hi_y) : std::size_t{0});
            std::size_t w_hi =
                std::min(hi_x ? s.first_x_ge(*hi_x) : s.size(), s.first_y_lt(lo_y));
            if (w_lo >= w_hi) break;
            auto [head, right] = std::move(s).split_at(w_hi);
            auto [left, seg] = std::move(head).split_at(w_lo);
            lo_x = seg.front().x;
            lo_y = seg.back().y;
            hi_x = right.empty() ? std::nullopt : std::optional(right.front().x);
            hi_y = left.empty() ? std::nullopt : std::optional(left.back().y);
            layers_[src] = AugTree::concat(std::move(left), std::move(right));
            auto [tl, tr] = std::move(layers_[src - 1]).split_at(hole);
            layers_[src - 1] =
                AugTree::concat(AugTree::concat(std::move(tl), std::move(seg)), std::move(tr));
            hole = w_lo;
            ++counters_.cascade_steps;
        }
    }

    points_.erase(id);
    by_coord_.erase(it);

    // One deletion may leave the deepest maintained layer incomplete, so the
    // trusted frontier shrinks by one; the rebuild budget restores it.
    if (frontier_ > 0) --frontier_;
    while (layers_.size() > frontier_) {
        dissolve_into_tail(std::move(layers_.back()));
        layers_.pop_back();
    }
    while (!layers_.empty() && layers_.back().empty()) layers_.pop_back();
    settle_after_update();
}

std::vector<ScoredPoint> Engine::query() const {
    VisitScope vs(counters_.tree_node_visits);
    return cfg_.mode == QueryMode::klist ? query_klist() : query_onelist();
}

std::vector<ScoredPoint> Engine::query_klist() const {
    std::size_t k = cfg_.k;
    std::size_t scan = std::min(k, layers_.size());
    std::vector<ScoredPoint> cand;
    std::vector<std::vector<std::int64_t>> score_lists(scan);
    for (std::size_t i = 0; i < scan; ++i) {
        std::vector<ScoredPoint> top = layers_[i].root_top();
        for (const ScoredPoint& sp : top) score_lists[i].push_back(sp.score);
        cand.insert(cand.end(), top.begin(), top.end());
    }
    counters_.query_candidates += cand.size();
    if (size() <= k) { // every stored point is an answer
        std::sort(cand.begin(), cand.end(), canonical_less);
        return cand;
    }
    std::int64_t tau = kth_largest(score_lists, k);
    std::vector<ScoredPoint> in;
    for (const ScoredPoint& sp : cand)
        if (sp.score >= tau) in.push_back(sp);
    std::nth_element(in.begin(), in.begin() + (std::ptrdiff_t)k, in.end(), canonical_less);
    in.resize(k);
    std::sort(in.begin(), in.end(), canonical_less);
    return in;
}

std::vector<ScoredPoint> Engine::query_onelist() const {
    std::size_t k = cfg_.k;
    auto worse = [](const ScoredPoint& a, const ScoredPoint& b) {
        return canonical_less(b, a); // max-heap on canonical order
    };
    struct Item {
        ScoredPoint sp;
        std::size_t layer;
    };
    auto item_worse = [&](const Item& a, const Item& b) { return worse(a.sp, b.sp); };
    std::priority_queue<Item, std::vector<Item>, decltype(item_worse)> heap(item_worse);

    std::size_t scan = std::min(k, layers_.size());
    for (std::size_t i = 0; i < scan; ++i) {
        std::vector<ScoredPoint> top = layers_[i].root_top();
        if (!top.empty()) heap.push({top.front(), i});
        counters_.query_candidates += 1;
    }
    std::unordered_set<std::uint64_t> reported;
    std::vector<ScoredPoint> out;
    std::vector<ScoredPoint> extra;
    while (out.size() < k && !heap.empty()) {
        Item best = heap.top();
        heap.pop();
        if (reported.count(best.sp.id)) continue; // stale duplicate
        reported.insert(best.sp.id);
        out.push_back(best.sp);
        const AugTree& t = layers_[best.layer];
        std::size_t pos = t.find(best.sp.x, best.sp.y);
        extra.clear();
        t.path_candidates(pos, reported, extra);
        counters_.query_candidates += extra.size();
        for (const ScoredPoint& sp : extra) heap.push({sp, best.layer});
    }
    return out;
}

std::vector<std::vector<ScoredPoint>> Engine::layers_snapshot() const {
    std::vector<std::vector<ScoredPoint>> out;
    out.reserve(layers_.size());
    for (const AugTree& t : layers_) out.push_back(t.all_resolved());
    return out;
}

std::vector<std::uint64_t> Engine::tail_ids() const {
    std::vector<std::uint64_t> out(tail_.begin(), tail_.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::string Engine::dump_layers() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        os << "layer " << (i + 1) << ":";
        for (const ScoredPoint& sp : layers_[i].all_resolved())
            os << " (" << sp.x << "," << sp.y << ")=" << sp.score;
        os << "\n";
    }
    os << "tail: " << tail_.size() << " points\n";
    return os.str();
}

void Engine::validate_trees() const {
    for (const AugTree& t : layers_) t.validate();
}

void Engine::corrupt_first_layer_scores(std::int64_t delta) {
    if (!layers_.empty()) layers_[0].add_to_all(delta);
}

} // namespace topdom
