#include "topdom/check.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace topdom {

namespace {

std::string describe(const ScoredPoint& sp) {
    std::ostringstream os;
    os << "(" << sp.x << "," << sp.y << ")=" << sp.score;
    return os.str();
}

std::string compare_answers(const std::vector<ScoredPoint>& got,
                            const std::vector<ScoredPoint>& want) {
    if (got.size() != want.size()) {
        return "answer size " + std::to_string(got.size()) + ", expected " +
               std::to_string(want.size());
    }
    for (std::size_t i = 0; i < got.size(); ++i) {
        const ScoredPoint& g = got[i];
        const ScoredPoint& w = want[i];
        if (g.x != w.x || g.y != w.y || g.score != w.score) {
            return "answer rank " + std::to_string(i + 1) + " is " + describe(g) +
                   ", expected " + describe(w);
        }
    }
    return {};
}

std::string compare_structure(const Engine& eng, const ReferenceModel& ref) {
    std::vector<std::vector<ScoredPoint>> got = eng.layers_snapshot();
    std::vector<std::vector<Point>> want = ref.layers();
    if (got.size() > want.size())
        return "engine keeps " + std::to_string(got.size()) + " layers, only " +
               std::to_string(want.size()) + " exist";
    for (std::size_t i = 0; i < got.size(); ++i) {
        if (got[i].size() != want[i].size())
            return "layer " + std::to_string(i + 1) + " has " + std::to_string(got[i].size()) +
                   " points, expected " + std::to_string(want[i].size());
        for (std::size_t j = 0; j < got[i].size(); ++j) {
            const ScoredPoint& g = got[i][j];
            const Point& w = want[i][j];
            if (g.x != w.x || g.y != w.y || g.score != w.base_score)
                return "layer " + std::to_string(i + 1) + " slot " + std::to_string(j + 1) +
                       " is " + describe(g) + ", expected (" + std::to_string(w.x) + "," +
                       std::to_string(w.y) + ")=" + std::to_string(w.base_score);
        }
    }
    std::size_t in_layers = 0;
    for (const auto& l : got) in_layers += l.size();
    if (in_layers + eng.tail_ids().size() != ref.size())
        return "layers + tail hold " + std::to_string(in_layers + eng.tail_ids().size()) +
               " points, expected " + std::to_string(ref.size());
    if (eng.config().dynamics == Dynamics::full && eng.frontier() < eng.config().k)
        return "frontier " + std::to_string(eng.frontier()) + " fell below k";
    return {};
}

} // namespace

void ReferenceModel::insert(std::int64_t x, std::int64_t y) {
    if (contains(x, y)) throw std::invalid_argument("duplicate point");
    Point p;
    p.id = next_id_++;
    p.x = x;
    p.y = y;
    for (Point& q : pts_) {
        if (dominates(q.x, q.y, x, y)) ++q.base_score;
        if (dominates(x, y, q.x, q.y)) ++p.base_score;
    }
    pts_.push_back(p);
}

void ReferenceModel::erase(std::int64_t x, std::int64_t y) {
    auto it = std::find_if(pts_.begin(), pts_.end(),
                           [&](const Point& q) { return q.x == x && q.y == y; });
    if (it == pts_.end()) throw std::invalid_argument("point not stored");
    pts_.erase(it);
    for (Point& q : pts_)
        if (dominates(q.x, q.y, x, y)) --q.base_score;
}

bool ReferenceModel::contains(std::int64_t x, std::int64_t y) const {
    return std::any_of(pts_.begin(), pts_.end(),
                       [&](const Point& q) { return q.x == x && q.y == y; });
}

std::vector<ScoredPoint> ReferenceModel::topk(std::size_t k) const {
    std::vector<ScoredPoint> all;
    all.reserve(pts_.size());
    for (const Point& p : pts_) all.push_back({p.id, p.x, p.y, p.base_score});
    std::sort(all.begin(), all.end(), canonical_less);
    if (all.size() > k) all.resize(k);
    return all;
}

std::vector<std::vector<Point>> ReferenceModel::layers() const {
    return oracle_layers(pts_);
}

std::int64_t ReferenceModel::score_of(std::int64_t x, std::int64_t y) const {
    for (const Point& p : pts_)
        if (p.x == x && p.y == y) return p.base_score;
    throw std::invalid_argument("point not stored");
}

CheckResult run_check(const OpLog& log, const CheckOptions& opt,
                      const std::function<void(Engine&, std::size_t)>& tamper) {
    Engine eng(log.config);
    ReferenceModel ref;
    CheckResult res;

    auto diverged = [&](std::size_t idx, std::string msg) {
        res.ok = false;
        res.op_index = idx;
        res.message = std::move(msg);
    };

    for (std::size_t i = 0; i < log.ops.size(); ++i) {
        const Op& op = log.ops[i];
        try {
            if (op.kind == 'I') {
                eng.insert(op.x, op.y);
                ref.insert(op.x, op.y);
            } else if (op.kind == 'D') {
                eng.erase(op.x, op.y);
                ref.erase(op.x, op.y);
            } else {
                std::vector<ScoredPoint> got = eng.query();
                std::vector<ScoredPoint> want = ref.topk(log.config.k);
                ++res.queries_checked;
                std::string msg = compare_answers(got, want);
                if (!msg.empty()) {
                    diverged(i, "query: " + msg);
                    return res;
                }
            }
        } catch (const std::exception& e) {
            diverged(i, std::string("exception: ") + e.what());
            return res;
        }
        ++res.ops_run;
        if (tamper) tamper(eng, i);
        if (opt.paranoid) {
            try {
                eng.validate_trees();
            } catch (const std::exception& e) {
                diverged(i, std::string("tree invariant: ") + e.what());
                return res;
            }
            std::string msg = compare_structure(eng, ref);
            if (!msg.empty()) {
                diverged(i, "structure: " + msg);
                return res;
            }
        }
    }
    return res;
}

} // namespace topdom
