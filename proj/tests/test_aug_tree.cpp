#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "test_util.hpp"
#include "topdom/aug_tree.hpp"

using namespace topdom;
using namespace topdom::testutil;

namespace {

std::vector<Point> stair(std::initializer_list<std::pair<std::int64_t, std::int64_t>> xs,
                         std::initializer_list<std::int64_t> scores = {}) {
    std::vector<Point> v = pts(xs);
    if (scores.size()) {
        auto it = scores.begin();
        for (Point& p : v) p.base_score = *it++;
    }
    return v;
}

/** Descending staircase of n points spaced out in both axes. */
std::vector<Point> wide_stair(std::size_t n, std::int64_t gap = 16) {
    std::vector<Point> v;
    for (std::size_t i = 0; i < n; ++i)
        v.push_back(Point{(std::uint64_t)i + 1, (std::int64_t)(i + 1) * gap,
                          (std::int64_t)(n - i) * gap, 0});
    return v;
}

std::vector<Triple> resolved(const AugTree& t) { return triples(t.all_resolved()); }

/** Reference top list: best min(cap, n) under canonical order. */
std::vector<Triple> brute_top(const std::vector<Triple>& leaves, std::size_t cap) {
    std::vector<ScoredPoint> v;
    for (const Triple& t : leaves) v.push_back({0, t.x, t.y, t.score});
    std::sort(v.begin(), v.end(), canonical_less);
    if (v.size() > cap) v.resize(cap);
    return triples(v);
}

} // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(AugTree(TreeParams{1, 4, 2}), std::invalid_argument);
    CHECK_THROWS_AS(AugTree(TreeParams{2, 3, 2}), std::invalid_argument);
    CHECK_THROWS_AS(AugTree(TreeParams{2, 4, 0}), std::invalid_argument);
    CHECK_NOTHROW(AugTree(TreeParams{2, 4, 1}));
}

TEST_CASE("build worked examples") {
    AugTree t = AugTree::build({2, 4, 2}, stair({{1, 3}, {2, 2}, {3, 1}}));
    t.validate();
    CHECK(triples(t.root_top()) == std::vector<Triple>{{1, 3, 0}, {2, 2, 0}});

    AugTree single = AugTree::build({2, 4, 2}, stair({{7, 7}}, {3}));
    single.validate();
    CHECK(triples(single.root_top()) == std::vector<Triple>{{7, 7, 3}});

    AugTree k1 = AugTree::build({2, 4, 1}, stair({{1, 5}, {2, 4}, {3, 3}}, {4, 1, 3}));
    k1.validate();
    CHECK(triples(k1.root_top()) == std::vector<Triple>{{1, 5, 4}});

    AugTree scored = AugTree::build({2, 4, 2}, stair({{1, 4}, {2, 2}, {4, 1}}, {1, 2, 1}));
    scored.validate();
    CHECK(triples(scored.root_top()) == std::vector<Triple>{{2, 2, 2}, {1, 4, 1}});
    AugTree scored1 = AugTree::build({2, 4, 1}, stair({{1, 4}, {2, 2}, {4, 1}}, {1, 2, 1}));
    CHECK(triples(scored1.root_top()) == std::vector<Triple>{{2, 2, 2}});

    CHECK(AugTree::build({2, 4, 3}, {}).empty());
    CHECK(AugTree::build({2, 4, 3}, {}).root_top().empty());
}

TEST_CASE("non-staircase build inputs are rejected") {
    CHECK_THROWS_AS(AugTree::build({2, 4, 1}, stair({{1, 1}, {2, 2}})),
                    std::invalid_argument); // dominance within input
    CHECK_THROWS_AS(AugTree::build({2, 4, 1}, stair({{2, 2}, {1, 3}})),
                    std::invalid_argument); // x not ascending
    CHECK_THROWS_AS(AugTree::build({2, 4, 1}, stair({{1, 2}, {2, 2}})),
                    std::invalid_argument); // y not strictly descending
}

TEST_CASE("search boundaries on a small staircase") {
    AugTree t = AugTree::build({2, 4, 1}, stair({{1, 5}, {3, 3}, {5, 1}}));
    // x-predecessor-or-equal of 4 is (3,3); its successor is (5,1)
    std::size_t pos = t.first_x_gt(4);
    REQUIRE(pos == 2);
    CHECK(coords({t.at(pos - 1)}) ==
          std::vector<std::pair<std::int64_t, std::int64_t>>{{3, 3}});
    CHECK(coords({t.at(pos)}) == std::vector<std::pair<std::int64_t, std::int64_t>>{{5, 1}});
    CHECK(t.first_x_gt(0) == 0); // no predecessor left of everything
    // least y >= 2 is (3,3)
    std::size_t ypos = t.first_y_lt(2);
    REQUIRE(ypos == 2);
    CHECK(t.at(ypos - 1).y == 3);

    CHECK(t.first_x_ge(3) == 1);
    CHECK(t.first_x_ge(6) == 3);
    CHECK(t.first_y_le(5) == 0);
    CHECK(t.first_y_le(0) == 3);
    CHECK(t.find(3, 3) == 1);
    CHECK(t.find(3, 4) == t.size());
}

TEST_CASE("dominates_point") {
    AugTree t = AugTree::build({2, 4, 1}, stair({{1, 5}, {3, 3}, {5, 1}}));
    CHECK(t.dominates_point(4, 4));       // (3,3) dominates
    CHECK(t.dominates_point(1, 6));       // (1,5) shares x, better y
    CHECK_FALSE(t.dominates_point(0, 0)); // better than everything
    CHECK_FALSE(t.dominates_point(3, 3)); // the stored point itself
    CHECK_FALSE(t.dominates_point(1, 2)); // incomparable corner
    CHECK(t.dominates_point(3, 5));
    CHECK_FALSE(AugTree::build({2, 4, 1}, {}).dominates_point(0, 0));
}

TEST_CASE("insert and erase keep structure and lists valid") {
    AugTree t = AugTree::build({2, 4, 2}, stair({{1, 3}, {3, 1}}));
    t.insert(Point{9, 2, 2, 0}, 0);
    t.validate();
    CHECK(coords(t.all_resolved()) ==
          std::vector<std::pair<std::int64_t, std::int64_t>>{{1, 3}, {2, 2}, {3, 1}});
    CHECK(triples(t.root_top()) == std::vector<Triple>{{1, 3, 0}, {2, 2, 0}});

    t.erase(t.find(2, 2));
    t.validate();
    CHECK(coords(t.all_resolved()) ==
          std::vector<std::pair<std::int64_t, std::int64_t>>{{1, 3}, {3, 1}});

    // staircase-breaking inserts are rejected
    CHECK_THROWS_AS(t.insert(Point{10, 4, 4, 0}, 0), std::logic_error);  // dominated
    CHECK_THROWS_AS(t.insert(Point{11, 0, 3, 0}, 0), std::logic_error);  // dominates (1,3)
    CHECK_THROWS_AS(t.insert(Point{12, 1, 3, 0}, 0), std::logic_error);  // duplicate
    CHECK_THROWS_AS(t.erase(5), std::out_of_range);
}

TEST_CASE("incremental growth and shrink, validating every step") {
    for (TreeParams tp : {TreeParams{2, 4, 1}, TreeParams{2, 4, 4}, TreeParams{3, 6, 2}}) {
        AugTree t(tp);
        std::size_t n = 90;
        std::vector<Point> v = wide_stair(n);
        // insert in a mixed order that keeps intermediate sets staircases
        std::vector<std::size_t> order;
        for (std::size_t i = 0; i < n; i += 2) order.push_back(i);
        for (std::size_t i = 1; i < n; i += 2) order.push_back(i);
        for (std::size_t i : order) {
            t.insert(v[i], (std::int64_t)i);
            t.validate();
        }
        CHECK(t.size() == n);
        while (!t.empty()) {
            t.erase(t.size() / 2);
            t.validate();
        }
    }
}

TEST_CASE("score bump over dominators: worked example") {
    AugTree t = AugTree::build({2, 4, 2}, stair({{1, 3}, {2, 2}, {3, 1}}));
    // dominators of (2,3) are (1,3) and (2,2)
    CHECK(t.add_to_dominators(2, 3, +1) == 2);
    t.validate();
    CHECK(resolved(t) == std::vector<Triple>{{1, 3, 1}, {2, 2, 1}, {3, 1, 0}});
    CHECK(triples(t.root_top()) == std::vector<Triple>{{1, 3, 1}, {2, 2, 1}});

    // nobody dominates a point left of everything
    CHECK(t.add_to_dominators(0, 0, +1) == 0);
    // inverse restores the original scores
    CHECK(t.add_to_dominators(2, 3, -1) == 2);
    CHECK(resolved(t) == std::vector<Triple>{{1, 3, 0}, {2, 2, 0}, {3, 1, 0}});

    // a stored point is never its own dominator
    CHECK(t.add_to_dominators(2, 2, +1) == 0);
    CHECK(resolved(t) == std::vector<Triple>{{1, 3, 0}, {2, 2, 0}, {3, 1, 0}});
}

TEST_CASE("add_to_all shifts every resolved score") {
    AugTree t = AugTree::build({2, 4, 2}, stair({{1, 3}, {2, 2}, {3, 1}}, {5, 4, 3}));
    t.add_to_all(7);
    t.validate();
    CHECK(resolved(t) == std::vector<Triple>{{1, 3, 12}, {2, 2, 11}, {3, 1, 10}});
}

TEST_CASE("split and concat worked examples") {
    std::vector<Point> v = stair({{1, 5}, {2, 4}, {3, 3}, {4, 2}, {5, 1}});
    AugTree t = AugTree::build({2, 4, 2}, v);
    // split by x at 3: boundary position first_x_gt(3) == 3
    auto [le, gt] = std::move(t).split_at(3);
    le.validate();
    gt.validate();
    CHECK(coords(le.all_resolved()) ==
          std::vector<std::pair<std::int64_t, std::int64_t>>{{1, 5}, {2, 4}, {3, 3}});
    CHECK(coords(gt.all_resolved()) ==
          std::vector<std::pair<std::int64_t, std::int64_t>>{{4, 2}, {5, 1}});

    // split by y at 3: the y <= 3 side is the suffix from first_y_le(3)
    AugTree t2 = AugTree::build({2, 4, 2}, v);
    REQUIRE(t2.first_y_le(3) == 2);
    auto [hi, lo] = std::move(t2).split_at(2);
    CHECK(coords(lo.all_resolved()) ==
          std::vector<std::pair<std::int64_t, std::int64_t>>{{3, 3}, {4, 2}, {5, 1}});
    CHECK(coords(hi.all_resolved()) ==
          std::vector<std::pair<std::int64_t, std::int64_t>>{{1, 5}, {2, 4}});

    AugTree joined = AugTree::concat(std::move(hi), std::move(lo));
    joined.validate();
    CHECK(coords(joined.all_resolved()) == coords(v));

    // concat with an empty side is the identity
    AugTree empty1(TreeParams{2, 4, 2});
    AugTree back = AugTree::concat(std::move(empty1), std::move(joined));
    CHECK(back.size() == 5);
    AugTree empty2(TreeParams{2, 4, 2});
    back = AugTree::concat(std::move(back), std::move(empty2));
    CHECK(back.size() == 5);

    AugTree a = AugTree::build({2, 4, 2}, stair({{1, 5}, {2, 4}}));
    AugTree b = AugTree::build({2, 4, 2}, {Point{3, 3, 3, 0}, Point{4, 4, 2, 0}});
    AugTree ab = AugTree::concat(std::move(a), std::move(b));
    ab.validate();
    CHECK(ab.size() == 4);
    CHECK(triples(ab.root_top()) == brute_top(resolved(ab), 2));

    // overlapping staircases cannot be concatenated
    AugTree c = AugTree::build({2, 4, 2}, stair({{1, 5}, {4, 2}}));
    AugTree d = AugTree::build({2, 4, 2}, stair({{2, 4}, {5, 1}}));
    CHECK_THROWS_AS(AugTree::concat(std::move(c), std::move(d)), std::logic_error);
}

TEST_CASE("split/concat round trip preserves every resolved score") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 1 + rng() % 120;
        std::vector<Point> v = wide_stair(n);
        for (Point& p : v) p.base_score = (std::int64_t)(rng() % 50);
        TreeParams tp{2, 4, 1 + rng() % 6};
        AugTree t = AugTree::build(tp, v);
        // stack some lazy adds first so the split has tags to push around
        for (int i = 0; i < 5; ++i) {
            std::size_t j = rng() % n;
            t.add_to_dominators(v[j].x + (std::int64_t)(rng() % 32),
                                v[j].y + (std::int64_t)(rng() % 32),
                                rng() % 2 ? 1 : -1);
        }
        std::vector<Triple> before = resolved(t);
        std::size_t cut = rng() % (n + 1);
        auto [l, r] = std::move(t).split_at(cut);
        l.validate();
        r.validate();
        CHECK(l.size() == cut);
        AugTree glued = AugTree::concat(std::move(l), std::move(r));
        glued.validate();
        CHECK(resolved(glued) == before);
        CHECK(triples(glued.root_top()) == brute_top(before, tp.cap));
    }
}

TEST_CASE("path_candidates covers replacement points") {
    std::vector<Point> v = stair({{1, 3}, {2, 2}, {3, 1}}, {5, 9, 7});
    AugTree t = AugTree::build({2, 4, 1}, v);
    std::unordered_set<std::uint64_t> excluded;

    // nothing excluded: the overall best is among the candidates
    std::vector<ScoredPoint> cand;
    t.path_candidates(t.find(3, 1), excluded, cand);
    bool has_best = false;
    for (const ScoredPoint& sp : cand) has_best = has_best || sp.score == 9;
    CHECK(has_best);

    // after reporting the best, its path candidates contain the runner-up
    excluded.insert(2); // id of (2,2), score 9
    cand.clear();
    t.path_candidates(t.find(2, 2), excluded, cand);
    bool has_second = false;
    for (const ScoredPoint& sp : cand) {
        CHECK(sp.id != 2);
        has_second = has_second || sp.score == 7;
    }
    CHECK(has_second);

    AugTree one = AugTree::build({2, 4, 1}, stair({{4, 4}}, {2}));
    std::unordered_set<std::uint64_t> all{1};
    cand.clear();
    one.path_candidates(0, all, cand);
    CHECK(cand.empty());
}

TEST_CASE("one-by-one extraction via path_candidates yields canonical order") {
    // simulate the single-tree report loop at several sizes and caps
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t n = 1 + rng() % 60;
        std::vector<Point> v = wide_stair(n);
        for (Point& p : v) p.base_score = (std::int64_t)(rng() % 25);
        AugTree t = AugTree::build({2, 4, 1}, v);

        std::vector<Triple> expect = brute_top(resolved(t), n);
        std::unordered_set<std::uint64_t> reported;
        std::vector<Triple> got;
        // heap substitute: scan candidate pool (sizes are tiny)
        std::vector<ScoredPoint> pool = t.root_top();
        while (got.size() < n) {
            std::size_t best = pool.size();
            for (std::size_t i = 0; i < pool.size(); ++i) {
                if (reported.count(pool[i].id)) continue;
                if (best == pool.size() || canonical_less(pool[i], pool[best])) best = i;
            }
            REQUIRE(best != pool.size());
            ScoredPoint win = pool[best];
            reported.insert(win.id);
            got.push_back({win.x, win.y, win.score});
            t.path_candidates(t.find(win.x, win.y), reported, pool);
        }
        CHECK(got == expect);
    }
}

TEST_CASE("randomized operation storm with full validation") {
    std::mt19937_64 rng(2024);
    for (TreeParams tp :
         {TreeParams{2, 4, 1}, TreeParams{2, 4, 3}, TreeParams{3, 6, 5}, TreeParams{2, 5, 8}}) {
        AugTree t(tp);
        // shadow staircase: (x, y, score) sorted by x
        std::vector<Triple> shadow;
        std::uint64_t next_id = 1;
        for (int step = 0; step < 1200; ++step) {
            int roll = (int)(rng() % 100);
            if (roll < 45 || shadow.size() < 4) {
                // insert into a random gap, if the gap has integer room
                std::size_t j = rng() % (shadow.size() + 1);
                std::int64_t xlo = j == 0 ? 0 : shadow[j - 1].x + 1;
                std::int64_t xhi = j == shadow.size() ? xlo + 64 : shadow[j].x - 1;
                std::int64_t ylo = j == shadow.size() ? 0 : shadow[j].y + 1;
                std::int64_t yhi = j == 0 ? ylo + 64 : shadow[j - 1].y - 1;
                if (xlo > xhi || ylo > yhi) continue;
                Triple p{xlo + (std::int64_t)(rng() % (std::uint64_t)(xhi - xlo + 1)),
                         ylo + (std::int64_t)(rng() % (std::uint64_t)(yhi - ylo + 1)),
                         (std::int64_t)(rng() % 40)};
                t.insert(Point{next_id++, p.x, p.y, 0}, p.score);
                shadow.insert(shadow.begin() + (std::ptrdiff_t)j, p);
            } else if (roll < 65) {
                std::size_t j = rng() % shadow.size();
                t.erase(j);
                shadow.erase(shadow.begin() + (std::ptrdiff_t)j);
            } else if (roll < 85) {
                // bump all dominators of a probe near a stored point
                std::size_t j = rng() % shadow.size();
                std::int64_t px = shadow[j].x + (std::int64_t)(rng() % 9) - 4;
                std::int64_t py = shadow[j].y + (std::int64_t)(rng() % 9) - 4;
                std::int64_t delta = rng() % 2 ? 1 : -1;
                std::int64_t changed = 0;
                for (Triple& q : shadow)
                    if (dominates(q.x, q.y, px, py)) {
                        q.score += delta;
                        ++changed;
                    }
                CHECK(t.add_to_dominators(px, py, delta) == changed);
            } else {
                // split at a random point and glue back
                std::size_t cut = rng() % (shadow.size() + 1);
                auto [l, r] = std::move(t).split_at(cut);
                l.validate();
                r.validate();
                t = AugTree::concat(std::move(l), std::move(r));
            }
            t.validate();
            REQUIRE(resolved(t) == shadow);
            if (step % 7 == 0) {
                REQUIRE(triples(t.root_top()) == brute_top(shadow, tp.cap));
            }
            if (step % 13 == 0 && !shadow.empty()) {
                std::size_t j = rng() % shadow.size();
                CHECK(t.find(shadow[j].x, shadow[j].y) == j);
                CHECK(t.at(j).score == shadow[j].score);
            }
        }
    }
}

TEST_CASE("debug dump mentions structure") {
    AugTree t = AugTree::build({2, 4, 2}, stair({{1, 3}, {2, 2}, {3, 1}}));
    std::string d = t.dump();
    CHECK(d.find("add") != std::string::npos);
}
