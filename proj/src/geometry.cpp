#include "topdom/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace topdom {

void ensure_distinct(std::span<const Point> pts) {
    std::vector<std::pair<std::int64_t, std::int64_t>> coords;
    coords.reserve(pts.size());
    for (const Point& p : pts) coords.emplace_back(p.x, p.y);
    std::sort(coords.begin(), coords.end());
    if (std::adjacent_find(coords.begin(), coords.end()) != coords.end())
        throw std::invalid_argument("duplicate point coordinates in input set");
}

namespace {

std::int64_t brute_score(std::span<const Point> pts, std::size_t i) {
    std::int64_t s = 0;
    for (std::size_t j = 0; j < pts.size(); ++j)
        if (j != i && dominates(pts[i], pts[j])) ++s;
    return s;
}

} // namespace

std::vector<std::int64_t> oracle_scores(std::span<const Point> pts) {
    ensure_distinct(pts);
    std::vector<std::int64_t> out(pts.size(), 0);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(pts.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = brute_score(pts, static_cast<std::size_t>(i));
    return out;
}

std::vector<std::int64_t> oracle_scores_serial(std::span<const Point> pts) {
    ensure_distinct(pts);
    std::vector<std::int64_t> out(pts.size(), 0);
    for (std::size_t i = 0; i < pts.size(); ++i) out[i] = brute_score(pts, i);
    return out;
}

std::unordered_map<std::uint64_t, std::int64_t> oracle_score_map(std::span<const Point> pts) {
    std::vector<std::int64_t> s = oracle_scores(pts);
    std::unordered_map<std::uint64_t, std::int64_t> m;
    m.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) m[pts[i].id] = s[i];
    return m;
}

std::vector<std::vector<Point>> oracle_layers(std::span<const Point> pts) {
    ensure_distinct(pts);
    std::vector<Point> rest(pts.begin(), pts.end());
    std::sort(rest.begin(), rest.end(), [](const Point& a, const Point& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });

    std::vector<std::vector<Point>> layers;
    while (!rest.empty()) {
        // One peel: walking in (x asc, y asc) order, a point is maximal iff no
        // earlier point of the pass dominates it. Only the first point of each
        // x-group can survive, and it survives iff every strictly-smaller x seen
        // so far has larger y.
        std::vector<Point> layer;
        std::vector<Point> next;
        std::int64_t min_y_before = 0;
        bool any_before = false;
        std::size_t i = 0;
        while (i < rest.size()) {
            std::size_t j = i;
            while (j < rest.size() && rest[j].x == rest[i].x) ++j;
            if (!any_before || min_y_before > rest[i].y)
                layer.push_back(rest[i]);
            else
                next.push_back(rest[i]);
            for (std::size_t t = i + 1; t < j; ++t) next.push_back(rest[t]);
            if (!any_before || rest[i].y < min_y_before) min_y_before = rest[i].y;
            any_before = true;
            i = j;
        }
        layers.push_back(std::move(layer));
        rest = std::move(next);
    }
    return layers;
}

std::vector<ScoredPoint> oracle_topk(std::span<const Point> pts, std::size_t k) {
    std::vector<std::int64_t> s = oracle_scores(pts);
    std::vector<ScoredPoint> all;
    all.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        all.push_back({pts[i].id, pts[i].x, pts[i].y, s[i]});
    std::sort(all.begin(), all.end(), canonical_less);
    if (all.size() > k) all.resize(k);
    return all;
}

Point parse_point_line(std::string_view line, std::uint64_t id) {
    Point p;
    p.id = id;
    const char* b = line.data();
    const char* e = b + line.size();
    auto skip_ws = [&] { while (b < e && (*b == ' ' || *b == '\t')) ++b; };
    skip_ws();
    auto r1 = std::from_chars(b, e, p.x);
    if (r1.ec != std::errc{}) throw std::invalid_argument("bad point line: " + std::string(line));
    b = r1.ptr;
    skip_ws();
    auto r2 = std::from_chars(b, e, p.y);
    if (r2.ec != std::errc{}) throw std::invalid_argument("bad point line: " + std::string(line));
    b = r2.ptr;
    skip_ws();
    if (b != e) throw std::invalid_argument("trailing junk in point line: " + std::string(line));
    return p;
}

std::vector<Point> read_points(std::istream& in) {
    std::vector<Point> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        pts.push_back(parse_point_line(line, static_cast<std::uint64_t>(pts.size() + 1)));
    }
    return pts;
}

void write_points(std::ostream& out, std::span<const Point> pts) {
    for (const Point& p : pts) out << p.x << ' ' << p.y << '\n';
}

} // namespace topdom
