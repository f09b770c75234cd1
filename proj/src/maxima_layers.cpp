#include "topdom/maxima_layers.hpp"

#include <algorithm>

namespace topdom {

std::vector<std::vector<Point>> compute_maxima_layers(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });

    std::vector<std::vector<Point>> layers;
    std::vector<std::int64_t> tails; // tails[i] = min y in layer i so far; strictly ascending
    for (const Point& p : pts) {
        // Layers [0, slot) all contain a processed point with y <= p.y, and every
        // such point dominates p (smaller x, or equal x and smaller y), so p lands
        // in layer `slot`.
        auto it = std::upper_bound(tails.begin(), tails.end(), p.y);
        std::size_t slot = static_cast<std::size_t>(it - tails.begin());
        if (slot == tails.size()) {
            tails.push_back(p.y);
            layers.emplace_back();
        } else {
            tails[slot] = p.y;
        }
        layers[slot].push_back(p);
    }
    return layers;
}

} // namespace topdom
