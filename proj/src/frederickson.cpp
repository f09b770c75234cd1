#include "topdom/frederickson.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace topdom {

namespace {

struct Cursor {
    std::int64_t value;
    std::size_t list;
    std::size_t pos;
};

std::size_t total_size(const std::vector<std::vector<std::int64_t>>& lists) {
    std::size_t n = 0;
    for (const auto& l : lists) n += l.size();
    return n;
}

} // namespace

std::int64_t kth_largest(const std::vector<std::vector<std::int64_t>>& lists, std::size_t r) {
    if (r == 0 || r > total_size(lists)) {
        throw std::out_of_range("kth_largest: rank out of range");
    }
    auto worse = [](const Cursor& a, const Cursor& b) { return a.value < b.value; };
    std::priority_queue<Cursor, std::vector<Cursor>, decltype(worse)> heap(worse);
    for (std::size_t i = 0; i < lists.size(); ++i) {
        if (!lists[i].empty()) heap.push({lists[i][0], i, 0});
    }
    for (;; --r) {
        Cursor c = heap.top();
        if (r == 1) return c.value;
        heap.pop();
        if (c.pos + 1 < lists[c.list].size()) {
            heap.push({lists[c.list][c.pos + 1], c.list, c.pos + 1});
        }
    }
}

std::int64_t frederickson_select(const std::vector<std::vector<std::int64_t>>& lists,
                                 std::size_t L) {
    if (L == 0 || L > total_size(lists)) {
        throw std::out_of_range("frederickson_select: rank out of range");
    }
    // Lists are sorted descending, so walk each one from its tail.
    auto better = [](const Cursor& a, const Cursor& b) { return a.value > b.value; };
    std::priority_queue<Cursor, std::vector<Cursor>, decltype(better)> heap(better);
    for (std::size_t i = 0; i < lists.size(); ++i) {
        if (!lists[i].empty()) heap.push({lists[i].back(), i, lists[i].size() - 1});
    }
    for (;; --L) {
        Cursor c = heap.top();
        if (L == 1) return c.value + 1;
        heap.pop();
        if (c.pos > 0) heap.push({lists[c.list][c.pos - 1], c.list, c.pos - 1});
    }
}

} // namespace topdom
