#include "topdom/workload.hpp"

#include <random>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace topdom {

namespace {

constexpr std::int64_t kCoordRange = std::int64_t{1} << 31;

// Helpers over the raw 64-bit stream so the output never depends on a
// library's distribution internals.
std::int64_t draw_below(std::mt19937_64& rng, std::int64_t n) {
    return (std::int64_t)(rng() % (std::uint64_t)n);
}

bool draw_chance(std::mt19937_64& rng, double p) {
    return (double)(rng() >> 11) * 0x1.0p-53 < p;
}

std::int64_t clamp_coord(std::int64_t v) {
    if (v < 0) return 0;
    if (v >= kCoordRange) return kCoordRange - 1;
    return v;
}

struct Sampler {
    std::mt19937_64& rng;
    const std::string& dist;
    std::vector<std::pair<std::int64_t, std::int64_t>> centers;

    Sampler(std::mt19937_64& r, const std::string& d) : rng(r), dist(d) {
        if (dist == "clustered")
            for (int i = 0; i < 8; ++i)
                centers.emplace_back(draw_below(rng, kCoordRange), draw_below(rng, kCoordRange));
    }

    std::pair<std::int64_t, std::int64_t> operator()() {
        if (dist == "uniform")
            return {draw_below(rng, kCoordRange), draw_below(rng, kCoordRange)};
        if (dist == "correlated") {
            std::int64_t x = draw_below(rng, kCoordRange);
            std::int64_t noise = draw_below(rng, kCoordRange / 8) - kCoordRange / 16;
            return {x, clamp_coord(x + noise)};
        }
        if (dist == "anticorrelated") {
            std::int64_t x = draw_below(rng, kCoordRange);
            std::int64_t noise = draw_below(rng, kCoordRange / 8) - kCoordRange / 16;
            return {x, clamp_coord(kCoordRange - 1 - x + noise)};
        }
        if (dist == "clustered") {
            auto [cx, cy] = centers[(std::size_t)draw_below(rng, (std::int64_t)centers.size())];
            std::int64_t spread = kCoordRange / 64;
            // sum of three uniforms for a bell-shaped offset
            std::int64_t dx = 0, dy = 0;
            for (int i = 0; i < 3; ++i) {
                dx += draw_below(rng, spread) - spread / 2;
                dy += draw_below(rng, spread) - spread / 2;
            }
            return {clamp_coord(cx + dx), clamp_coord(cy + dy)};
        }
        throw std::invalid_argument("unknown distribution: " + dist);
    }
};

} // namespace

OpLog generate_workload(const WorkloadSpec& spec) {
    OpLog log;
    log.config.k = spec.k;
    log.config.mode = spec.mode;
    log.config.dynamics = spec.dynamics;
    log.ops.reserve(spec.ops);

    std::mt19937_64 rng(spec.seed);
    Sampler sample(rng, spec.dist);
    std::set<std::pair<std::int64_t, std::int64_t>> used;
    std::vector<std::pair<std::int64_t, std::int64_t>> live;

    auto fresh_point = [&]() {
        for (int tries = 0; tries < 64; ++tries) {
            auto p = sample();
            if (used.insert(p).second) return p;
        }
        // dense cluster fallback: probe right along x
        auto p = sample();
        while (!used.insert(p).second) p.first = (p.first + 1) % kCoordRange;
        return p;
    };

    for (std::size_t i = 0; i < spec.ops; ++i) {
        if (draw_chance(rng, spec.query_frac)) {
            log.ops.push_back({'Q', 0, 0});
            continue;
        }
        bool del = spec.dynamics == Dynamics::full && !live.empty() &&
                   draw_chance(rng, spec.delete_frac);
        if (del) {
            std::size_t j = (std::size_t)draw_below(rng, (std::int64_t)live.size());
            auto p = live[j];
            live[j] = live.back();
            live.pop_back();
            used.erase(p); // the spot may be reused by a later insert
            log.ops.push_back({'D', p.first, p.second});
        } else {
            auto p = fresh_point();
            live.push_back(p);
            log.ops.push_back({'I', p.first, p.second});
        }
    }
    return log;
}

} // namespace topdom
