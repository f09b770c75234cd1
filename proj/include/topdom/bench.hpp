#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "topdom/engine.hpp"

namespace topdom {

/**
 * Measures one engine configuration across a ladder of base sizes: build an
 * engine holding n points, then time a burst of inserts, queries and (in
 * full mode) deletions on top of it, recording wall time and structural
 * work per operation.
 */
struct BenchConfig {
    std::vector<std::size_t> sizes;
    std::size_t k = 8;
    QueryMode mode = QueryMode::klist;
    Dynamics dynamics = Dynamics::semi;
    std::string dist = "uniform";
    std::uint64_t seed = 1;
    std::size_t inserts = 256; // burst length per size
    std::size_t queries = 64;
    std::size_t erases = 0; // applied only in full mode
};

struct BenchRow {
    std::size_t n = 0;
    double build_ms = 0;
    double insert_visits = 0; // layer-tree nodes touched, average per op
    double insert_us = 0;
    double query_candidates = 0; // entries examined, average per query
    double query_us = 0;
    double erase_visits = 0;
    double erase_us = 0;
};

std::vector<BenchRow> run_bench(const BenchConfig& cfg);

/** CSV with a header row; column meanings are documented in the README. */
void write_bench_csv(std::ostream& out, const BenchConfig& cfg,
                     const std::vector<BenchRow>& rows);

} // namespace topdom
