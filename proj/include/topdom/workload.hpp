#pragma once

#include <cstdint>
#include <string>

#include "topdom/oplog.hpp"

namespace topdom {

/**
 * Random op-log generator. Coordinates are drawn from [0, 2^31) under one of
 * four shapes: "uniform" (independent axes), "correlated" (points hug the
 * main diagonal, giving long dominance chains), "anticorrelated" (points hug
 * the antidiagonal, giving broad layers) and "clustered" (a few dense
 * blobs). Every insert uses fresh coordinates; deletions pick a uniformly
 * random live point and fall back to an insert when nothing is live. Output
 * is a pure function of the spec, byte for byte.
 */
struct WorkloadSpec {
    std::size_t ops = 1000;
    std::size_t k = 2;
    QueryMode mode = QueryMode::klist;
    Dynamics dynamics = Dynamics::semi;
    std::string dist = "uniform";
    double delete_frac = 0.25; // share of updates that delete (full mode only)
    double query_frac = 0.1;   // share of ops that query
    std::uint64_t seed = 1;
};

OpLog generate_workload(const WorkloadSpec& spec);

} // namespace topdom
