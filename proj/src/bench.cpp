#include "topdom/bench.hpp"

#include <chrono>
#include <ostream>

#include "topdom/oplog.hpp"
#include "topdom/workload.hpp"

namespace topdom {

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

} // namespace

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
    std::vector<BenchRow> rows;
    for (std::size_t n : cfg.sizes) {
        // one oversized insert-only log supplies the base set and the bursts
        WorkloadSpec ws;
        ws.ops = n + cfg.inserts + cfg.erases;
        ws.k = cfg.k;
        ws.mode = cfg.mode;
        ws.dynamics = Dynamics::semi; // inserts only; erases reuse base points
        ws.dist = cfg.dist;
        ws.query_frac = 0;
        ws.seed = cfg.seed + n;
        OpLog log = generate_workload(ws);

        BenchRow row;
        row.n = n;
        std::vector<Point> base(n);
        for (std::size_t i = 0; i < n; ++i)
            base[i] = Point{(std::uint64_t)i + 1, log.ops[i].x, log.ops[i].y, 0};

        auto t0 = std::chrono::steady_clock::now();
        EngineConfig ec{cfg.k, cfg.mode, cfg.dynamics, 2, 4};
        Engine eng(ec, base);
        row.build_ms = ms_since(t0);

        std::uint64_t v0 = eng.counters().tree_node_visits;
        t0 = std::chrono::steady_clock::now();
        for (std::size_t i = 0; i < cfg.inserts; ++i) {
            const Op& op = log.ops[n + i];
            eng.insert(op.x, op.y);
        }
        if (cfg.inserts) {
            row.insert_visits =
                (double)(eng.counters().tree_node_visits - v0) / (double)cfg.inserts;
            row.insert_us = ms_since(t0) * 1000.0 / (double)cfg.inserts;
        }

        v0 = eng.counters().query_candidates;
        t0 = std::chrono::steady_clock::now();
        for (std::size_t i = 0; i < cfg.queries; ++i) (void)eng.query();
        if (cfg.queries) {
            row.query_candidates =
                (double)(eng.counters().query_candidates - v0) / (double)cfg.queries;
            row.query_us = ms_since(t0) * 1000.0 / (double)cfg.queries;
        }

        if (cfg.dynamics == Dynamics::full && cfg.erases) {
            v0 = eng.counters().tree_node_visits;
            t0 = std::chrono::steady_clock::now();
            std::size_t done = 0;
            for (std::size_t i = 0; i < cfg.erases && i < n; ++i, ++done)
                eng.erase(base[i].x, base[i].y);
            if (done) {
                row.erase_visits =
                    (double)(eng.counters().tree_node_visits - v0) / (double)done;
                row.erase_us = ms_since(t0) * 1000.0 / (double)done;
            }
        }
        rows.push_back(row);
    }
    return rows;
}

void write_bench_csv(std::ostream& out, const BenchConfig& cfg,
                     const std::vector<BenchRow>& rows) {
    out << "n,k,mode,dynamic,dist,build_ms,insert_visits,insert_us,"
           "query_candidates,query_us,erase_visits,erase_us\n";
    for (const BenchRow& r : rows) {
        out << r.n << ',' << cfg.k << ',' << mode_name(cfg.mode) << ','
            << dynamics_name(cfg.dynamics) << ',' << cfg.dist << ',' << r.build_ms << ','
            << r.insert_visits << ',' << r.insert_us << ',' << r.query_candidates << ','
            << r.query_us << ',' << r.erase_visits << ',' << r.erase_us << "\n";
    }
}

} // namespace topdom
