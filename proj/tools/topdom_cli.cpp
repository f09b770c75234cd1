#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "topdom/bench.hpp"
#include "topdom/check.hpp"
#include "topdom/engine.hpp"
#include "topdom/oplog.hpp"
#include "topdom/workload.hpp"

namespace {

using nlohmann::json;
using namespace topdom;

QueryMode parse_mode(const std::string& s) {
    if (s == "klist") return QueryMode::klist;
    if (s == "onelist") return QueryMode::onelist;
    throw CLI::ValidationError("--mode", "must be klist or onelist");
}

Dynamics parse_dynamics(const std::string& s) {
    if (s == "semi") return Dynamics::semi;
    if (s == "full") return Dynamics::full;
    throw CLI::ValidationError("--dynamic", "must be semi or full");
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw CLI::ValidationError("--out", "cannot write " + path);
    return file;
}

int cmd_gen(const WorkloadSpec& spec, const std::string& out_path) {
    OpLog log = generate_workload(spec);
    std::ofstream file;
    write_oplog(open_out(file, out_path), log);
    return 0;
}

int cmd_run(const std::string& in_path, const std::string& out_path, bool answers) {
    OpLog log = load_oplog(in_path);
    Engine eng(log.config);
    json queries = json::array();
    std::size_t inserts = 0, erases = 0;
    auto t0 = std::chrono::steady_clock::now();
    for (const Op& op : log.ops) {
        if (op.kind == 'I') {
            eng.insert(op.x, op.y);
            ++inserts;
        } else if (op.kind == 'D') {
            eng.erase(op.x, op.y);
            ++erases;
        } else {
            std::vector<ScoredPoint> ans = eng.query();
            if (answers) {
                json a = json::array();
                for (const ScoredPoint& sp : ans) a.push_back({sp.x, sp.y, sp.score});
                queries.push_back(std::move(a));
            } else {
                queries.push_back(ans.size());
            }
        }
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
    const EngineCounters& c = eng.counters();
    json report{{"config",
                 {{"k", log.config.k},
                  {"mode", mode_name(log.config.mode)},
                  {"dynamic", dynamics_name(log.config.dynamics)}}},
                {"ops", log.ops.size()},
                {"inserts", inserts},
                {"erases", erases},
                {"final_size", eng.size()},
                {"maintained_layers", eng.maintained_layers()},
                {"frontier", eng.frontier()},
                {"tail_size", eng.tail_ids().size()},
                {"elapsed_ms", ms},
                {"counters",
                 {{"tree_node_visits", c.tree_node_visits},
                  {"counter_node_visits", c.counter_node_visits},
                  {"rebuilds", c.rebuilds},
                  {"cascade_steps", c.cascade_steps},
                  {"query_candidates", c.query_candidates}}},
                {"queries", std::move(queries)}};
    std::ofstream file;
    open_out(file, out_path) << report.dump(2) << "\n";
    return 0;
}

int cmd_check(const std::string& in_path, bool paranoid) {
    OpLog log = load_oplog(in_path);
    CheckOptions opt;
    opt.paranoid = paranoid;
    CheckResult res = run_check(log, opt);
    if (res.ok) {
        std::cout << "OK: " << res.ops_run << " ops, " << res.queries_checked
                  << " queries checked" << (paranoid ? " (paranoid)" : "") << "\n";
        return 0;
    }
    std::cout << "DIVERGED at op " << res.op_index + 1 << ": " << res.message << "\n";
    return 1;
}

int cmd_bench(const BenchConfig& cfg, const std::string& out_path) {
    std::vector<BenchRow> rows = run_bench(cfg);
    std::ofstream file;
    write_bench_csv(open_out(file, out_path), cfg, rows);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic top-k dominating queries over 2D integer points"};
    app.require_subcommand(1);

    std::string mode = "klist", dynamic = "semi", dist = "uniform", in_path, out_path;
    WorkloadSpec spec;
    BenchConfig bcfg;
    bool paranoid = false, answers = false;
    std::vector<std::size_t> sizes{4096, 8192, 16384};

    CLI::App* gen = app.add_subcommand("gen", "generate a random op log");
    gen->add_option("--ops", spec.ops, "number of operations");
    gen->add_option("--k", spec.k, "answer size");
    gen->add_option("--mode", mode, "klist|onelist");
    gen->add_option("--dynamic", dynamic, "semi|full");
    gen->add_option("--dist", dist, "uniform|correlated|anticorrelated|clustered");
    gen->add_option("--deletes", spec.delete_frac, "share of updates that delete");
    gen->add_option("--queries", spec.query_frac, "share of ops that query");
    gen->add_option("--seed", spec.seed, "random seed");
    gen->add_option("--out", out_path, "output path (default stdout)");

    CLI::App* run = app.add_subcommand("run", "replay an op log, emit a JSON report");
    run->add_option("--in", in_path, "op log path")->required();
    run->add_option("--out", out_path, "report path (default stdout)");
    run->add_flag("--answers", answers, "include full query answers in the report");

    CLI::App* check = app.add_subcommand("check", "replay against the reference model");
    check->add_option("--in", in_path, "op log path")->required();
    check->add_flag("--paranoid", paranoid, "validate full structure after every op");

    CLI::App* bench = app.add_subcommand("bench", "per-op cost across base sizes, CSV");
    bench->add_option("--sizes", sizes, "base sizes")->delimiter(',');
    bench->add_option("--k", bcfg.k, "answer size");
    bench->add_option("--mode", mode, "klist|onelist");
    bench->add_option("--dynamic", dynamic, "semi|full");
    bench->add_option("--dist", dist, "coordinate distribution");
    bench->add_option("--seed", bcfg.seed, "random seed");
    bench->add_option("--inserts", bcfg.inserts, "insert burst per size");
    bench->add_option("--queries", bcfg.queries, "queries per size");
    bench->add_option("--erases", bcfg.erases, "erase burst per size (full mode)");
    bench->add_option("--out", out_path, "CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            spec.mode = parse_mode(mode);
            spec.dynamics = parse_dynamics(dynamic);
            spec.dist = dist;
            return cmd_gen(spec, out_path);
        }
        if (run->parsed()) return cmd_run(in_path, out_path, answers);
        if (check->parsed()) return cmd_check(in_path, paranoid);
        if (bench->parsed()) {
            bcfg.sizes = sizes;
            bcfg.mode = parse_mode(mode);
            bcfg.dynamics = parse_dynamics(dynamic);
            bcfg.dist = dist;
            return cmd_bench(bcfg, out_path);
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
