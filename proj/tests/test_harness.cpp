#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "test_util.hpp"
#include "topdom/bench.hpp"
#include "topdom/check.hpp"
#include "topdom/geometry.hpp"
#include "topdom/oplog.hpp"
#include "topdom/workload.hpp"

using namespace topdom;
using namespace topdom::testutil;

namespace {

OpLog parse_str(const std::string& text) {
    std::istringstream in(text);
    return parse_oplog(in);
}

std::string error_of(const std::string& text) {
    try {
        parse_str(text);
    } catch (const std::runtime_error& e) {
        return e.what();
    }
    return "";
}

std::vector<Point> insert_points(const OpLog& log) {
    std::vector<Point> v;
    for (const Op& op : log.ops)
        if (op.kind == 'I') v.push_back(Point{v.size() + 1, op.x, op.y, 0});
    return v;
}

} // namespace

TEST_CASE("op log parses and round-trips") {
    OpLog log = parse_str("# comment\n\nk=3 mode=onelist dynamic=full\nI 5 -7\nQ\nD 5 -7\n");
    CHECK(log.config.k == 3);
    CHECK(log.config.mode == QueryMode::onelist);
    CHECK(log.config.dynamics == Dynamics::full);
    REQUIRE(log.ops.size() == 3);
    CHECK(log.ops[0].kind == 'I');
    CHECK(log.ops[0].x == 5);
    CHECK(log.ops[0].y == -7);
    CHECK(log.ops[1].kind == 'Q');
    CHECK(log.ops[2].kind == 'D');

    std::ostringstream out;
    write_oplog(out, log);
    OpLog again = parse_str(out.str());
    CHECK(again.config.k == log.config.k);
    CHECK(again.config.mode == log.config.mode);
    CHECK(again.config.dynamics == log.config.dynamics);
    REQUIRE(again.ops.size() == log.ops.size());
    for (std::size_t i = 0; i < log.ops.size(); ++i) {
        CHECK(again.ops[i].kind == log.ops[i].kind);
        CHECK(again.ops[i].x == log.ops[i].x);
        CHECK(again.ops[i].y == log.ops[i].y);
    }
}

TEST_CASE("header errors name the line") {
    CHECK(error_of("") == "op log is missing its header line");
    CHECK(error_of("# only comments\n\n") == "op log is missing its header line");
    CHECK(error_of("k=2 mode=klist\n") == "op log line 1: expected header 'k=.. mode=.. dynamic=..'");
    CHECK(error_of("k=0 mode=klist dynamic=semi\n") == "op log line 1: bad k in header: k=0");
    CHECK(error_of("k=abc mode=klist dynamic=semi\n") == "op log line 1: bad k in header: k=abc");
    CHECK(error_of("k=2x mode=klist dynamic=semi\n") == "op log line 1: bad k in header: k=2x");
    CHECK(error_of("q=2 mode=klist dynamic=semi\n") == "op log line 1: bad k in header: q=2");
    CHECK(error_of("k=2 mode=fast dynamic=semi\n") == "op log line 1: bad mode in header: mode=fast");
    CHECK(error_of("k=2 mode=klist dynamic=no\n") == "op log line 1: bad dynamic in header: dynamic=no");
    CHECK(error_of("# c\nk=2 mode=klist dynamic=semi extra\n") ==
          "op log line 2: trailing tokens in header: extra");
}

TEST_CASE("op errors name the line") {
    const std::string head = "k=2 mode=klist dynamic=full\n";
    CHECK(error_of(head + "I 1\n") == "op log line 2: expected 'I x y'");
    CHECK(error_of(head + "I 1 b\n") == "op log line 2: expected 'I x y'");
    CHECK(error_of(head + "\n# pad\nX 1 2\n") == "op log line 4: unknown op 'X'");
    CHECK(error_of(head + "Q 1\n") == "op log line 2: trailing tokens: 1");
    CHECK(error_of(head + "I 1 2 3\n") == "op log line 2: trailing tokens: 3");
    CHECK(error_of("k=2 mode=klist dynamic=semi\nI 1 2\nD 1 2\n") ==
          "op log line 3: deletion in a semi-dynamic log");
}

TEST_CASE("workload generation is deterministic") {
    WorkloadSpec ws;
    ws.ops = 400;
    ws.dynamics = Dynamics::full;
    ws.dist = "clustered";
    ws.seed = 42;
    std::ostringstream a, b;
    write_oplog(a, generate_workload(ws));
    write_oplog(b, generate_workload(ws));
    CHECK(a.str() == b.str());
    CHECK(!a.str().empty());

    ws.seed = 43;
    std::ostringstream c;
    write_oplog(c, generate_workload(ws));
    CHECK(a.str() != c.str());
}

TEST_CASE("workload respects its spec") {
    for (const char* dist : {"uniform", "correlated", "anticorrelated", "clustered"}) {
        WorkloadSpec ws;
        ws.ops = 500;
        ws.k = 7;
        ws.mode = QueryMode::onelist;
        ws.dynamics = Dynamics::full;
        ws.dist = dist;
        ws.delete_frac = 0.3;
        ws.seed = 7;
        OpLog log = generate_workload(ws);
        CHECK(log.config.k == 7);
        CHECK(log.config.mode == QueryMode::onelist);
        CHECK(log.ops.size() == 500);
        std::size_t ins = 0, del = 0, q = 0, live = 0;
        for (const Op& op : log.ops) {
            if (op.kind == 'I') ++ins, ++live;
            if (op.kind == 'D') ++del, --live;
            if (op.kind == 'Q') ++q;
        }
        CHECK(ins > del);
        CHECK(q > 0);
        CHECK(del > 0);
        // replay must be exception-free: every D hits a live point, no
        // duplicate inserts
        ReferenceModel ref;
        for (const Op& op : log.ops) {
            if (op.kind == 'I') ref.insert(op.x, op.y);
            if (op.kind == 'D') ref.erase(op.x, op.y);
        }
        CHECK(ref.size() == live);
    }
}

TEST_CASE("unknown distribution is rejected") {
    WorkloadSpec ws;
    ws.dist = "zipf";
    CHECK_THROWS_AS(generate_workload(ws), std::invalid_argument);
}

TEST_CASE("distribution shape shows up in the first layer") {
    WorkloadSpec anti;
    anti.ops = 600;
    anti.query_frac = 0;
    anti.dist = "anticorrelated";
    anti.seed = 11;
    WorkloadSpec corr = anti;
    corr.dist = "correlated";

    auto first_layer = [](const WorkloadSpec& ws) {
        auto layers = oracle_layers(insert_points(generate_workload(ws)));
        return layers.empty() ? std::size_t{0} : layers[0].size();
    };
    std::size_t wide = first_layer(anti), narrow = first_layer(corr);
    CHECK(wide > 4 * narrow); // antidiagonal points are mostly mutually undominated
}

TEST_CASE("reference model agrees with the oracle") {
    ReferenceModel ref;
    ref.insert(1, 4);
    ref.insert(2, 2);
    ref.insert(4, 1);
    ref.insert(3, 3);
    ref.insert(5, 5);
    CHECK(triples(ref.topk(2)) == std::vector<Triple>{{2, 2, 2}, {1, 4, 1}});
    CHECK(ref.score_of(2, 2) == 2);
    ref.erase(2, 2);
    CHECK(ref.size() == 4);
    CHECK(ref.score_of(1, 4) == 1);
    auto layers = ref.layers();
    REQUIRE(layers.size() == 2);
    CHECK(coords(layers[0]) ==
          std::vector<std::pair<std::int64_t, std::int64_t>>{{1, 4}, {3, 3}, {4, 1}});
    CHECK(coords(layers[1]) == std::vector<std::pair<std::int64_t, std::int64_t>>{{5, 5}});
}

TEST_CASE("replayed chain answers the worked example") {
    OpLog log = parse_str("k=2 mode=klist dynamic=semi\nI 1 1\nI 2 2\nI 3 3\nQ\n");
    CheckResult res = run_check(log);
    CHECK(res.ok);
    CHECK(res.ops_run == 4);
    CHECK(res.queries_checked == 1);

    Engine e(log.config);
    for (const Op& op : log.ops)
        if (op.kind == 'I') e.insert(op.x, op.y);
    CHECK(triples(e.query()) == std::vector<Triple>{{1, 1, 2}, {2, 2, 1}});
}

TEST_CASE("checker passes generated logs in every cell") {
    std::uint64_t seed = 100;
    for (const char* dist : {"uniform", "correlated", "anticorrelated", "clustered"}) {
        for (Dynamics dyn : {Dynamics::semi, Dynamics::full}) {
            for (QueryMode mode : {QueryMode::klist, QueryMode::onelist}) {
                WorkloadSpec ws;
                ws.ops = 220;
                ws.k = 1 + seed % 9;
                ws.mode = mode;
                ws.dynamics = dyn;
                ws.dist = dist;
                ws.seed = ++seed;
                CheckOptions opt;
                opt.paranoid = seed % 2 == 0;
                CheckResult res = run_check(generate_workload(ws), opt);
                INFO(dist << " " << dynamics_name(dyn) << " " << mode_name(mode)
                          << " seed " << seed << ": " << res.message);
                CHECK(res.ok);
                CHECK(res.ops_run == ws.ops);
            }
        }
    }
}

TEST_CASE("checker catches injected score corruption") {
    WorkloadSpec ws;
    ws.ops = 120;
    ws.k = 3;
    ws.query_frac = 0.2;
    ws.seed = 77;
    OpLog log = generate_workload(ws);
    const std::size_t hit = 40;
    auto tamper = [&](Engine& e, std::size_t idx) {
        if (idx == hit) e.corrupt_first_layer_scores(+1);
    };

    CheckResult clean = run_check(log, {});
    REQUIRE(clean.ok);

    CheckResult by_query = run_check(log, {}, tamper);
    CHECK(!by_query.ok);
    CHECK(by_query.op_index > hit); // caught by the next query comparison

    CheckOptions paranoid;
    paranoid.paranoid = true;
    CheckResult by_structure = run_check(log, paranoid, tamper);
    CHECK(!by_structure.ok);
    CHECK(by_structure.op_index == hit); // caught immediately
    CHECK(!by_structure.message.empty());
}

TEST_CASE("bench produces one row per size") {
    BenchConfig bc;
    bc.sizes = {64, 128};
    bc.k = 4;
    bc.inserts = 16;
    bc.queries = 8;
    bc.erases = 8;
    bc.dynamics = Dynamics::full;
    auto rows = run_bench(bc);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].n == 64);
    CHECK(rows[1].n == 128);
    for (const BenchRow& r : rows) {
        CHECK(r.insert_visits > 0);
        CHECK(r.query_candidates > 0);
        CHECK(r.erase_visits > 0);
    }
    std::ostringstream out;
    write_bench_csv(out, bc, rows);
    std::string csv = out.str();
    CHECK(csv.rfind("n,k,mode,dynamic,dist,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
