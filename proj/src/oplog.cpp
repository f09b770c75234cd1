#include "topdom/oplog.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace topdom {

namespace {

[[noreturn]] void bad_line(std::size_t lineno, const std::string& why) {
    throw std::runtime_error("op log line " + std::to_string(lineno) + ": " + why);
}

} // namespace

std::string mode_name(QueryMode m) { return m == QueryMode::klist ? "klist" : "onelist"; }
std::string dynamics_name(Dynamics d) { return d == Dynamics::semi ? "semi" : "full"; }

OpLog parse_oplog(std::istream& in) {
    OpLog log;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        if (!have_header) {
            std::string kkv, mkv, dkv;
            if (!(ls >> kkv >> mkv >> dkv))
                bad_line(lineno, "expected header 'k=.. mode=.. dynamic=..'");
            long k = 0;
            bool k_ok = kkv.rfind("k=", 0) == 0;
            if (k_ok) {
                try {
                    std::size_t used = 0;
                    k = std::stol(kkv.substr(2), &used);
                    k_ok = used == kkv.size() - 2;
                } catch (const std::exception&) {
                    k_ok = false;
                }
            }
            if (!k_ok || k < 1) bad_line(lineno, "bad k in header: " + kkv);
            log.config.k = (std::size_t)k;
            if (mkv == "mode=klist")
                log.config.mode = QueryMode::klist;
            else if (mkv == "mode=onelist")
                log.config.mode = QueryMode::onelist;
            else
                bad_line(lineno, "bad mode in header: " + mkv);
            if (dkv == "dynamic=semi")
                log.config.dynamics = Dynamics::semi;
            else if (dkv == "dynamic=full")
                log.config.dynamics = Dynamics::full;
            else
                bad_line(lineno, "bad dynamic in header: " + dkv);
            std::string rest;
            if (ls >> rest) bad_line(lineno, "trailing tokens in header: " + rest);
            have_header = true;
            continue;
        }
        std::string tag;
        ls >> tag;
        Op op;
        if (tag == "Q") {
            op.kind = 'Q';
        } else if (tag == "I" || tag == "D") {
            op.kind = tag[0];
            if (!(ls >> op.x >> op.y)) bad_line(lineno, "expected '" + tag + " x y'");
            if (op.kind == 'D' && log.config.dynamics == Dynamics::semi)
                bad_line(lineno, "deletion in a semi-dynamic log");
        } else {
            bad_line(lineno, "unknown op '" + tag + "'");
        }
        std::string rest;
        if (ls >> rest) bad_line(lineno, "trailing tokens: " + rest);
        log.ops.push_back(op);
    }
    if (!have_header) throw std::runtime_error("op log is missing its header line");
    return log;
}

OpLog load_oplog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open op log: " + path);
    return parse_oplog(in);
}

void write_oplog(std::ostream& out, const OpLog& log) {
    out << "k=" << log.config.k << " mode=" << mode_name(log.config.mode)
        << " dynamic=" << dynamics_name(log.config.dynamics) << "\n";
    for (const Op& op : log.ops) {
        if (op.kind == 'Q')
            out << "Q\n";
        else
            out << op.kind << " " << op.x << " " << op.y << "\n";
    }
}

void save_oplog(const std::string& path, const OpLog& log) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write op log: " + path);
    write_oplog(out, log);
}

} // namespace topdom
