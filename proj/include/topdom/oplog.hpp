#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "topdom/engine.hpp"

namespace topdom {

/** One operation: 'I' insert, 'D' delete, 'Q' query. Coordinates unused for Q. */
struct Op {
    char kind = 'Q';
    std::int64_t x = 0;
    std::int64_t y = 0;
};

/**
 * Text operation log. First line is a header
 *     k=<int> mode=<klist|onelist> dynamic=<semi|full>
 * followed by one op per line: "I x y", "D x y" or "Q". Blank lines and
 * lines starting with '#' are skipped. Deletions in a semi-dynamic log are
 * rejected at parse time.
 */
struct OpLog {
    EngineConfig config;
    std::vector<Op> ops;
};

/** Parses a log; throws std::runtime_error naming the offending line. */
OpLog parse_oplog(std::istream& in);
OpLog load_oplog(const std::string& path);

void write_oplog(std::ostream& out, const OpLog& log);
void save_oplog(const std::string& path, const OpLog& log);

std::string mode_name(QueryMode m);
std::string dynamics_name(Dynamics d);

} // namespace topdom
