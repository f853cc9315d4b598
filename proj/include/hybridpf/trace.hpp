#pragma once

#include "hybridpf/pipeline.hpp"

#include <json.hpp>

#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

namespace hybridpf {

/// Line-delimited JSON trace: one object per prediction step, flushed per
/// line so long runs stream, then a single {"summary": ...} line at the end.
class TraceWriter {
public:
    /// Opens (truncates) a file; empty path writes to stdout.
    explicit TraceWriter(const std::string& path);

    void write_record(const RunRecord& rec);
    void write_summary(const nlohmann::json& summary);

private:
    std::ofstream file_;
    std::ostream* out_;
};

struct Trace {
    std::vector<RunRecord> records;
    nlohmann::json summary;
};

Trace read_trace(const std::string& path);

} // namespace hybridpf
