#include "hybridpf/trace.hpp"

#include "hybridpf/errors.hpp"

#include <iostream>

namespace hybridpf {

using nlohmann::json;

TraceWriter::TraceWriter(const std::string& path) {
    if (path.empty()) {
        out_ = &std::cout;
        return;
    }
    file_.open(path, std::ios::out | std::ios::trunc);
    if (!file_) {
        throw DataError("cannot open trace output: " + path);
    }
    out_ = &file_;
}

void TraceWriter::write_record(const RunRecord& rec) {
    const json line = {
        {"t", rec.t}, {"y", rec.y}, {"y_hat", rec.y_hat}, {"cum_mse", rec.cum_mse}};
    *out_ << line.dump() << '\n';
    out_->flush();
}

void TraceWriter::write_summary(const json& summary) {
    const json line = {{"summary", summary}};
    *out_ << line.dump() << '\n';
    out_->flush();
}

Trace read_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open trace: " + path);
    }
    Trace trace;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw DataError(path + ": line " + std::to_string(line_no) + ": " + e.what());
        }
        if (obj.contains("summary")) {
            trace.summary = obj.at("summary");
            continue;
        }
        RunRecord rec;
        try {
            rec.t = obj.at("t").get<int>();
            rec.y = obj.at("y").get<double>();
            rec.y_hat = obj.at("y_hat").get<double>();
            rec.cum_mse = obj.at("cum_mse").get<double>();
        } catch (const json::exception& e) {
            throw DataError(path + ": line " + std::to_string(line_no) + ": " + e.what());
        }
        trace.records.push_back(rec);
    }
    return trace;
}

} // namespace hybridpf
