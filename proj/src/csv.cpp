#include "csv.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "format.hpp"

namespace eadam {

namespace {

void check_id(const std::string& id, const char* what) {
    if (id.empty() || id.find_first_of(",\n\r") != std::string::npos) {
        throw Error(errc::invalid_argument,
                    std::string(what) + " must be non-empty and free of commas/newlines");
    }
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

void emit_csv(const std::vector<TrajectoryRecord>& records, const std::filesystem::path& path) {
    if (records.empty()) {
        throw Error(errc::invalid_argument, "emit_csv: no records");
    }
    for (const TrajectoryRecord& r : records) {
        check_id(r.run_id, "run_id");
        check_id(r.optimizer, "optimizer");
    }
    std::vector<const TrajectoryRecord*> sorted;
    sorted.reserve(records.size());
    for (const TrajectoryRecord& r : records) sorted.push_back(&r);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const TrajectoryRecord* a, const TrajectoryRecord* b) {
                         if (a->run_id != b->run_id) return a->run_id < b->run_id;
                         return a->step < b->step;
                     });

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(errc::io, "cannot open " + path.string() + " for writing");
    }
    out << kTrajectoryHeader << '\n';
    for (const TrajectoryRecord* r : sorted) {
        out << r->run_id << ',' << r->optimizer << ',' << r->seed << ',' << r->step << ','
            << format_double(r->lr) << ',' << format_double(r->loss) << ','
            << format_double(r->grad_norm) << ',' << format_double(r->param_norm) << ','
            << format_double(r->eff_step_mean) << ',' << format_double(r->eff_step_max) << '\n';
    }
    if (!out.flush()) {
        throw Error(errc::io, "write failure on " + path.string());
    }
}

std::vector<TrajectoryRecord> parse_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(errc::io, "cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(errc::parse, path.string() + ": empty file");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kTrajectoryHeader) {
        throw Error(errc::parse, path.string() + ": unexpected header '" + line + "'");
    }
    std::vector<TrajectoryRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> f = split_fields(line);
        if (f.size() != 10) {
            throw Error(errc::parse, path.string() + ":" + std::to_string(line_no) +
                                         ": expected 10 fields, got " + std::to_string(f.size()));
        }
        TrajectoryRecord r;
        r.run_id = f[0];
        r.optimizer = f[1];
        const auto seed = parse_int(f[2]);
        const auto step = parse_int(f[3]);
        const auto lr = parse_double(f[4]);
        const auto loss = parse_double(f[5]);
        const auto grad_norm = parse_double(f[6]);
        const auto param_norm = parse_double(f[7]);
        const auto eff_mean = parse_double(f[8]);
        const auto eff_max = parse_double(f[9]);
        if (!seed || !step || seed.value() < 0 || step.value() < 0 || !lr || !loss ||
            !grad_norm || !param_norm || !eff_mean || !eff_max) {
            throw Error(errc::parse,
                        path.string() + ":" + std::to_string(line_no) + ": malformed row");
        }
        r.seed = static_cast<std::uint64_t>(seed.value());
        r.step = static_cast<std::uint64_t>(step.value());
        r.lr = lr.value();
        r.loss = loss.value();
        r.grad_norm = grad_norm.value();
        r.param_norm = param_norm.value();
        r.eff_step_mean = eff_mean.value();
        r.eff_step_max = eff_max.value();
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace eadam
