#include "surv/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "surv/errors.hpp"

namespace surv {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_double(const std::string& cell, std::size_t row, const std::string& column) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw DataError("row " + std::to_string(row) + ", column '" + column +
                        "': cannot parse '" + cell + "' as a number");
    }
    return value;
}

void write_double(std::string& out, double v) {
    char buf[32];
    int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
    out.append(buf, static_cast<std::size_t>(len));
}

}  // namespace

RawEventLog load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw DataError("'" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    auto header = split_line(line);
    const std::vector<std::string> fixed = {"individual_id", "receive_ts", "open_ts"};
    for (std::size_t i = 0; i < fixed.size(); ++i) {
        if (i >= header.size()) {
            throw DataError("'" + path + "': missing column '" + fixed[i] + "'");
        }
        if (header[i] != fixed[i]) {
            throw DataError("'" + path + "': expected column '" + fixed[i] + "' at position " +
                            std::to_string(i) + ", found '" + header[i] + "'");
        }
    }

    RawEventLog log;
    log.feature_names.assign(header.begin() + 3, header.end());
    for (std::size_t i = 0; i < log.feature_names.size(); ++i) {
        for (std::size_t j = i + 1; j < log.feature_names.size(); ++j) {
            if (log.feature_names[i] == log.feature_names[j]) {
                throw DataError("'" + path + "': duplicate header column '" + log.feature_names[i] +
                                "'");
            }
        }
    }

    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (cells.size() != header.size()) {
            throw DataError("row " + std::to_string(row_no) + ": expected " +
                            std::to_string(header.size()) + " cells, found " +
                            std::to_string(cells.size()));
        }
        RawEventRow r;
        r.individual_id = cells[0];
        r.receive_ts = parse_double(cells[1], row_no, "receive_ts");
        if (!cells[2].empty()) {
            double open = parse_double(cells[2], row_no, "open_ts");
            if (open < r.receive_ts) {
                throw DataError("row " + std::to_string(row_no) + ": open_ts precedes receive_ts");
            }
            r.open_ts = open;
        }
        r.features.reserve(log.feature_names.size());
        for (std::size_t j = 3; j < cells.size(); ++j) {
            r.features.push_back(parse_double(cells[j], row_no, header[j]));
        }
        log.rows.push_back(std::move(r));
    }
    return log;
}

void save_csv(const RawEventLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");

    std::string line = "individual_id,receive_ts,open_ts";
    for (const auto& name : log.feature_names) {
        line += ',';
        line += name;
    }
    line += '\n';
    out << line;

    for (const RawEventRow& r : log.rows) {
        line.clear();
        line += r.individual_id;
        line += ',';
        write_double(line, r.receive_ts);
        line += ',';
        if (r.open_ts) write_double(line, *r.open_ts);
        for (double v : r.features) {
            line += ',';
            write_double(line, v);
        }
        line += '\n';
        out << line;
    }
    if (!out) throw DataError("write to '" + path + "' failed");
}

void save_curve_csv(const StepSurvivalCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "time,survival\n";
    std::string line;
    for (std::size_t i = 0; i < curve.times.size(); ++i) {
        line.clear();
        write_double(line, curve.times[i]);
        line += ',';
        write_double(line, curve.survival[i]);
        line += '\n';
        out << line;
    }
}

}  // namespace surv
