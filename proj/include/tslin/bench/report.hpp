#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tslin/core/errors.hpp"

namespace tslin {

/// One (dataset, model, L, T, seed) cell of the results table.
struct ReportRow {
    std::string dataset;
    std::string model;
    std::size_t lookback = 0;
    std::size_t horizon = 0;
    std::uint64_t seed = 0;
    double mse = 0.0;
    double mae = 0.0;
    double epoch_seconds = 0.0; // mean post-warmup training seconds per epoch
    double infer_ms = 0.0;      // test-set forward wall time per sample
    std::size_t epochs_run = 0;
    std::string status = "ok"; // ok | skipped | error
    std::string message;
};

enum class ReportFormat { Csv, Markdown, JsonLines };

inline ReportFormat report_format_from_name(const std::string& name) {
    if (name == "csv") return ReportFormat::Csv;
    if (name == "markdown" || name == "md") return ReportFormat::Markdown;
    if (name == "jsonl" || name == "json-lines") return ReportFormat::JsonLines;
    throw ConfigError("unknown report format: " + name);
}

namespace detail {

inline std::string fmt_g12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// Ranks of the best and second-best MSE among the "ok" rows of one
/// (dataset, horizon) group; mirrors the bold/underline table convention
/// (markdown: bold best, italic second-best).
inline void best_marks(const std::vector<ReportRow>& rows, std::vector<int>& mark) {
    mark.assign(rows.size(), 0);
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].status != "ok") continue;
        groups[rows[i].dataset + "#" + std::to_string(rows[i].horizon)].push_back(i);
    }
    for (auto& [key, idx] : groups) {
        std::stable_sort(idx.begin(), idx.end(), [&rows](std::size_t a, std::size_t b) {
            return rows[a].mse < rows[b].mse;
        });
        if (!idx.empty()) mark[idx[0]] = 1;
        if (idx.size() > 1) mark[idx[1]] = 2;
    }
}

} // namespace detail

inline const char* kReportHeader =
    "dataset,model,L,T,seed,mse,mae,epoch_s,infer_ms,epochs,status,message";

inline std::string render_report_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream os;
    os << kReportHeader << '\n';
    for (const auto& r : rows) {
        os << r.dataset << ',' << r.model << ',' << r.lookback << ',' << r.horizon << ','
           << r.seed << ',' << detail::fmt_g12(r.mse) << ',' << detail::fmt_g12(r.mae) << ','
           << detail::fmt_g12(r.epoch_seconds) << ',' << detail::fmt_g12(r.infer_ms) << ','
           << r.epochs_run << ',' << r.status << ',' << r.message << '\n';
    }
    return os.str();
}

inline std::string render_report_markdown(const std::vector<ReportRow>& rows) {
    std::vector<int> mark;
    detail::best_marks(rows, mark);
    std::ostringstream os;
    os << "| dataset | model | L | T | seed | mse | mae | epoch_s | infer_ms | epochs | "
          "status |\n";
    os << "|---|---|---|---|---|---|---|---|---|---|---|\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        std::string mse_cell = detail::fmt_g12(r.mse);
        if (mark[i] == 1) mse_cell = "**" + mse_cell + "**";
        if (mark[i] == 2) mse_cell = "_" + mse_cell + "_";
        os << "| " << r.dataset << " | " << r.model << " | " << r.lookback << " | "
           << r.horizon << " | " << r.seed << " | " << mse_cell << " | "
           << detail::fmt_g12(r.mae) << " | " << detail::fmt_g12(r.epoch_seconds) << " | "
           << detail::fmt_g12(r.infer_ms) << " | " << r.epochs_run << " | " << r.status
           << " |\n";
    }
    return os.str();
}

inline std::string render_report_jsonl(const std::vector<ReportRow>& rows) {
    std::ostringstream os;
    for (const auto& r : rows) {
        nlohmann::json j;
        j["dataset"] = r.dataset;
        j["model"] = r.model;
        j["L"] = r.lookback;
        j["T"] = r.horizon;
        j["seed"] = r.seed;
        j["mse"] = r.mse;
        j["mae"] = r.mae;
        j["epoch_s"] = r.epoch_seconds;
        j["infer_ms"] = r.infer_ms;
        j["epochs"] = r.epochs_run;
        j["status"] = r.status;
        j["message"] = r.message;
        os << j.dump() << '\n';
    }
    return os.str();
}

inline std::string render_report(const std::vector<ReportRow>& rows, ReportFormat format) {
    switch (format) {
        case ReportFormat::Csv: return render_report_csv(rows);
        case ReportFormat::Markdown: return render_report_markdown(rows);
        case ReportFormat::JsonLines: return render_report_jsonl(rows);
    }
    throw ConfigError("emit_report: unknown format");
}

inline void emit_report(const std::vector<ReportRow>& rows, ReportFormat format,
                        const std::string& path) {
    if (rows.empty()) throw ConfigError("emit_report: no rows to write");
    std::ofstream os(path);
    if (!os) throw IoError("emit_report: cannot open " + path + " for writing");
    os << render_report(rows, format);
    if (!os) throw IoError("emit_report: write failed for " + path);
}

inline std::vector<ReportRow> parse_report_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw DataError("parse_report_csv: empty input");
    std::vector<ReportRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        // message is the last cell and may contain no commas by construction
        while (cells.size() < 11) {
            const std::size_t pos = line.find(',', start);
            if (pos == std::string::npos) break;
            cells.push_back(line.substr(start, pos - start));
            start = pos + 1;
        }
        cells.push_back(line.substr(start));
        if (cells.size() != 12) {
            throw DataError("parse_report_csv: malformed row '" + line + "'");
        }
        ReportRow r;
        r.dataset = cells[0];
        r.model = cells[1];
        r.lookback = std::stoull(cells[2]);
        r.horizon = std::stoull(cells[3]);
        r.seed = std::stoull(cells[4]);
        r.mse = std::stod(cells[5]);
        r.mae = std::stod(cells[6]);
        r.epoch_seconds = std::stod(cells[7]);
        r.infer_ms = std::stod(cells[8]);
        r.epochs_run = std::stoull(cells[9]);
        r.status = cells[10];
        r.message = cells[11];
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::vector<ReportRow> parse_report_csv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("parse_report_csv: cannot open " + path);
    return parse_report_csv(is);
}

} // namespace tslin
