#pragma once

#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "uavplan/errors.hpp"
#include "uavplan/solver.hpp"
#include "uavplan/version.hpp"

namespace uavplan {

/// A solve report bound to the configuration that produced it. Serializes to
/// a fixed-arity delimited text table and parses back without loss; costs are
/// carried both as exact fixed-point integers and as doubles.
struct SolveReportRecord {
    SolveReport report;
    std::string config_hash;
    std::string artifact_version = kArtifactVersion;
    std::string timestamp; // empty unless stamping was requested
    std::uint64_t seed = 0;
    std::int64_t scenario_count = 0;
};

namespace repdetail {

inline std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void row(std::ostream& out, const std::string& record, const std::string& key,
                const std::string& a, const std::string& b, const std::string& value) {
    out << record << ',' << key << ',' << a << ',' << b << ',' << value << "\n";
}

} // namespace repdetail

inline void write_report_record(const SolveReportRecord& rec, std::ostream& out) {
    using repdetail::fmt_double;
    using repdetail::row;
    const SolveReport& r = rec.report;
    out << "# solve report\n";
    out << "record,key,a,b,value\n";
    row(out, "meta", "artifact_version", "", "", rec.artifact_version);
    row(out, "meta", "config_hash", "", "", rec.config_hash);
    row(out, "meta", "method", "", "", method_name(r.method));
    row(out, "meta", "seed", "", "", std::to_string(rec.seed));
    if (!rec.timestamp.empty()) row(out, "meta", "timestamp", "", "", rec.timestamp);
    row(out, "dims", "uav_count", "", "", std::to_string(r.allocation.local.size()));
    row(out, "dims", "bs_count", "", "",
        std::to_string(r.allocation.offload.empty() ? 0 : r.allocation.offload[0].size()));
    row(out, "dims", "scenario_count", "", "", std::to_string(rec.scenario_count));
    row(out, "dims", "fixed_point_scale", "", "", std::to_string(r.fixed_point_scale));
    row(out, "cost", "stage1_fp", "", "", std::to_string(r.stage1_fp));
    row(out, "cost", "recourse_fp", "", "", std::to_string(r.recourse_fp));
    row(out, "cost", "total_fp", "", "", std::to_string(r.total_fp));
    row(out, "cost", "stage1", "", "", fmt_double(r.stage1_cost));
    row(out, "cost", "expected_recourse", "", "", fmt_double(r.expected_recourse_cost));
    row(out, "cost", "total", "", "", fmt_double(r.total_cost));
    row(out, "solver", "nodes_explored", "", "", std::to_string(r.nodes_explored));
    for (std::size_t y = 0; y < r.allocation.local.size(); ++y) {
        row(out, "alloc", "local", std::to_string(y), "", std::to_string(r.allocation.local[y]));
        for (std::size_t f = 0; f < r.allocation.offload[y].size(); ++f) {
            row(out, "alloc", "offload", std::to_string(y), std::to_string(f),
                std::to_string(r.allocation.offload[y][f]));
        }
        for (std::size_t w = 0; w < r.allocation.recourse[y].size(); ++w) {
            if (r.allocation.recourse[y][w] != 0) {
                row(out, "alloc", "recourse", std::to_string(y), std::to_string(w),
                    std::to_string(r.allocation.recourse[y][w]));
            }
        }
    }
    for (std::size_t y = 0; y < r.per_uav.size(); ++y) {
        const UavBreakdown& u = r.per_uav[y];
        row(out, "uav", "local_copies", std::to_string(y), "", std::to_string(u.local_copies));
        row(out, "uav", "offload_copies", std::to_string(y), "", std::to_string(u.offload_copies));
        row(out, "uav", "stage1_fp", std::to_string(y), "", std::to_string(u.stage1_fp));
        row(out, "uav", "recourse_fp", std::to_string(y), "", std::to_string(u.recourse_fp));
    }
}

inline SolveReportRecord read_report_record(std::istream& in) {
    SolveReportRecord rec;
    SolveReport& r = rec.report;
    std::string line;
    bool header_seen = false;
    std::int64_t uav_count = 0, bs_count = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != "record,key,a,b,value") {
                throw Error(Errc::parse, "unexpected report header: " + line);
            }
            header_seen = true;
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) f.push_back(field);
        while (f.size() < 5) f.push_back("");
        const std::string& record = f[0];
        const std::string& key = f[1];
        const std::string& value = f[4];
        auto a_idx = [&]() { return static_cast<std::size_t>(std::stoll(f[2])); };
        auto b_idx = [&]() { return static_cast<std::size_t>(std::stoll(f[3])); };
        if (record == "meta") {
            if (key == "artifact_version") rec.artifact_version = value;
            else if (key == "config_hash") rec.config_hash = value;
            else if (key == "seed") rec.seed = std::stoull(value);
            else if (key == "timestamp") rec.timestamp = value;
            else if (key == "method") {
                for (Method m : {Method::dip, Method::sip, Method::evf, Method::oracle, Method::eval}) {
                    if (value == method_name(m)) r.method = m;
                }
            }
        } else if (record == "dims") {
            if (key == "uav_count") {
                uav_count = std::stoll(value);
                r.allocation.local.assign(static_cast<std::size_t>(uav_count), 0);
                r.per_uav.resize(static_cast<std::size_t>(uav_count));
            } else if (key == "bs_count") {
                bs_count = std::stoll(value);
                r.allocation.offload.assign(static_cast<std::size_t>(uav_count),
                                            std::vector<std::int64_t>(static_cast<std::size_t>(bs_count), 0));
            } else if (key == "scenario_count") {
                rec.scenario_count = std::stoll(value);
                r.allocation.recourse.assign(
                    static_cast<std::size_t>(uav_count),
                    std::vector<std::int64_t>(static_cast<std::size_t>(rec.scenario_count), 0));
            } else if (key == "fixed_point_scale") {
                r.fixed_point_scale = std::stoll(value);
            }
        } else if (record == "cost") {
            if (key == "stage1_fp") r.stage1_fp = std::stoll(value);
            else if (key == "recourse_fp") r.recourse_fp = std::stoll(value);
            else if (key == "total_fp") r.total_fp = std::stoll(value);
            else if (key == "stage1") r.stage1_cost = std::stod(value);
            else if (key == "expected_recourse") r.expected_recourse_cost = std::stod(value);
            else if (key == "total") r.total_cost = std::stod(value);
        } else if (record == "solver") {
            if (key == "nodes_explored") r.nodes_explored = std::stoull(value);
        } else if (record == "alloc") {
            if (key == "local") r.allocation.local.at(a_idx()) = std::stoll(value);
            else if (key == "offload") r.allocation.offload.at(a_idx()).at(b_idx()) = std::stoll(value);
            else if (key == "recourse") r.allocation.recourse.at(a_idx()).at(b_idx()) = std::stoll(value);
        } else if (record == "uav") {
            UavBreakdown& u = r.per_uav.at(a_idx());
            if (key == "local_copies") u.local_copies = std::stoll(value);
            else if (key == "offload_copies") u.offload_copies = std::stoll(value);
            else if (key == "stage1_fp") u.stage1_fp = std::stoll(value);
            else if (key == "recourse_fp") u.recourse_fp = std::stoll(value);
        } else {
            throw Error(Errc::parse, "unknown report record type: " + record);
        }
    }
    if (!header_seen) throw Error(Errc::parse, "missing report header");
    return rec;
}

/// Human-readable allocation table and cost breakdown.
inline std::string summary_text(const SolveReportRecord& rec) {
    using repdetail::fmt_double;
    const SolveReport& r = rec.report;
    std::ostringstream out;
    out << "method: " << method_name(r.method) << "\n";
    out << "config_hash: " << rec.config_hash << "\n";
    out << "stage1 cost:            " << fmt_double(r.stage1_cost) << "\n";
    out << "expected recourse cost: " << fmt_double(r.expected_recourse_cost) << "\n";
    out << "total cost:             " << fmt_double(r.total_cost) << "\n";
    out << "nodes explored: " << r.nodes_explored << "\n";
    const double scale = static_cast<double>(r.fixed_point_scale);
    out << "uav  local  offload  per-bs  stage1-cost  recourse-cost\n";
    for (std::size_t y = 0; y < r.allocation.local.size(); ++y) {
        out << "  " << y << "    " << r.allocation.local[y] << "      "
            << r.allocation.offload_total(y) << "      [";
        for (std::size_t f = 0; f < r.allocation.offload[y].size(); ++f) {
            out << (f ? " " : "") << r.allocation.offload[y][f];
        }
        out << "]  ";
        if (y < r.per_uav.size()) {
            out << fmt_double(static_cast<double>(r.per_uav[y].stage1_fp) / scale) << "  "
                << fmt_double(static_cast<double>(r.per_uav[y].recourse_fp) / scale);
        }
        out << "\n";
    }
    return out.str();
}

} // namespace uavplan
