#include "shs/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace shs::io {

void ReportRow::metric(const std::string& name, std::optional<double> value) {
    if (value && !std::isfinite(*value)) value = std::nullopt;
    metrics.emplace_back(name, value);
}

void ReportRow::verdict(const std::string& name, bool pass) { verdicts.emplace_back(name, pass); }

bool ReportRow::all_pass() const {
    if (!error.empty()) return false;
    for (const auto& [name, ok] : verdicts)
        if (!ok) return false;
    return true;
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void ensure_directory(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create directory '" + dir + "': " + ec.message());
}

void write_report_csv(const std::vector<ReportRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "experiment,config_hash,name,kind,value\n";
    for (const auto& row : rows) {
        const std::string prefix = row.experiment_id + "," + std::to_string(row.config_hash) + ",";
        if (!row.error.empty()) {
            std::string msg = row.error;
            for (char& c : msg)
                if (c == ',' || c == '\n') c = ';';
            out << prefix << "error,error," << msg << "\n";
        }
        for (const auto& [name, value] : row.metrics)
            out << prefix << name << ",metric," << (value ? format_full(*value) : "none") << "\n";
        for (const auto& [name, ok] : row.verdicts)
            out << prefix << name << ",verdict," << (ok ? "pass" : "fail") << "\n";
    }
}

void write_report_json(const std::vector<ReportRow>& rows, const std::string& path) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json j;
        j["experiment"] = row.experiment_id;
        j["config_hash"] = row.config_hash;
        if (!row.error.empty()) j["error"] = row.error;
        for (const auto& [name, value] : row.metrics) {
            if (value)
                j["metrics"][name] = *value;
            else
                j["metrics"][name] = nullptr;
        }
        for (const auto& [name, ok] : row.verdicts) j["verdicts"][name] = ok;
        doc.push_back(j);
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << doc.dump(2) << "\n";
}

namespace {

void write_header(const Grid& g, const std::string& dir, std::uint64_t hash,
                  const std::string& kind, std::size_t snapshots,
                  const std::vector<std::pair<std::string, std::string>>& extra) {
    std::ofstream out(dir + "/header.txt");
    if (!out) throw std::runtime_error("cannot write '" + dir + "/header.txt'");
    out << "kind = " << kind << "\n";
    out << "dim = " << g.dim << "\n";
    out << "cells_x = " << g.nx << "\n";
    out << "cells_y = " << g.ny << "\n";
    out << "h = " << format_full(g.h) << "\n";
    out << "boundary = " << (g.boundary == Boundary::Neumann ? "neumann" : "periodic") << "\n";
    out << "snapshots = " << snapshots << "\n";
    out << "config_hash = " << hash << "\n";
    for (const auto& [k, v] : extra) out << k << " = " << v << "\n";
}

std::string snapshot_name(const std::string& dir, std::size_t idx) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "/snapshot_%06zu.csv", idx);
    return dir + buf;
}

}  // namespace

void write_trajectory(const sim::EpsTrajectory& traj, const std::string& dir,
                      std::uint64_t config_hash) {
    ensure_directory(dir);
    write_header(traj.grid, dir, config_hash, "eps", traj.snapshots.size(),
                 {{"epsilon", format_full(traj.params.epsilon)}});
    const Grid& g = traj.grid;
    for (std::size_t j = 0; j < traj.snapshots.size(); ++j) {
        std::ofstream out(snapshot_name(dir, j));
        if (!out) throw std::runtime_error("cannot write snapshot in '" + dir + "'");
        out << (g.dim == 1 ? "t,x,u,v\n" : "t,x,y,u,v\n");
        const auto& s = traj.snapshots[j];
        const std::string t = format_full(s.t);
        for (int iy = 0; iy < g.ny; ++iy) {
            for (int ix = 0; ix < g.nx; ++ix) {
                const std::size_t k = g.at(ix, iy);
                out << t << ',' << format_full(g.x(ix));
                if (g.dim == 2) out << ',' << format_full(g.y(iy));
                out << ',' << format_full(s.u[k]) << ',' << format_full(s.v[k]) << "\n";
            }
        }
    }
}

void write_trajectory(const limit::LimitTrajectory& traj, const std::string& dir,
                      std::uint64_t config_hash) {
    ensure_directory(dir);
    write_header(traj.grid, dir, config_hash, "limit", traj.snapshots.size(),
                 {{"outside_monotone_regime", traj.outside_monotone_regime ? "true" : "false"}});
    const Grid& g = traj.grid;
    for (std::size_t j = 0; j < traj.snapshots.size(); ++j) {
        std::ofstream out(snapshot_name(dir, j));
        if (!out) throw std::runtime_error("cannot write snapshot in '" + dir + "'");
        out << (g.dim == 1 ? "t,x,u,m,chi\n" : "t,x,y,u,m,chi\n");
        const auto& s = traj.snapshots[j];
        const std::string t = format_full(s.t);
        for (int iy = 0; iy < g.ny; ++iy) {
            for (int ix = 0; ix < g.nx; ++ix) {
                const std::size_t k = g.at(ix, iy);
                out << t << ',' << format_full(g.x(ix));
                if (g.dim == 2) out << ',' << format_full(g.y(iy));
                out << ',' << format_full(s.u[k]) << ',' << format_full(s.m[k]) << ','
                    << static_cast<int>(s.chi[k]) << "\n";
            }
        }
    }
}

void write_front_trace(const std::vector<double>& times, const std::vector<double>& positions,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "t,position\n";
    for (std::size_t i = 0; i < times.size(); ++i)
        out << format_full(times[i]) << ',' << format_full(positions[i]) << "\n";
}

}  // namespace shs::io
