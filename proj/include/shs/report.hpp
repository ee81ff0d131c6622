#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shs/hysteresis.hpp"
#include "shs/shs_sim.hpp"

namespace shs::io {

// One consolidated result row: named metrics (finite or explicitly absent)
// plus named pass/fail verdicts, keyed by the originating config hash.
struct ReportRow {
    std::string experiment_id;
    std::vector<std::pair<std::string, std::optional<double>>> metrics;
    std::vector<std::pair<std::string, bool>> verdicts;
    std::uint64_t config_hash = 0;
    std::string error;  // nonempty if the run failed

    void metric(const std::string& name, std::optional<double> value);
    void verdict(const std::string& name, bool pass);
    bool all_pass() const;
};

std::string format_full(double v);  // %.17g

void write_report_csv(const std::vector<ReportRow>& rows, const std::string& path);
void write_report_json(const std::vector<ReportRow>& rows, const std::string& path);

// Trajectory serialization: one header file plus per-snapshot flat tables,
// full double precision, comma separated, one row per cell in lexicographic
// cell order.
void write_trajectory(const sim::EpsTrajectory& traj, const std::string& dir,
                      std::uint64_t config_hash);
void write_trajectory(const limit::LimitTrajectory& traj, const std::string& dir,
                      std::uint64_t config_hash);

void write_front_trace(const std::vector<double>& times, const std::vector<double>& positions,
                       const std::string& path);

void ensure_directory(const std::string& dir);

}  // namespace shs::io
