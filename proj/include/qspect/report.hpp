#pragma once

#include <span>
#include <string>
#include <vector>

#include "qspect/evolution.hpp"
#include "qspect/state_vector.hpp"

namespace qspect {

/// One named engine run; sweeps and seed repeats carry several.
struct RunRecord {
    std::string name;
    SpectrumReport report;
};

/// CSV with header iter,tau,energy,delta_theta_norm,lambda,n_deflations,event
/// and floats printed to 17 significant digits.
std::string trajectory_csv(std::span<const TrajectoryRow> rows);

/// Human-readable report: status, discovered states, grouped levels, oracle
/// spectrum when present, config echo, warnings.
std::string report_text(std::span<const RunRecord> runs);

/// Machine-readable mirror of report_text (sorted keys, deterministic).
std::string report_json(std::span<const RunRecord> runs);

const char* method_name(Method m);
const char* deriv_name(DerivMode d);
const char* reset_name(ResetMode r);

/// Whole-file helpers; both throw IoError naming the path.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Binary statevector files: magic "QSPECTSV", little-endian u64 qubit
/// count, then interleaved re/im little-endian doubles.
void save_state(const std::string& path, const StateVector& state);
StateVector load_state(const std::string& path);

}  // namespace qspect
