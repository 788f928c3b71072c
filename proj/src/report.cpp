#include "qspect/report.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <utility>

#include "json.hpp"
#include "qspect/errors.hpp"

namespace qspect {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string trajectory_csv(std::span<const TrajectoryRow> rows) {
    std::string out = "iter,tau,energy,delta_theta_norm,lambda,n_deflations,event\n";
    for (const TrajectoryRow& r : rows) {
        out += std::to_string(r.iter);
        out += ',';
        out += fmt17(r.tau);
        out += ',';
        out += fmt17(r.energy);
        out += ',';
        out += fmt17(r.delta_theta_norm);
        out += ',';
        out += fmt17(r.lambda);
        out += ',';
        out += std::to_string(r.n_deflations);
        out += ',';
        out += event_name(r.event);
        out += '\n';
    }
    return out;
}

const char* method_name(Method m) {
    return m == Method::Imaginary ? "imaginary" : "gradient";
}

const char* deriv_name(DerivMode d) {
    return d == DerivMode::FiniteDifference ? "fd" : "analytic";
}

const char* reset_name(ResetMode r) {
    return r == ResetMode::Rerandomize ? "rerandomize" : "reset";
}

namespace {

void append_config_text(std::string& out, const EngineConfig& c) {
    out += "  method: ";
    out += method_name(c.method);
    out += "\n  derivatives: ";
    out += deriv_name(c.deriv);
    out += "\n  dtau: " + fmt17(c.dtau);
    out += "\n  eta: " + fmt17(c.eta);
    out += "\n  fd_step: " + fmt17(c.fd_step);
    out += "\n  lambda: [" + fmt17(c.lambda_min) + ", " + fmt17(c.lambda_max) + "]";
    out += "\n  alpha: " + fmt17(c.alpha);
    out += "\n  convergence: |dtheta| < " + fmt17(c.conv_threshold) + " for " +
           std::to_string(c.conv_window) + " iterations";
    out += "\n  max_iterations: " + std::to_string(c.max_iterations);
    out += "\n  num_states: " + std::to_string(c.num_states);
    out += "\n  seed: " + std::to_string(c.seed);
    out += "\n  reset_mode: ";
    out += reset_name(c.reset_mode);
    out += "\n";
}

void append_report_text(std::string& out, const SpectrumReport& r) {
    out += "status: ";
    out += r.complete ? "complete" : "incomplete";
    out += "\nstates discovered: " + std::to_string(r.states.size()) + " of " +
           std::to_string(r.num_requested);
    out += "\ntotal steps: " + std::to_string(r.total_steps);
    out += "\n\ndiscovered states (discovery order):\n";
    out += "  idx  energy                  residual               steps\n";
    for (std::size_t i = 0; i < r.states.size(); ++i) {
        const ReportState& s = r.states[i];
        char buf[128];
        std::snprintf(buf, sizeof(buf), "  %-4zu %-23.17g %-22.17g %d\n", i, s.energy,
                      s.residual, s.iterations);
        out += buf;
    }
    out += "\nenergy levels (grouped within 5e-3):\n";
    for (const ReportLevel& l : r.levels) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "  %.17g (x%d)\n", l.energy, l.count);
        out += buf;
    }
    if (!r.oracle_energies.empty()) {
        out += "\noracle spectrum (exact diagonalization):\n ";
        for (const double e : r.oracle_energies) {
            out += ' ';
            out += fmt17(e);
        }
        out += "\n";
    }
    out += "\nconfig:\n";
    append_config_text(out, r.config);
    if (!r.warnings.empty()) {
        out += "\nwarnings:\n";
        for (const std::string& w : r.warnings) out += "  " + w + "\n";
    }
}

nlohmann::json config_json(const EngineConfig& c) {
    nlohmann::json j;
    j["method"] = method_name(c.method);
    j["derivatives"] = deriv_name(c.deriv);
    j["dtau"] = c.dtau;
    j["eta"] = c.eta;
    j["fd_step"] = c.fd_step;
    j["lambda_min"] = c.lambda_min;
    j["lambda_max"] = c.lambda_max;
    j["alpha"] = c.alpha;
    j["conv_threshold"] = c.conv_threshold;
    j["conv_window"] = c.conv_window;
    j["max_iterations"] = c.max_iterations;
    j["num_states"] = c.num_states;
    j["seed"] = c.seed;
    j["reset_mode"] = reset_name(c.reset_mode);
    return j;
}

nlohmann::json report_to_json(const SpectrumReport& r) {
    nlohmann::json j;
    j["complete"] = r.complete;
    j["num_requested"] = r.num_requested;
    j["total_steps"] = r.total_steps;
    j["states"] = nlohmann::json::array();
    for (const ReportState& s : r.states) {
        j["states"].push_back({{"energy", s.energy},
                               {"residual", s.residual},
                               {"iterations", s.iterations},
                               {"discovered_at", s.discovered_at}});
    }
    j["levels"] = nlohmann::json::array();
    for (const ReportLevel& l : r.levels) {
        j["levels"].push_back({{"energy", l.energy},
                               {"count", l.count},
                               {"max_residual", l.max_residual},
                               {"total_iterations", l.total_iterations}});
    }
    if (!r.oracle_energies.empty()) j["oracle_energies"] = r.oracle_energies;
    if (!r.warnings.empty()) j["warnings"] = r.warnings;
    j["config"] = config_json(r.config);
    return j;
}

}  // namespace

std::string report_text(std::span<const RunRecord> runs) {
    std::string out;
    for (const RunRecord& run : runs) {
        out += "== " + run.name + " ==\n";
        append_report_text(out, run.report);
        out += "\n";
    }
    return out;
}

std::string report_json(std::span<const RunRecord> runs) {
    nlohmann::json j;
    j["runs"] = nlohmann::json::array();
    for (const RunRecord& run : runs) {
        j["runs"].push_back({{"name", run.name}, {"report", report_to_json(run.report)}});
    }
    return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for reading");
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failure on " + path);
    return content;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failure on " + path);
}

namespace {

constexpr char kMagic[8] = {'Q', 'S', 'P', 'E', 'C', 'T', 'S', 'V'};

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

std::uint64_t get_u64(const std::string& in, std::size_t at) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
    }
    return v;
}

}  // namespace

void save_state(const std::string& path, const StateVector& state) {
    std::string out;
    out.reserve(16 + state.dim() * 16);
    out.append(kMagic, sizeof(kMagic));
    put_u64(out, static_cast<std::uint64_t>(state.num_qubits()));
    for (const cplx& a : state.amps()) {
        put_u64(out, std::bit_cast<std::uint64_t>(a.real()));
        put_u64(out, std::bit_cast<std::uint64_t>(a.imag()));
    }
    write_file(path, out);
}

StateVector load_state(const std::string& path) {
    const std::string in = read_file(path);
    if (in.size() < 16 || in.compare(0, sizeof(kMagic), kMagic, sizeof(kMagic)) != 0) {
        throw IoError(path + " is not a statevector file (bad magic)");
    }
    const std::uint64_t nq = get_u64(in, 8);
    if (nq < 1 || nq > StateVector::kMaxQubits) {
        throw IoError(path + " declares unsupported qubit count " + std::to_string(nq));
    }
    const std::uint64_t dim = std::uint64_t{1} << nq;
    if (in.size() != 16 + dim * 16) {
        throw IoError(path + " has truncated amplitude data");
    }
    std::vector<cplx> amps(dim);
    for (std::uint64_t k = 0; k < dim; ++k) {
        const double re = std::bit_cast<double>(get_u64(in, 16 + k * 16));
        const double im = std::bit_cast<double>(get_u64(in, 16 + k * 16 + 8));
        amps[k] = cplx{re, im};
    }
    return StateVector(static_cast<int>(nq), std::move(amps));
}

}  // namespace qspect
