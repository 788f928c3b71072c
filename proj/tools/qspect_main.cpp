#include "CLI11.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qspect/ansatz.hpp"
#include "qspect/errors.hpp"
#include "qspect/evolution.hpp"
#include "qspect/linalg.hpp"
#include "qspect/pauli.hpp"
#include "qspect/report.hpp"
#include "qspect/sat.hpp"
#include "qspect/state_vector.hpp"
#include "qspect/verify.hpp"

namespace {

using namespace qspect;
namespace fs = std::filesystem;

struct SolveOptions {
    std::vector<std::string> pauli_files;
    std::vector<std::string> cnf_files;
    std::string gen_spec;
    std::string ansatz = "compact";
    int params = 0;
    int params_per_qubit = 7;
    std::string method = "imaginary";
    std::string deriv = "fd";
    std::string reset_mode = "rerandomize";
    double dtau = 0.1;
    double eta = 0.1;
    double fd_step = 1e-5;
    double lambda_min = 1e-4;
    double lambda_max = 1e-2;
    double alpha = 10.0;
    double conv_threshold = 1e-2;
    int conv_window = 3;
    int max_iterations = 2000;
    int num_states = 1;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> seeds;
    bool oracle = false;
    std::string out_dir = ".";
    int jobs = 1;
    std::vector<std::string> prior_states;
};

struct DiagOptions {
    std::string pauli_file;
    std::string cnf_file;
    double tol = 5e-3;
};

struct GenOptions {
    int vars = 4;
    int clauses = 18;
    std::uint64_t seed = 0;
    std::string out;
};

PauliSumHamiltonian load_pauli_file(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return parse_pauli_sum(text);
    } catch (const ParseError& e) {
        throw IoError(path + ": " + e.what());
    }
}

PauliSumHamiltonian load_cnf_file(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return sat_to_hamiltonian(parse_cnf(text));
    } catch (const ParseError& e) {
        throw IoError(path + ": " + e.what());
    }
}

struct GenSpec {
    int vars = 0;
    int clauses = 0;
    std::uint64_t seed = 0;
};

GenSpec parse_gen_spec(const std::string& spec) {
    const auto first = spec.find(':');
    const auto second = spec.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos) {
        throw ConfigError("--gen3sat spec must be vars:clauses:seed, got '" + spec + "'");
    }
    try {
        GenSpec g;
        g.vars = std::stoi(spec.substr(0, first));
        g.clauses = std::stoi(spec.substr(first + 1, second - first - 1));
        g.seed = std::stoull(spec.substr(second + 1));
        return g;
    } catch (const std::exception&) {
        throw ConfigError("--gen3sat spec must be vars:clauses:seed, got '" + spec + "'");
    }
}

Ansatz make_ansatz(const SolveOptions& opt, int num_qubits) {
    if (opt.ansatz == "compact") {
        if (num_qubits < 2) {
            return build_rotation_chain(opt.params > 0 ? opt.params : opt.params_per_qubit);
        }
        return build_compact(num_qubits, opt.params_per_qubit);
    }
    if (opt.ansatz == "lowdepth") {
        if (num_qubits < 2) return build_rotation_chain(opt.params > 0 ? opt.params : 4);
        if (opt.params < 1) throw ConfigError("--ansatz lowdepth needs --params");
        return build_lowdepth(num_qubits, opt.params);
    }
    const std::string text = read_file(opt.ansatz);
    Ansatz ansatz = [&] {
        try {
            return parse_ansatz(text);
        } catch (const ParseError& e) {
            throw IoError(opt.ansatz + ": " + e.what());
        }
    }();
    if (ansatz.num_qubits != num_qubits) {
        throw ConfigError("ansatz file declares " + std::to_string(ansatz.num_qubits) +
                          " qubits, hamiltonian has " + std::to_string(num_qubits));
    }
    return ansatz;
}

EngineConfig make_engine_config(const SolveOptions& opt, std::uint64_t seed) {
    EngineConfig c;
    c.method = opt.method == "gradient" ? Method::Gradient : Method::Imaginary;
    c.deriv = opt.deriv == "analytic" ? DerivMode::Analytic : DerivMode::FiniteDifference;
    c.reset_mode = opt.reset_mode == "reset" ? ResetMode::Reset : ResetMode::Rerandomize;
    c.dtau = opt.dtau;
    c.eta = opt.eta;
    c.fd_step = opt.fd_step;
    c.lambda_min = opt.lambda_min;
    c.lambda_max = opt.lambda_max;
    c.alpha = opt.alpha;
    c.conv_threshold = opt.conv_threshold;
    c.conv_window = opt.conv_window;
    c.max_iterations = opt.max_iterations;
    c.num_states = opt.num_states;
    c.seed = seed;
    c.oracle = opt.oracle;
    return c;
}

std::string artifact_path(const std::string& out_dir, const std::string& file) {
    return (fs::path(out_dir) / file).string();
}

RunRecord execute_run(const std::string& name, const PauliSumHamiltonian& h,
                      const SolveOptions& opt, std::uint64_t seed,
                      const std::vector<StateVector>& priors) {
    const EngineConfig config = make_engine_config(opt, seed);
    SpectrumEngine engine(make_ansatz(opt, h.num_qubits()), h, config);
    for (const StateVector& s : priors) engine.add_prior_deflation(s, config.alpha);
    RunRecord record{name, engine.run()};

    write_file(artifact_path(opt.out_dir, name + ".trajectory.csv"),
               trajectory_csv(engine.trajectory()));
    const auto& deflations = engine.deflations();
    for (std::size_t k = 0; k < deflations.size(); ++k) {
        save_state(artifact_path(opt.out_dir, name + ".state" + std::to_string(k) + ".qsv"),
                   deflations[k].state);
    }
    return record;
}

int cmd_solve(const SolveOptions& opt) {
    if (opt.pauli_files.empty() && opt.cnf_files.empty() && opt.gen_spec.empty()) {
        throw ConfigError("solve needs a hamiltonian: --pauli, --cnf, or --gen3sat");
    }
    if (opt.jobs < 1) throw ConfigError("--jobs must be at least 1");

    std::vector<std::pair<std::string, PauliSumHamiltonian>> sources;
    for (const std::string& path : opt.pauli_files) {
        sources.emplace_back(fs::path(path).stem().string(), load_pauli_file(path));
    }
    for (const std::string& path : opt.cnf_files) {
        sources.emplace_back(fs::path(path).stem().string(), load_cnf_file(path));
    }
    if (!opt.gen_spec.empty()) {
        const GenSpec g = parse_gen_spec(opt.gen_spec);
        sources.emplace_back("gen" + std::to_string(g.vars) + "v" + std::to_string(g.clauses) +
                                 "c" + std::to_string(g.seed),
                             sat_to_hamiltonian(generate_unique_3sat(g.vars, g.clauses, g.seed)));
    }

    std::vector<StateVector> priors;
    for (const std::string& path : opt.prior_states) priors.push_back(load_state(path));
    if (static_cast<int>(priors.size()) >= opt.num_states) {
        throw ConfigError("--states must exceed the " + std::to_string(priors.size()) +
                          " prior state(s); it counts them toward the requested total");
    }

    const std::vector<std::uint64_t> seeds =
        opt.seeds.empty() ? std::vector<std::uint64_t>{opt.seed} : opt.seeds;

    struct Plan {
        std::string name;
        std::size_t source;
        std::uint64_t seed;
    };
    std::vector<Plan> plans;
    std::vector<std::string> used_names;
    for (std::size_t s = 0; s < sources.size(); ++s) {
        for (const std::uint64_t seed : seeds) {
            std::string name = sources[s].first + "-s" + std::to_string(seed);
            int suffix = 2;
            while (std::find(used_names.begin(), used_names.end(), name) != used_names.end()) {
                name = sources[s].first + "-s" + std::to_string(seed) + "-" +
                       std::to_string(suffix++);
            }
            used_names.push_back(name);
            plans.push_back({std::move(name), s, seed});
        }
    }

    if (opt.out_dir != ".") {
        std::error_code ec;
        fs::create_directories(opt.out_dir, ec);
        if (ec) throw IoError("cannot create output directory " + opt.out_dir);
    }

    std::vector<RunRecord> records(plans.size());
    std::vector<std::exception_ptr> failures(plans.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= plans.size()) return;
            try {
                records[i] = execute_run(plans[i].name, sources[plans[i].source].second, opt,
                                         plans[i].seed, priors);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    const int jobs = std::min<int>(opt.jobs, static_cast<int>(plans.size()));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    for (const std::exception_ptr& e : failures) {
        if (e) std::rethrow_exception(e);
    }

    const std::string text = report_text(records);
    write_file(artifact_path(opt.out_dir, "report.txt"), text);
    write_file(artifact_path(opt.out_dir, "report.json"), report_json(records));
    std::cout << text;

    const bool complete = std::all_of(records.begin(), records.end(),
                                      [](const RunRecord& r) { return r.report.complete; });
    return complete ? 0 : 2;
}

int cmd_diag(const DiagOptions& opt) {
    if (opt.pauli_file.empty() == opt.cnf_file.empty()) {
        throw ConfigError("diag needs exactly one of --pauli or --cnf");
    }
    const PauliSumHamiltonian h =
        opt.pauli_file.empty() ? load_cnf_file(opt.cnf_file) : load_pauli_file(opt.pauli_file);
    if (h.num_qubits() > 12) {
        throw CapacityError("diagonalization supports at most 12 qubits, got " +
                            std::to_string(h.num_qubits()));
    }
    const std::vector<double> eigenvalues = exact_eigenvalues(h);
    for (const DegenerateLevel& level : group_degeneracies(eigenvalues, opt.tol)) {
        std::printf("%g (x%d)\n", level.energy, level.count);
    }
    return 0;
}

int cmd_gen3sat(const GenOptions& opt) {
    const SatFormula f = generate_unique_3sat(opt.vars, opt.clauses, opt.seed);
    const std::string text = to_dimacs(f);
    if (opt.out.empty()) {
        std::cout << text;
    } else {
        write_file(opt.out, text);
        std::cout << "wrote " << opt.out << "\n";
    }
    return 0;
}

int cmd_verify(bool inject_v_sign_flip) {
    VerifyOptions options;
    options.flip_v_sign = inject_v_sign_flip;
    return run_verification(options, std::cout) == 0 ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"variational discovery of qubit Hamiltonian spectra"};
    app.require_subcommand(1);

    SolveOptions solve_opt;
    CLI::App* solve = app.add_subcommand("solve", "run the spectrum discovery loop");
    solve->add_option("--pauli", solve_opt.pauli_files,
                      "Pauli-sum hamiltonian file(s); several files form a sweep");
    solve->add_option("--cnf", solve_opt.cnf_files, "DIMACS 3SAT file(s), compiled to diagonal");
    solve->add_option("--gen3sat", solve_opt.gen_spec,
                      "generate a unique-solution 3SAT instance, spec vars:clauses:seed");
    solve->add_option("--ansatz", solve_opt.ansatz, "compact, lowdepth, or a circuit file")
        ->capture_default_str();
    solve->add_option("--params", solve_opt.params, "total parameter count (lowdepth)");
    solve->add_option("--params-per-qubit", solve_opt.params_per_qubit,
                      "parameters per qubit (compact)")
        ->capture_default_str();
    solve->add_option("--method", solve_opt.method, "evolution method")
        ->check(CLI::IsMember({"imaginary", "gradient"}))
        ->capture_default_str();
    solve->add_option("--deriv", solve_opt.deriv, "derivative mode")
        ->check(CLI::IsMember({"fd", "analytic"}))
        ->capture_default_str();
    solve->add_option("--reset-mode", solve_opt.reset_mode, "parameters after each deflation")
        ->check(CLI::IsMember({"rerandomize", "reset"}))
        ->capture_default_str();
    solve->add_option("--dtau", solve_opt.dtau, "imaginary-time step")->capture_default_str();
    solve->add_option("--eta", solve_opt.eta, "gradient-descent step")->capture_default_str();
    solve->add_option("--fd-step", solve_opt.fd_step, "finite-difference step")
        ->capture_default_str();
    solve->add_option("--lambda-min", solve_opt.lambda_min, "Tikhonov lower bound")
        ->capture_default_str();
    solve->add_option("--lambda-max", solve_opt.lambda_max, "Tikhonov upper bound")
        ->capture_default_str();
    solve->add_option("--alpha", solve_opt.alpha, "deflation energy shift")
        ->capture_default_str();
    solve->add_option("--conv-threshold", solve_opt.conv_threshold, "|dtheta| threshold")
        ->capture_default_str();
    solve->add_option("--conv-window", solve_opt.conv_window, "consecutive iterations required")
        ->capture_default_str();
    solve->add_option("--max-iters", solve_opt.max_iterations, "total update-step budget")
        ->capture_default_str();
    solve->add_option("--states", solve_opt.num_states,
                      "total eigenstates to record, counting --prior-state entries")
        ->capture_default_str();
    solve->add_option("--seed", solve_opt.seed, "rng seed")->capture_default_str();
    solve->add_option("--seeds", solve_opt.seeds, "comma-separated seed list for repeats")
        ->delimiter(',');
    solve->add_flag("--oracle", solve_opt.oracle, "attach exact spectrum (<= 12 qubits)");
    solve->add_option("--out", solve_opt.out_dir, "output directory")
        ->envname("QSPECT_OUTDIR")
        ->capture_default_str();
    solve->add_option("--jobs", solve_opt.jobs, "concurrent runs")->capture_default_str();
    solve->add_option("--prior-state", solve_opt.prior_states,
                      "recorded eigenstate file(s) to deflate before starting");

    DiagOptions diag_opt;
    CLI::App* diag = app.add_subcommand("diag", "print the exact spectrum");
    diag->add_option("--pauli", diag_opt.pauli_file, "Pauli-sum hamiltonian file");
    diag->add_option("--cnf", diag_opt.cnf_file, "DIMACS 3SAT file");
    diag->add_option("--tol", diag_opt.tol, "degeneracy grouping tolerance")
        ->capture_default_str();

    GenOptions gen_opt;
    CLI::App* gen = app.add_subcommand("gen3sat", "generate a unique-solution 3SAT instance");
    gen->add_option("--vars", gen_opt.vars, "variable count (3..20)")->capture_default_str();
    gen->add_option("--clauses", gen_opt.clauses, "clause count")->capture_default_str();
    gen->add_option("--seed", gen_opt.seed, "rng seed")->capture_default_str();
    gen->add_option("--out", gen_opt.out, "output file (stdout when omitted)");

    bool inject_v_sign_flip = false;
    CLI::App* verify = app.add_subcommand("verify", "run the fast invariant suite");
    verify->add_flag("--inject-v-sign-flip", inject_v_sign_flip,
                     "negate V inside the engine (must make monotonicity fail)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve->parsed()) return cmd_solve(solve_opt);
        if (diag->parsed()) return cmd_diag(diag_opt);
        if (gen->parsed()) return cmd_gen3sat(gen_opt);
        if (verify->parsed()) return cmd_verify(inject_v_sign_flip);
        return 0;
    } catch (const CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
