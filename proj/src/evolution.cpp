#include "qspect/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "qspect/errors.hpp"

namespace qspect {

const char* event_name(TrajectoryEvent e) {
    switch (e) {
        case TrajectoryEvent::Step: return "step";
        case TrajectoryEvent::Converged: return "converged";
        case TrajectoryEvent::Deflated: return "deflated";
        case TrajectoryEvent::Rerandomized: return "rerandomized";
    }
    return "?";
}

RealMatrix assemble_M(std::span<const DerivativeVector> derivs) {
    const int p = static_cast<int>(derivs.size());
    RealMatrix m(p, p);
    for (int i = 0; i < p; ++i) {
        if (derivs[static_cast<std::size_t>(i)].components.size() !=
            derivs[0].components.size()) {
            throw ValidationError("derivative vectors have mismatched dimensions");
        }
    }
    for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
            const double value = kernels::inner(derivs[static_cast<std::size_t>(i)].components,
                                                derivs[static_cast<std::size_t>(j)].components)
                                     .real();
            m(i, j) = value;
            m(j, i) = value;
        }
    }
    return m;
}

std::vector<double> assemble_V(std::span<const DerivativeVector> derivs, const StateVector& phi,
                               const PauliSumHamiltonian& h,
                               std::span<const DeflationEntry> deflations) {
    const std::size_t dim = phi.dim();
    for (const DerivativeVector& d : derivs) {
        if (d.components.size() != dim) {
            throw ValidationError("derivative vector dimension does not match the state");
        }
    }
    const std::vector<cplx> h_phi = h.apply(phi);
    // <e_j|phi> is shared by every component of V.
    std::vector<cplx> overlaps;
    overlaps.reserve(deflations.size());
    for (const DeflationEntry& e : deflations) {
        if (e.state.num_qubits() != phi.num_qubits()) {
            throw ValidationError("deflation entry has wrong qubit count");
        }
        overlaps.push_back(inner_product(e.state, phi));
    }

    std::vector<double> v(derivs.size());
    for (std::size_t i = 0; i < derivs.size(); ++i) {
        double value = -kernels::inner(derivs[i].components, h_phi).real();
        for (std::size_t j = 0; j < deflations.size(); ++j) {
            const cplx d_e = kernels::inner(derivs[i].components, deflations[j].state.amps());
            value -= deflations[j].alpha * (d_e * overlaps[j]).real();
        }
        v[i] = value;
    }
    return v;
}

double overlap_penalty_grad_fd(const Ansatz& ansatz, std::span<const double> theta, int param,
                               const StateVector& target, double dtheta) {
    if (!(dtheta > 0.0)) throw ValidationError("overlap gradient step must be positive");
    std::vector<double> shifted(theta.begin(), theta.end());
    const StateVector base = evaluate(ansatz, shifted);
    shifted[static_cast<std::size_t>(param)] += dtheta;
    const StateVector moved = evaluate(ansatz, shifted);
    const double f0 = std::norm(inner_product(base, target));
    const double f1 = std::norm(inner_product(moved, target));
    return 0.5 * (f1 - f0) / dtheta;
}

std::vector<double> tikhonov_solve(const RealMatrix& m, std::span<const double> v,
                                   double lambda) {
    const int p = m.rows;
    if (m.cols != p || static_cast<int>(v.size()) != p) {
        throw ValidationError("tikhonov system dimensions do not match");
    }
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw NumericError("tikhonov lambda must be finite and nonnegative");
    }
    for (const double x : m.a) {
        if (!std::isfinite(x)) throw NumericError("tikhonov matrix has non-finite entries");
    }
    for (const double x : v) {
        if (!std::isfinite(x)) throw NumericError("tikhonov rhs has non-finite entries");
    }

    RealMatrix a(p, p);
    for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
            double s = 0.0;
            for (int k = 0; k < p; ++k) s += m(k, i) * m(k, j);
            a(i, j) = s;
            a(j, i) = s;
        }
        a(i, i) += lambda;
    }
    std::vector<double> b(static_cast<std::size_t>(p), 0.0);
    for (int i = 0; i < p; ++i) {
        double s = 0.0;
        for (int k = 0; k < p; ++k) s += m(k, i) * v[static_cast<std::size_t>(k)];
        b[static_cast<std::size_t>(i)] = s;
    }
    return solve_spd(std::move(a), std::move(b));
}

namespace {

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (const double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

double select_lambda(const RealMatrix& m, std::span<const double> v, double lambda_lo,
                     double lambda_hi) {
    if (!(lambda_lo > 0.0) || !(lambda_hi >= lambda_lo)) {
        throw ValidationError("lambda bounds must satisfy 0 < lo <= hi");
    }
    if (norm2(v) < 1e-300) return lambda_lo;

    const double candidates[3] = {lambda_lo, std::sqrt(lambda_lo * lambda_hi), lambda_hi};
    double log_res[3];
    double log_sol[3];
    for (int c = 0; c < 3; ++c) {
        const std::vector<double> x = tikhonov_solve(m, v, candidates[c]);
        std::vector<double> r(v.begin(), v.end());
        for (int i = 0; i < m.rows; ++i) {
            double s = 0.0;
            for (int j = 0; j < m.cols; ++j) s += m(i, j) * x[static_cast<std::size_t>(j)];
            r[static_cast<std::size_t>(i)] -= s;
        }
        log_res[c] = std::log(std::max(norm2(r), 1e-300));
        log_sol[c] = std::log(std::max(norm2(x), 1e-300));
    }
    // The corner is the candidate closest to the utopia point (the unattained
    // simultaneous minimum of both axes); ties go to the smaller lambda.
    const double best_res = *std::min_element(log_res, log_res + 3);
    const double best_sol = *std::min_element(log_sol, log_sol + 3);
    int pick = 0;
    double best = 0.0;
    for (int c = 0; c < 3; ++c) {
        const double dr = log_res[c] - best_res;
        const double ds = log_sol[c] - best_sol;
        const double dist = dr * dr + ds * ds;
        if (c == 0 || dist < best) {
            best = dist;
            pick = c;
        }
    }
    return std::clamp(candidates[pick], lambda_lo, lambda_hi);
}

bool detect_convergence(std::span<const double> delta_history, double threshold, int window) {
    if (window < 1) throw ValidationError("convergence window must be at least 1");
    if (static_cast<int>(delta_history.size()) < window) return false;
    for (std::size_t i = delta_history.size() - static_cast<std::size_t>(window);
         i < delta_history.size(); ++i) {
        if (!(delta_history[i] < threshold)) return false;
    }
    return true;
}

SpectrumEngine::SpectrumEngine(Ansatz ansatz, PauliSumHamiltonian hamiltonian,
                               EngineConfig config)
    : ansatz_(std::move(ansatz)),
      hamiltonian_(std::move(hamiltonian)),
      config_(config),
      rng_(config.seed) {
    validate(ansatz_);
    if (ansatz_.num_qubits != hamiltonian_.num_qubits()) {
        throw ValidationError("ansatz has " + std::to_string(ansatz_.num_qubits) +
                              " qubits, hamiltonian has " +
                              std::to_string(hamiltonian_.num_qubits()));
    }
    if (!(config_.dtau > 0.0)) throw ConfigError("dtau must be positive");
    if (!(config_.eta > 0.0)) throw ConfigError("eta must be positive");
    if (!(config_.fd_step > 0.0)) throw ConfigError("fd step must be positive");
    if (!(config_.alpha >= 0.0)) throw ConfigError("alpha must be nonnegative");
    if (!(config_.lambda_min > 0.0) || !(config_.lambda_max >= config_.lambda_min)) {
        throw ConfigError("lambda bounds must satisfy 0 < min <= max");
    }
    if (config_.conv_window < 1) throw ConfigError("convergence window must be at least 1");
    if (config_.num_states < 1) throw ConfigError("must request at least one state");
    if (config_.max_iterations < 1) throw ConfigError("iteration budget must be positive");

    theta0_.resize(static_cast<std::size_t>(ansatz_.num_params));
    for (double& t : theta0_) t = rng_.angle();
    state_.theta = theta0_;
    state_.energy = hamiltonian_.expectation(current_state());
}

StateVector SpectrumEngine::current_state() const { return evaluate(ansatz_, state_.theta); }

std::vector<DerivativeVector> SpectrumEngine::all_derivatives() const {
    std::vector<DerivativeVector> derivs;
    derivs.reserve(static_cast<std::size_t>(ansatz_.num_params));
    for (int p = 0; p < ansatz_.num_params; ++p) {
        derivs.push_back(config_.deriv == DerivMode::FiniteDifference
                             ? derivative_fd(ansatz_, state_.theta, p, config_.fd_step)
                             : derivative_analytic(ansatz_, state_.theta, p));
    }
    return derivs;
}

void SpectrumEngine::set_theta(std::vector<double> theta) {
    if (static_cast<int>(theta.size()) != ansatz_.num_params) {
        throw ValidationError("theta length does not match ansatz parameter count");
    }
    state_.theta = std::move(theta);
    state_.energy = hamiltonian_.expectation(current_state());
}

void SpectrumEngine::add_prior_deflation(StateVector state, double alpha) {
    if (state.num_qubits() != hamiltonian_.num_qubits()) {
        throw ValidationError("prior state has " + std::to_string(state.num_qubits()) +
                              " qubits, hamiltonian has " +
                              std::to_string(hamiltonian_.num_qubits()));
    }
    if (!(alpha >= 0.0)) throw ConfigError("alpha must be nonnegative");
    state.normalize();
    const double energy = hamiltonian_.expectation(state);
    std::vector<cplx> r = hamiltonian_.apply(state);
    kernels::axpy(r, cplx{-energy, 0.0}, state.amps());
    const double residual = std::sqrt(kernels::norm_sq(r));
    deflations_.push_back({std::move(state), alpha, energy, 0, residual, 0});
}

double SpectrumEngine::effective_energy() const {
    const StateVector phi = current_state();
    double e = hamiltonian_.expectation(phi);
    for (const DeflationEntry& d : deflations_) {
        e += d.alpha * std::norm(inner_product(d.state, phi));
    }
    return e;
}

double SpectrumEngine::residual() const {
    const StateVector phi = current_state();
    const double e = hamiltonian_.expectation(phi);
    std::vector<cplx> r = hamiltonian_.apply(phi);
    kernels::axpy(r, cplx{-e, 0.0}, phi.amps());
    return std::sqrt(kernels::norm_sq(r));
}

void SpectrumEngine::step() {
    const std::vector<DerivativeVector> derivs = all_derivatives();
    const StateVector phi = current_state();
    std::vector<double> v = assemble_V(derivs, phi, hamiltonian_, deflations_);
    if (config_.flip_v_sign) {
        for (double& x : v) x = -x;
    }

    std::vector<double> update;
    double lambda = 0.0;
    double step_size = 0.0;
    if (config_.method == Method::Imaginary) {
        const RealMatrix m = assemble_M(derivs);
        lambda = select_lambda(m, v, config_.lambda_min, config_.lambda_max);
        update = tikhonov_solve(m, v, lambda);
        step_size = config_.dtau;
        if (norm2(update) < 1e-12 && norm2(v) > 1e-10) {
            warnings_.push_back("stalled evolution at step " + std::to_string(steps_used_) +
                                ": |theta_dot| < 1e-12 with nonzero V");
        }
    } else {
        update = std::move(v);
        step_size = config_.eta;
    }

    for (std::size_t i = 0; i < update.size(); ++i) {
        state_.theta[i] += step_size * update[i];
    }
    state_.tau += step_size;
    state_.last_delta_norm = step_size * norm2(update);
    state_.last_lambda = lambda;
    state_.energy = hamiltonian_.expectation(current_state());
    ++steps_used_;
    ++phase_steps_;
    delta_history_.push_back(state_.last_delta_norm);
}

void SpectrumEngine::restart_phase() {
    if (config_.reset_mode == ResetMode::Reset) {
        state_.theta = theta0_;
    } else {
        for (double& t : state_.theta) t = rng_.angle();
    }
    state_.tau = 0.0;
    state_.last_delta_norm = 0.0;
    state_.last_lambda = 0.0;
    state_.energy = hamiltonian_.expectation(current_state());
    delta_history_.clear();
    phase_steps_ = 0;
}

const DeflationEntry& SpectrumEngine::deflate_and_restart() {
    StateVector phi = current_state();
    phi.normalize();
    const double energy = hamiltonian_.expectation(phi);
    std::vector<cplx> r = hamiltonian_.apply(phi);
    kernels::axpy(r, cplx{-energy, 0.0}, phi.amps());
    DeflationEntry entry{std::move(phi), config_.alpha, energy, steps_used_,
                         std::sqrt(kernels::norm_sq(r)), phase_steps_};
    deflations_.push_back(std::move(entry));
    restart_phase();
    return deflations_.back();
}

SpectrumReport SpectrumEngine::run() {
    SpectrumReport report;
    report.num_requested = config_.num_states;
    report.config = config_;

    while (static_cast<int>(deflations_.size()) < config_.num_states) {
        bool converged = false;
        while (steps_used_ < config_.max_iterations) {
            step();
            converged = detect_convergence(delta_history_, config_.conv_threshold,
                                           config_.conv_window);
            trajectory_.push_back({row_counter_++, state_.tau, state_.energy,
                                   state_.last_delta_norm, state_.last_lambda,
                                   static_cast<int>(deflations_.size()),
                                   converged ? TrajectoryEvent::Converged
                                             : TrajectoryEvent::Step});
            if (converged) break;
        }
        if (!converged) {
            warnings_.push_back("iteration budget of " + std::to_string(config_.max_iterations) +
                                " exhausted after " + std::to_string(deflations_.size()) +
                                " of " + std::to_string(config_.num_states) + " states");
            break;
        }

        const double tau_at_convergence = state_.tau;
        const DeflationEntry& entry = deflate_and_restart();
        trajectory_.push_back({row_counter_++, tau_at_convergence, entry.energy, 0.0, 0.0,
                               static_cast<int>(deflations_.size()), TrajectoryEvent::Deflated});
        report.states.push_back(
            {entry.energy, entry.residual, entry.phase_steps, entry.discovered_at_iteration});

        if (static_cast<int>(deflations_.size()) < config_.num_states) {
            trajectory_.push_back({row_counter_++, state_.tau, state_.energy, 0.0, 0.0,
                                   static_cast<int>(deflations_.size()),
                                   TrajectoryEvent::Rerandomized});
        }
    }

    report.complete = static_cast<int>(deflations_.size()) == config_.num_states;
    report.total_steps = steps_used_;
    report.warnings = warnings_;

    std::vector<std::size_t> order(report.states.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return report.states[a].energy < report.states[b].energy;
    });
    std::vector<double> sorted_energies;
    sorted_energies.reserve(order.size());
    for (const std::size_t i : order) sorted_energies.push_back(report.states[i].energy);
    const std::vector<DegenerateLevel> groups = group_degeneracies(sorted_energies);
    std::size_t consumed = 0;
    for (const DegenerateLevel& g : groups) {
        ReportLevel level{g.energy, g.count, 0.0, 0};
        for (int k = 0; k < g.count; ++k) {
            const ReportState& s = report.states[order[consumed++]];
            level.max_residual = std::max(level.max_residual, s.residual);
            level.total_iterations += s.iterations;
        }
        report.levels.push_back(level);
    }

    if (config_.oracle && hamiltonian_.num_qubits() <= 12) {
        report.oracle_energies = exact_eigenvalues(hamiltonian_);
    }
    return report;
}

}  // namespace qspect
