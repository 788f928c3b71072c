#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qspect/ansatz.hpp"
#include "qspect/linalg.hpp"
#include "qspect/pauli.hpp"
#include "qspect/rng.hpp"
#include "qspect/state_vector.hpp"

namespace qspect {

enum class Method { Imaginary, Gradient };
enum class DerivMode { FiniteDifference, Analytic };
enum class ResetMode { Rerandomize, Reset };

struct EngineConfig {
    Method method = Method::Imaginary;
    DerivMode deriv = DerivMode::FiniteDifference;
    double dtau = 0.1;    // imaginary-time Euler step
    double eta = 0.1;     // gradient-descent step size
    double fd_step = 1e-5;
    double lambda_min = 1e-4;
    double lambda_max = 1e-2;
    double alpha = 10.0;  // deflation energy shift
    double conv_threshold = 1e-2;
    int conv_window = 3;
    int max_iterations = 2000;  // total update-step budget across all phases
    int num_states = 1;
    std::uint64_t seed = 0;
    ResetMode reset_mode = ResetMode::Rerandomize;
    bool oracle = false;  // attach exact eigenvalues to the report (<= 12 qubits)
    bool flip_v_sign = false;  // fault-injection hook for the verification suite
};

/// Rolling view of one evolution phase.
struct EvolutionState {
    std::vector<double> theta;
    double tau = 0.0;
    double last_delta_norm = 0.0;
    double last_lambda = 0.0;
    double energy = 0.0;
};

/// A recorded eigenstate: once deflated, the Hamiltonian the engine descends
/// is effectively H + alpha |state><state|.
struct DeflationEntry {
    StateVector state;
    double alpha = 0.0;
    double energy = 0.0;
    int discovered_at_iteration = 0;
    double residual = 0.0;  // ||(H - E)|state>|| at convergence
    int phase_steps = 0;    // update steps spent in the discovering phase
};

enum class TrajectoryEvent { Step, Converged, Deflated, Rerandomized };
const char* event_name(TrajectoryEvent e);

struct TrajectoryRow {
    int iter = 0;
    double tau = 0.0;
    double energy = 0.0;
    double delta_theta_norm = 0.0;
    double lambda = 0.0;
    int n_deflations = 0;
    TrajectoryEvent event = TrajectoryEvent::Step;
};

struct ReportState {
    double energy = 0.0;
    double residual = 0.0;
    int iterations = 0;     // update steps in the discovering phase
    int discovered_at = 0;  // global step count at convergence
};

struct ReportLevel {
    double energy = 0.0;
    int count = 0;
    double max_residual = 0.0;
    int total_iterations = 0;
};

struct SpectrumReport {
    bool complete = false;
    int num_requested = 0;
    int total_steps = 0;
    std::vector<ReportState> states;  // discovery order
    std::vector<ReportLevel> levels;  // energies grouped within 5e-3
    std::vector<double> oracle_energies;
    std::vector<std::string> warnings;
    EngineConfig config;
};

/// M_ij = Re <d_i phi | d_j phi>, the Gram matrix of the derivative vectors.
RealMatrix assemble_M(std::span<const DerivativeVector> derivs);

/// V_i = -Re <d_i phi| H |phi> - sum_j alpha_j Re(<d_i phi|e_j><e_j|phi>),
/// i.e. -(1/2) of the gradient of E_eff = <H> + sum_j alpha_j |<e_j|phi>|^2.
/// With this sign the Euler update theta += dtau M^-1 V descends E_eff.
std::vector<double> assemble_V(std::span<const DerivativeVector> derivs, const StateVector& phi,
                               const PauliSumHamiltonian& h,
                               std::span<const DeflationEntry> deflations);

/// Forward-difference estimate of (1/2) d|<phi(theta)|target>|^2 / d theta_i,
/// the measurement-friendly form of one deflation addend (up to -alpha).
double overlap_penalty_grad_fd(const Ansatz& ansatz, std::span<const double> theta, int param,
                               const StateVector& target, double dtheta);

/// min ||V - M x||^2 + lambda ||x||^2 via the normal equations
/// (M^T M + lambda I) x = M^T V, solved by Cholesky.
std::vector<double> tikhonov_solve(const RealMatrix& m, std::span<const double> v, double lambda);

/// Three-point L-curve rule: solves at {lo, sqrt(lo*hi), hi}, picks the
/// corner (the point nearest the utopia point of the log-log
/// residual-vs-solution-norm curve, ties to the smaller lambda), clamps to
/// [lo, hi].
double select_lambda(const RealMatrix& m, std::span<const double> v, double lambda_lo = 1e-4,
                     double lambda_hi = 1e-2);

/// True iff the last `window` entries are all below threshold.
bool detect_convergence(std::span<const double> delta_history, double threshold = 1e-2,
                        int window = 3);

/// Sequential spectrum-discovery engine: evolve to convergence, record the
/// state, deflate, restart with fresh (or reset) parameters, repeat.
class SpectrumEngine {
  public:
    SpectrumEngine(Ansatz ansatz, PauliSumHamiltonian hamiltonian, EngineConfig config);

    /// Full discovery loop; emits the trajectory as a side effect.
    SpectrumReport run();

    /// One parameter update (imaginary-time or gradient per config).
    void step();

    /// Records the current state as a deflation entry and restarts the
    /// phase per the configured reset mode.
    const DeflationEntry& deflate_and_restart();

    const EvolutionState& state() const { return state_; }
    void set_theta(std::vector<double> theta);

    /// Pre-seeds the deflation list, e.g. with eigenstates recorded by an
    /// earlier run; run() then only discovers the remainder.
    void add_prior_deflation(StateVector state, double alpha);
    const std::vector<DeflationEntry>& deflations() const { return deflations_; }
    const std::vector<TrajectoryRow>& trajectory() const { return trajectory_; }
    const Ansatz& ansatz() const { return ansatz_; }
    const PauliSumHamiltonian& hamiltonian() const { return hamiltonian_; }

    /// <H> + sum_j alpha_j |<e_j|phi>|^2 at the current parameters.
    double effective_energy() const;

    /// ||(H - <H>)|phi>|| at the current parameters.
    double residual() const;

  private:
    StateVector current_state() const;
    std::vector<DerivativeVector> all_derivatives() const;
    void restart_phase();

    Ansatz ansatz_;
    PauliSumHamiltonian hamiltonian_;
    EngineConfig config_;
    Rng rng_;
    EvolutionState state_;
    std::vector<double> theta0_;
    std::vector<double> delta_history_;
    std::vector<DeflationEntry> deflations_;
    std::vector<TrajectoryRow> trajectory_;
    std::vector<std::string> warnings_;
    int steps_used_ = 0;
    int phase_steps_ = 0;
    int row_counter_ = 0;
};

}  // namespace qspect
