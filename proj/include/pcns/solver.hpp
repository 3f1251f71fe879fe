#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pcns/diagnostics.hpp"
#include "pcns/pulse.hpp"
#include "pcns/state.hpp"

namespace pcns {

enum class Scheme { explicit_rk4, imex };

struct SolverConfig {
    double dt_init = 1e-4;  ///< upper bound on the step; the CFL limit may lower it
    double cfl_safety = 0.9;
    double t_end = 0.1;
    bool dealias = true;
    Scheme scheme = Scheme::explicit_rk4;
    int checkpoint_every = 0;   ///< steps between checkpoints, 0 disables
    int diagnostics_every = 0;  ///< steps between records, 0 keeps only first and last
    double positivity_floor = 1e-6;

    /// Throws InputError on dt_init <= 0, t_end < 0, cfl_safety outside (0, 1]
    /// or negative cadences.
    void validate() const;
};

struct Tendencies {
    ScalarField drho;
    VectorField du;
};

/// drho = -div(rho u), du = (mu Lap u + lambda grad div u - rho (u.grad)u - grad rho^gamma)/rho.
/// The advection term is evaluated as u x curl u - grad |u|^2/2. With dealias the
/// inputs and every product are truncated by the 2/3 rule.
/// Throws PositivityError if min rho <= floor.
Tendencies rhs(const State& s, const PulseParams& p, bool dealias = true, double floor = 1e-6);

/// cfl_safety * min(dx / (max|u| + c_max), dx^2 / (6 mu_eff)), c_max = max sqrt(gamma rho^{gamma-1}).
/// mu_eff = (mu + lambda) max(1/rho) for the explicit scheme and
/// (mu + lambda) max|1/rho - 1| for the part left explicit by the IMEX scheme.
double cfl_dt(const State& s, const PulseParams& p, const SolverConfig& cfg);

/// Energy bookkeeping at one step: E = (1/2) int rho|u|^2 + H, D = mu||grad u||^2 + lambda||div u||^2.
struct EnergySample {
    double t = 0.0;
    double E = 0.0;
    double D = 0.0;
    double mass = 0.0;
    double min_rho = 0.0;
    double max_rho = 0.0;
};

/// Additive source terms (S_rho, S_u) on the grid at time t, added to the
/// right-hand sides of the mass and velocity equations.
using Forcing = std::function<void(double t, ScalarField& s_rho, VectorField& s_u)>;

/// Time integrator holding the state in Fourier space.
class Stepper {
public:
    Stepper(const State& initial, const PulseParams& p, const SolverConfig& cfg, Forcing forcing = {});
    ~Stepper();
    Stepper(const Stepper&) = delete;
    Stepper& operator=(const Stepper&) = delete;

    /// Evaluates the tendencies of the current state (reused by the next
    /// advance) and returns its energy sample and CFL limit.
    EnergySample sample();
    double cfl_limit();
    /// One step of size dt with the configured scheme.
    void advance(double dt);

    double time() const;
    State state() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    friend Tendencies rhs(const State&, const PulseParams&, bool, double);
};

/// One step from a physical state. IMEX is self-starting, so this is the same
/// update a run performs.
State step(const State& s, double dt, const PulseParams& p, const SolverConfig& cfg);

/// Receives run output. All hooks are optional.
class RunObserver {
public:
    virtual ~RunObserver() = default;
    virtual void on_energy(const EnergySample&) {}
    virtual void on_record(const DiagnosticsRecord&) {}
    /// Called for steps that are multiples of state_every() (and the final state).
    virtual void on_state(const State&, long /*step*/) {}
    virtual long state_every() const { return 0; }
    virtual void flush() {}
};

struct RunSinks {
    DiagnosticsOptions diagnostics;
    std::vector<RunObserver*> observers;
    std::optional<std::filesystem::path> checkpoint_dir;
};

struct RunSummary {
    long steps = 0;
    double t_final = 0.0;
    double min_rho = 0.0;
    double max_rho = 0.0;
    double dt_min = 0.0;
    double dt_max = 0.0;
    double mass_initial = 0.0;
    double max_mass_drift = 0.0;  ///< max relative deviation of the mass over the steps
    double wall_seconds = 0.0;
    std::vector<EnergySample> energy;  ///< one sample per step plus the final state
};

/// Nonuniform three-point estimate of dE/dt + D at sample i (centred inside,
/// one-sided at the ends); NaN with fewer than three samples.
double energy_balance_at(const std::vector<EnergySample>& e, std::size_t i);

/// Integrates to cfg.t_end. Diagnostics records are emitted at step 0, every
/// diagnostics_every steps and at the end; checkpoints every checkpoint_every
/// steps and at the end. Besov norms are computed on every
/// sinks.diagnostics.besov_every-th record. On error the observers are
/// flushed, the last accepted state is written to abort_dump.pcns when a
/// checkpoint directory is set, and the error is rethrown.
RunSummary run(const State& initial, const PulseParams& p, const SolverConfig& cfg, const RunSinks& sinks);

} // namespace pcns
