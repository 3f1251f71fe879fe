#pragma once

#include <array>
#include <filesystem>
#include <limits>
#include <memory>
#include <vector>

#include "pcns/pulse.hpp"
#include "pcns/solver.hpp"

namespace pcns {

using Point = std::array<double, 3>;

/// Phase factors exp(i xi x) of one evaluation point for every grid frequency.
struct Phases {
    std::vector<cplx> x, y, z;
};
Phases phases(const Grid& g, const Point& p);

/// Exact trigonometric interpolant of a periodic grid field,
/// f(x) = Re sum w fhat exp(i xi.x) over the stored half spectrum (w = 2 off
/// the kz = 0 and Nyquist planes). Nyquist modes use the positive frequency,
/// so grid values are reproduced exactly.
class TrigInterpolator {
public:
    explicit TrigInterpolator(const ScalarField& f);
    double operator()(const Point& p) const;
    double operator()(const Phases& ph) const;
    const Grid& grid() const { return grid_; }

private:
    Grid grid_;
    ComplexBuffer weighted_;
};

struct TrajectorySample {
    double t = 0.0;
    Point x{};
    double rho = 0.0, a = 0.0, F = 0.0;
};

/// Path X(t; tau, y) with the fields interpolated along it.
struct Trajectory {
    Point seed{};
    double tau = 0.0;
    double nu = 1.0;  ///< mu + lambda, so that div u = a / nu + F
    std::vector<TrajectorySample> samples;
};

struct AdvectOptions {
    /// Largest admitted time between consecutive snapshots.
    double max_gap = std::numeric_limits<double>::infinity();
};

/// Streams snapshots into particle paths. Each time step spans two snapshot
/// intervals so every stage lands on a snapshot: classical RK4 when the middle
/// snapshot is centred, otherwise the third-order Kutta scheme with nodes
/// (0, theta, 1). A single trailing interval is closed with Heun's method.
/// Samples are stored at the ends of the steps. Seeds are wrapped into the box.
class ParticleTracker : public RunObserver {
public:
    ParticleTracker(std::vector<Point> seeds, double tau, const PulseParams& p, long every = 1,
                    AdvectOptions opt = {});
    ~ParticleTracker() override;

    /// Snapshots must be time ordered on one grid. Tracking starts at the
    /// snapshot whose time equals tau; passing tau without such a snapshot,
    /// decreasing times or a gap above max_gap throw InputError.
    void push(const State& s);
    /// Closes a pending single interval. Idempotent.
    void finish();
    const std::vector<Trajectory>& trajectories() const { return traj_; }

    void on_state(const State& s, long) override { push(s); }
    long state_every() const override { return every_; }
    void flush() override { finish(); }

private:
    struct Snapshot;
    std::unique_ptr<Snapshot> make_snapshot(const State& s) const;
    void record(const Snapshot& s);
    void step_two(const Snapshot& s0, const Snapshot& s1, const Snapshot& s2);
    void step_one(const Snapshot& s0, const Snapshot& s1);

    PulseParams p_;
    long every_;
    AdvectOptions opt_;
    double tau_;
    bool started_ = false;
    double last_t_ = -std::numeric_limits<double>::infinity();
    std::vector<Point> pos_;
    std::vector<Trajectory> traj_;
    std::unique_ptr<Snapshot> base_, mid_;
};

/// Batch form of ParticleTracker over stored snapshots.
std::vector<Trajectory> advect(const std::vector<Point>& seeds, double tau, const std::vector<State>& snapshots,
                               const PulseParams& p, AdvectOptions opt = {});

/// Max over sample pairs t1 < t of |rho(t) / (rho(t1) exp(-int_{t1}^t div u ds)) - 1|,
/// with div u = a / nu + F integrated by the trapezoidal rule along the path.
/// 0 for fewer than two samples.
double density_formula_residual(const Trajectory& tr);

/// Writes columns t, x, y, z, rho, a, F.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& tr);

} // namespace pcns
