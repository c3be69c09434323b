#ifndef NPI_DNEMD_HPP
#define NPI_DNEMD_HPP

#include <optional>
#include <string>
#include <vector>

#include "npi/sampling.hpp"
#include "npi/thermal.hpp"

namespace npi {

enum class PerturbationKind { none, thermal_gradient, custom_force };

struct PerturbationSpec {
    PerturbationKind kind = PerturbationKind::none;

    // thermal_gradient
    RegionLayout layout;
    double T_hot = 0.0;
    double T_cold = 0.0;
    double gamma = 1.0;

    // custom_force: extra acceleration hook, applied as an O-step add-on
    std::string force_name;
    std::function<void(RingPolymerState&, const SystemSpec&, double)> force;

    double switch_on_time = 0.0;

    static PerturbationSpec none() { return {}; }
    static PerturbationSpec thermal_gradient(RegionLayout layout, double T_hot,
                                             double T_cold, double gamma);
    void validate() const;
};

struct BranchPlan {
    int n_branches = 0;
    int spacing_steps = 0;        // harvest spacing along the equilibrium run
    long branch_length_steps = 0;
    double branch_dt = 0.0;
    int record_stride = 1;
    PerturbationSpec perturbation;
    std::uint64_t branch_stream_base = 1000;  // branch k uses stream base + k

    // thermostat to keep active on unperturbed branches (the equilibrium one)
    ThermostatSpec base_thermostat;

    // degenerate mode: continue the equilibrium noise stream so
    // an unperturbed branch is bit-identical to the continued equilibrium run
    bool continue_equilibrium_stream = false;

    // experimental: redraw branch launch momenta from Maxwell-Boltzmann
    bool resample_momenta = false;

    std::vector<std::pair<std::string, SliceObservable>> observables;
};

struct HarvestResult {
    std::vector<RingPolymerState> states;
    std::optional<std::string> warning;  // spacing below decorrelation time
};

// Takes the branch launch points off a recorded equilibrium run: snapshots at
// steps spacing, 2*spacing, ..., full phase-space points including momenta.
HarvestResult harvest_initial_conditions(const TrajectoryRecord& equilibrium_run,
                                         const BranchPlan& plan);

// One perturbed branch trajectory; observables are recorded every
// record_stride steps on the grid shared by all branches.
std::vector<EstimatorSample> run_branch(const RingPolymerState& initial,
                                        const BranchPlan& plan,
                                        const SystemSpec& spec,
                                        const ForceField& field,
                                        std::uint64_t seed, int branch_id);

struct BranchEnsemble {
    std::vector<double> time_grid;
    std::vector<std::vector<EstimatorSample>> branches;

    void validate_alignment() const;
};

// Runs all branches (concurrently up to `workers`), merged by branch index.
BranchEnsemble run_branches(const std::vector<RingPolymerState>& initials,
                            const BranchPlan& plan, const SystemSpec& spec,
                            const ForceField& field, std::uint64_t seed,
                            int workers = 1);

struct NpiPoint {
    double time = 0.0;
    double mean = 0.0;
    double stderr_ = 0.0;
};

// Branch-ensemble average of a named observable with across-branch standard
// error; this is the NPI estimate of tr(rho(0) A(t)).
std::vector<NpiPoint> npi_average(const BranchEnsemble& ensemble,
                                  const std::string& observable);

struct CorrelationPoint {
    int lag = 0;  // in samples
    double value = 0.0;
};

// Equilibrium time correlation C_AB(tau) = <A(t0) B(t0 + tau)>, averaged over
// time origins along a stationary run.
std::vector<CorrelationPoint> correlation_equilibrium(
    const std::vector<double>& A, const std::vector<double>& B, int max_lag);

}  // namespace npi

#endif
