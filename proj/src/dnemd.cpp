#include "npi/dnemd.hpp"

#include <cmath>
#include <future>
#include <stdexcept>

namespace npi {

PerturbationSpec PerturbationSpec::thermal_gradient(RegionLayout layout,
                                                    double T_hot, double T_cold,
                                                    double gamma) {
    PerturbationSpec p;
    p.kind = PerturbationKind::thermal_gradient;
    p.layout = std::move(layout);
    p.T_hot = T_hot;
    p.T_cold = T_cold;
    p.gamma = gamma;
    p.validate();
    return p;
}

void PerturbationSpec::validate() const {
    if (kind == PerturbationKind::thermal_gradient) {
        if (!(T_hot >= T_cold) || !(T_cold > 0.0))
            throw std::invalid_argument(
                "thermal_gradient: requires T_hot >= T_cold > 0");
        if (!(gamma > 0.0))
            throw std::invalid_argument("thermal_gradient: gamma must be > 0");
    }
    if (switch_on_time < 0.0)
        throw std::invalid_argument("perturbation: negative switch-on time");
}

HarvestResult harvest_initial_conditions(const TrajectoryRecord& run,
                                         const BranchPlan& plan) {
    if (plan.n_branches < 1 || plan.spacing_steps < 1)
        throw std::invalid_argument("BranchPlan: n_branches and spacing must be >= 1");
    if (run.snapshot_stride != plan.spacing_steps)
        throw std::invalid_argument(
            "harvest: equilibrium run was recorded with a different snapshot stride");
    if (static_cast<int>(run.snapshots.size()) < plan.n_branches)
        throw std::runtime_error(
            "insufficient sampling: equilibrium run holds " +
            std::to_string(run.snapshots.size()) + " snapshots, plan needs " +
            std::to_string(plan.n_branches));

    HarvestResult out;
    out.states.assign(run.snapshots.begin(),
                      run.snapshots.begin() + plan.n_branches);

    // decorrelation check on the potential-energy series
    if (!run.samples.empty() && run.samples.front().values.count("potential")) {
        const auto pot = run.series("potential");
        const double tau_samples = integrated_autocorrelation_time(pot);
        const double tau_steps = tau_samples * run.sample_stride;
        if (plan.spacing_steps < tau_steps)
            out.warning = "harvest spacing (" + std::to_string(plan.spacing_steps) +
                          " steps) is below the measured decorrelation time (" +
                          std::to_string(tau_steps) + " steps)";
    }
    return out;
}

std::vector<EstimatorSample> run_branch(const RingPolymerState& initial,
                                        const BranchPlan& plan,
                                        const SystemSpec& spec,
                                        const ForceField& field,
                                        std::uint64_t seed, int branch_id) {
    plan.perturbation.validate();
    RingPolymerState state = initial;
    state.time = 0.0;

    ThermostatSpec thermostat = plan.base_thermostat;
    if (plan.continue_equilibrium_stream) {
        // keep equilibrium stream id and cursor: an unperturbed branch then
        // replays the continued equilibrium trajectory exactly
    } else {
        thermostat.stream_id = plan.branch_stream_base + branch_id;
        state.rng_cursor = 0;
    }

    const auto& pert = plan.perturbation;
    BaoabIntegrator::OStep o_step;
    if (pert.kind == PerturbationKind::thermal_gradient) {
        thermostat.kind = ThermostatKind::external;
        RegionTargets targets;
        for (int r = 0; r < pert.layout.n_regions(); ++r) {
            if (pert.layout.roles[r] == RegionRole::hot)
                targets.bath[r] = {pert.T_hot, pert.gamma};
            else if (pert.layout.roles[r] == RegionRole::cold)
                targets.bath[r] = {pert.T_cold, pert.gamma};
        }
        const RegionLayout layout = pert.layout;
        const double switch_on = pert.switch_on_time;
        o_step = [layout, targets, spec, switch_on](RingPolymerState& s, double dt,
                                                    RandomStream& rng) {
            if (s.time < switch_on) return;
            const auto labels = assign_regions(layout, s, spec);
            apply_region_thermostats(s, labels, layout, targets, spec, dt, rng);
        };
    } else if (pert.kind == PerturbationKind::custom_force) {
        thermostat.kind = ThermostatKind::external;
        auto force = pert.force;
        o_step = [force, spec](RingPolymerState& s, double dt, RandomStream&) {
            if (force) force(s, spec, dt);
        };
    }

    BaoabIntegrator integ(spec, field, state.n_beads, plan.branch_dt, thermostat,
                          seed);
    if (o_step) integ.set_o_step(std::move(o_step));

    if (plan.resample_momenta) {
        RandomStream rng(seed, thermostat.stream_id + 500000, 0);
        sample_momenta(state, spec, spec.temperature(), rng);
    }

    SamplingPlan splan;
    splan.n_steps = plan.branch_length_steps;
    splan.sample_stride = plan.record_stride;
    splan.observables = plan.observables;
    auto rec = run_sampling(integ, state, splan);
    return std::move(rec.samples);
}

void BranchEnsemble::validate_alignment() const {
    for (const auto& b : branches) {
        if (b.size() != time_grid.size())
            throw std::runtime_error("BranchEnsemble: misaligned time grids");
        for (std::size_t m = 0; m < b.size(); ++m)
            if (std::abs(b[m].time - time_grid[m]) > 1e-9 * (1.0 + time_grid[m]))
                throw std::runtime_error("BranchEnsemble: misaligned time grids");
    }
}

BranchEnsemble run_branches(const std::vector<RingPolymerState>& initials,
                            const BranchPlan& plan, const SystemSpec& spec,
                            const ForceField& field, std::uint64_t seed,
                            int workers) {
    BranchEnsemble ens;
    ens.branches.resize(initials.size());
    workers = std::max(1, workers);

    std::size_t next = 0;
    while (next < initials.size()) {
        const std::size_t batch =
            std::min<std::size_t>(workers, initials.size() - next);
        std::vector<std::future<std::vector<EstimatorSample>>> futs;
        futs.reserve(batch);
        for (std::size_t k = 0; k < batch; ++k) {
            const std::size_t id = next + k;
            futs.push_back(std::async(std::launch::async, [&, id] {
                return run_branch(initials[id], plan, spec, field, seed,
                                  static_cast<int>(id));
            }));
        }
        for (std::size_t k = 0; k < batch; ++k)
            ens.branches[next + k] = futs[k].get();
        next += batch;
    }

    if (!ens.branches.empty()) {
        ens.time_grid.reserve(ens.branches.front().size());
        for (const auto& s : ens.branches.front()) ens.time_grid.push_back(s.time);
    }
    ens.validate_alignment();
    return ens;
}

std::vector<NpiPoint> npi_average(const BranchEnsemble& ensemble,
                                  const std::string& observable) {
    if (ensemble.branches.size() < 2)
        throw std::invalid_argument("npi_average: need >= 2 branches");
    ensemble.validate_alignment();
    const std::size_t n = ensemble.branches.size();
    std::vector<NpiPoint> out(ensemble.time_grid.size());
    for (std::size_t m = 0; m < ensemble.time_grid.size(); ++m) {
        double acc = 0.0;
        for (const auto& b : ensemble.branches) {
            auto it = b[m].values.find(observable);
            if (it == b[m].values.end())
                throw std::invalid_argument("npi_average: no observable " +
                                            observable);
            acc += it->second;
        }
        const double mean = acc / n;
        double var = 0.0;
        for (const auto& b : ensemble.branches) {
            const double d = b[m].values.at(observable) - mean;
            var += d * d;
        }
        var /= (n - 1);
        out[m] = {ensemble.time_grid[m], mean, std::sqrt(var / n)};
    }
    return out;
}

std::vector<CorrelationPoint> correlation_equilibrium(
    const std::vector<double>& A, const std::vector<double>& B, int max_lag) {
    if (A.size() != B.size())
        throw std::invalid_argument("correlation: series length mismatch");
    if (max_lag < 0 || static_cast<std::size_t>(max_lag) >= A.size())
        throw std::domain_error("correlation: max_lag must be < run length");
    std::vector<CorrelationPoint> out(max_lag + 1);
    for (int lag = 0; lag <= max_lag; ++lag) {
        const std::size_t n = A.size() - lag;
        double acc = 0.0;
        for (std::size_t t0 = 0; t0 < n; ++t0) acc += A[t0] * B[t0 + lag];
        out[lag] = {lag, acc / n};
    }
    return out;
}

}  // namespace npi
