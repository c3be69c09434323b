#include "npi/sampling.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace npi {

std::vector<double> TrajectoryRecord::series(const std::string& name) const {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) {
        auto it = s.values.find(name);
        if (it == s.values.end())
            throw std::invalid_argument("TrajectoryRecord: no series " + name);
        out.push_back(it->second);
    }
    return out;
}

TrajectoryRecord run_sampling(BaoabIntegrator& integ, RingPolymerState& state,
                              const SamplingPlan& plan) {
    TrajectoryRecord rec;
    rec.sample_stride = plan.sample_stride;
    rec.snapshot_stride = plan.snapshot_stride;
    rec.dt = integ.dt();
    const SystemSpec& spec = integ.spec();
    const ForceField& field = integ.field();

    auto record = [&]() {
        EstimatorSample s;
        s.time = state.time;
        if (plan.record_estimators) {
            s.values["kinetic"] = kinetic_energy(state, spec);
            s.values["temperature"] = kinetic_temperature(state, spec);
            s.values["spring"] = spring_energy(field, spec, state);
            double u = 0.0;
            for (int j = 0; j < state.n_beads; ++j)
                u += field.energy_slice(spec, gather_slice(state, j));
            s.values["potential"] = u / state.n_beads;
            s.values["e_primitive"] = energy_estimator_primitive(state, field, spec);
            s.values["e_virial"] = energy_estimator_virial(state, field, spec);
        }
        for (const auto& [name, fn] : plan.observables)
            s.values[name] = estimator_position_observable(state, spec, fn);
        rec.samples.push_back(std::move(s));
    };

    for (long step = 1; step <= plan.n_steps; ++step) {
        integ.step(state);
        if (plan.sample_stride > 0 && step % plan.sample_stride == 0) record();
        if (plan.snapshot_stride > 0 && step % plan.snapshot_stride == 0)
            rec.snapshots.push_back(state);
    }
    return rec;
}

double mean(const std::vector<double>& xs) {
    if (xs.empty()) throw std::domain_error("mean of empty series");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
}

double standard_error(const std::vector<double>& xs) {
    if (xs.size() < 2) throw std::domain_error("standard_error needs >= 2 points");
    const double m = mean(xs);
    double var = 0.0;
    for (double x : xs) var += (x - m) * (x - m);
    var /= (xs.size() - 1);
    return std::sqrt(var / xs.size());
}

double integrated_autocorrelation_time(const std::vector<double>& xs) {
    if (xs.size() < 16) return 1.0;
    const double m = mean(xs);
    double var = 0.0;
    for (double x : xs) var += (x - m) * (x - m);
    var /= xs.size();
    if (var <= 0.0) return 1.0;

    // block averaging: tau = block_size * var(block means) / var, read off at
    // the plateau (largest block size with >= 16 blocks)
    double tau = 1.0;
    for (std::size_t block = 2; xs.size() / block >= 16; block *= 2) {
        const std::size_t n_blocks = xs.size() / block;
        std::vector<double> means(n_blocks);
        for (std::size_t b = 0; b < n_blocks; ++b) {
            double acc = 0.0;
            for (std::size_t k = 0; k < block; ++k) acc += xs[b * block + k];
            means[b] = acc / block;
        }
        double bm = std::accumulate(means.begin(), means.end(), 0.0) / n_blocks;
        double bvar = 0.0;
        for (double x : means) bvar += (x - bm) * (x - bm);
        bvar /= n_blocks;
        tau = std::max(tau, block * bvar / var);
    }
    return tau;
}

}  // namespace npi
