#include "npi/thermal.hpp"

#include <cmath>
#include <stdexcept>

namespace npi {

RegionLayout RegionLayout::symmetric(double box_length, int axis) {
    // widths 1/2 : 1 : 1 : 1 : 1/2 of the middle/cold width w = L/4
    const double w = box_length / 4.0;
    RegionLayout layout;
    layout.axis = axis;
    layout.boundaries = {0.0, 0.5 * w, 1.5 * w, 2.5 * w, 3.5 * w, box_length};
    layout.roles = {RegionRole::hot, RegionRole::middle, RegionRole::cold,
                    RegionRole::middle, RegionRole::hot};
    return layout;
}

void RegionLayout::validate(const SystemSpec& spec) const {
    if (axis < 0 || axis >= spec.dimension)
        throw std::invalid_argument("RegionLayout: axis out of range");
    if (boundaries.size() != roles.size() + 1)
        throw std::invalid_argument("RegionLayout: need n_regions + 1 boundaries");
    if (boundaries.front() != 0.0 ||
        boundaries.back() != spec.box_length[axis])
        throw std::invalid_argument("RegionLayout: intervals must tile the axis");
    for (std::size_t r = 1; r < boundaries.size(); ++r)
        if (!(boundaries[r] > boundaries[r - 1]))
            throw std::invalid_argument("RegionLayout: boundaries not increasing");
}

int RegionLayout::region_of(double x, double box_length) const {
    const double xw = wrap(x, box_length);
    for (int r = n_regions() - 1; r >= 0; --r)
        if (xw >= boundaries[r]) return r;
    return 0;
}

std::vector<int> assign_regions(const RegionLayout& layout,
                                const RingPolymerState& state,
                                const SystemSpec& spec) {
    std::vector<int> labels(state.n_particles);
    const double L = spec.box_length[layout.axis];
    for (int i = 0; i < state.n_particles; ++i)
        labels[i] = layout.region_of(state.centroid(i, layout.axis), L);
    return labels;
}

double apply_region_thermostats(RingPolymerState& state,
                                const std::vector<int>& labels,
                                const RegionLayout& layout,
                                const RegionTargets& targets,
                                const SystemSpec& spec, double dt,
                                RandomStream& rng) {
    for (const auto& [region, bath] : targets.bath) {
        if (region < 0 || region >= layout.n_regions())
            throw std::invalid_argument("region thermostat: region out of range");
        if (layout.roles[region] == RegionRole::middle)
            throw std::invalid_argument(
                "region thermostat: middle regions receive no thermostat");
        if (!(bath.first > 0.0) || bath.second < 0.0)
            throw std::invalid_argument("region thermostat: bad (T, gamma)");
    }
    double work = 0.0;
    for (int i = 0; i < state.n_particles; ++i) {
        auto it = targets.bath.find(labels[i]);
        if (it == targets.bath.end()) continue;
        const double T = it->second.first, gamma = it->second.second;
        const double c = std::exp(-gamma * dt);
        const double s = std::sqrt((1.0 - c * c) * spec.masses[i] * T);
        const double inv2m = 0.5 / spec.masses[i];
        for (int j = 0; j < state.n_beads; ++j)
            for (int d = 0; d < state.dimension; ++d) {
                double& p = state.mom(i, j, d);
                const double before = inv2m * p * p;
                p = c * p + s * rng.gaussian();
                work += inv2m * p * p - before;
            }
    }
    state.rng_cursor = rng.cursor();
    return work;
}

ProfileAccumulator::ProfileAccumulator(int n_bins, double box_length, int axis,
                                       TemperatureMode mode)
    : n_bins_(n_bins),
      box_length_(box_length),
      axis_(axis),
      mode_(mode),
      kinetic_(n_bins, 0.0),
      dof_(n_bins, 0),
      count_(n_bins, 0) {
    if (n_bins < 1) throw std::invalid_argument("ProfileAccumulator: n_bins < 1");
}

void ProfileAccumulator::add(const RingPolymerState& state,
                             const SystemSpec& spec) {
    for (int i = 0; i < state.n_particles; ++i) {
        const double x = wrap(state.centroid(i, axis_), box_length_);
        int bin = static_cast<int>(x / box_length_ * n_bins_);
        bin = std::min(bin, n_bins_ - 1);
        if (mode_ == TemperatureMode::bead_kinetic) {
            double twoK = 0.0;
            for (int j = 0; j < state.n_beads; ++j)
                for (int d = 0; d < state.dimension; ++d) {
                    const double p = state.mom(i, j, d);
                    twoK += p * p / spec.masses[i];
                }
            kinetic_[bin] += twoK;
            dof_[bin] += state.n_beads * state.dimension;
        } else {
            // centroid momentum variance is m T / P, so scale by P
            for (int d = 0; d < state.dimension; ++d) {
                double pc = 0.0;
                for (int j = 0; j < state.n_beads; ++j) pc += state.mom(i, j, d);
                pc /= state.n_beads;
                kinetic_[bin] += state.n_beads * pc * pc / spec.masses[i];
            }
            dof_[bin] += state.dimension;
        }
        count_[bin] += 1;
    }
}

std::vector<ProfileBin> ProfileAccumulator::profile() const {
    std::vector<ProfileBin> bins(n_bins_);
    for (int b = 0; b < n_bins_; ++b) {
        bins[b].center = (b + 0.5) * box_length_ / n_bins_;
        bins[b].count = count_[b];
        if (dof_[b] > 0) bins[b].temperature = kinetic_[b] / dof_[b];
    }
    return bins;
}

FluxRecord heat_flux(const RingPolymerState& state, const ForceField& field,
                     const SystemSpec& spec, const std::vector<int>& labels,
                     const RegionLayout& layout, int region) {
    const int N = state.n_particles;
    const int dim = state.dimension;
    const int z = layout.axis;
    long members = 0;
    for (int label : labels)
        if (label == region) ++members;

    FluxRecord rec;
    rec.time = state.time;
    rec.region = region;
    if (members == 0) return rec;

    // The sampling convention here keeps bead momenta at variance m/beta and
    // scales the physical potential by 1/P; physical transport velocities are
    // therefore v_phys = sqrt(P) p/m (the exact map onto real-time per-bead
    // dynamics rescales momenta by sqrt(P)). Slice potentials and pair forces
    // are already physical. The per-bead energy keeps its thermodynamic
    // kinetic content p^2/2m: the sqrt(P)-fast share of the fictitious bead
    // momenta carries no physical energy, only variance that would swamp the
    // convective term. At P = 1 everything reduces to the classical
    // expression.
    const double vscale = std::sqrt(static_cast<double>(state.n_beads));
    std::vector<double> e(N), v(static_cast<std::size_t>(N) * dim);
    double flux = 0.0;
    for (int j = 0; j < state.n_beads; ++j) {
        const auto slice = gather_slice(state, j);
        field.per_particle_energy_slice(spec, slice, e);
        for (int i = 0; i < N; ++i) {
            double kin = 0.0;
            for (int d = 0; d < dim; ++d) {
                const double p = state.mom(i, j, d);
                kin += 0.5 * p * p / spec.masses[i];
                v[i * dim + d] = vscale * p / spec.masses[i];
            }
            e[i] += kin;
        }
        // convective term
        for (int i = 0; i < N; ++i)
            if (labels[i] == region) flux += e[i] * v[i * dim + z];
        // virial term, per-atom form: 1/2 sum_j z_ij (F_ij . v_i)
        field.for_each_pair(
            spec, slice,
            [&](int i, int jj, const double* f_on_i, const double* delta) {
                double fv_i = 0.0, fv_j = 0.0;
                for (int d = 0; d < dim; ++d) {
                    fv_i += f_on_i[d] * v[i * dim + d];
                    fv_j += -f_on_i[d] * v[jj * dim + d];
                }
                if (labels[i] == region) flux += 0.5 * delta[z] * fv_i;
                if (labels[jj] == region) flux += 0.5 * (-delta[z]) * fv_j;
            });
    }
    rec.flux = flux / (state.n_beads * members);
    return rec;
}

double oriented_middle_flux(const RingPolymerState& state,
                            const ForceField& field, const SystemSpec& spec,
                            const std::vector<int>& labels,
                            const RegionLayout& layout) {
    double acc = 0.0;
    int n_mid = 0, seen = 0;
    for (int r = 0; r < layout.n_regions(); ++r)
        if (layout.roles[r] == RegionRole::middle) ++n_mid;
    for (int r = 0; r < layout.n_regions(); ++r) {
        if (layout.roles[r] != RegionRole::middle) continue;
        const double j = heat_flux(state, field, spec, labels, layout, r).flux;
        // first middle carries hot->cold along +axis, second along -axis
        acc += (seen == 0 ? j : -j);
        ++seen;
    }
    return n_mid > 0 ? acc / n_mid : 0.0;
}

SteadyStateResult steady_state_detector(
    const std::vector<std::vector<double>>& series,
    const std::vector<double>& times, int window, double tolerance) {
    if (window < 1) throw std::invalid_argument("steady_state_detector: window < 1");
    const std::size_t n = times.size();
    for (const auto& s : series)
        if (s.size() != n)
            throw std::invalid_argument("steady_state_detector: length mismatch");
    if (n < 2 * static_cast<std::size_t>(window))
        throw std::domain_error("steady_state_detector: series shorter than 2 windows");

    auto window_mean = [&](const std::vector<double>& s, std::size_t start) {
        double acc = 0.0;
        for (int k = 0; k < window; ++k) acc += s[start + k];
        return acc / window;
    };
    for (std::size_t start = 0; start + 2 * window <= n; start += window) {
        bool ok = true;
        for (const auto& s : series) {
            const double a = window_mean(s, start);
            const double b = window_mean(s, start + window);
            if (std::abs(b - a) >= tolerance) {
                ok = false;
                break;
            }
        }
        if (ok) return {true, times[start + 2 * window - 1]};
    }
    return {false, 0.0};
}

}  // namespace npi
