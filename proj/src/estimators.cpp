#include "npi/estimators.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace npi {

double estimator_position_observable(const RingPolymerState& state,
                                     const SystemSpec& spec,
                                     const SliceObservable& A) {
    double acc = 0.0;
    for (int j = 0; j < state.n_beads; ++j)
        acc += A(spec, gather_slice(state, j));
    return acc / state.n_beads;
}

double kinetic_energy(const RingPolymerState& state, const SystemSpec& spec) {
    double kin = 0.0;
    for (int i = 0; i < state.n_particles; ++i) {
        const double inv2m = 0.5 / spec.masses[i];
        for (int j = 0; j < state.n_beads; ++j)
            for (int d = 0; d < state.dimension; ++d) {
                const double p = state.mom(i, j, d);
                kin += inv2m * p * p;
            }
    }
    return kin;
}

double kinetic_temperature(const RingPolymerState& state, const SystemSpec& spec,
                           bool centroid) {
    if (!centroid) {
        const double dof = static_cast<double>(state.n_particles) *
                           state.n_beads * state.dimension;
        return 2.0 * kinetic_energy(state, spec) / dof;
    }
    double kin = 0.0;
    for (int i = 0; i < state.n_particles; ++i)
        for (int d = 0; d < state.dimension; ++d) {
            double pc = 0.0;
            for (int j = 0; j < state.n_beads; ++j) pc += state.mom(i, j, d);
            pc /= state.n_beads;
            kin += 0.5 * pc * pc / spec.masses[i];
        }
    // centroid momentum variance is m T / P in the bead-momentum convention
    const double dof = static_cast<double>(state.n_particles) * state.dimension;
    return 2.0 * kin * state.n_beads / dof;
}

double energy_estimator_primitive(const RingPolymerState& state,
                                  const ForceField& field,
                                  const SystemSpec& spec) {
    const double kin_term = static_cast<double>(state.n_particles) *
                            state.n_beads * state.dimension /
                            (2.0 * spec.beta);
    double u = 0.0;
    for (int j = 0; j < state.n_beads; ++j)
        u += field.energy_slice(spec, gather_slice(state, j));
    return kin_term - spring_energy(field, spec, state) + u / state.n_beads;
}

double energy_estimator_virial(const RingPolymerState& state,
                               const ForceField& field, const SystemSpec& spec) {
    const double kin_term = static_cast<double>(state.n_particles) *
                            state.dimension / (2.0 * spec.beta);
    std::vector<double> slice_forces(
        static_cast<std::size_t>(state.n_particles) * state.dimension);
    double u = 0.0, virial = 0.0;
    for (int j = 0; j < state.n_beads; ++j) {
        const auto slice = gather_slice(state, j);
        u += field.forces_slice(spec, slice, slice_forces);
        for (int i = 0; i < state.n_particles; ++i)
            for (int d = 0; d < state.dimension; ++d) {
                const double dx = state.pos(i, j, d) - state.centroid(i, d);
                // dU/dr = -force
                virial -= dx * slice_forces[i * state.dimension + d];
            }
    }
    const int P = state.n_beads;
    return kin_term + 0.5 * virial / P + u / P;
}

SliceObservable ObservableRegistry::lookup(const std::string& name,
                                           const ForceField& field) {
    if (name == "potential") {
        return [field](const SystemSpec& spec, std::span<const double> slice) {
            return field.energy_slice(spec, slice);
        };
    }
    if (name.rfind("x:", 0) == 0) {
        const auto sep = name.find(':', 2);
        if (sep != std::string::npos) {
            int particle = -1, axis = -1;
            auto p1 = std::from_chars(name.data() + 2, name.data() + sep, particle);
            auto p2 = std::from_chars(name.data() + sep + 1,
                                      name.data() + name.size(), axis);
            if (p1.ec == std::errc{} && p2.ec == std::errc{} && particle >= 0 &&
                axis >= 0) {
                return [particle, axis](const SystemSpec& spec,
                                        std::span<const double> slice) {
                    return slice[particle * spec.dimension + axis];
                };
            }
        }
    }
    throw std::invalid_argument("unknown observable: " + name);
}

}  // namespace npi
