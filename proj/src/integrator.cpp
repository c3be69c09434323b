#include "npi/integrator.hpp"

#include <cmath>

namespace npi {

BaoabIntegrator::BaoabIntegrator(SystemSpec spec, ForceField field, int n_beads,
                                 double dt, ThermostatSpec thermostat,
                                 std::uint64_t seed)
    : spec_(std::move(spec)),
      field_(std::move(field)),
      modes_(build_normal_modes(n_beads)),
      dt_(dt),
      thermostat_(thermostat),
      seed_(seed) {
    spec_.validate();
    if (!(dt > 0.0)) throw std::domain_error("BaoabIntegrator: dt must be > 0");
    omega_p_ = omega_p(spec_.beta, spec_.hbar, n_beads);
    omega_max_ = n_beads > 1 ? 2.0 * omega_p_ : 0.0;
    if (dt_ * omega_max_ > 1.0)
        throw IntegrationError(
            "BaoabIntegrator: dt * omega_max > 1, fastest ring mode unresolved");
    dt_warning_ = dt_ * omega_max_ > 0.5;
    mode_q_.resize(n_beads);
    mode_p_.resize(n_beads);
}

double BaoabIntegrator::hamiltonian(const RingPolymerState& state) const {
    double kin = 0.0;
    for (int i = 0; i < state.n_particles; ++i) {
        const double inv2m = 0.5 / spec_.masses[i];
        for (int j = 0; j < state.n_beads; ++j)
            for (int d = 0; d < state.dimension; ++d) {
                const double p = state.mom(i, j, d);
                kin += inv2m * p * p;
            }
    }
    return kin + potential(state);
}

void BaoabIntegrator::half_kick(RingPolymerState& state) {
    // forces depend on positions only; the cache from the closing B of the
    // previous step is still valid for the opening B of this one
    if (!forces_fresh_) polymer_forces(field_, spec_, state, forces_);
    forces_fresh_ = true;
    for (double f : forces_)
        if (!std::isfinite(f))
            throw IntegrationError(
                "non-finite force at t = " + std::to_string(state.time) +
                " (N = " + std::to_string(state.n_particles) +
                ", P = " + std::to_string(state.n_beads) + ")");
    const double h = 0.5 * dt_;
    for (std::size_t n = 0; n < state.momenta.size(); ++n)
        state.momenta[n] += h * forces_[n];
}

void BaoabIntegrator::drift(RingPolymerState& state, double dt) {
    const int P = state.n_beads;
    if (P == 1) {
        for (int i = 0; i < state.n_particles; ++i)
            for (int d = 0; d < state.dimension; ++d)
                state.pos(i, 0, d) += dt * state.mom(i, 0, d) / spec_.masses[i];
        return;
    }
    // exact harmonic evolution of the free ring in normal modes
    for (int i = 0; i < state.n_particles; ++i) {
        const double m = spec_.masses[i];
        for (int d = 0; d < state.dimension; ++d) {
            double* q0 = &state.positions[state.index(i, 0, d)];
            double* p0 = &state.momenta[state.index(i, 0, d)];
            modes_.to_modes(q0, mode_q_.data(), state.dimension);
            modes_.to_modes(p0, mode_p_.data(), state.dimension);
            mode_q_[0] += dt * mode_p_[0] / m;
            for (int k = 1; k < P; ++k) {
                const double w = modes_.frequencies[k] * omega_p_;
                const double c = std::cos(w * dt), s = std::sin(w * dt);
                const double q = mode_q_[k], p = mode_p_[k];
                mode_q_[k] = q * c + p * s / (m * w);
                mode_p_[k] = p * c - m * w * q * s;
            }
            modes_.to_beads(mode_q_.data(), q0, state.dimension);
            modes_.to_beads(mode_p_.data(), p0, state.dimension);
        }
    }
}

void BaoabIntegrator::thermostat_step(RingPolymerState& state, double dt,
                                      RandomStream& rng) {
    if (thermostat_.kind == ThermostatKind::none) return;
    if (thermostat_.kind == ThermostatKind::external) {
        if (o_step_) o_step_(state, dt, rng);
        return;
    }
    // PILE-L: per-mode OU, centroid friction 1/tau, internal modes 2*omega_k
    const double T = thermostat_.target_T;
    const int P = state.n_beads;
    for (int i = 0; i < state.n_particles; ++i) {
        const double m = spec_.masses[i];
        const double sigma = std::sqrt(m * T);
        for (int d = 0; d < state.dimension; ++d) {
            double* p0 = &state.momenta[state.index(i, 0, d)];
            modes_.to_modes(p0, mode_p_.data(), state.dimension);
            for (int k = 0; k < P; ++k) {
                const double gamma = k == 0 ? 1.0 / thermostat_.tau
                                            : 2.0 * modes_.frequencies[k] * omega_p_;
                const double c = std::exp(-gamma * dt);
                mode_p_[k] = c * mode_p_[k] +
                             std::sqrt(1.0 - c * c) * sigma * rng.gaussian();
            }
            modes_.to_beads(mode_p_.data(), p0, state.dimension);
        }
    }
}

void BaoabIntegrator::step(RingPolymerState& state) {
    RandomStream rng(seed_, thermostat_.stream_id, state.rng_cursor);
    half_kick(state);
    forces_fresh_ = false;
    drift(state, 0.5 * dt_);
    thermostat_step(state, dt_, rng);
    drift(state, 0.5 * dt_);
    half_kick(state);
    state.time += dt_;
    state.rng_cursor = rng.cursor();
}

void sample_momenta(RingPolymerState& state, const SystemSpec& spec, double T,
                    RandomStream& rng) {
    for (int i = 0; i < state.n_particles; ++i) {
        const double sigma = std::sqrt(spec.masses[i] * T);
        for (int j = 0; j < state.n_beads; ++j)
            for (int d = 0; d < state.dimension; ++d)
                state.mom(i, j, d) = sigma * rng.gaussian();
    }
    state.rng_cursor = rng.cursor();
}

}  // namespace npi
