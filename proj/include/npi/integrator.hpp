#ifndef NPI_INTEGRATOR_HPP
#define NPI_INTEGRATOR_HPP

#include <functional>
#include <stdexcept>
#include <string>

#include "npi/core.hpp"
#include "npi/normal_modes.hpp"
#include "npi/potentials.hpp"
#include "npi/rng.hpp"

namespace npi {

struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ThermostatKind { none, pile_l, external };

// Thermostat attached to the BAOAB O-step. `pile_l` is the per-normal-mode
// Langevin thermostat (centroid friction 1/tau, internal modes 2*omega_k).
// `external` leaves the O-step to a caller-supplied hook (used for the
// region baths of the thermal-gradient runs).
struct ThermostatSpec {
    ThermostatKind kind = ThermostatKind::none;
    double tau = 1.0;       // centroid relaxation time (pile_l)
    double target_T = 1.0;  // bath temperature (pile_l)
    std::uint64_t stream_id = 0;

    static ThermostatSpec none() { return {}; }
    static ThermostatSpec pile_l(double tau, double target_T,
                                 std::uint64_t stream_id = 0) {
        return {ThermostatKind::pile_l, tau, target_T, stream_id};
    }
};

// BAOAB splitting for the polymer-ring Hamiltonian: half-kick from the
// physical (1/P)U forces, exact free-ring half drift in normal modes,
// Ornstein-Uhlenbeck step, second half drift, second half-kick. With
// thermostat kind none this is a symplectic NVE scheme for H_P.
class BaoabIntegrator {
public:
    // O-step hook for external thermostats: (state, dt, rng)
    using OStep = std::function<void(RingPolymerState&, double, RandomStream&)>;

    BaoabIntegrator(SystemSpec spec, ForceField field, int n_beads, double dt,
                    ThermostatSpec thermostat, std::uint64_t seed);

    void set_o_step(OStep o) { o_step_ = std::move(o); }

    // Advances one step; state.rng_cursor tracks consumed noise. One
    // integrator instance drives one trajectory (it caches forces between
    // consecutive steps). Use reset_force_cache() after mutating positions
    // externally.
    void step(RingPolymerState& state);
    void reset_force_cache() { forces_fresh_ = false; }

    // potential part of H_P at the current state (springs + (1/P) sum U)
    double potential(const RingPolymerState& state) const {
        return total_ring_potential(field_, spec_, state);
    }
    double hamiltonian(const RingPolymerState& state) const;

    const SystemSpec& spec() const { return spec_; }
    const ForceField& field() const { return field_; }
    const NormalModeBasis& modes() const { return modes_; }
    double dt() const { return dt_; }
    double omega_max() const { return omega_max_; }
    bool dt_warning() const { return dt_warning_; }

private:
    void half_kick(RingPolymerState& state);
    void drift(RingPolymerState& state, double dt);
    void thermostat_step(RingPolymerState& state, double dt, RandomStream& rng);

    SystemSpec spec_;
    ForceField field_;
    NormalModeBasis modes_;
    double dt_;
    ThermostatSpec thermostat_;
    std::uint64_t seed_;
    OStep o_step_;
    double omega_p_;
    double omega_max_;
    bool dt_warning_ = false;
    bool forces_fresh_ = false;
    std::vector<double> forces_;
    std::vector<double> mode_q_, mode_p_;
};

// draws momenta from the Maxwell-Boltzmann distribution at temperature T
void sample_momenta(RingPolymerState& state, const SystemSpec& spec, double T,
                   RandomStream& rng);

}  // namespace npi

#endif
