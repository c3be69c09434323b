#ifndef NPI_THERMAL_HPP
#define NPI_THERMAL_HPP

#include <map>
#include <optional>
#include <vector>

#include "npi/core.hpp"
#include "npi/potentials.hpp"
#include "npi/rng.hpp"

namespace npi {

enum class RegionRole { hot, middle, cold };

// Partition of one periodic axis into intervals [boundaries[r], boundaries[r+1]).
// The default layout is the symmetric hot-middle-cold-middle-hot arrangement
// with the hot ends at half the width of the other regions.
struct RegionLayout {
    int axis = 0;
    std::vector<double> boundaries;  // n_regions + 1 values, first 0, last L
    std::vector<RegionRole> roles;   // one per interval

    int n_regions() const { return static_cast<int>(roles.size()); }

    static RegionLayout symmetric(double box_length, int axis = 0);

    void validate(const SystemSpec& spec) const;

    // interval containing wrapped coordinate x; boundary points belong to the
    // lower-indexed interval
    int region_of(double x, double box_length) const;
};

// region index -> (target temperature, friction)
struct RegionTargets {
    std::map<int, std::pair<double, double>> bath;  // region -> (T, gamma)
};

// per-particle region labels by ring-centroid position
std::vector<int> assign_regions(const RegionLayout& layout,
                                const RingPolymerState& state,
                                const SystemSpec& spec);

// OU update on the bead momenta of particles in thermostatted regions;
// middle regions must not appear in `targets`. Returns the kinetic-energy
// change (thermostat work), used for energy bookkeeping.
double apply_region_thermostats(RingPolymerState& state,
                                const std::vector<int>& labels,
                                const RegionLayout& layout,
                                const RegionTargets& targets,
                                const SystemSpec& spec, double dt,
                                RandomStream& rng);

struct ProfileBin {
    double center = 0.0;
    std::optional<double> temperature;  // absent when count == 0
    long count = 0;
};

enum class TemperatureMode { bead_kinetic, centroid_kinetic };

// Accumulates a temperature profile along the layout axis by spatially
// binning particles (by ring centroid) over post-warm-up snapshots.
class ProfileAccumulator {
public:
    ProfileAccumulator(int n_bins, double box_length, int axis,
                       TemperatureMode mode);

    void add(const RingPolymerState& state, const SystemSpec& spec);
    std::vector<ProfileBin> profile() const;

private:
    int n_bins_;
    double box_length_;
    int axis_;
    TemperatureMode mode_;
    std::vector<double> kinetic_;  // accumulated 2K per bin
    std::vector<long> dof_;
    std::vector<long> count_;
};

struct FluxRecord {
    double time = 0.0;
    double flux = 0.0;  // energy * velocity per particle, reduced units
    int region = -1;
};

// Irving-Kirkwood heat flux of one region, bead-averaged:
//   J = sum_i e_i v_i + (1/2) sum_i sum_j z_ij (F_ij . v_i)
// over member particles, divided by the member count. Positive flux points
// along +axis.
FluxRecord heat_flux(const RingPolymerState& state, const ForceField& field,
                     const SystemSpec& spec, const std::vector<int>& labels,
                     const RegionLayout& layout, int region);

// Net hot-to-cold flux through the middle regions: the two middles carry
// opposite signs in the symmetric layout, so this returns
// (J_mid_left - J_mid_right) / 2.
double oriented_middle_flux(const RingPolymerState& state,
                            const ForceField& field, const SystemSpec& spec,
                            const std::vector<int>& labels,
                            const RegionLayout& layout);

struct SteadyStateResult {
    bool steady = false;
    double onset_time = 0.0;
};

// Declares steady state at the first pair of consecutive windows whose means
// differ by less than `tolerance` in every supplied series.
SteadyStateResult steady_state_detector(
    const std::vector<std::vector<double>>& series,
    const std::vector<double>& times, int window, double tolerance);

}  // namespace npi

#endif
