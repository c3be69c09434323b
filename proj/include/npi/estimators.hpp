#ifndef NPI_ESTIMATORS_HPP
#define NPI_ESTIMATORS_HPP

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "npi/core.hpp"
#include "npi/potentials.hpp"

namespace npi {

// observable defined on one bead slice (N x dim positions)
using SliceObservable =
    std::function<double(const SystemSpec&, std::span<const double>)>;

struct EstimatorSample {
    double time = 0.0;
    std::map<std::string, double> values;
};

// bead-averaged estimator A_P = (1/P) sum_j A(slice j)
double estimator_position_observable(const RingPolymerState& state,
                                     const SystemSpec& spec,
                                     const SliceObservable& A);

double kinetic_energy(const RingPolymerState& state, const SystemSpec& spec);

// bead-kinetic temperature 2K/(N P d); with `centroid` set, uses centroid
// momenta and N d degrees of freedom instead
double kinetic_temperature(const RingPolymerState& state, const SystemSpec& spec,
                           bool centroid = false);

// Primitive energy estimator: N P d / (2 beta) - spring energy + (1/P) sum U.
double energy_estimator_primitive(const RingPolymerState& state,
                                  const ForceField& field,
                                  const SystemSpec& spec);

// Centroid-virial energy estimator:
//   N d / (2 beta) + (1/2P) sum_{i,j} (r_i^(j) - rbar_i) . dU_j/dr_i^(j)
//   + (1/P) sum_j U_j.
double energy_estimator_virial(const RingPolymerState& state,
                               const ForceField& field, const SystemSpec& spec);

// Named pure functions of the bead-slice positions, selected by key from
// configs. Built-in names:
//   "x:<i>:<d>"  position of particle i along axis d
//   "potential"  slice potential energy
class ObservableRegistry {
public:
    static SliceObservable lookup(const std::string& name,
                                  const ForceField& field);
};

}  // namespace npi

#endif
