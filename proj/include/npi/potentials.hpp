#ifndef NPI_POTENTIALS_HPP
#define NPI_POTENTIALS_HPP

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "npi/core.hpp"

namespace npi {

struct SingularConfigurationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// LJ energies above this threshold raise SingularConfigurationError instead
// of silently overflowing.
inline constexpr double kSingularEnergyThreshold = 1e12;

// Bonded + nonbonded interaction terms, evaluated bead-index-wise: the
// potential couples only beads with the same index on different rings.
// Immutable after construction; safe to share across workers.
class ForceField {
public:
    ForceField() = default;
    explicit ForceField(std::vector<PotentialTerm> terms)
        : terms_(std::move(terms)) {}

    const std::vector<PotentialTerm>& terms() const { return terms_; }

    // Potential energy of one bead slice; `slice` is the N x dim position
    // block of bead j, row-major.
    double energy_slice(const SystemSpec& spec,
                        std::span<const double> slice) const;

    // Accumulates -dU/dr of one bead slice into `forces` (same shape as slice).
    // Returns the slice energy (one pass computes both).
    double forces_slice(const SystemSpec& spec, std::span<const double> slice,
                        std::span<double> forces) const;

    // Per-particle potential energy of one bead slice (pair energies split
    // half/half); used by the heat-flux estimator.
    void per_particle_energy_slice(const SystemSpec& spec,
                                   std::span<const double> slice,
                                   std::span<double> energies) const;

    // Visits every radial pair term of one bead slice with the force on i and
    // the min-image displacement r_i - r_j; used by the heat-flux virial term.
    // callback(i, j, force_on_i[dim], delta_ij[dim])
    using PairVisitor = std::function<void(int, int, const double*, const double*)>;
    void for_each_pair(const SystemSpec& spec, std::span<const double> slice,
                       const PairVisitor& visit) const;

private:
    std::vector<PotentialTerm> terms_;
};

// Harmonic spring energy of the ring polymers:
//   sum_j sum_i 1/2 m_i omega_P^2 (r_i^(j+1) - r_i^(j))^2, cyclic closure.
double spring_energy(const ForceField& field, const SystemSpec& spec,
                     const RingPolymerState& state);

// H_P potential part: spring energy + (1/P) sum_j U(bead slice j).
double total_ring_potential(const ForceField& field, const SystemSpec& spec,
                            const RingPolymerState& state);

// copies the N x dim position block of bead j out of a state
std::vector<double> gather_slice(const RingPolymerState& state, int bead);

// Physical forces on all beads from the (1/P) U coupling of H_P:
// out[index(i,j,d)] = -(1/P) dU_j/dr. Returns (1/P) sum_j U_j.
double polymer_forces(const ForceField& field, const SystemSpec& spec,
                      const RingPolymerState& state, std::vector<double>& out);

}  // namespace npi

#endif
