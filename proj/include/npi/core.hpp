#ifndef NPI_CORE_HPP
#define NPI_CORE_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "npi/potential_term.hpp"

namespace npi {

// Reduced units throughout: k_B = 1, masses/lengths/energies dimensionless,
// hbar configurable (default 1). beta = 1/T.

// Spring frequency of the polymer ring, omega_P = sqrt(P) / (beta * hbar).
inline double omega_p(double beta, double hbar, int n_beads) {
    if (beta <= 0.0 || hbar <= 0.0 || n_beads < 1)
        throw std::domain_error("omega_p: beta, hbar and n_beads must be positive");
    return std::sqrt(static_cast<double>(n_beads)) / (beta * hbar);
}

struct SystemSpec {
    int n_particles = 0;
    std::vector<double> masses;  // one per particle
    int dimension = 1;
    std::vector<double> box_length;   // per axis
    std::vector<bool> periodic;       // per axis
    double beta = 1.0;
    double hbar = 1.0;
    std::vector<PotentialTerm> topology;

    double temperature() const { return 1.0 / beta; }

    // throws std::invalid_argument on the first violated invariant
    void validate() const;

    // canonical little-endian byte serialization, input to spec hashing
    std::vector<std::uint8_t> canonical_bytes() const;
};

// 32-byte content hash of a SystemSpec
std::array<std::uint8_t, 32> spec_hash(const SystemSpec& spec);

// Positions/momenta of N particles x P beads, row-major (particle, bead, axis).
// Bead indexing is cyclic: the neighbor of bead P-1 is bead 0.
struct RingPolymerState {
    int n_particles = 0;
    int n_beads = 0;
    int dimension = 1;
    std::vector<double> positions;
    std::vector<double> momenta;
    double time = 0.0;
    std::uint64_t rng_cursor = 0;

    static RingPolymerState zeros(int n_particles, int n_beads, int dimension);

    std::size_t index(int particle, int bead, int axis) const {
        return (static_cast<std::size_t>(particle) * n_beads + bead) * dimension +
               axis;
    }
    double& pos(int i, int j, int d) { return positions[index(i, j, d)]; }
    double pos(int i, int j, int d) const { return positions[index(i, j, d)]; }
    double& mom(int i, int j, int d) { return momenta[index(i, j, d)]; }
    double mom(int i, int j, int d) const { return momenta[index(i, j, d)]; }

    int next_bead(int j) const { return j + 1 == n_beads ? 0 : j + 1; }
    int prev_bead(int j) const { return j == 0 ? n_beads - 1 : j - 1; }

    // centroid position of one particle along one axis
    double centroid(int particle, int axis) const {
        double c = 0.0;
        for (int j = 0; j < n_beads; ++j) c += pos(particle, j, axis);
        return c / n_beads;
    }

    bool finite() const;
    void validate() const;

    bool operator==(const RingPolymerState&) const = default;
};

// minimum-image displacement a-b along one axis
inline double min_image(double delta, double box, bool periodic) {
    if (periodic) delta -= box * std::round(delta / box);
    return delta;
}

inline double wrap(double x, double box) {
    x = std::fmod(x, box);
    return x < 0.0 ? x + box : x;
}

}  // namespace npi

#endif
