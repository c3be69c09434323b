#ifndef NPI_NORMAL_MODES_HPP
#define NPI_NORMAL_MODES_HPP

#include <vector>

namespace npi {

// Orthogonal transform diagonalizing the cyclic spring matrix of the ring
// polymer. Row k of `transform` is mode k; `frequencies` holds the mode
// frequencies in units of omega_P: freq[k] = 2 sin(k pi / P), so mode 0 is
// the centroid with frequency 0.
struct NormalModeBasis {
    int n_beads = 1;
    std::vector<double> transform;    // P x P row-major, modes in rows
    std::vector<double> frequencies;  // units of omega_P

    double at(int mode, int bead) const {
        return transform[static_cast<std::size_t>(mode) * n_beads + bead];
    }

    // beads -> modes: out[k] = sum_j C[k][j] in[j]
    void to_modes(const double* beads, double* modes, int stride = 1) const;
    // modes -> beads (transpose; the matrix is orthogonal)
    void to_beads(const double* modes, double* beads, int stride = 1) const;
};

NormalModeBasis build_normal_modes(int n_beads);

}  // namespace npi

#endif
