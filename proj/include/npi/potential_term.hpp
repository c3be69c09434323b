#ifndef NPI_POTENTIAL_TERM_HPP
#define NPI_POTENTIAL_TERM_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace npi {

enum class PotentialKind : std::uint8_t {
    harmonic_bond,   // k, r0          (i, j)
    morse,           // D, a, r0       (i, j)
    lennard_jones,   // eps, sigma, cutoff  (i, j)
    harmonic_angle,  // k_theta, theta0     (i, j, k), j is the vertex
    external_well,   // k_ext, center (per axis)  (i)
};

std::string to_string(PotentialKind kind);
PotentialKind potential_kind_from_string(const std::string& name);

// One interaction term of the force field. Parameter meaning depends on kind;
// `particles` holds the member particle indices in the order listed above.
struct PotentialTerm {
    PotentialKind kind;
    std::vector<int> particles;
    std::vector<double> params;

    static PotentialTerm harmonic_bond(int i, int j, double k, double r0) {
        return {PotentialKind::harmonic_bond, {i, j}, {k, r0}};
    }
    static PotentialTerm morse(int i, int j, double D, double a, double r0) {
        return {PotentialKind::morse, {i, j}, {D, a, r0}};
    }
    static PotentialTerm lennard_jones(int i, int j, double eps, double sigma,
                                       double cutoff) {
        return {PotentialKind::lennard_jones, {i, j}, {eps, sigma, cutoff}};
    }
    static PotentialTerm harmonic_angle(int i, int j, int k, double k_theta,
                                        double theta0) {
        return {PotentialKind::harmonic_angle, {i, j, k}, {k_theta, theta0}};
    }
    static PotentialTerm external_well(int i, double k_ext,
                                       std::vector<double> center) {
        PotentialTerm t{PotentialKind::external_well, {i}, {k_ext}};
        t.params.insert(t.params.end(), center.begin(), center.end());
        return t;
    }

    bool operator==(const PotentialTerm&) const = default;
};

}  // namespace npi

#endif
