#include "npi/potentials.hpp"

#include <algorithm>
#include <cmath>

namespace npi {

namespace {

struct PairGeometry {
    double r;
    double delta[3];  // min-image displacement r_i - r_j
};

PairGeometry pair_geometry(const SystemSpec& spec, std::span<const double> slice,
                           int i, int j) {
    PairGeometry g{0.0, {0.0, 0.0, 0.0}};
    double r2 = 0.0;
    for (int d = 0; d < spec.dimension; ++d) {
        double delta = slice[i * spec.dimension + d] - slice[j * spec.dimension + d];
        delta = min_image(delta, spec.box_length[d], spec.periodic[d]);
        g.delta[d] = delta;
        r2 += delta * delta;
    }
    g.r = std::sqrt(r2);
    return g;
}

// returns energy; if dU_dr is non-null, stores dU/dr there
double radial_energy(const PotentialTerm& term, double r, double* dU_dr) {
    switch (term.kind) {
        case PotentialKind::harmonic_bond: {
            const double k = term.params[0], r0 = term.params[1];
            if (dU_dr) *dU_dr = k * (r - r0);
            return 0.5 * k * (r - r0) * (r - r0);
        }
        case PotentialKind::morse: {
            const double D = term.params[0], a = term.params[1], r0 = term.params[2];
            const double e = std::exp(-a * (r - r0));
            if (dU_dr) *dU_dr = 2.0 * D * a * e * (1.0 - e);
            return D * (1.0 - e) * (1.0 - e);
        }
        case PotentialKind::lennard_jones: {
            const double eps = term.params[0], sigma = term.params[1],
                         cutoff = term.params[2];
            if (r >= cutoff) {
                if (dU_dr) *dU_dr = 0.0;
                return 0.0;
            }
            const double sr6 = std::pow(sigma / r, 6);
            const double sr12 = sr6 * sr6;
            const double u = 4.0 * eps * (sr12 - sr6);
            if (u > kSingularEnergyThreshold)
                throw SingularConfigurationError(
                    "LJ overlap: energy above singular-configuration threshold");
            // potential shifted so U(cutoff) = 0, force unshifted
            const double sc6 = std::pow(sigma / cutoff, 6);
            const double u_cut = 4.0 * eps * (sc6 * sc6 - sc6);
            if (dU_dr) *dU_dr = 4.0 * eps * (-12.0 * sr12 + 6.0 * sr6) / r;
            return u - u_cut;
        }
        default:
            throw std::logic_error("radial_energy: not a radial potential");
    }
}

double angle_energy(const PotentialTerm& term, const SystemSpec& spec,
                    std::span<const double> slice, std::span<double> forces) {
    const int i = term.particles[0], j = term.particles[1], k = term.particles[2];
    const double k_theta = term.params[0], theta0 = term.params[1];
    const auto a = pair_geometry(spec, slice, i, j);  // j -> i
    const auto b = pair_geometry(spec, slice, k, j);  // j -> k
    double dot = 0.0;
    for (int d = 0; d < spec.dimension; ++d) dot += a.delta[d] * b.delta[d];
    const double cosv = std::clamp(dot / (a.r * b.r), -1.0, 1.0);
    const double theta = std::acos(cosv);
    const double u = 0.5 * k_theta * (theta - theta0) * (theta - theta0);
    if (!forces.empty()) {
        const double sinv = std::sqrt(std::max(1.0 - cosv * cosv, 1e-14));
        const double dU_dtheta = k_theta * (theta - theta0);
        // dtheta/dr via gradients of cos(theta)
        for (int d = 0; d < spec.dimension; ++d) {
            const double dcos_di = b.delta[d] / (a.r * b.r) - cosv * a.delta[d] / (a.r * a.r);
            const double dcos_dk = a.delta[d] / (a.r * b.r) - cosv * b.delta[d] / (b.r * b.r);
            const double fi = dU_dtheta * dcos_di / sinv;  // -dU/dr_i
            const double fk = dU_dtheta * dcos_dk / sinv;
            forces[i * spec.dimension + d] += fi;
            forces[k * spec.dimension + d] += fk;
            forces[j * spec.dimension + d] -= fi + fk;
        }
    }
    return u;
}

double well_energy(const PotentialTerm& term, const SystemSpec& spec,
                   std::span<const double> slice, std::span<double> forces) {
    const int i = term.particles[0];
    const double k_ext = term.params[0];
    double u = 0.0;
    for (int d = 0; d < spec.dimension; ++d) {
        const double dx = slice[i * spec.dimension + d] - term.params[1 + d];
        u += 0.5 * k_ext * dx * dx;
        if (!forces.empty()) forces[i * spec.dimension + d] -= k_ext * dx;
    }
    return u;
}

double eval_slice(const ForceField& field, const SystemSpec& spec,
                  std::span<const double> slice, std::span<double> forces,
                  std::span<double> per_particle) {
    double total = 0.0;
    for (const auto& term : field.terms()) {
        double u = 0.0;
        switch (term.kind) {
            case PotentialKind::harmonic_bond:
            case PotentialKind::morse:
            case PotentialKind::lennard_jones: {
                const int i = term.particles[0], j = term.particles[1];
                const auto g = pair_geometry(spec, slice, i, j);
                double dU_dr = 0.0;
                u = radial_energy(term, g.r, forces.empty() ? nullptr : &dU_dr);
                if (!forces.empty() && g.r > 0.0) {
                    for (int d = 0; d < spec.dimension; ++d) {
                        const double f = -dU_dr * g.delta[d] / g.r;  // on particle i
                        forces[i * spec.dimension + d] += f;
                        forces[j * spec.dimension + d] -= f;
                    }
                }
                if (!per_particle.empty()) {
                    per_particle[i] += 0.5 * u;
                    per_particle[j] += 0.5 * u;
                }
                break;
            }
            case PotentialKind::harmonic_angle: {
                u = angle_energy(term, spec, slice, forces);
                if (!per_particle.empty())
                    for (int p : term.particles) per_particle[p] += u / 3.0;
                break;
            }
            case PotentialKind::external_well: {
                u = well_energy(term, spec, slice, forces);
                if (!per_particle.empty()) per_particle[term.particles[0]] += u;
                break;
            }
        }
        total += u;
    }
    return total;
}

}  // namespace

double ForceField::energy_slice(const SystemSpec& spec,
                                std::span<const double> slice) const {
    return eval_slice(*this, spec, slice, {}, {});
}

double ForceField::forces_slice(const SystemSpec& spec,
                                std::span<const double> slice,
                                std::span<double> forces) const {
    std::fill(forces.begin(), forces.end(), 0.0);
    return eval_slice(*this, spec, slice, forces, {});
}

void ForceField::per_particle_energy_slice(const SystemSpec& spec,
                                           std::span<const double> slice,
                                           std::span<double> energies) const {
    std::fill(energies.begin(), energies.end(), 0.0);
    eval_slice(*this, spec, slice, {}, energies);
}

void ForceField::for_each_pair(const SystemSpec& spec,
                               std::span<const double> slice,
                               const PairVisitor& visit) const {
    for (const auto& term : terms_) {
        if (term.kind != PotentialKind::harmonic_bond &&
            term.kind != PotentialKind::morse &&
            term.kind != PotentialKind::lennard_jones)
            continue;
        const int i = term.particles[0], j = term.particles[1];
        const auto g = pair_geometry(spec, slice, i, j);
        if (g.r <= 0.0) continue;
        double dU_dr = 0.0;
        radial_energy(term, g.r, &dU_dr);
        double force_i[3] = {0.0, 0.0, 0.0};
        for (int d = 0; d < spec.dimension; ++d)
            force_i[d] = -dU_dr * g.delta[d] / g.r;
        visit(i, j, force_i, g.delta);
    }
}

std::vector<double> gather_slice(const RingPolymerState& state, int bead) {
    std::vector<double> slice(static_cast<std::size_t>(state.n_particles) *
                              state.dimension);
    for (int i = 0; i < state.n_particles; ++i)
        for (int d = 0; d < state.dimension; ++d)
            slice[i * state.dimension + d] = state.pos(i, bead, d);
    return slice;
}

double spring_energy(const ForceField&, const SystemSpec& spec,
                     const RingPolymerState& state) {
    if (state.n_beads == 1) return 0.0;
    const double wp = omega_p(spec.beta, spec.hbar, state.n_beads);
    double e = 0.0;
    for (int i = 0; i < state.n_particles; ++i) {
        const double mw2 = 0.5 * spec.masses[i] * wp * wp;
        for (int j = 0; j < state.n_beads; ++j) {
            const int jn = state.next_bead(j);
            for (int d = 0; d < state.dimension; ++d) {
                const double dx = state.pos(i, jn, d) - state.pos(i, j, d);
                e += mw2 * dx * dx;
            }
        }
    }
    return e;
}

double total_ring_potential(const ForceField& field, const SystemSpec& spec,
                            const RingPolymerState& state) {
    double u = 0.0;
    for (int j = 0; j < state.n_beads; ++j)
        u += field.energy_slice(spec, gather_slice(state, j));
    return spring_energy(field, spec, state) + u / state.n_beads;
}

double polymer_forces(const ForceField& field, const SystemSpec& spec,
                      const RingPolymerState& state, std::vector<double>& out) {
    out.assign(state.positions.size(), 0.0);
    std::vector<double> slice_forces(
        static_cast<std::size_t>(state.n_particles) * state.dimension);
    double u_total = 0.0;
    for (int j = 0; j < state.n_beads; ++j) {
        const auto slice = gather_slice(state, j);
        u_total += field.forces_slice(spec, slice, slice_forces);
        const double inv_p = 1.0 / state.n_beads;
        for (int i = 0; i < state.n_particles; ++i)
            for (int d = 0; d < state.dimension; ++d)
                out[state.index(i, j, d)] +=
                    inv_p * slice_forces[i * state.dimension + d];
    }
    return u_total / state.n_beads;
}

}  // namespace npi
