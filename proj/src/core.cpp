#include "npi/core.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstring>
#include <set>

namespace npi {

std::string to_string(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::harmonic_bond: return "harmonic_bond";
        case PotentialKind::morse: return "morse";
        case PotentialKind::lennard_jones: return "lennard_jones";
        case PotentialKind::harmonic_angle: return "harmonic_angle";
        case PotentialKind::external_well: return "external_well";
    }
    throw std::logic_error("unknown PotentialKind");
}

PotentialKind potential_kind_from_string(const std::string& name) {
    if (name == "harmonic_bond") return PotentialKind::harmonic_bond;
    if (name == "morse") return PotentialKind::morse;
    if (name == "lennard_jones") return PotentialKind::lennard_jones;
    if (name == "harmonic_angle") return PotentialKind::harmonic_angle;
    if (name == "external_well") return PotentialKind::external_well;
    throw std::invalid_argument("unknown potential kind: " + name);
}

void SystemSpec::validate() const {
    if (n_particles < 1) throw std::invalid_argument("SystemSpec: N must be >= 1");
    if (static_cast<int>(masses.size()) != n_particles)
        throw std::invalid_argument("SystemSpec: need one mass per particle");
    for (double m : masses)
        if (!(m > 0.0)) throw std::invalid_argument("SystemSpec: masses must be > 0");
    if (dimension < 1 || dimension > 3)
        throw std::invalid_argument("SystemSpec: dimension must be 1, 2 or 3");
    if (static_cast<int>(box_length.size()) != dimension ||
        static_cast<int>(periodic.size()) != dimension)
        throw std::invalid_argument("SystemSpec: box_length/periodic need one entry per axis");
    for (double L : box_length)
        if (!(L > 0.0)) throw std::invalid_argument("SystemSpec: box lengths must be > 0");
    if (!(beta > 0.0)) throw std::invalid_argument("SystemSpec: beta must be > 0");
    if (!(hbar > 0.0)) throw std::invalid_argument("SystemSpec: hbar must be > 0");

    std::set<std::pair<PotentialKind, std::vector<int>>> seen;
    for (const auto& term : topology) {
        for (int p : term.particles)
            if (p < 0 || p >= n_particles)
                throw std::invalid_argument("SystemSpec: topology index out of range");
        for (double v : term.params)
            if (!std::isfinite(v))
                throw std::invalid_argument("SystemSpec: non-finite potential parameter");
        if (term.kind != PotentialKind::external_well) {
            auto key = std::make_pair(term.kind, term.particles);
            if (!seen.insert(key).second)
                throw std::invalid_argument("SystemSpec: duplicate bonded term over the same particle tuple");
        }
    }
}

namespace {

void push_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

void push_f64(std::vector<std::uint8_t>& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    push_u64(out, bits);
}

}  // namespace

std::vector<std::uint8_t> SystemSpec::canonical_bytes() const {
    std::vector<std::uint8_t> out;
    push_u64(out, static_cast<std::uint64_t>(n_particles));
    push_u64(out, static_cast<std::uint64_t>(dimension));
    for (double m : masses) push_f64(out, m);
    for (double L : box_length) push_f64(out, L);
    for (bool p : periodic) out.push_back(p ? 1 : 0);
    push_f64(out, beta);
    push_f64(out, hbar);
    push_u64(out, topology.size());
    for (const auto& term : topology) {
        out.push_back(static_cast<std::uint8_t>(term.kind));
        push_u64(out, term.particles.size());
        for (int p : term.particles) push_u64(out, static_cast<std::uint64_t>(p));
        push_u64(out, term.params.size());
        for (double v : term.params) push_f64(out, v);
    }
    return out;
}

std::array<std::uint8_t, 32> spec_hash(const SystemSpec& spec) {
    const auto bytes = spec.canonical_bytes();
    std::array<std::uint8_t, 32> digest{};
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(),
               nullptr);
    return digest;
}

RingPolymerState RingPolymerState::zeros(int n_particles, int n_beads,
                                         int dimension) {
    RingPolymerState s;
    s.n_particles = n_particles;
    s.n_beads = n_beads;
    s.dimension = dimension;
    const std::size_t n = static_cast<std::size_t>(n_particles) * n_beads * dimension;
    s.positions.assign(n, 0.0);
    s.momenta.assign(n, 0.0);
    return s;
}

bool RingPolymerState::finite() const {
    auto ok = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    return ok(positions) && ok(momenta) && std::isfinite(time);
}

void RingPolymerState::validate() const {
    if (n_particles < 1 || n_beads < 1)
        throw std::invalid_argument("RingPolymerState: N and P must be >= 1");
    if (dimension < 1 || dimension > 3)
        throw std::invalid_argument("RingPolymerState: dimension must be 1, 2 or 3");
    const std::size_t n = static_cast<std::size_t>(n_particles) * n_beads * dimension;
    if (positions.size() != n || momenta.size() != n)
        throw std::invalid_argument("RingPolymerState: array shape mismatch");
    if (!finite()) throw std::invalid_argument("RingPolymerState: non-finite values");
    if (time < 0.0) throw std::invalid_argument("RingPolymerState: negative time");
}

}  // namespace npi
