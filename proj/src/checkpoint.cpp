#include "npi/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <vector>

namespace npi {

namespace {

constexpr char kMagic[4] = {'N', 'P', 'I', '1'};

void write_u32(std::ostream& os, std::uint32_t v) {
    char buf[4];
    for (int b = 0; b < 4; ++b) buf[b] = static_cast<char>(v >> (8 * b));
    os.write(buf, 4);
}

void write_u64(std::ostream& os, std::uint64_t v) {
    char buf[8];
    for (int b = 0; b < 8; ++b) buf[b] = static_cast<char>(v >> (8 * b));
    os.write(buf, 8);
}

void write_f64(std::ostream& os, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    write_u64(os, bits);
}

void write_array(std::ostream& os, const std::vector<double>& data,
                 std::initializer_list<std::uint64_t> dims) {
    os.put(static_cast<char>(dims.size()));
    for (std::uint64_t d : dims) write_u64(os, d);
    for (double v : data) write_f64(os, v);
}

std::uint32_t read_u32(std::istream& is) {
    unsigned char buf[4];
    is.read(reinterpret_cast<char*>(buf), 4);
    if (!is) throw CheckpointError("checkpoint truncated");
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(buf[b]) << (8 * b);
    return v;
}

std::uint64_t read_u64(std::istream& is) {
    unsigned char buf[8];
    is.read(reinterpret_cast<char*>(buf), 8);
    if (!is) throw CheckpointError("checkpoint truncated");
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(buf[b]) << (8 * b);
    return v;
}

double read_f64(std::istream& is) {
    std::uint64_t bits = read_u64(is);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

std::vector<double> read_array(std::istream& is, std::uint64_t d0,
                               std::uint64_t d1, std::uint64_t d2) {
    int rank = is.get();
    if (rank != 3) throw CheckpointError("checkpoint: unexpected array rank");
    if (read_u64(is) != d0 || read_u64(is) != d1 || read_u64(is) != d2)
        throw CheckpointError("checkpoint: array shape mismatch");
    std::vector<double> data(d0 * d1 * d2);
    for (double& v : data) v = read_f64(is);
    return data;
}

}  // namespace

void save_checkpoint(const RingPolymerState& state, const SystemSpec& spec,
                     const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw CheckpointError("cannot open checkpoint for writing: " + path);

    os.write(kMagic, 4);
    write_u32(os, kCheckpointVersion);
    const auto hash = spec_hash(spec);
    os.write(reinterpret_cast<const char*>(hash.data()), hash.size());

    write_f64(os, state.time);
    write_u64(os, state.rng_cursor);
    write_u64(os, static_cast<std::uint64_t>(state.n_particles));
    write_u64(os, static_cast<std::uint64_t>(state.n_beads));
    write_u64(os, static_cast<std::uint64_t>(state.dimension));
    const auto N = static_cast<std::uint64_t>(state.n_particles);
    const auto P = static_cast<std::uint64_t>(state.n_beads);
    const auto D = static_cast<std::uint64_t>(state.dimension);
    write_array(os, state.positions, {N, P, D});
    write_array(os, state.momenta, {N, P, D});
    if (!os) throw CheckpointError("checkpoint write failed: " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path,
                                 const SystemSpec* expected_spec) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw CheckpointError("cannot open checkpoint: " + path);

    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw CheckpointError("checkpoint: bad magic bytes");
    const std::uint32_t version = read_u32(is);
    if (version != kCheckpointVersion)
        throw CheckpointError("checkpoint: unsupported format_version " +
                              std::to_string(version));

    LoadedCheckpoint out;
    is.read(reinterpret_cast<char*>(out.spec_hash.data()), out.spec_hash.size());
    if (!is) throw CheckpointError("checkpoint truncated");
    if (expected_spec && out.spec_hash != spec_hash(*expected_spec))
        throw CheckpointError("checkpoint: spec hash mismatch");

    RingPolymerState& s = out.state;
    s.time = read_f64(is);
    s.rng_cursor = read_u64(is);
    s.n_particles = static_cast<int>(read_u64(is));
    s.n_beads = static_cast<int>(read_u64(is));
    s.dimension = static_cast<int>(read_u64(is));
    if (s.n_particles < 1 || s.n_beads < 1 || s.dimension < 1 || s.dimension > 3)
        throw CheckpointError("checkpoint: invalid state header");
    const auto N = static_cast<std::uint64_t>(s.n_particles);
    const auto P = static_cast<std::uint64_t>(s.n_beads);
    const auto D = static_cast<std::uint64_t>(s.dimension);
    s.positions = read_array(is, N, P, D);
    s.momenta = read_array(is, N, P, D);
    return out;
}

}  // namespace npi
