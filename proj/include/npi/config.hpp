#ifndef NPI_CONFIG_HPP
#define NPI_CONFIG_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "npi/core.hpp"
#include "npi/integrator.hpp"
#include "npi/master_eq.hpp"

namespace npi {

// Carries every validation problem found in a config document, not just the
// first one.
struct ConfigError : std::runtime_error {
    explicit ConfigError(std::vector<std::string> errors);
    std::vector<std::string> errors;
};

enum class ExperimentMode {
    equilibrium,
    npi_gradient,
    lindblad,
    redfield,
    oscillator_benchmark,
};

std::string to_string(ExperimentMode mode);

struct EquilibriumSection {
    long n_steps = 10000;
    double dt = 0.01;
    int sample_stride = 10;
    ThermostatSpec thermostat = ThermostatSpec::pile_l(1.0, 1.0);
    std::vector<std::string> observables;

    bool operator==(const EquilibriumSection&) const;
};

struct BranchSection {
    int n_branches = 27;
    int spacing_steps = 100;
    long length_steps = 1000;
    int record_stride = 10;
    bool continue_equilibrium_stream = false;

    bool operator==(const BranchSection&) const = default;
};

struct GradientSection {
    double t_hot = 1.1;
    double t_cold = 0.9;
    double gamma = 1.0;
    int axis = 0;
    int n_bins = 16;
    double switch_on_time = 0.0;
    long warmup_steps = 0;  // branch steps discarded before steady averaging

    bool operator==(const GradientSection&) const = default;
};

// dense complex operator: named preset, optionally scaled, or explicit
// real/imag matrices
struct OperatorSpec {
    std::string preset;  // sigma_x|sigma_y|sigma_z|sigma_plus|sigma_minus|identity
    double scale = 1.0;
    std::vector<std::vector<double>> real;
    std::vector<std::vector<double>> imag;

    CMatrix build(int expected_dim = 0) const;
    bool operator==(const OperatorSpec&) const = default;
};

struct QuantumSection {
    OperatorSpec hamiltonian;
    std::vector<std::pair<OperatorSpec, double>> jumps;   // lindblad
    std::vector<OperatorSpec> couplings;                  // redfield
    std::vector<std::pair<double, double>> rates;         // redfield R(omega)
    double alpha2 = 1.0;
    std::string initial = "maximally_mixed";  // or "pure"
    std::vector<double> initial_real, initial_imag;
    double t_final = 1.0;
    double dt = 1e-3;
    int record_stride = 1;

    bool operator==(const QuantumSection&) const = default;
};

struct OscillatorSection {
    double omega = 1.0;
    long n_steps = 200000;
    double dt = 0.05;
    int sample_stride = 10;
    double tolerance = 0.02;  // relative, against the finite-P oracle

    bool operator==(const OscillatorSection&) const = default;
};

struct ExperimentConfig {
    ExperimentMode mode = ExperimentMode::equilibrium;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    std::vector<int> n_beads = {1};  // P sweep list

    SystemSpec system;
    EquilibriumSection equilibrium;
    BranchSection branches;
    GradientSection gradient;
    QuantumSection quantum;
    OscillatorSection oscillator;

    bool operator==(const ExperimentConfig&) const;
};

// Parses and fully validates a JSON config document. Throws ConfigError with
// every diagnostic found (unknown keys name the nearest valid key).
ExperimentConfig parse_config(const std::string& text);

// Inverse of parse_config: parse_config(render_config(c)) == c.
std::string render_config(const ExperimentConfig& config);

// Hash of the physics content (render with seed/output_dir stripped), used by
// summarize to refuse cross-physics comparisons.
std::string physics_hash(const ExperimentConfig& config);

}  // namespace npi

#endif
