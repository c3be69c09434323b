#ifndef NPI_EXPERIMENT_HPP
#define NPI_EXPERIMENT_HPP

#include <string>
#include <vector>

#include "npi/config.hpp"

namespace npi {

inline constexpr const char* kToolVersion = "1.0.0";

struct RunManifest {
    std::string config_hash;   // hash of the rendered config document
    std::string physics_hash;  // hash with seed/output stripped (see summarize)
    std::uint64_t seed = 0;
    std::string tool_version;
    std::string started_at;
    std::string finished_at;
    std::string status;  // "running" -> "ok" | "failed"
    std::vector<std::string> files;  // paths relative to the run directory
    std::string error;               // set when status == "failed"

    std::string path;  // where the manifest itself lives (absolute/as-given)
};

// Executes the configured experiment under config.seed, writing CSVs,
// checkpoints and a manifest.json into config.output_dir. The manifest is
// written in "running" state first and finalized afterwards; on error the
// partial outputs are retained and the manifest is marked failed before the
// exception propagates.
RunManifest run_experiment(const ExperimentConfig& config, int workers = 1);

RunManifest load_manifest(const std::string& path);

struct SummaryRow {
    int n_beads = 0;
    double temperature = 0.0;  // steady middle-region temperature (gradient)
    double flux = 0.0;         // oriented middle flux (gradient)
    double energy = 0.0;       // mean energy estimate (other modes)
    double delta_flux = 0.0;   // |J(P) - J(P_prev)| / |J(P_prev)|
    std::string source;
};

struct Summary {
    std::vector<SummaryRow> rows;

    std::string text() const;
    std::string csv() const;
};

// Cross-run comparison of summary rows; refuses manifests whose physics
// hashes differ (different potentials, temperatures, ...).
Summary summarize(const std::vector<std::string>& manifest_paths);

}  // namespace npi

#endif
