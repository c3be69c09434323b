#include "npi/experiment.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <nlohmann/json.hpp>
#include <sstream>

#include "npi/checkpoint.hpp"
#include "npi/dnemd.hpp"
#include "npi/estimators.hpp"
#include "npi/sampling.hpp"
#include "npi/thermal.hpp"

namespace npi {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// locale-independent number formatting for CSV ('.' decimal, 12 significant
// digits keeps seeded reruns byte-identical)
std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string sha256_hex(const std::string& text) {
    unsigned char digest[32];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(),
                   nullptr) != 1 || len != 32)
        throw std::runtime_error("sha256: digest failure");
    static const char* hex = "0123456789abcdef";
    std::string out(64, '0');
    for (int i = 0; i < 32; ++i) {
        out[2 * i] = hex[digest[i] >> 4];
        out[2 * i + 1] = hex[digest[i] & 0xf];
    }
    return out;
}

// single-writer sink: every emitted file lands in the manifest
class RunDir {
public:
    RunDir(fs::path dir, RunManifest& manifest)
        : dir_(std::move(dir)), manifest_(manifest) {}

    void write(const std::string& name, const std::string& content) {
        std::ofstream out(dir_ / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
        out << content;
        manifest_.files.push_back(name);
    }

    fs::path file(const std::string& name) {
        manifest_.files.push_back(name);
        return dir_ / name;
    }

    const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
    RunManifest& manifest_;
};

void write_manifest(const RunManifest& m) {
    json doc = json::object();
    doc["config_hash"] = m.config_hash;
    doc["physics_hash"] = m.physics_hash;
    doc["seed"] = m.seed;
    doc["tool_version"] = m.tool_version;
    doc["started_at"] = m.started_at;
    doc["finished_at"] = m.finished_at;
    doc["status"] = m.status;
    doc["files"] = m.files;
    if (!m.error.empty()) doc["error"] = m.error;
    std::ofstream out(m.path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest " + m.path);
    out << doc.dump(2) << "\n";
}

RingPolymerState initial_state(const SystemSpec& spec, int n_beads,
                               std::uint64_t seed) {
    auto state = RingPolymerState::zeros(spec.n_particles, n_beads,
                                         spec.dimension);
    if (spec.n_particles > 1 && spec.periodic[0]) {
        const double L = spec.box_length[0];
        for (int i = 0; i < spec.n_particles; ++i)
            for (int j = 0; j < n_beads; ++j)
                state.pos(i, j, 0) = (i + 0.5) * L / spec.n_particles;
    }
    RandomStream rng(seed, 7777, 0);
    sample_momenta(state, spec, spec.temperature(), rng);
    state.rng_cursor = rng.cursor();
    return state;
}

std::string series_csv(const TrajectoryRecord& rec) {
    std::ostringstream out;
    std::vector<std::string> cols;
    if (!rec.samples.empty())
        for (const auto& [name, _] : rec.samples.front().values)
            cols.push_back(name);
    out << "time";
    for (const auto& c : cols) out << "," << c;
    out << "\n";
    for (const auto& s : rec.samples) {
        out << num(s.time);
        for (const auto& c : cols) out << "," << num(s.values.at(c));
        out << "\n";
    }
    return out.str();
}

// --- mode drivers ---------------------------------------------------------

struct SweepRow {
    int n_beads;
    SummaryRow summary;
};

SummaryRow run_equilibrium_one(const ExperimentConfig& cfg, int P,
                               std::uint64_t seed, RunDir& dir) {
    ForceField field(cfg.system.topology);
    auto thermostat = cfg.equilibrium.thermostat;
    BaoabIntegrator integ(cfg.system, field, P, cfg.equilibrium.dt, thermostat,
                          seed);
    auto state = initial_state(cfg.system, P, seed);

    SamplingPlan plan;
    plan.n_steps = cfg.equilibrium.n_steps;
    plan.sample_stride = cfg.equilibrium.sample_stride;
    for (const auto& name : cfg.equilibrium.observables)
        plan.observables.emplace_back(name, ObservableRegistry::lookup(name, field));
    auto rec = run_sampling(integ, state, plan);

    const std::string tag = "_p" + std::to_string(P);
    dir.write("series" + tag + ".csv", series_csv(rec));
    save_checkpoint(state, cfg.system, dir.file("state" + tag + ".npi").string());

    SummaryRow row;
    row.n_beads = P;
    row.energy = mean(rec.series("e_virial"));
    row.temperature = mean(rec.series("temperature"));
    return row;
}

struct GradientBranchResult {
    std::vector<double> times;
    std::vector<double> flux;      // oriented middle flux per record
    std::vector<double> mid_temp;  // bead-kinetic middle-region temperature
    std::vector<RingPolymerState> profile_states;  // post-warmup, for binning
};

GradientBranchResult run_gradient_branch(const RingPolymerState& initial,
                                         const ExperimentConfig& cfg, int P,
                                         const ForceField& field,
                                         std::uint64_t seed, int branch_id) {
    const auto& spec = cfg.system;
    const auto& gr = cfg.gradient;
    const RegionLayout layout =
        RegionLayout::symmetric(spec.box_length[gr.axis], gr.axis);
    RegionTargets targets;
    for (int r = 0; r < layout.n_regions(); ++r) {
        if (layout.roles[r] == RegionRole::hot)
            targets.bath[r] = {gr.t_hot, gr.gamma};
        else if (layout.roles[r] == RegionRole::cold)
            targets.bath[r] = {gr.t_cold, gr.gamma};
    }

    ThermostatSpec thermostat;
    thermostat.kind = ThermostatKind::external;
    thermostat.stream_id = 1000 + static_cast<std::uint64_t>(branch_id);
    RingPolymerState state = initial;
    state.time = 0.0;
    state.rng_cursor = 0;

    BaoabIntegrator integ(spec, field, P, cfg.equilibrium.dt, thermostat, seed);
    integ.set_o_step([&](RingPolymerState& s, double dt, RandomStream& rng) {
        if (s.time < gr.switch_on_time) return;
        const auto labels = assign_regions(layout, s, spec);
        apply_region_thermostats(s, labels, layout, targets, spec, dt, rng);
    });

    GradientBranchResult out;
    const int d = spec.dimension;
    for (long step = 1; step <= cfg.branches.length_steps; ++step) {
        integ.step(state);
        if (step % cfg.branches.record_stride != 0) continue;
        const auto labels = assign_regions(layout, state, spec);
        out.times.push_back(state.time);
        out.flux.push_back(
            oriented_middle_flux(state, field, spec, labels, layout));
        double twice_k = 0.0;
        long dof = 0;
        for (int i = 0; i < spec.n_particles; ++i) {
            if (layout.roles[labels[i]] != RegionRole::middle) continue;
            for (int j = 0; j < P; ++j)
                for (int a = 0; a < d; ++a) {
                    const double p = state.mom(i, j, a);
                    twice_k += p * p / spec.masses[i];
                }
            dof += static_cast<long>(P) * d;
        }
        out.mid_temp.push_back(dof > 0 ? twice_k / dof : 0.0);
        if (step > cfg.gradient.warmup_steps) out.profile_states.push_back(state);
    }
    return out;
}

SummaryRow run_gradient_one(const ExperimentConfig& cfg, int P,
                            std::uint64_t seed, RunDir& dir, int workers) {
    ForceField field(cfg.system.topology);
    BaoabIntegrator integ(cfg.system, field, P, cfg.equilibrium.dt,
                          cfg.equilibrium.thermostat, seed);
    auto state = initial_state(cfg.system, P, seed);

    SamplingPlan eq_plan;
    eq_plan.n_steps = cfg.equilibrium.n_steps;
    eq_plan.sample_stride = cfg.equilibrium.sample_stride;
    eq_plan.snapshot_stride = cfg.branches.spacing_steps;
    auto eq_run = run_sampling(integ, state, eq_plan);

    BranchPlan hplan;
    hplan.n_branches = cfg.branches.n_branches;
    hplan.spacing_steps = cfg.branches.spacing_steps;
    auto harvest = harvest_initial_conditions(eq_run, hplan);

    // branches integrate concurrently; all analysis and writing stay here
    const int n = cfg.branches.n_branches;
    std::vector<GradientBranchResult> results(n);
    int next = 0;
    while (next < n) {
        const int batch = std::min(std::max(workers, 1), n - next);
        std::vector<std::future<GradientBranchResult>> futs;
        for (int k = 0; k < batch; ++k) {
            const int id = next + k;
            futs.push_back(std::async(std::launch::async, [&, id] {
                return run_gradient_branch(harvest.states[id], cfg, P, field,
                                           seed, id);
            }));
        }
        for (int k = 0; k < batch; ++k) results[next + k] = futs[k].get();
        next += batch;
    }

    const std::string tag = "_p" + std::to_string(P);
    const auto& grid = results.front().times;

    // ensemble averages on the shared time grid
    std::ostringstream flux_csv, temp_csv;
    flux_csv << "time,flux_mean,flux_stderr\n";
    temp_csv << "time,middle_temperature_mean,middle_temperature_stderr\n";
    double steady_flux = 0.0, steady_temp = 0.0;
    long steady_n = 0;
    for (std::size_t m = 0; m < grid.size(); ++m) {
        std::vector<double> f, t;
        for (const auto& r : results) {
            f.push_back(r.flux[m]);
            t.push_back(r.mid_temp[m]);
        }
        flux_csv << num(grid[m]) << "," << num(mean(f)) << ","
                 << num(standard_error(f)) << "\n";
        temp_csv << num(grid[m]) << "," << num(mean(t)) << ","
                 << num(standard_error(t)) << "\n";
        if (grid[m] > cfg.gradient.warmup_steps * cfg.equilibrium.dt) {
            steady_flux += mean(f);
            steady_temp += mean(t);
            ++steady_n;
        }
    }
    dir.write("flux" + tag + ".csv", flux_csv.str());
    dir.write("npi_average" + tag + ".csv", temp_csv.str());

    const RegionLayout layout = RegionLayout::symmetric(
        cfg.system.box_length[cfg.gradient.axis], cfg.gradient.axis);
    ProfileAccumulator acc(cfg.gradient.n_bins,
                           cfg.system.box_length[cfg.gradient.axis],
                           cfg.gradient.axis, TemperatureMode::bead_kinetic);
    for (const auto& r : results)
        for (const auto& s : r.profile_states) acc.add(s, cfg.system);
    std::ostringstream profile_csv;
    profile_csv << "position,temperature,count\n";
    for (const auto& bin : acc.profile())
        profile_csv << num(bin.center) << ","
                    << (bin.temperature ? num(*bin.temperature) : "") << ","
                    << bin.count << "\n";
    dir.write("profile" + tag + ".csv", profile_csv.str());

    SummaryRow row;
    row.n_beads = P;
    row.flux = steady_n > 0 ? steady_flux / steady_n : 0.0;
    row.temperature = steady_n > 0 ? steady_temp / steady_n : 0.0;
    return row;
}

LindbladGenerator build_lindblad(const QuantumSection& q, double hbar) {
    LindbladGenerator gen;
    gen.H = q.hamiltonian.build();
    gen.hbar = hbar;
    const int dim = static_cast<int>(gen.H.rows());
    for (const auto& [op, rate] : q.jumps)
        gen.jumps.emplace_back(op.build(dim), rate);
    gen.validate();
    return gen;
}

RedfieldGenerator build_redfield(const QuantumSection& q, double hbar) {
    RedfieldGenerator gen;
    gen.H = q.hamiltonian.build();
    gen.hbar = hbar;
    const int dim = static_cast<int>(gen.H.rows());
    for (const auto& op : q.couplings) gen.couplings.push_back(op.build(dim));
    gen.rates.entries = q.rates;
    gen.alpha2 = q.alpha2;
    gen.validate();
    return gen;
}

DensityMatrix build_initial(const QuantumSection& q, int dim) {
    if (q.initial == "maximally_mixed") return DensityMatrix::maximally_mixed(dim);
    Eigen::VectorXcd psi(dim);
    for (int k = 0; k < dim; ++k) {
        const double re =
            k < static_cast<int>(q.initial_real.size()) ? q.initial_real[k] : 0.0;
        const double im =
            k < static_cast<int>(q.initial_imag.size()) ? q.initial_imag[k] : 0.0;
        psi(k) = std::complex<double>(re, im);
    }
    psi.normalize();
    return DensityMatrix::pure(psi);
}

SummaryRow run_quantum(const ExperimentConfig& cfg, RunDir& dir) {
    const auto& q = cfg.quantum;
    EvolveOptions opt;
    opt.t_final = q.t_final;
    opt.dt = q.dt;
    opt.record_stride = q.record_stride;

    Trajectory traj;
    CMatrix H;
    if (cfg.mode == ExperimentMode::lindblad) {
        auto gen = build_lindblad(q, cfg.system.hbar);
        H = gen.H;
        traj = evolve(gen, build_initial(q, static_cast<int>(H.rows())), opt);
    } else {
        auto gen = build_redfield(q, cfg.system.hbar);
        H = gen.H;
        traj = evolve(gen, build_initial(q, static_cast<int>(H.rows())), opt);
    }

    const int dim = static_cast<int>(H.rows());
    std::ostringstream tcsv;
    tcsv << "time";
    for (int k = 0; k < dim; ++k) tcsv << ",population_" << k;
    tcsv << ",purity,energy\n";
    for (std::size_t m = 0; m < traj.times.size(); ++m) {
        const auto& rho = traj.states[m];
        tcsv << num(traj.times[m]);
        for (int k = 0; k < dim; ++k) tcsv << "," << num(rho(k, k).real());
        tcsv << "," << num((rho * rho).trace().real()) << ","
             << num(expectation(rho, H)) << "\n";
    }
    dir.write("trajectory.csv", tcsv.str());

    auto report = positivity_report(traj);
    std::ostringstream pcsv;
    pcsv << "time,min_eigenvalue,trace_deviation\n";
    for (std::size_t m = 0; m < report.times.size(); ++m)
        pcsv << num(report.times[m]) << "," << num(report.min_eigenvalue[m])
             << "," << num(report.trace_deviation[m]) << "\n";
    dir.write("positivity.csv", pcsv.str());

    SummaryRow row;
    row.n_beads = 0;
    row.energy = expectation(DensityMatrix{traj.states.back()}.entries, H);
    return row;
}

double finite_p_energy(double beta, double hbar, double omega, int P) {
    const double wp = omega_p(beta, hbar, P);
    double e = P / (2.0 * beta);
    for (int k = 0; k < P; ++k) {
        const double wk = 2.0 * wp * std::sin(k * M_PI / P);
        const double denom = wk * wk + omega * omega / P;
        e += 0.5 / beta * (omega * omega / P - wk * wk) / denom;
    }
    return e;
}

SummaryRow run_oscillator_one(const ExperimentConfig& cfg, int P,
                              std::uint64_t seed, std::ostringstream& csv) {
    const auto& os = cfg.oscillator;
    SystemSpec spec;
    spec.n_particles = 1;
    spec.masses = {1.0};
    spec.dimension = 1;
    spec.box_length = {1e6};
    spec.periodic = {false};
    spec.beta = cfg.system.beta;
    spec.hbar = cfg.system.hbar;

    ForceField field(std::vector<PotentialTerm>{
        PotentialTerm::external_well(0, os.omega * os.omega, {0.0})});

    // cap the step against the fastest ring mode
    const double wmax = P > 1 ? 2.0 * omega_p(spec.beta, spec.hbar, P) : os.omega;
    const double dt = std::min(os.dt, 0.3 / wmax);

    BaoabIntegrator integ(spec, field, P, dt,
                          ThermostatSpec::pile_l(0.5, spec.temperature()), seed);
    auto state = initial_state(spec, P, seed);

    SamplingPlan warm;
    warm.n_steps = os.n_steps / 10;
    warm.record_estimators = false;
    run_sampling(integ, state, warm);

    SamplingPlan plan;
    plan.n_steps = os.n_steps;
    plan.sample_stride = os.sample_stride;
    auto rec = run_sampling(integ, state, plan);

    const double e_prim = mean(rec.series("e_primitive"));
    const double e_vir = mean(rec.series("e_virial"));
    const double exact = finite_p_energy(spec.beta, spec.hbar, os.omega, P);
    const double quantum = 0.5 * spec.hbar * os.omega /
                           std::tanh(0.5 * spec.beta * spec.hbar * os.omega);
    const double err_prim = std::abs(e_prim - exact) / exact;
    const double err_vir = std::abs(e_vir - exact) / exact;
    const bool pass = err_prim < os.tolerance && err_vir < os.tolerance;
    csv << P << "," << num(e_prim) << "," << num(e_vir) << "," << num(exact)
        << "," << num(quantum) << "," << num(err_prim) << "," << num(err_vir)
        << "," << (pass ? "pass" : "fail") << "\n";

    SummaryRow row;
    row.n_beads = P;
    row.energy = e_vir;
    return row;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << "n_beads,temperature,flux,energy\n";
    for (const auto& r : rows)
        out << r.n_beads << "," << num(r.temperature) << "," << num(r.flux)
            << "," << num(r.energy) << "\n";
    return out.str();
}

}  // namespace

RunManifest run_experiment(const ExperimentConfig& cfg, int workers) {
    fs::create_directories(cfg.output_dir);

    RunManifest manifest;
    manifest.config_hash = sha256_hex(render_config(cfg));
    manifest.physics_hash = physics_hash(cfg);
    manifest.seed = cfg.seed;
    manifest.tool_version = kToolVersion;
    manifest.started_at = timestamp();
    manifest.status = "running";
    manifest.path = (fs::path(cfg.output_dir) / "manifest.json").string();
    manifest.files.push_back("config.json");
    write_manifest(manifest);

    RunDir dir(cfg.output_dir, manifest);
    {
        std::ofstream out(fs::path(cfg.output_dir) / "config.json",
                          std::ios::binary);
        out << render_config(cfg);
    }

    std::vector<SummaryRow> rows;
    try {
        switch (cfg.mode) {
            case ExperimentMode::equilibrium:
                for (int P : cfg.n_beads)
                    rows.push_back(
                        run_equilibrium_one(cfg, P, derive_seed(cfg.seed, P), dir));
                break;
            case ExperimentMode::npi_gradient:
                for (int P : cfg.n_beads)
                    rows.push_back(run_gradient_one(
                        cfg, P, derive_seed(cfg.seed, P), dir, workers));
                break;
            case ExperimentMode::lindblad:
            case ExperimentMode::redfield:
                rows.push_back(run_quantum(cfg, dir));
                break;
            case ExperimentMode::oscillator_benchmark: {
                std::ostringstream csv;
                csv << "n_beads,e_primitive,e_virial,exact_finite_p,"
                       "exact_quantum,rel_err_primitive,rel_err_virial,verdict\n";
                for (int P : cfg.n_beads)
                    rows.push_back(run_oscillator_one(
                        cfg, P, derive_seed(cfg.seed, P), csv));
                dir.write("energy_vs_p.csv", csv.str());
                break;
            }
        }
        dir.write("summary.csv", summary_csv(rows));
    } catch (const std::exception& e) {
        manifest.status = "failed";
        manifest.error = e.what();
        manifest.finished_at = timestamp();
        write_manifest(manifest);
        throw;
    }

    manifest.status = "ok";
    manifest.finished_at = timestamp();
    write_manifest(manifest);
    return manifest;
}

RunManifest load_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read manifest " + path);
    json doc = json::parse(in, nullptr, true);
    RunManifest m;
    m.config_hash = doc.at("config_hash").get<std::string>();
    m.physics_hash = doc.at("physics_hash").get<std::string>();
    m.seed = doc.at("seed").get<std::uint64_t>();
    m.tool_version = doc.at("tool_version").get<std::string>();
    m.started_at = doc.at("started_at").get<std::string>();
    m.finished_at = doc.value("finished_at", "");
    m.status = doc.at("status").get<std::string>();
    m.files = doc.at("files").get<std::vector<std::string>>();
    m.error = doc.value("error", "");
    m.path = path;
    return m;
}

std::string Summary::text() const {
    std::ostringstream out;
    out << "n_beads  temperature      flux            energy          "
           "delta_flux      source\n";
    for (const auto& r : rows) {
        char line[256];
        std::snprintf(line, sizeof line, "%-8d %-16.6g %-15.6g %-15.6g %-15.6g %s\n",
                      r.n_beads, r.temperature, r.flux, r.energy, r.delta_flux,
                      r.source.c_str());
        out << line;
    }
    return out.str();
}

std::string Summary::csv() const {
    std::ostringstream out;
    out << "n_beads,temperature,flux,energy,delta_flux,source\n";
    for (const auto& r : rows)
        out << r.n_beads << "," << num(r.temperature) << "," << num(r.flux)
            << "," << num(r.energy) << "," << num(r.delta_flux) << ","
            << r.source << "\n";
    return out.str();
}

Summary summarize(const std::vector<std::string>& manifest_paths) {
    if (manifest_paths.empty())
        throw std::invalid_argument("summarize: no manifests given");

    Summary summary;
    std::string physics;
    for (const auto& path : manifest_paths) {
        auto m = load_manifest(path);
        if (physics.empty()) {
            physics = m.physics_hash;
        } else if (m.physics_hash != physics) {
            throw std::invalid_argument(
                "summarize: " + path +
                " describes different physics than the first manifest "
                "(config content differs beyond seed/output); refusing to "
                "compare");
        }
        const fs::path dir = fs::path(path).parent_path();
        std::ifstream in(dir / "summary.csv");
        if (!in)
            throw std::runtime_error("summarize: missing summary.csv next to " +
                                     path);
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            SummaryRow row;
            std::istringstream ls(line);
            std::string cell;
            std::getline(ls, cell, ',');
            row.n_beads = std::stoi(cell);
            std::getline(ls, cell, ',');
            row.temperature = std::stod(cell);
            std::getline(ls, cell, ',');
            row.flux = std::stod(cell);
            std::getline(ls, cell, ',');
            row.energy = std::stod(cell);
            row.source = path;
            summary.rows.push_back(std::move(row));
        }
    }

    std::stable_sort(summary.rows.begin(), summary.rows.end(),
                     [](const SummaryRow& a, const SummaryRow& b) {
                         return a.n_beads < b.n_beads;
                     });
    for (std::size_t k = 1; k < summary.rows.size(); ++k) {
        const double prev = summary.rows[k - 1].flux;
        if (prev != 0.0)
            summary.rows[k].delta_flux =
                std::abs(summary.rows[k].flux - prev) / std::abs(prev);
    }
    return summary;
}

}  // namespace npi
