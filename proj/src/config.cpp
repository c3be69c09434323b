#include "npi/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <nlohmann/json.hpp>
#include <sstream>

namespace npi {

using json = nlohmann::ordered_json;

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
    std::ostringstream out;
    out << "config: " << errors.size() << " error(s)";
    for (const auto& e : errors) out << "\n  - " << e;
    return out.str();
}

// edit distance with adjacent transpositions, so typos like "sede" land on
// "seed" rather than an equally distant unrelated key
int levenshtein(const std::string& a, const std::string& b) {
    std::vector<int> prev2(b.size() + 1), prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const int sub = prev[j - 1] + (a[i - 1] != b[j - 1]);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
            if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1])
                cur[j] = std::min(cur[j], prev2[j - 2] + 1);
        }
        std::swap(prev2, prev);
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string nearest_key(const std::string& key,
                        const std::vector<std::string>& known) {
    std::string best;
    int best_d = 1 << 30;
    for (const auto& k : known) {
        const int d = levenshtein(key, k);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best;
}

// Accumulates diagnostics while walking the document so one parse reports
// every fault.
struct Diag {
    std::vector<std::string>& errors;

    void add(const std::string& msg) { errors.push_back(msg); }

    void check_keys(const json& obj, const std::string& where,
                    const std::vector<std::string>& known) {
        for (const auto& [key, _] : obj.items()) {
            if (std::find(known.begin(), known.end(), key) == known.end())
                add(where + ": unknown key '" + key + "' (nearest: '" +
                    nearest_key(key, known) + "')");
        }
    }

    template <typename T>
    T get(const json& obj, const std::string& where, const std::string& key,
          T fallback) {
        if (!obj.contains(key)) return fallback;
        try {
            return obj.at(key).get<T>();
        } catch (const json::exception&) {
            add(where + "." + key + ": wrong type");
            return fallback;
        }
    }
};

const std::vector<std::string> kTopKeys = {
    "mode",   "seed",     "output_dir", "n_beads",  "system",
    "equilibrium", "branches", "gradient",   "quantum",  "oscillator"};

const std::vector<std::string> kSystemKeys = {
    "n_particles", "masses", "dimension", "box_length",
    "periodic",    "beta",   "hbar",      "potentials"};

const std::vector<std::string> kPotentialKeys = {"kind", "particles", "params"};

const std::vector<std::string> kEquilibriumKeys = {
    "n_steps", "dt", "sample_stride", "thermostat", "observables"};

const std::vector<std::string> kThermostatKeys = {"kind", "tau", "temperature"};

const std::vector<std::string> kBranchKeys = {
    "n_branches", "spacing_steps", "length_steps", "record_stride",
    "continue_equilibrium_stream"};

const std::vector<std::string> kGradientKeys = {
    "t_hot", "t_cold", "gamma", "axis", "n_bins", "switch_on_time",
    "warmup_steps"};

const std::vector<std::string> kOperatorKeys = {"preset", "scale", "real",
                                                "imag"};

const std::vector<std::string> kQuantumKeys = {
    "hamiltonian", "jumps",   "couplings", "rates",         "alpha2",
    "initial",     "initial_real", "initial_imag", "t_final", "dt",
    "record_stride"};

const std::vector<std::string> kOscillatorKeys = {
    "omega", "n_steps", "dt", "sample_stride", "tolerance"};

ExperimentMode mode_from_string(const std::string& s, Diag& diag) {
    if (s == "equilibrium") return ExperimentMode::equilibrium;
    if (s == "npi_gradient") return ExperimentMode::npi_gradient;
    if (s == "lindblad") return ExperimentMode::lindblad;
    if (s == "redfield") return ExperimentMode::redfield;
    if (s == "oscillator_benchmark") return ExperimentMode::oscillator_benchmark;
    diag.add("mode: unknown mode '" + s +
             "' (expected equilibrium, npi_gradient, lindblad, redfield or "
             "oscillator_benchmark)");
    return ExperimentMode::equilibrium;
}

OperatorSpec parse_operator(const json& obj, const std::string& where,
                            Diag& diag) {
    OperatorSpec op;
    if (!obj.is_object()) {
        diag.add(where + ": expected an object");
        return op;
    }
    diag.check_keys(obj, where, kOperatorKeys);
    op.preset = diag.get<std::string>(obj, where, "preset", "");
    op.scale = diag.get<double>(obj, where, "scale", 1.0);
    op.real = diag.get<std::vector<std::vector<double>>>(obj, where, "real", {});
    op.imag = diag.get<std::vector<std::vector<double>>>(obj, where, "imag", {});
    if (op.preset.empty() && op.real.empty())
        diag.add(where + ": needs either a preset name or a real matrix");
    if (!op.preset.empty() && !op.real.empty())
        diag.add(where + ": preset and explicit matrix are mutually exclusive");
    return op;
}

json render_operator(const OperatorSpec& op) {
    json obj = json::object();
    if (!op.preset.empty()) obj["preset"] = op.preset;
    if (op.scale != 1.0) obj["scale"] = op.scale;
    if (!op.real.empty()) obj["real"] = op.real;
    if (!op.imag.empty()) obj["imag"] = op.imag;
    return obj;
}

void validate_config(const ExperimentConfig& cfg, Diag& diag) {
    if (cfg.n_beads.empty()) diag.add("n_beads: sweep list must be nonempty");
    for (int p : cfg.n_beads)
        if (p < 1) diag.add("n_beads: bead counts must be >= 1");

    const bool needs_system = cfg.mode == ExperimentMode::equilibrium ||
                              cfg.mode == ExperimentMode::npi_gradient;
    if (needs_system) {
        try {
            cfg.system.validate();
        } catch (const std::exception& e) {
            diag.add(std::string("system: ") + e.what());
        }
        if (cfg.equilibrium.n_steps < 1)
            diag.add("equilibrium.n_steps: must be >= 1");
        if (!(cfg.equilibrium.dt > 0.0)) diag.add("equilibrium.dt: must be > 0");
        if (cfg.equilibrium.sample_stride < 1)
            diag.add("equilibrium.sample_stride: must be >= 1");
    }
    if (cfg.mode == ExperimentMode::npi_gradient) {
        if (!(cfg.gradient.t_hot >= cfg.gradient.t_cold &&
              cfg.gradient.t_cold > 0.0))
            diag.add("gradient: requires t_hot >= t_cold > 0");
        if (!(cfg.gradient.gamma > 0.0)) diag.add("gradient.gamma: must be > 0");
        if (cfg.gradient.axis < 0 || cfg.gradient.axis >= cfg.system.dimension)
            diag.add("gradient.axis: outside the system dimension");
        if (cfg.gradient.n_bins < 1) diag.add("gradient.n_bins: must be >= 1");
        if (cfg.branches.n_branches < 2)
            diag.add("branches.n_branches: need >= 2 for ensemble averages");
        if (cfg.branches.spacing_steps < 1)
            diag.add("branches.spacing_steps: must be >= 1");
        if (cfg.branches.length_steps < 1)
            diag.add("branches.length_steps: must be >= 1");
        if (cfg.branches.record_stride < 1)
            diag.add("branches.record_stride: must be >= 1");
        if (cfg.gradient.warmup_steps < 0 ||
            cfg.gradient.warmup_steps >= cfg.branches.length_steps)
            diag.add("gradient.warmup_steps: must lie within the branch length");
    }
    if (cfg.mode == ExperimentMode::lindblad ||
        cfg.mode == ExperimentMode::redfield) {
        if (!(cfg.quantum.t_final > 0.0)) diag.add("quantum.t_final: must be > 0");
        if (!(cfg.quantum.dt > 0.0)) diag.add("quantum.dt: must be > 0");
        if (cfg.quantum.record_stride < 1)
            diag.add("quantum.record_stride: must be >= 1");
        if (cfg.quantum.initial != "maximally_mixed" &&
            cfg.quantum.initial != "pure")
            diag.add("quantum.initial: expected 'maximally_mixed' or 'pure'");
        if (cfg.quantum.initial == "pure" && cfg.quantum.initial_real.empty())
            diag.add("quantum.initial_real: pure state needs amplitudes");
        try {
            const CMatrix H = cfg.quantum.hamiltonian.build();
            if (H.rows() > kMaxHilbertDim)
                diag.add("quantum.hamiltonian: dimension above the dense cap");
        } catch (const std::exception& e) {
            diag.add(std::string("quantum.hamiltonian: ") + e.what());
        }
        if (cfg.mode == ExperimentMode::lindblad) {
            for (const auto& [op, rate] : cfg.quantum.jumps)
                if (rate < 0.0) diag.add("quantum.jumps: rates must be >= 0");
        } else if (cfg.quantum.couplings.empty()) {
            diag.add("quantum.couplings: redfield mode needs >= 1 coupling");
        }
    }
    if (cfg.mode == ExperimentMode::oscillator_benchmark) {
        if (!(cfg.oscillator.omega > 0.0))
            diag.add("oscillator.omega: must be > 0");
        if (cfg.oscillator.n_steps < 1) diag.add("oscillator.n_steps: must be >= 1");
        if (!(cfg.oscillator.dt > 0.0)) diag.add("oscillator.dt: must be > 0");
        if (!(cfg.oscillator.tolerance > 0.0))
            diag.add("oscillator.tolerance: must be > 0");
    }
    if (cfg.output_dir.empty()) diag.add("output_dir: must be nonempty");
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errs)
    : std::runtime_error(join_errors(errs)), errors(std::move(errs)) {}

std::string to_string(ExperimentMode mode) {
    switch (mode) {
        case ExperimentMode::equilibrium: return "equilibrium";
        case ExperimentMode::npi_gradient: return "npi_gradient";
        case ExperimentMode::lindblad: return "lindblad";
        case ExperimentMode::redfield: return "redfield";
        case ExperimentMode::oscillator_benchmark: return "oscillator_benchmark";
    }
    throw std::logic_error("to_string: bad mode");
}

bool EquilibriumSection::operator==(const EquilibriumSection& o) const {
    return n_steps == o.n_steps && dt == o.dt &&
           sample_stride == o.sample_stride &&
           thermostat.kind == o.thermostat.kind &&
           thermostat.tau == o.thermostat.tau &&
           thermostat.target_T == o.thermostat.target_T &&
           thermostat.stream_id == o.thermostat.stream_id &&
           observables == o.observables;
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
    return mode == o.mode && seed == o.seed && output_dir == o.output_dir &&
           n_beads == o.n_beads && system.n_particles == o.system.n_particles &&
           system.masses == o.system.masses &&
           system.dimension == o.system.dimension &&
           system.box_length == o.system.box_length &&
           system.periodic == o.system.periodic && system.beta == o.system.beta &&
           system.hbar == o.system.hbar && system.topology == o.system.topology &&
           equilibrium == o.equilibrium && branches == o.branches &&
           gradient == o.gradient && quantum == o.quantum &&
           oscillator == o.oscillator;
}

CMatrix OperatorSpec::build(int expected_dim) const {
    CMatrix m;
    if (!preset.empty()) {
        if (preset == "sigma_x") m = sigma_x();
        else if (preset == "sigma_y") m = sigma_y();
        else if (preset == "sigma_z") m = sigma_z();
        else if (preset == "sigma_plus") m = sigma_plus();
        else if (preset == "sigma_minus") m = sigma_minus();
        else if (preset == "identity")
            m = CMatrix::Identity(expected_dim > 0 ? expected_dim : 2,
                                  expected_dim > 0 ? expected_dim : 2);
        else
            throw std::invalid_argument("unknown operator preset '" + preset +
                                        "'");
    } else {
        const auto rows = real.size();
        if (rows == 0) throw std::invalid_argument("empty operator matrix");
        m = CMatrix::Zero(rows, rows);
        for (std::size_t r = 0; r < rows; ++r) {
            if (real[r].size() != rows)
                throw std::invalid_argument("operator matrix must be square");
            for (std::size_t c = 0; c < rows; ++c) m(r, c) = real[r][c];
        }
        if (!imag.empty()) {
            if (imag.size() != rows)
                throw std::invalid_argument("imag part shape mismatch");
            for (std::size_t r = 0; r < rows; ++r) {
                if (imag[r].size() != rows)
                    throw std::invalid_argument("imag part shape mismatch");
                for (std::size_t c = 0; c < rows; ++c)
                    m(r, c) += std::complex<double>(0.0, imag[r][c]);
            }
        }
    }
    if (expected_dim > 0 && m.rows() != expected_dim)
        throw std::invalid_argument("operator dimension mismatch");
    return scale * m;
}

ExperimentConfig parse_config(const std::string& text) {
    std::vector<std::string> errors;
    Diag diag{errors};
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError({std::string("not valid JSON: ") + e.what()});
    }
    if (!doc.is_object()) throw ConfigError({"top level must be an object"});

    ExperimentConfig cfg;
    diag.check_keys(doc, "top level", kTopKeys);
    if (doc.contains("mode"))
        cfg.mode = mode_from_string(
            diag.get<std::string>(doc, "top level", "mode", "equilibrium"), diag);
    else
        diag.add("mode: required key missing");
    cfg.seed = diag.get<std::uint64_t>(doc, "top level", "seed", 1);
    cfg.output_dir =
        diag.get<std::string>(doc, "top level", "output_dir", "out");
    cfg.n_beads = diag.get<std::vector<int>>(doc, "top level", "n_beads", {1});

    if (doc.contains("system")) {
        const json& sys = doc.at("system");
        if (!sys.is_object()) {
            diag.add("system: expected an object");
        } else {
            diag.check_keys(sys, "system", kSystemKeys);
            cfg.system.n_particles = diag.get<int>(sys, "system", "n_particles", 0);
            cfg.system.masses =
                diag.get<std::vector<double>>(sys, "system", "masses", {});
            cfg.system.dimension = diag.get<int>(sys, "system", "dimension", 1);
            cfg.system.box_length =
                diag.get<std::vector<double>>(sys, "system", "box_length", {});
            cfg.system.periodic =
                diag.get<std::vector<bool>>(sys, "system", "periodic", {});
            cfg.system.beta = diag.get<double>(sys, "system", "beta", 1.0);
            cfg.system.hbar = diag.get<double>(sys, "system", "hbar", 1.0);
            if (sys.contains("potentials")) {
                if (!sys.at("potentials").is_array()) {
                    diag.add("system.potentials: expected an array");
                } else {
                    int n = 0;
                    for (const auto& t : sys.at("potentials")) {
                        const std::string where =
                            "system.potentials[" + std::to_string(n++) + "]";
                        if (!t.is_object()) {
                            diag.add(where + ": expected an object");
                            continue;
                        }
                        diag.check_keys(t, where, kPotentialKeys);
                        PotentialTerm term;
                        const std::string kind =
                            diag.get<std::string>(t, where, "kind", "");
                        try {
                            term.kind = potential_kind_from_string(kind);
                        } catch (const std::exception& e) {
                            diag.add(where + ": " + e.what());
                            continue;
                        }
                        term.particles =
                            diag.get<std::vector<int>>(t, where, "particles", {});
                        term.params =
                            diag.get<std::vector<double>>(t, where, "params", {});
                        cfg.system.topology.push_back(std::move(term));
                    }
                }
            }
        }
    }

    if (doc.contains("equilibrium")) {
        const json& eq = doc.at("equilibrium");
        diag.check_keys(eq, "equilibrium", kEquilibriumKeys);
        cfg.equilibrium.n_steps =
            diag.get<long>(eq, "equilibrium", "n_steps", 10000);
        cfg.equilibrium.dt = diag.get<double>(eq, "equilibrium", "dt", 0.01);
        cfg.equilibrium.sample_stride =
            diag.get<int>(eq, "equilibrium", "sample_stride", 10);
        cfg.equilibrium.observables = diag.get<std::vector<std::string>>(
            eq, "equilibrium", "observables", {});
        if (eq.contains("thermostat")) {
            const json& th = eq.at("thermostat");
            diag.check_keys(th, "equilibrium.thermostat", kThermostatKeys);
            const std::string kind = diag.get<std::string>(
                th, "equilibrium.thermostat", "kind", "pile_l");
            if (kind == "none")
                cfg.equilibrium.thermostat = ThermostatSpec::none();
            else if (kind == "pile_l")
                cfg.equilibrium.thermostat = ThermostatSpec::pile_l(
                    diag.get<double>(th, "equilibrium.thermostat", "tau", 1.0),
                    diag.get<double>(th, "equilibrium.thermostat", "temperature",
                                     1.0 / cfg.system.beta));
            else
                diag.add("equilibrium.thermostat.kind: expected 'none' or "
                         "'pile_l'");
        }
    }

    if (doc.contains("branches")) {
        const json& br = doc.at("branches");
        diag.check_keys(br, "branches", kBranchKeys);
        cfg.branches.n_branches = diag.get<int>(br, "branches", "n_branches", 27);
        cfg.branches.spacing_steps =
            diag.get<int>(br, "branches", "spacing_steps", 100);
        cfg.branches.length_steps =
            diag.get<long>(br, "branches", "length_steps", 1000);
        cfg.branches.record_stride =
            diag.get<int>(br, "branches", "record_stride", 10);
        cfg.branches.continue_equilibrium_stream = diag.get<bool>(
            br, "branches", "continue_equilibrium_stream", false);
    }

    if (doc.contains("gradient")) {
        const json& gr = doc.at("gradient");
        diag.check_keys(gr, "gradient", kGradientKeys);
        cfg.gradient.t_hot = diag.get<double>(gr, "gradient", "t_hot", 1.1);
        cfg.gradient.t_cold = diag.get<double>(gr, "gradient", "t_cold", 0.9);
        cfg.gradient.gamma = diag.get<double>(gr, "gradient", "gamma", 1.0);
        cfg.gradient.axis = diag.get<int>(gr, "gradient", "axis", 0);
        cfg.gradient.n_bins = diag.get<int>(gr, "gradient", "n_bins", 16);
        cfg.gradient.switch_on_time =
            diag.get<double>(gr, "gradient", "switch_on_time", 0.0);
        cfg.gradient.warmup_steps =
            diag.get<long>(gr, "gradient", "warmup_steps", 0);
    }

    if (doc.contains("quantum")) {
        const json& q = doc.at("quantum");
        diag.check_keys(q, "quantum", kQuantumKeys);
        if (q.contains("hamiltonian"))
            cfg.quantum.hamiltonian =
                parse_operator(q.at("hamiltonian"), "quantum.hamiltonian", diag);
        else if (cfg.mode == ExperimentMode::lindblad ||
                 cfg.mode == ExperimentMode::redfield)
            diag.add("quantum.hamiltonian: required key missing");
        if (q.contains("jumps")) {
            int n = 0;
            for (const auto& item : q.at("jumps")) {
                const std::string where = "quantum.jumps[" + std::to_string(n++) +
                                          "]";
                if (!item.is_object() || !item.contains("op")) {
                    diag.add(where + ": expected {op, rate}");
                    continue;
                }
                for (const auto& [key, _] : item.items())
                    if (key != "op" && key != "rate")
                        diag.add(where + ": unknown key '" + key + "'");
                cfg.quantum.jumps.emplace_back(
                    parse_operator(item.at("op"), where + ".op", diag),
                    diag.get<double>(item, where, "rate", 1.0));
            }
        }
        if (q.contains("couplings")) {
            int n = 0;
            for (const auto& item : q.at("couplings"))
                cfg.quantum.couplings.push_back(parse_operator(
                    item, "quantum.couplings[" + std::to_string(n++) + "]",
                    diag));
        }
        cfg.quantum.rates = diag.get<std::vector<std::pair<double, double>>>(
            q, "quantum", "rates", {});
        cfg.quantum.alpha2 = diag.get<double>(q, "quantum", "alpha2", 1.0);
        cfg.quantum.initial =
            diag.get<std::string>(q, "quantum", "initial", "maximally_mixed");
        cfg.quantum.initial_real = diag.get<std::vector<double>>(
            q, "quantum", "initial_real", {});
        cfg.quantum.initial_imag = diag.get<std::vector<double>>(
            q, "quantum", "initial_imag", {});
        cfg.quantum.t_final = diag.get<double>(q, "quantum", "t_final", 1.0);
        cfg.quantum.dt = diag.get<double>(q, "quantum", "dt", 1e-3);
        cfg.quantum.record_stride =
            diag.get<int>(q, "quantum", "record_stride", 1);
    }

    if (doc.contains("oscillator")) {
        const json& os = doc.at("oscillator");
        diag.check_keys(os, "oscillator", kOscillatorKeys);
        cfg.oscillator.omega = diag.get<double>(os, "oscillator", "omega", 1.0);
        cfg.oscillator.n_steps =
            diag.get<long>(os, "oscillator", "n_steps", 200000);
        cfg.oscillator.dt = diag.get<double>(os, "oscillator", "dt", 0.05);
        cfg.oscillator.sample_stride =
            diag.get<int>(os, "oscillator", "sample_stride", 10);
        cfg.oscillator.tolerance =
            diag.get<double>(os, "oscillator", "tolerance", 0.02);
    }

    if (errors.empty()) validate_config(cfg, diag);
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return cfg;
}

std::string render_config(const ExperimentConfig& cfg) {
    json doc = json::object();
    doc["mode"] = to_string(cfg.mode);
    doc["seed"] = cfg.seed;
    doc["output_dir"] = cfg.output_dir;
    doc["n_beads"] = cfg.n_beads;

    const bool needs_system = cfg.mode == ExperimentMode::equilibrium ||
                              cfg.mode == ExperimentMode::npi_gradient;
    if (needs_system) {
        json sys = json::object();
        sys["n_particles"] = cfg.system.n_particles;
        sys["masses"] = cfg.system.masses;
        sys["dimension"] = cfg.system.dimension;
        sys["box_length"] = cfg.system.box_length;
        sys["periodic"] = cfg.system.periodic;
        sys["beta"] = cfg.system.beta;
        sys["hbar"] = cfg.system.hbar;
        json pots = json::array();
        for (const auto& t : cfg.system.topology) {
            json obj = json::object();
            obj["kind"] = to_string(t.kind);
            obj["particles"] = t.particles;
            obj["params"] = t.params;
            pots.push_back(std::move(obj));
        }
        sys["potentials"] = std::move(pots);
        doc["system"] = std::move(sys);

        json eq = json::object();
        eq["n_steps"] = cfg.equilibrium.n_steps;
        eq["dt"] = cfg.equilibrium.dt;
        eq["sample_stride"] = cfg.equilibrium.sample_stride;
        json th = json::object();
        th["kind"] = cfg.equilibrium.thermostat.kind == ThermostatKind::none
                         ? "none"
                         : "pile_l";
        if (cfg.equilibrium.thermostat.kind == ThermostatKind::pile_l) {
            th["tau"] = cfg.equilibrium.thermostat.tau;
            th["temperature"] = cfg.equilibrium.thermostat.target_T;
        }
        eq["thermostat"] = std::move(th);
        eq["observables"] = cfg.equilibrium.observables;
        doc["equilibrium"] = std::move(eq);
    }

    if (cfg.mode == ExperimentMode::npi_gradient) {
        json br = json::object();
        br["n_branches"] = cfg.branches.n_branches;
        br["spacing_steps"] = cfg.branches.spacing_steps;
        br["length_steps"] = cfg.branches.length_steps;
        br["record_stride"] = cfg.branches.record_stride;
        br["continue_equilibrium_stream"] = cfg.branches.continue_equilibrium_stream;
        doc["branches"] = std::move(br);

        json gr = json::object();
        gr["t_hot"] = cfg.gradient.t_hot;
        gr["t_cold"] = cfg.gradient.t_cold;
        gr["gamma"] = cfg.gradient.gamma;
        gr["axis"] = cfg.gradient.axis;
        gr["n_bins"] = cfg.gradient.n_bins;
        gr["switch_on_time"] = cfg.gradient.switch_on_time;
        gr["warmup_steps"] = cfg.gradient.warmup_steps;
        doc["gradient"] = std::move(gr);
    }

    if (cfg.mode == ExperimentMode::lindblad ||
        cfg.mode == ExperimentMode::redfield) {
        json q = json::object();
        q["hamiltonian"] = render_operator(cfg.quantum.hamiltonian);
        if (!cfg.quantum.jumps.empty()) {
            json jumps = json::array();
            for (const auto& [op, rate] : cfg.quantum.jumps) {
                json item = json::object();
                item["op"] = render_operator(op);
                item["rate"] = rate;
                jumps.push_back(std::move(item));
            }
            q["jumps"] = std::move(jumps);
        }
        if (!cfg.quantum.couplings.empty()) {
            json couplings = json::array();
            for (const auto& op : cfg.quantum.couplings)
                couplings.push_back(render_operator(op));
            q["couplings"] = std::move(couplings);
        }
        if (!cfg.quantum.rates.empty()) q["rates"] = cfg.quantum.rates;
        q["alpha2"] = cfg.quantum.alpha2;
        q["initial"] = cfg.quantum.initial;
        if (!cfg.quantum.initial_real.empty())
            q["initial_real"] = cfg.quantum.initial_real;
        if (!cfg.quantum.initial_imag.empty())
            q["initial_imag"] = cfg.quantum.initial_imag;
        q["t_final"] = cfg.quantum.t_final;
        q["dt"] = cfg.quantum.dt;
        q["record_stride"] = cfg.quantum.record_stride;
        doc["quantum"] = std::move(q);
    }

    if (cfg.mode == ExperimentMode::oscillator_benchmark) {
        json os = json::object();
        os["omega"] = cfg.oscillator.omega;
        os["n_steps"] = cfg.oscillator.n_steps;
        os["dt"] = cfg.oscillator.dt;
        os["sample_stride"] = cfg.oscillator.sample_stride;
        os["tolerance"] = cfg.oscillator.tolerance;
        doc["oscillator"] = std::move(os);
        json sys = json::object();
        sys["beta"] = cfg.system.beta;
        sys["hbar"] = cfg.system.hbar;
        // the benchmark builds its own single-particle system from these two
        doc["system"] = std::move(sys);
    }

    return doc.dump(2) + "\n";
}

std::string physics_hash(const ExperimentConfig& cfg) {
    ExperimentConfig stripped = cfg;
    stripped.seed = 0;
    stripped.output_dir = "-";
    const std::string text = render_config(stripped);
    unsigned char digest[32];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(),
                   nullptr) != 1 || len != 32)
        throw std::runtime_error("physics_hash: digest failure");
    static const char* hex = "0123456789abcdef";
    std::string out(64, '0');
    for (int i = 0; i < 32; ++i) {
        out[2 * i] = hex[digest[i] >> 4];
        out[2 * i + 1] = hex[digest[i] & 0xf];
    }
    return out;
}

}  // namespace npi
