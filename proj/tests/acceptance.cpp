// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails. All tolerances are
// checked against analytic oracles or frozen reference behavior.
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "npi/checkpoint.hpp"
#include "npi/config.hpp"
#include "npi/dnemd.hpp"
#include "npi/estimators.hpp"
#include "npi/experiment.hpp"
#include "npi/integrator.hpp"
#include "npi/master_eq.hpp"
#include "npi/normal_modes.hpp"
#include "npi/rng.hpp"
#include "npi/sampling.hpp"
#include "npi/thermal.hpp"

namespace fs = std::filesystem;
using namespace npi;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass,
            const std::string& detail) {
    std::printf("criterion %d [%s]: %s  (%s)\n", id, name.c_str(),
                pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), f, args...);
    return buf;
}

// Exact thermal energy of the P-bead ring polymer for a 1D harmonic
// oscillator: every normal mode is classical with stiffness m(w_k^2 + w^2/P).
double finite_p_energy(double beta, double hbar, double omega, int P) {
    const double wp = omega_p(beta, hbar, P);
    double e = P / (2.0 * beta);
    for (int k = 0; k < P; ++k) {
        const double wk = 2.0 * wp * std::sin(k * M_PI / P);
        const double denom = wk * wk + omega * omega / P;
        e -= 0.5 / beta * (wk * wk) / denom;
        e += 0.5 / beta * (omega * omega / P) / denom;
    }
    return e;
}

double quantum_energy(double beta, double hbar, double omega) {
    return 0.5 * hbar * omega / std::tanh(0.5 * beta * hbar * omega);
}

SystemSpec oscillator_spec(double beta, double mass = 1.0) {
    SystemSpec spec;
    spec.n_particles = 1;
    spec.masses = {mass};
    spec.dimension = 1;
    spec.box_length = {100.0};
    spec.periodic = {false};
    spec.beta = beta;
    return spec;
}

ForceField well_field(double k) {
    return ForceField(
        std::vector<PotentialTerm>{PotentialTerm::external_well(0, k, {0.0})});
}

// ---------------------------------------------------------------------------
// 1. harmonic oscillator energy, P = 32, PILE-L sampling
// ---------------------------------------------------------------------------
void criterion_1() {
    const double beta = 2.0, omega = 1.0;  // quantum regime, E ~ 0.6565
    const int P = 32;
    const double e_p = finite_p_energy(beta, 1.0, omega, P);
    const double e_q = quantum_energy(beta, 1.0, omega);

    auto spec = oscillator_spec(beta);
    auto field = well_field(omega * omega);
    BaoabIntegrator integ(spec, field, P, 0.02,
                          ThermostatSpec::pile_l(0.5, 1.0 / beta, 0), 2024);
    auto state = RingPolymerState::zeros(1, P, 1);
    RandomStream rng(2024, 11);
    for (auto& x : state.positions) x = 0.2 * rng.gaussian();
    sample_momenta(state, spec, 1.0 / beta, rng);
    state.rng_cursor = rng.cursor();

    SamplingPlan warm;
    warm.n_steps = 50000;
    warm.record_estimators = false;
    run_sampling(integ, state, warm);

    SamplingPlan plan;
    plan.n_steps = 6000000;
    plan.sample_stride = 10;
    auto record = run_sampling(integ, state, plan);
    const double e_prim = mean(record.series("e_primitive"));
    const double e_vir = mean(record.series("e_virial"));

    const double dp_fp = std::abs(e_prim - e_p) / e_p;
    const double dv_fp = std::abs(e_vir - e_p) / e_p;
    const double dp_q = std::abs(e_prim - e_q) / e_q;
    const double dv_q = std::abs(e_vir - e_q) / e_q;
    const bool pass = dp_fp < 0.02 && dv_fp < 0.02 && dp_q < 0.03 && dv_q < 0.03;
    report(1, "oscillator energy, P=32", pass,
           fmt("e_prim=%.5f e_vir=%.5f finite-P=%.5f quantum=%.5f "
               "rel.dev fp=%.3f/%.3f q=%.3f/%.3f",
               e_prim, e_vir, e_p, e_q, dp_fp, dv_fp, dp_q, dv_q));
}

// ---------------------------------------------------------------------------
// 2. Trotter convergence order via exact ring-polymer Gibbs sampling
// ---------------------------------------------------------------------------
// The ring-polymer distribution of a harmonic oscillator factorizes over
// normal modes, so it can be sampled exactly (no step-size or thermostat
// bias) and the centroid-virial estimator averaged over draws. The error
// vs the exact quantum energy must shrink ~1/P^2.
double sampled_virial_energy(double beta, double omega, int P, long n_samples,
                             std::uint64_t stream) {
    auto spec = oscillator_spec(beta);
    auto field = well_field(omega * omega);
    auto basis = build_normal_modes(P);
    const double wp = omega_p(beta, 1.0, P);
    std::vector<double> sigma(P);
    for (int k = 0; k < P; ++k) {
        const double wk = wp * basis.frequencies[k];
        sigma[k] = 1.0 / std::sqrt(beta * (wk * wk + omega * omega / P));
    }
    auto state = RingPolymerState::zeros(1, P, 1);
    std::vector<double> modes(P);
    RandomStream rng(777, stream);
    double acc = 0.0;
    for (long s = 0; s < n_samples; ++s) {
        for (int k = 0; k < P; ++k) modes[k] = sigma[k] * rng.gaussian();
        basis.to_beads(modes.data(), state.positions.data());
        acc += energy_estimator_virial(state, field, spec);
    }
    return acc / n_samples;
}

void criterion_2() {
    const double beta = 1.0, omega = 1.0;
    const double e_q = quantum_energy(beta, 1.0, omega);
    const int ps[3] = {4, 8, 16};
    const long ns[3] = {4000000, 16000000, 48000000};
    double err[3];
    for (int i = 0; i < 3; ++i) {
        const double e = sampled_virial_energy(beta, omega, ps[i], ns[i], ps[i]);
        err[i] = std::abs(e - e_q);
    }
    const double r1 = err[0] / err[1];
    const double r2 = err[1] / err[2];
    const bool pass = r1 > 2.5 && r1 < 6.0 && r2 > 2.5 && r2 < 6.0;
    report(2, "Trotter convergence order", pass,
           fmt("err(P=4,8,16)=%.2e/%.2e/%.2e ratios=%.2f/%.2f in [2.5,6]",
               err[0], err[1], err[2], r1, r2));
}

// ---------------------------------------------------------------------------
// benchmark chain shared by criteria 3-5: periodic Morse chain, 24 sites
// ---------------------------------------------------------------------------
SystemSpec chain_spec() {
    const int N = 24;
    SystemSpec spec;
    spec.n_particles = N;
    spec.masses.assign(N, 1.0);
    spec.dimension = 1;
    spec.box_length = {24.0};
    spec.periodic = {true};
    spec.beta = 1.0;
    for (int i = 0; i < N; ++i)
        spec.topology.push_back(
            PotentialTerm::morse(i, (i + 1) % N, 60.0, 0.7071, 1.0));
    return spec;
}

std::string chain_gradient_json(const std::string& out_dir) {
    std::ostringstream pots;
    const int N = 24;
    for (int i = 0; i < N; ++i) {
        if (i) pots << ",";
        pots << "{\"kind\":\"morse\",\"particles\":[" << i << "," << (i + 1) % N
             << "],\"params\":[60.0,0.7071,1.0]}";
    }
    std::ostringstream masses;
    for (int i = 0; i < N; ++i) masses << (i ? ",1.0" : "1.0");
    std::ostringstream cfg;
    cfg << "{\"mode\":\"npi_gradient\",\"seed\":12345,"
        << "\"output_dir\":\"" << out_dir << "\","
        << "\"n_beads\":[1,16,32,64],"
        << "\"system\":{\"n_particles\":24,\"masses\":[" << masses.str()
        << "],\"dimension\":1,\"box_length\":[24.0],\"periodic\":[true],"
        << "\"beta\":1.0,\"potentials\":[" << pots.str() << "]},"
        << "\"equilibrium\":{\"n_steps\":40000,\"dt\":0.01,\"sample_stride\":100,"
        << "\"thermostat\":{\"kind\":\"pile_l\",\"tau\":1.0,\"temperature\":1.0}},"
        << "\"branches\":{\"n_branches\":16,\"spacing_steps\":2500,"
        << "\"length_steps\":350000,\"record_stride\":50},"
        << "\"gradient\":{\"t_hot\":1.1,\"t_cold\":0.9,\"gamma\":1.0,"
        << "\"n_bins\":24,\"warmup_steps\":100000}}";
    return cfg.str();
}

void criterion_3() {
    auto spec = chain_spec();
    ForceField field(spec.topology);
    BaoabIntegrator integ(spec, field, 1, 0.01,
                          ThermostatSpec::pile_l(1.0, 1.0, 0), 31);
    auto state = RingPolymerState::zeros(spec.n_particles, 1, 1);
    for (int i = 0; i < spec.n_particles; ++i) state.pos(i, 0, 0) = i + 0.5;
    RandomStream rng(31, 5);
    sample_momenta(state, spec, 1.0, rng);
    state.rng_cursor = rng.cursor();

    SamplingPlan warm;
    warm.n_steps = 20000;
    warm.record_estimators = false;
    run_sampling(integ, state, warm);
    SamplingPlan plan;
    plan.n_steps = 300000;
    plan.sample_stride = 20;
    auto record = run_sampling(integ, state, plan);
    const double t_kin = mean(record.series("temperature"));
    const bool pass = std::abs(t_kin - 1.0) < 0.02;
    report(3, "classical limit, P=1 chain", pass,
           fmt("kinetic temperature=%.4f target=1.0 (KE/dof=T/2 within 2%%)",
               t_kin));
}

// criteria 4 and 5 share one thermal-gradient experiment over P={1,16,32,64}
void criteria_4_5() {
    const fs::path out = fs::temp_directory_path() / "npi_acceptance_gradient";
    std::map<int, std::pair<double, double>> rows;  // P -> (temperature, flux)
    try {
        fs::remove_all(out);
        auto config = parse_config(chain_gradient_json(out.string()));
        run_experiment(config, 1);
        std::ifstream in(out / "summary.csv");
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            std::istringstream row(line);
            std::string cell;
            std::getline(row, cell, ',');
            const int p = std::stoi(cell);
            std::getline(row, cell, ',');
            const double temp = std::stod(cell);
            std::getline(row, cell, ',');
            const double flux = std::stod(cell);
            rows[p] = {temp, flux};
        }
    } catch (const std::exception& e) {
        report(4, "steady-state mean temperature", false, e.what());
        report(5, "flux P-convergence", false, e.what());
        return;
    }

    bool pass4 = true;
    std::string det4;
    for (int p : {1, 16, 32}) {
        const double t = rows[p].first;
        pass4 = pass4 && std::abs(t - 1.0) < 0.03;
        det4 += fmt("T_mid(P=%d)=%.4f ", p, t);
    }
    report(4, "steady-state mean temperature", pass4,
           det4 + "target 1.0 within 3%");

    const double j1 = rows[1].second, j16 = rows[16].second;
    const double j32 = rows[32].second, j64 = rows[64].second;
    const double r1 = std::abs(j32 - j16) / std::abs(j16);
    const double r2 = std::abs(j64 - j32) / std::abs(j32);
    const bool pass5 = r1 > r2 && r2 < 0.15;
    report(5, "flux P-convergence", pass5,
           fmt("J(16,32,64)=%.4f/%.4f/%.4f rel.steps=%.3f>%.3f, second<0.15; "
               "classical J(1)=%.4f (quantum/classical trend recorded, not "
               "gated)",
               j16, j32, j64, r1, r2, j1));
}

// ---------------------------------------------------------------------------
// 6. branch-ensemble equilibrium limit and OU velocity autocorrelation
// ---------------------------------------------------------------------------
void criterion_6() {
    bool pass_a = false, pass_b = false;
    std::string det_a, det_b;
    {
        // (a) 16 unperturbed branches vs single-trajectory equilibrium mean
        // of the particle position in a displaced well (Gaussian observable,
        // nonzero mean, so 3-sigma coverage of the 16-branch intervals is
        // accurate)
        auto spec = oscillator_spec(1.0);
        ForceField field(std::vector<PotentialTerm>{
            PotentialTerm::external_well(0, 1.0, {1.3})});
        const int P = 4;
        BaoabIntegrator integ(spec, field, P, 0.05,
                              ThermostatSpec::pile_l(1.0, 1.0, 0), 61);
        auto state = RingPolymerState::zeros(1, P, 1);
        RandomStream rng(61, 1);
        sample_momenta(state, spec, 1.0, rng);
        state.rng_cursor = rng.cursor();

        SamplingPlan plan;
        plan.n_steps = 200000;
        plan.sample_stride = 10;
        plan.snapshot_stride = 2000;
        plan.observables = {{"well", ObservableRegistry::lookup("x:0:0", field)}};
        auto record = run_sampling(integ, state, plan);
        auto series = record.series("well");
        const double eq_mean = mean(series);
        const double tau_int = integrated_autocorrelation_time(series);
        const double eq_se =
            standard_error(series) * std::sqrt(std::max(1.0, tau_int));

        BranchPlan bplan;
        bplan.n_branches = 16;
        bplan.spacing_steps = 2000;
        bplan.branch_length_steps = 4000;
        bplan.branch_dt = 0.05;
        bplan.record_stride = 20;
        bplan.perturbation = PerturbationSpec::none();
        bplan.base_thermostat = ThermostatSpec::pile_l(1.0, 1.0, 0);
        bplan.observables = {
            {"well", ObservableRegistry::lookup("x:0:0", field)}};
        auto harvest = harvest_initial_conditions(record, bplan);
        harvest.states.resize(bplan.n_branches);
        auto ensemble = run_branches(harvest.states, bplan, spec, field, 61, 2);
        auto avg = npi_average(ensemble, "well");
        int ok = 0;
        for (const auto& pt : avg) {
            const double tol =
                3.0 * std::sqrt(pt.stderr_ * pt.stderr_ + eq_se * eq_se);
            if (std::abs(pt.mean - eq_mean) <= tol) ++ok;
        }
        const double frac = static_cast<double>(ok) / avg.size();
        pass_a = frac >= 0.95;
        det_a = fmt("null branches: %.1f%% of %zu grid points within 3 sigma",
                    100.0 * frac, avg.size());
    }
    {
        // (b) Langevin velocity autocorrelation, branch mode vs one long
        // trajectory vs the analytic OU decay (T/m) exp(-gamma t)
        auto spec = oscillator_spec(1.0);
        ForceField field;  // free particle
        const double dt = 0.01, gamma = 1.0;
        const int stride = 10, max_lag = 20;

        BaoabIntegrator integ(spec, field, 1, dt,
                              ThermostatSpec::pile_l(1.0 / gamma, 1.0, 0), 62);
        auto state = RingPolymerState::zeros(1, 1, 1);
        RandomStream rng(62, 2);
        sample_momenta(state, spec, 1.0, rng);
        state.rng_cursor = rng.cursor();
        std::vector<double> v_series;
        std::vector<RingPolymerState> snaps;
        for (long s = 1; s <= 400000; ++s) {
            integ.step(state);
            if (s % stride == 0) v_series.push_back(state.mom(0, 0, 0));
            if (s % 500 == 0) snaps.push_back(state);
        }
        auto corr = correlation_equilibrium(v_series, v_series, max_lag);

        // fresh-noise branches started from harvested equilibrium snapshots
        std::vector<std::vector<double>> branch_v(snaps.size());
        for (std::size_t b = 0; b < snaps.size(); ++b) {
            BaoabIntegrator bi(spec, field, 1, dt,
                               ThermostatSpec::pile_l(1.0 / gamma, 1.0,
                                                      1000 + b),
                               62);
            auto st = snaps[b];
            branch_v[b].push_back(st.mom(0, 0, 0));
            for (int s = 1; s <= max_lag * stride; ++s) {
                bi.step(st);
                if (s % stride == 0) branch_v[b].push_back(st.mom(0, 0, 0));
            }
        }
        bool ok = true;
        double worst_single = 0.0, worst_branch = 0.0;
        for (int lag = 0; lag <= max_lag; ++lag) {
            const double analytic = std::exp(-gamma * lag * stride * dt);
            std::vector<double> prod;
            for (const auto& bv : branch_v) prod.push_back(bv[0] * bv[lag]);
            const double c_branch = mean(prod);
            const double se = standard_error(prod);
            const double d_single = std::abs(corr[lag].value - analytic);
            const double d_branch = std::abs(c_branch - analytic);
            worst_single = std::max(worst_single, d_single);
            worst_branch = std::max(worst_branch, d_branch);
            if (d_single > 0.05 || d_branch > std::max(3.0 * se, 0.02))
                ok = false;
        }
        pass_b = ok;
        det_b = fmt("OU autocorr: worst dev single=%.3f branch=%.3f",
                    worst_single, worst_branch);
    }
    report(6, "branch-ensemble equilibrium limit", pass_a && pass_b,
           det_a + "; " + det_b);
}

// ---------------------------------------------------------------------------
// 7. analytic master-equation solutions and Heisenberg equivalence
// ---------------------------------------------------------------------------
CMatrix random_matrix(int dim, RandomStream& rng) {
    CMatrix m(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
            m(r, c) = std::complex<double>(rng.gaussian(), rng.gaussian());
    return m;
}

CMatrix random_hermitian(int dim, RandomStream& rng) {
    CMatrix m = random_matrix(dim, rng);
    return 0.5 * (m + m.adjoint()).eval();
}

DensityMatrix random_density(int dim, RandomStream& rng) {
    CMatrix g = random_matrix(dim, rng);
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace();
    return DensityMatrix{rho};
}

LindbladGenerator random_gksl(int dim, int n_jumps, RandomStream& rng) {
    LindbladGenerator gen;
    gen.H = random_hermitian(dim, rng);
    for (int j = 0; j < n_jumps; ++j)
        gen.jumps.emplace_back(random_matrix(dim, rng),
                               0.1 + 0.4 * rng.uniform());
    return gen;
}

void criterion_7() {
    double worst_damp = 0.0, worst_deph = 0.0, worst_heis = 0.0;

    {
        const double lambda = 0.7;
        LindbladGenerator gen;
        gen.H = CMatrix::Zero(2, 2);
        gen.jumps = {{sigma_minus(), lambda}};
        Eigen::VectorXcd psi(2);
        psi << std::sqrt(0.6), std::sqrt(0.4);
        auto traj = evolve(gen, DensityMatrix::pure(psi),
                           {.t_final = 2.0, .dt = 5e-4, .record_stride = 400});
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            const double t = traj.times[k];
            worst_damp = std::max(
                worst_damp, std::abs(traj.states[k](0, 0).real() -
                                     0.6 * std::exp(-lambda * t)));
        }
    }
    {
        const double lambda = 0.4;
        LindbladGenerator gen;
        gen.H = CMatrix::Zero(2, 2);
        gen.jumps = {{sigma_z(), lambda}};
        Eigen::VectorXcd psi(2);
        psi << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
        auto traj = evolve(gen, DensityMatrix::pure(psi),
                           {.t_final = 3.0, .dt = 5e-4, .record_stride = 1000});
        for (std::size_t k = 0; k < traj.times.size(); ++k)
            worst_deph = std::max(
                worst_deph, std::abs(traj.states[k](0, 1).real() -
                                     0.5 * std::exp(-2.0 * lambda *
                                                    traj.times[k])));
    }
    {
        RandomStream rng(71, 0);
        for (int rep = 0; rep < 5; ++rep) {
            LindbladGenerator gen;
            gen.H = random_hermitian(3, rng);
            auto rho0 = random_density(3, rng);
            const CMatrix A = random_hermitian(3, rng);
            auto [schro, heis] = heisenberg_check(gen, A, rho0, 0.8);
            worst_heis = std::max(worst_heis, std::abs(schro - heis));
        }
    }
    const bool pass = worst_damp < 1e-6 && worst_deph < 1e-6 && worst_heis < 1e-7;
    report(7, "Lindblad analytics", pass,
           fmt("damping dev=%.2e dephasing dev=%.2e heisenberg dev=%.2e",
               worst_damp, worst_deph, worst_heis));
}

// ---------------------------------------------------------------------------
// 8. positivity: random GKSL generators vs the non-secular counterexample
// ---------------------------------------------------------------------------
void criterion_8() {
    RandomStream rng(81, 0);
    int positive = 0;
    const int n_random = 100;
    for (int rep = 0; rep < n_random; ++rep) {
        const int dim = 2 + rep % 3;
        auto gen = random_gksl(dim, 2, rng);
        auto rho0 = random_density(dim, rng);
        auto traj = evolve(gen, rho0,
                           {.t_final = 1.0, .dt = 1e-3, .record_stride = 50});
        auto rep_pos = positivity_report(traj, 1e-10);
        if (!rep_pos.first_violation_time.has_value()) ++positive;
    }

    // fixed non-secular generator known to leave the state space
    const double delta = 1.0, theta = 0.1, phi = 1.8;
    RedfieldGenerator gen;
    gen.H = 0.5 * delta * sigma_z();
    gen.couplings = {std::cos(theta) * sigma_x() + std::sin(theta) * sigma_z()};
    gen.rates.entries = {{delta, 1.0}, {-delta, 0.1}, {0.0, 0.5}};
    gen.alpha2 = 0.5;
    Eigen::VectorXcd psi(2);
    psi << std::cos(phi / 2), std::sin(phi / 2);
    auto traj = evolve(gen, DensityMatrix::pure(psi),
                       {.t_final = 1.5, .dt = 1e-3, .record_stride = 20});
    auto viol = positivity_report(traj, 1e-6);
    double worst = 1.0;
    for (double e : viol.min_eigenvalue) worst = std::min(worst, e);

    const bool pass = positive == n_random &&
                      viol.first_violation_time.has_value() && worst < -1e-6;
    report(8, "positivity theorem suite", pass,
           fmt("%d/%d GKSL runs kept min eig >= -1e-10; non-secular case "
               "flagged at t=%.3f with min eig %.2e",
               positive, n_random,
               viol.first_violation_time.value_or(-1.0), worst));
}

// ---------------------------------------------------------------------------
// 9. determinism and persistence
// ---------------------------------------------------------------------------
std::string equilibrium_json(const std::string& out_dir) {
    std::ostringstream cfg;
    cfg << "{\"mode\":\"equilibrium\",\"seed\":99,"
        << "\"output_dir\":\"" << out_dir << "\",\"n_beads\":[4],"
        << "\"system\":{\"n_particles\":2,\"masses\":[1.0,1.0],\"dimension\":1,"
        << "\"box_length\":[8.0],\"periodic\":[true],\"beta\":1.0,"
        << "\"potentials\":[{\"kind\":\"harmonic_bond\",\"particles\":[0,1],"
        << "\"params\":[4.0,1.0]}]},"
        << "\"equilibrium\":{\"n_steps\":5000,\"dt\":0.01,\"sample_stride\":10,"
        << "\"thermostat\":{\"kind\":\"pile_l\",\"tau\":1.0,\"temperature\":1.0},"
        << "\"observables\":[\"x:0:0\",\"potential\"]}}";
    return cfg.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void criterion_9() {
    bool pass = true;
    std::string detail;
    try {
        const fs::path a = fs::temp_directory_path() / "npi_acceptance_det_a";
        const fs::path b = fs::temp_directory_path() / "npi_acceptance_det_b";
        fs::remove_all(a);
        fs::remove_all(b);
        run_experiment(parse_config(equilibrium_json(a.string())), 1);
        run_experiment(parse_config(equilibrium_json(b.string())), 3);
        const bool csv_same =
            slurp(a / "series_p4.csv") == slurp(b / "series_p4.csv");
        const bool ckpt_same =
            slurp(a / "state_p4.npi") == slurp(b / "state_p4.npi");

        auto loaded = load_checkpoint((a / "state_p4.npi").string());
        const fs::path rt = a / "roundtrip.npi";
        auto spec = parse_config(equilibrium_json(a.string())).system;
        save_checkpoint(loaded.state, spec, rt.string());
        auto again = load_checkpoint(rt.string(), &spec);
        const bool roundtrip = again.state == loaded.state;

        pass = csv_same && ckpt_same && roundtrip;
        detail = fmt("repeat run csv identical=%d checkpoint identical=%d "
                     "roundtrip bit-exact=%d",
                     int(csv_same), int(ckpt_same), int(roundtrip));
    } catch (const std::exception& e) {
        pass = false;
        detail = e.what();
    }
    report(9, "determinism and persistence", pass, detail);
}

}  // namespace

int main(int argc, char** argv) {
    // with no arguments all nine criteria run; otherwise only the listed ids
    std::vector<int> ids;
    for (int a = 1; a < argc; ++a) ids.push_back(std::atoi(argv[a]));
    auto wanted = [&](int id) {
        return ids.empty() || std::find(ids.begin(), ids.end(), id) != ids.end();
    };
    int total = 0;
    if (wanted(1)) criterion_1(), ++total;
    if (wanted(2)) criterion_2(), ++total;
    if (wanted(3)) criterion_3(), ++total;
    if (wanted(4) || wanted(5)) criteria_4_5(), total += 2;
    if (wanted(6)) criterion_6(), ++total;
    if (wanted(7)) criterion_7(), ++total;
    if (wanted(8)) criterion_8(), ++total;
    if (wanted(9)) criterion_9(), ++total;
    std::printf("acceptance: %d/%d criteria passed\n", total - g_failures,
                total);
    return g_failures == 0 ? 0 : 1;
}
