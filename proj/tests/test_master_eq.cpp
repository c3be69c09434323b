#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <unsupported/Eigen/MatrixFunctions>

#include "npi/master_eq.hpp"
#include "npi/rng.hpp"

using namespace npi;
using namespace std::complex_literals;

namespace {

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

// vec(A rho B) = (B^T kron A) vec(rho)
Eigen::MatrixXcd kron(const CMatrix& a, const CMatrix& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c)
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) =
                a(r, c) * b;
    return out;
}

Eigen::MatrixXcd liouvillian_matrix(const LindbladGenerator& gen) {
    const int d = static_cast<int>(gen.H.rows());
    const CMatrix id = CMatrix::Identity(d, d);
    Eigen::MatrixXcd sup =
        (-1i / gen.hbar) * (kron(id, gen.H) - kron(gen.H.transpose(), id));
    for (const auto& [L, lambda] : gen.jumps) {
        const CMatrix LdL = L.adjoint() * L;
        sup += lambda * (kron(L.conjugate(), L) - 0.5 * kron(id, LdL) -
                         0.5 * kron(LdL.transpose(), id));
    }
    return sup;
}

CMatrix unvec(const Eigen::VectorXcd& v, int d) {
    CMatrix m(d, d);
    for (int c = 0; c < d; ++c)
        for (int r = 0; r < d; ++r) m(r, c) = v(c * d + r);
    return m;
}

Eigen::VectorXcd vec(const CMatrix& m) {
    Eigen::VectorXcd v(m.size());
    const int d = static_cast<int>(m.rows());
    for (int c = 0; c < d; ++c)
        for (int r = 0; r < d; ++r) v(c * d + r) = m(r, c);
    return v;
}

LindbladGenerator random_gksl(int dim, int n_jumps, RandomStream& rng) {
    LindbladGenerator gen;
    gen.H = random_hermitian(dim, rng);
    for (int j = 0; j < n_jumps; ++j)
        gen.jumps.emplace_back(random_matrix(dim, rng),
                               0.1 + 0.4 * rng.uniform());
    return gen;
}

double purity(const CMatrix& rho) { return (rho * rho).trace().real(); }

}  // namespace

TEST_CASE("qubit operator conventions") {
    CMatrix z = sigma_z();
    CHECK(z(0, 0).real() == 1.0);
    CHECK(z(1, 1).real() == -1.0);
    CMatrix m = sigma_minus();
    CHECK(m(1, 0).real() == 1.0);  // lowers |0> to |1>
    CHECK(m(0, 1) == 0.0);
    CHECK((sigma_plus() - sigma_minus().adjoint()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((sigma_x() * sigma_x() - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() ==
          0.0);
    // [sigma_x, sigma_y] = 2 i sigma_z
    CHECK((sigma_x() * sigma_y() - sigma_y() * sigma_x() - 2.0 * 1i * sigma_z())
              .cwiseAbs()
              .maxCoeff() < 1e-15);
}

TEST_CASE("density-matrix validation") {
    auto mixed = DensityMatrix::maximally_mixed(3);
    CHECK(mixed.trace_deviation() < 1e-15);
    CHECK(mixed.min_eigenvalue() == doctest::Approx(1.0 / 3.0));
    mixed.validate();

    Eigen::VectorXcd psi(2);
    psi << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    auto pure = DensityMatrix::pure(psi);
    CHECK(purity(pure.entries) == doctest::Approx(1.0));
    pure.validate();

    DensityMatrix bad{CMatrix::Identity(2, 2)};  // trace 2
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    DensityMatrix nonherm{(CMatrix(2, 2) << 0.5, 0.3, 0.1, 0.5).finished()};
    CHECK_THROWS_AS(nonherm.validate(), std::invalid_argument);
    DensityMatrix negative{
        (CMatrix(2, 2) << 1.2, 0.0, 0.0, -0.2).finished()};
    CHECK_THROWS_AS(negative.validate(), std::invalid_argument);
}

TEST_CASE("damped-qubit dissipator hand value") {
    LindbladGenerator gen;
    gen.H = CMatrix::Zero(2, 2);
    gen.jumps = {{sigma_minus(), 1.0}};
    CMatrix excited = CMatrix::Zero(2, 2);
    excited(0, 0) = 1.0;
    CMatrix rhs = lindblad_rhs(gen, excited);
    CHECK(rhs(0, 0).real() == doctest::Approx(-1.0));
    CHECK(rhs(1, 1).real() == doctest::Approx(1.0));
    CHECK(std::abs(rhs(0, 1)) < 1e-15);
}

TEST_CASE("unitary part is -i/hbar [H, rho]") {
    LindbladGenerator gen;
    gen.H = sigma_x();
    gen.hbar = 2.0;
    CMatrix rho = 0.5 * (CMatrix::Identity(2, 2) + sigma_z());
    CMatrix rhs = lindblad_rhs(gen, rho);
    CMatrix expect = (-1i / 2.0) * (gen.H * rho - rho * gen.H);
    CHECK((rhs - expect).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("trace is preserved to machine precision") {
    RandomStream rng(2024, 0);
    auto gen = random_gksl(4, 3, rng);
    auto rho0 = random_density(4, rng);
    EvolveOptions opt;
    opt.t_final = 2.0;
    opt.dt = 1e-3;
    opt.record_stride = 100;
    auto traj = evolve(gen, rho0, opt);
    for (const auto& rho : traj.states) {
        CHECK(std::abs(rho.trace().real() - 1.0) < 1e-13);
        CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("amplitude damping matches the analytic solution") {
    const double lambda = 0.7;
    LindbladGenerator gen;
    gen.H = CMatrix::Zero(2, 2);
    gen.jumps = {{sigma_minus(), lambda}};
    Eigen::VectorXcd psi(2);
    psi << std::sqrt(0.6), std::sqrt(0.4);
    auto rho0 = DensityMatrix::pure(psi);
    EvolveOptions opt;
    opt.t_final = 2.0;
    opt.dt = 5e-4;
    opt.record_stride = 400;
    auto traj = evolve(gen, rho0, opt);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const double t = traj.times[k];
        const auto& rho = traj.states[k];
        CHECK(std::abs(rho(0, 0).real() - 0.6 * std::exp(-lambda * t)) < 1e-6);
        const double coh = std::sqrt(0.24) * std::exp(-0.5 * lambda * t);
        CHECK(std::abs(rho(0, 1) - std::complex<double>(coh, 0.0)) < 1e-6);
    }
}

TEST_CASE("pure dephasing decays coherence at 2 lambda") {
    const double lambda = 0.4;
    LindbladGenerator gen;
    gen.H = CMatrix::Zero(2, 2);
    gen.jumps = {{sigma_z(), lambda}};
    Eigen::VectorXcd psi(2);
    psi << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    auto traj = evolve(gen, DensityMatrix::pure(psi),
                       {.t_final = 3.0, .dt = 5e-4, .record_stride = 1000});
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const double expect = 0.5 * std::exp(-2.0 * lambda * traj.times[k]);
        CHECK(std::abs(traj.states[k](0, 1).real() - expect) < 1e-6);
        CHECK(std::abs(traj.states[k](0, 0).real() - 0.5) < 1e-12);
    }
}

TEST_CASE("detailed-balance jumps drive the qubit to the Gibbs state") {
    const double delta = 1.0, beta = 1.3, down = 0.8;
    LindbladGenerator gen;
    gen.H = 0.5 * delta * sigma_z();  // |0> is the upper level
    gen.jumps = {{sigma_minus(), down}, {sigma_plus(), down * std::exp(-beta * delta)}};
    auto traj = evolve(gen, DensityMatrix::maximally_mixed(2),
                       {.t_final = 40.0, .dt = 2e-3, .record_stride = 20000});
    const double z = std::exp(-0.5 * beta * delta) + std::exp(0.5 * beta * delta);
    const auto& rho = traj.states.back();
    CHECK(std::abs(rho(0, 0).real() - std::exp(-0.5 * beta * delta) / z) < 1e-8);
    CHECK(std::abs(rho(1, 1).real() - std::exp(0.5 * beta * delta) / z) < 1e-8);
}

TEST_CASE("Rabi oscillation of <sigma_z> under H = sigma_x") {
    for (double hbar : {1.0, 3.0}) {
        LindbladGenerator gen;
        gen.H = sigma_x();
        gen.hbar = hbar;
        Eigen::VectorXcd up(2);
        up << 1.0, 0.0;
        auto traj = evolve(gen, DensityMatrix::pure(up),
                           {.t_final = 4.0, .dt = 2e-4, .record_stride = 2000});
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            const double expect = std::cos(2.0 * traj.times[k] / hbar);
            CHECK(std::abs(expectation(traj.states[k], sigma_z()) - expect) <
                  1e-8);
        }
    }
}

TEST_CASE("random 3-level channel matches the matrix-exponential oracle") {
    RandomStream rng(31337, 0);
    for (int trial = 0; trial < 5; ++trial) {
        auto gen = random_gksl(3, 2, rng);
        auto rho0 = random_density(3, rng);
        EvolveOptions opt;
        opt.t_final = 1.0;
        opt.dt = 2e-4;
        opt.record_stride = 5000;
        auto traj = evolve(gen, rho0, opt);
        const auto sup = liouvillian_matrix(gen);
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            const Eigen::MatrixXcd prop = (traj.times[k] * sup).exp();
            const CMatrix exact = unvec(prop * vec(rho0.entries), 3);
            CHECK((traj.states[k] - exact).cwiseAbs().maxCoeff() < 1e-7);
        }
    }
}

TEST_CASE("Heisenberg and Schroedinger pictures agree for closed systems") {
    RandomStream rng(555, 0);
    for (int trial = 0; trial < 3; ++trial) {
        LindbladGenerator gen;
        gen.H = random_hermitian(3, rng);
        auto rho0 = random_density(3, rng);
        const CMatrix A = random_hermitian(3, rng);
        auto [schro, heis] = heisenberg_check(gen, A, rho0, 0.8);
        CHECK(std::abs(schro - heis) < 1e-7);
    }

    LindbladGenerator open_gen;
    open_gen.H = sigma_z();
    open_gen.jumps = {{sigma_minus(), 0.5}};
    CHECK_THROWS_AS(
        heisenberg_check(open_gen, sigma_z(), DensityMatrix::maximally_mixed(2), 1.0),
        std::invalid_argument);
}

TEST_CASE("rate-table lookup merges nearby frequencies") {
    RateTable table;
    table.entries = {{1.0, 0.7}, {-1.0, 0.2}, {0.0, 0.5}};
    CHECK(table.lookup(1.0) == 0.7);
    CHECK(table.lookup(1.0 + 1e-12) == 0.7);
    CHECK(table.lookup(-1.0) == 0.2);
    CHECK(table.lookup(0.5) == 0.0);  // untabulated frequency: no bath density
}

TEST_CASE("secular reduction of sigma_z coupling reproduces pure dephasing") {
    // a coupling diagonal in the H eigenbasis only has the omega = 0 block,
    // so the reduced generator is dephasing with rate alpha^2 R(0)
    RedfieldGenerator gen;
    gen.H = 0.5 * sigma_z();
    gen.couplings = {sigma_z()};
    gen.rates.entries = {{0.0, 0.8}};
    gen.alpha2 = 0.5;
    auto reduced = secular_reduce(gen);

    Eigen::VectorXcd psi(2);
    psi << std::sqrt(0.3), std::sqrt(0.7);
    auto rho0 = DensityMatrix::pure(psi);
    EvolveOptions opt{.t_final = 2.0, .dt = 1e-3, .record_stride = 500};
    auto a = evolve(gen, rho0, opt);
    auto b = evolve(reduced, rho0, opt);
    REQUIRE(a.times.size() == b.times.size());
    for (std::size_t k = 0; k < a.times.size(); ++k)
        CHECK((a.states[k] - b.states[k]).cwiseAbs().maxCoeff() < 1e-12);

    RedfieldGenerator negative = gen;
    negative.rates.entries = {{0.0, -0.1}};
    CHECK_THROWS_AS(secular_reduce(negative), std::invalid_argument);
}

TEST_CASE("secular reduction of sigma_x coupling gives detailed-balance jumps") {
    const double delta = 1.0;
    RedfieldGenerator gen;
    gen.H = 0.5 * delta * sigma_z();
    gen.couplings = {sigma_x()};
    gen.rates.entries = {{delta, 1.0}, {-delta, 0.3}};
    gen.alpha2 = 1.0;
    auto reduced = secular_reduce(gen);
    REQUIRE(reduced.jumps.size() == 2);
    // the omega = +delta eigenoperator of sigma_x is the lowering operator;
    // populations relax toward R(+)/R(-) detailed balance
    auto traj = evolve(reduced, DensityMatrix::maximally_mixed(2),
                       {.t_final = 30.0, .dt = 2e-3, .record_stride = 15000});
    const auto& rho = traj.states.back();
    CHECK(rho(0, 0).real() / rho(1, 1).real() == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("non-secular Redfield dynamics can leave the state space") {
    // frozen counterexample: mostly-transverse coupling, asymmetric rates
    const double delta = 1.0, theta = 0.1, phi = 1.8;
    RedfieldGenerator gen;
    gen.H = 0.5 * delta * sigma_z();
    gen.couplings = {std::cos(theta) * sigma_x() + std::sin(theta) * sigma_z()};
    gen.rates.entries = {{delta, 1.0}, {-delta, 0.1}, {0.0, 0.5}};
    gen.alpha2 = 0.5;

    Eigen::VectorXcd psi(2);
    psi << std::cos(phi / 2), std::sin(phi / 2);
    auto rho0 = DensityMatrix::pure(psi);
    EvolveOptions opt{.t_final = 1.5, .dt = 1e-3, .record_stride = 20};
    auto traj = evolve(gen, rho0, opt);
    auto report = positivity_report(traj, 1e-6);
    REQUIRE(report.first_violation_time.has_value());
    double worst = 1.0;
    for (double e : report.min_eigenvalue) worst = std::min(worst, e);
    CHECK(worst < -1e-3);

    // the secular reduction of the same generator stays positive
    auto reduced = secular_reduce(gen);
    auto straj = evolve(reduced, rho0, opt);
    auto sreport = positivity_report(straj, 1e-10);
    CHECK_FALSE(sreport.first_violation_time.has_value());
}

TEST_CASE("random GKSL channels preserve positivity and the purity bound") {
    RandomStream rng(808, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 2 + static_cast<int>(rng.uniform() * 3.0);  // 2..4
        auto gen = random_gksl(dim, 2, rng);
        auto rho0 = random_density(dim, rng);
        EvolveOptions opt;
        opt.t_final = 0.5;
        opt.dt = 1e-3;
        opt.record_stride = 100;
        auto traj = evolve(gen, rho0, opt);
        auto report = positivity_report(traj);
        CHECK_FALSE(report.first_violation_time.has_value());
        for (double e : report.min_eigenvalue) CHECK(e >= -1e-10);
        for (const auto& rho : traj.states) CHECK(purity(rho) <= 1.0 + 1e-10);
    }
}

TEST_CASE("integrator converges at fourth order") {
    LindbladGenerator gen;
    gen.H = 0.7 * sigma_x();
    gen.jumps = {{sigma_minus(), 0.9}};
    Eigen::VectorXcd up(2);
    up << 1.0, 0.0;
    auto rho0 = DensityMatrix::pure(up);

    auto final_state = [&](double dt) {
        auto traj = evolve(gen, rho0,
                           {.t_final = 1.0, .dt = dt, .record_stride = 1 << 30});
        return traj.states.back();
    };
    const CMatrix ref = final_state(1e-5);
    const double e1 = (final_state(4e-2) - ref).cwiseAbs().maxCoeff();
    const double e2 = (final_state(2e-2) - ref).cwiseAbs().maxCoeff();
    const double order = std::log2(e1 / e2);
    CHECK(order > 3.7);
    CHECK(order < 4.3);
}

TEST_CASE("evolve guards on step size and trace drift") {
    LindbladGenerator gen;
    gen.H = 50.0 * sigma_z();
    auto rho0 = DensityMatrix::maximally_mixed(2);
    EvolveOptions opt;
    opt.t_final = 1.0;
    opt.dt = 0.5;  // dt * spectral scale far beyond stability
    CHECK_THROWS_AS(evolve(gen, rho0, opt), std::invalid_argument);

    LindbladGenerator bad;
    bad.H = sigma_z();
    bad.jumps = {{sigma_minus(), -1.0}};  // negative rate
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
