#include "npi/master_eq.hpp"

#include <cmath>
#include <functional>

namespace npi {

using namespace std::complex_literals;

namespace {

CMatrix hermitize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

void check_dim(const CMatrix& a, const CMatrix& b, const char* what) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(entries),
                                              Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void DensityMatrix::validate(double tolerance) const {
    if (entries.rows() != entries.cols())
        throw std::invalid_argument("DensityMatrix: not square");
    if (entries.rows() > kMaxHilbertDim)
        throw std::invalid_argument("DensityMatrix: dim above dense cap");
    if (hermiticity_error() > 1e-12)
        throw std::invalid_argument("DensityMatrix: not Hermitian");
    if (trace_deviation() > 1e-12)
        throw std::invalid_argument("DensityMatrix: trace != 1");
    if (min_eigenvalue() < -tolerance)
        throw std::invalid_argument("DensityMatrix: negative eigenvalue");
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
    Eigen::VectorXcd n = psi / psi.norm();
    return {n * n.adjoint()};
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
    return {CMatrix::Identity(dim, dim) / static_cast<double>(dim)};
}

void LindbladGenerator::validate() const {
    if (H.rows() != H.cols()) throw std::invalid_argument("LindbladGenerator: H not square");
    if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("LindbladGenerator: H not Hermitian");
    if (!(hbar > 0.0)) throw std::invalid_argument("LindbladGenerator: hbar <= 0");
    for (const auto& [L, lambda] : jumps) {
        check_dim(H, L, "LindbladGenerator");
        if (lambda < 0.0)
            throw std::invalid_argument("LindbladGenerator: negative rate");
    }
}

double RateTable::lookup(double omega) const {
    for (const auto& [w, r] : entries) {
        const double scale = std::max({std::abs(w), std::abs(omega), 1.0});
        if (std::abs(w - omega) <= 1e-9 * scale) return r;
    }
    return 0.0;
}

void RedfieldGenerator::validate() const {
    if (H.rows() != H.cols()) throw std::invalid_argument("RedfieldGenerator: H not square");
    if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("RedfieldGenerator: H not Hermitian");
    for (const auto& A : couplings) check_dim(H, A, "RedfieldGenerator");
    for (const auto& [w, r] : rates.entries)
        if (!std::isfinite(w) || !std::isfinite(r))
            throw std::invalid_argument("RedfieldGenerator: non-finite rate table");
    if (!(hbar > 0.0) || alpha2 < 0.0)
        throw std::invalid_argument("RedfieldGenerator: bad hbar/alpha2");
}

CMatrix lindblad_rhs(const LindbladGenerator& gen, const CMatrix& rho) {
    check_dim(gen.H, rho, "lindblad_rhs");
    CMatrix out = -1.0i / gen.hbar * (gen.H * rho - rho * gen.H);
    for (const auto& [L, lambda] : gen.jumps) {
        if (lambda == 0.0) continue;
        const CMatrix LdL = L.adjoint() * L;
        out += lambda * (L * rho * L.adjoint() - 0.5 * (LdL * rho + rho * LdL));
    }
    return out;
}

namespace {

// eigenoperator decomposition of a coupling operator over Bohr frequencies
struct EigenOperators {
    std::vector<double> frequencies;       // distinct Bohr frequencies
    std::vector<CMatrix> operators;        // A(omega), same order
};

EigenOperators eigen_operators(const CMatrix& H, const CMatrix& A) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(H));
    const auto& E = es.eigenvalues();
    const CMatrix& V = es.eigenvectors();
    const CMatrix A_eig = V.adjoint() * A * V;  // in the energy eigenbasis
    const int n = static_cast<int>(E.size());

    EigenOperators out;
    const double e_scale = std::max(E.cwiseAbs().maxCoeff(), 1.0);
    auto block_of = [&](double omega) -> int {
        for (std::size_t k = 0; k < out.frequencies.size(); ++k)
            if (std::abs(out.frequencies[k] - omega) <= 1e-9 * e_scale)
                return static_cast<int>(k);
        out.frequencies.push_back(omega);
        out.operators.push_back(CMatrix::Zero(n, n));
        return static_cast<int>(out.frequencies.size()) - 1;
    };

    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (A_eig(a, b) == 0.0) continue;
            // A(omega) collects matrix elements with E_b - E_a = omega
            const int k = block_of(E(b) - E(a));
            out.operators[k](a, b) += A_eig(a, b);
        }
    // back to the original basis
    for (auto& op : out.operators) op = V * op * V.adjoint();
    return out;
}

}  // namespace

CMatrix redfield_rhs(const RedfieldGenerator& gen, const CMatrix& rho) {
    gen.validate();
    check_dim(gen.H, rho, "redfield_rhs");
    CMatrix out = -1.0i / gen.hbar * (gen.H * rho - rho * gen.H);
    for (const auto& A : gen.couplings) {
        const auto ops = eigen_operators(gen.H, A);
        for (std::size_t k = 0; k < ops.frequencies.size(); ++k) {
            const double rate = gen.rates.lookup(ops.frequencies[k]);
            if (rate == 0.0) continue;
            const CMatrix& Aw = ops.operators[k];
            for (std::size_t l = 0; l < ops.frequencies.size(); ++l) {
                const CMatrix& Awp = ops.operators[l];
                const CMatrix term =
                    0.5 * gen.alpha2 * rate *
                    (Aw * rho * Awp.adjoint() - Awp.adjoint() * Aw * rho);
                out += term + term.adjoint();
            }
        }
    }
    return out;
}

LindbladGenerator secular_reduce(const RedfieldGenerator& gen) {
    gen.validate();
    LindbladGenerator out;
    out.H = gen.H;
    out.hbar = gen.hbar;
    for (const auto& A : gen.couplings) {
        const auto ops = eigen_operators(gen.H, A);
        for (std::size_t k = 0; k < ops.frequencies.size(); ++k) {
            const double rate = gen.rates.lookup(ops.frequencies[k]);
            if (rate == 0.0) continue;
            if (rate < 0.0)
                throw std::invalid_argument(
                    "secular_reduce: negative rate at Bohr frequency " +
                    std::to_string(ops.frequencies[k]));
            out.jumps.emplace_back(ops.operators[k], gen.alpha2 * rate);
        }
    }
    out.validate();
    return out;
}

namespace {

Trajectory evolve_impl(const std::function<CMatrix(const CMatrix&)>& rhs,
                       const DensityMatrix& rho0, const EvolveOptions& options,
                       double liouvillian_scale) {
    rho0.validate(1e-9);
    if (!(options.dt > 0.0) || !(options.t_final >= 0.0))
        throw std::invalid_argument("evolve: dt and t_final must be positive");
    if (options.dt * liouvillian_scale > 2.0)
        throw std::invalid_argument(
            "evolve: dt does not resolve the fastest Liouvillian frequency (dt * "
            "omega_max = " +
            std::to_string(options.dt * liouvillian_scale) + " > 2); reduce dt");

    const long n_steps = std::lround(options.t_final / options.dt);
    CMatrix rho = hermitize(rho0.entries);
    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(rho);
    for (long step = 1; step <= n_steps; ++step) {
        const CMatrix k1 = rhs(rho);
        const CMatrix k2 = rhs(rho + 0.5 * options.dt * k1);
        const CMatrix k3 = rhs(rho + 0.5 * options.dt * k2);
        const CMatrix k4 = rhs(rho + options.dt * k3);
        rho += options.dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rho = hermitize(rho);
        const double drift = std::abs(rho.trace().real() - 1.0);
        if (drift > options.trace_tolerance)
            throw std::runtime_error(
                "evolve: trace drift " + std::to_string(drift) + " at t = " +
                std::to_string(step * options.dt) +
                " exceeds tolerance; reduce dt");
        if (step % options.record_stride == 0 || step == n_steps) {
            traj.times.push_back(step * options.dt);
            traj.states.push_back(rho);
        }
    }
    return traj;
}

double spectral_spread(const CMatrix& H) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(H), Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff();
}

}  // namespace

Trajectory evolve(const LindbladGenerator& gen, const DensityMatrix& rho0,
                  const EvolveOptions& options) {
    gen.validate();
    check_dim(gen.H, rho0.entries, "evolve");
    double scale = spectral_spread(gen.H) / gen.hbar;
    for (const auto& [L, lambda] : gen.jumps)
        scale += lambda * L.operatorNorm() * L.operatorNorm();
    return evolve_impl([&](const CMatrix& r) { return lindblad_rhs(gen, r); },
                       rho0, options, scale);
}

Trajectory evolve(const RedfieldGenerator& gen, const DensityMatrix& rho0,
                  const EvolveOptions& options) {
    gen.validate();
    check_dim(gen.H, rho0.entries, "evolve");
    double scale = spectral_spread(gen.H) / gen.hbar;
    for (const auto& A : gen.couplings) {
        double rate_sum = 0.0;
        for (const auto& [w, r] : gen.rates.entries) rate_sum += std::abs(r);
        scale += gen.alpha2 * rate_sum * A.operatorNorm() * A.operatorNorm();
    }
    return evolve_impl([&](const CMatrix& r) { return redfield_rhs(gen, r); },
                       rho0, options, scale);
}

double expectation(const CMatrix& rho, const CMatrix& A) {
    check_dim(rho, A, "expectation");
    const std::complex<double> tr = (rho * A).trace();
    return tr.real();
}

double expectation(const DensityMatrix& rho, const CMatrix& A) {
    return expectation(rho.entries, A);
}

std::pair<double, double> heisenberg_check(const LindbladGenerator& gen,
                                           const CMatrix& A,
                                           const DensityMatrix& rho0, double t,
                                           double dt) {
    gen.validate();
    for (const auto& [L, lambda] : gen.jumps)
        if (lambda != 0.0)
            throw std::invalid_argument(
                "heisenberg_check: closed system required (all rates zero)");

    EvolveOptions opt;
    opt.t_final = t;
    opt.dt = dt;
    opt.record_stride = 1 << 30;  // endpoints only
    const auto traj = evolve(gen, rho0, opt);
    const double schroedinger = expectation(traj.states.back(), A);

    // Heisenberg route: dA/dt = (i/hbar)[H, A], RK4 with the same step
    const long n_steps = std::lround(t / dt);
    CMatrix At = A;
    auto rhs = [&](const CMatrix& X) -> CMatrix {
        return 1.0i / gen.hbar * (gen.H * X - X * gen.H);
    };
    for (long step = 0; step < n_steps; ++step) {
        const CMatrix k1 = rhs(At);
        const CMatrix k2 = rhs(At + 0.5 * dt * k1);
        const CMatrix k3 = rhs(At + 0.5 * dt * k2);
        const CMatrix k4 = rhs(At + dt * k3);
        At += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    const double heisenberg = expectation(rho0.entries, At);
    return {schroedinger, heisenberg};
}

PositivityReport positivity_report(const Trajectory& trajectory,
                                   double tolerance) {
    if (trajectory.states.empty())
        throw std::invalid_argument("positivity_report: empty trajectory");
    PositivityReport rep;
    rep.times = trajectory.times;
    for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
        DensityMatrix rho{trajectory.states[k]};
        const double min_eig = rho.min_eigenvalue();
        rep.min_eigenvalue.push_back(min_eig);
        rep.trace_deviation.push_back(rho.trace_deviation());
        if (!rep.first_violation_time && min_eig < -tolerance)
            rep.first_violation_time = trajectory.times[k];
    }
    return rep;
}

CMatrix sigma_x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
CMatrix sigma_y() {
    CMatrix m(2, 2);
    m << 0, -1.0i, 1.0i, 0;
    return m;
}
CMatrix sigma_z() {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}
CMatrix sigma_plus() {
    CMatrix m(2, 2);
    m << 0, 1, 0, 0;
    return m;
}
CMatrix sigma_minus() {
    CMatrix m(2, 2);
    m << 0, 0, 1, 0;
    return m;
}

}  // namespace npi
