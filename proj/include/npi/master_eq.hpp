#ifndef NPI_MASTER_EQ_HPP
#define NPI_MASTER_EQ_HPP

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace npi {

using CMatrix = Eigen::MatrixXcd;

inline constexpr int kMaxHilbertDim = 64;  // dense verifier, not a scaler

struct DensityMatrix {
    CMatrix entries;

    int dim() const { return static_cast<int>(entries.rows()); }
    double trace_deviation() const { return std::abs(entries.trace().real() - 1.0) +
                                            std::abs(entries.trace().imag()); }
    double hermiticity_error() const {
        return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    }
    double min_eigenvalue() const;

    // Hermitian to 1e-12, trace 1 to 1e-12, eigenvalues >= -tolerance
    void validate(double tolerance = 1e-10) const;

    static DensityMatrix pure(const Eigen::VectorXcd& psi);
    static DensityMatrix maximally_mixed(int dim);
};

struct LindbladGenerator {
    CMatrix H;
    std::vector<std::pair<CMatrix, double>> jumps;  // (L_j, lambda_j >= 0)
    double hbar = 1.0;

    void validate() const;
};

// Bath rates tabulated over system Bohr frequencies. Frequencies within a
// relative 1e-9 are treated as one secular block.
struct RateTable {
    std::vector<std::pair<double, double>> entries;  // (omega, R(omega))

    double lookup(double omega) const;
};

struct RedfieldGenerator {
    CMatrix H;                      // system Hamiltonian
    std::vector<CMatrix> couplings;  // system-side interaction operators
    RateTable rates;
    double alpha2 = 1.0;  // squared coupling strength
    double hbar = 1.0;

    void validate() const;
};

// dρ/dt = -(i/ħ)[H, ρ] + Σ_j λ_j (L_j ρ L_j† - ½{L_j†L_j, ρ})
CMatrix lindblad_rhs(const LindbladGenerator& gen, const CMatrix& rho);

// Born-Markov double-commutator form with the tabulated rates (no secular
// approximation): cross-frequency terms are retained.
CMatrix redfield_rhs(const RedfieldGenerator& gen, const CMatrix& rho);

// Drops terms coupling distinct Bohr frequencies, yielding a valid GKSL
// generator. Throws if any retained rate is negative.
LindbladGenerator secular_reduce(const RedfieldGenerator& gen);

struct Trajectory {
    std::vector<double> times;
    std::vector<CMatrix> states;
};

struct EvolveOptions {
    double t_final = 1.0;
    double dt = 1e-3;
    int record_stride = 1;
    double trace_tolerance = 1e-8;
};

// Fixed-step RK4; re-symmetrizes ρ after each step and aborts on trace drift
// beyond options.trace_tolerance.
Trajectory evolve(const LindbladGenerator& gen, const DensityMatrix& rho0,
                  const EvolveOptions& options);
Trajectory evolve(const RedfieldGenerator& gen, const DensityMatrix& rho0,
                  const EvolveOptions& options);

// tr(ρ A), real for Hermitian A
double expectation(const DensityMatrix& rho, const CMatrix& A);
double expectation(const CMatrix& rho, const CMatrix& A);

// Schrödinger vs Heisenberg route for a closed system (all λ_j = 0):
// returns (tr(ρ(t) A), tr(ρ(0) A(t))).
std::pair<double, double> heisenberg_check(const LindbladGenerator& gen,
                                           const CMatrix& A,
                                           const DensityMatrix& rho0, double t,
                                           double dt = 1e-4);

struct PositivityReport {
    std::vector<double> times;
    std::vector<double> min_eigenvalue;
    std::vector<double> trace_deviation;
    std::optional<double> first_violation_time;
};

PositivityReport positivity_report(const Trajectory& trajectory,
                                   double tolerance = 1e-10);

// qubit operator presets (sigma_z |0> = +|0>)
CMatrix sigma_x();
CMatrix sigma_y();
CMatrix sigma_z();
CMatrix sigma_plus();
CMatrix sigma_minus();

}  // namespace npi

#endif
