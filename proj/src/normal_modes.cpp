#include "npi/normal_modes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace npi {

NormalModeBasis build_normal_modes(int n_beads) {
    if (n_beads < 1) throw std::domain_error("build_normal_modes: P must be >= 1");
    const int P = n_beads;
    NormalModeBasis basis;
    basis.n_beads = P;
    basis.transform.assign(static_cast<std::size_t>(P) * P, 0.0);
    basis.frequencies.resize(P);

    const double pi = std::numbers::pi;
    for (int k = 0; k < P; ++k)
        basis.frequencies[k] = 2.0 * std::sin(k * pi / P);

    auto C = [&](int k, int j) -> double& {
        return basis.transform[static_cast<std::size_t>(k) * P + j];
    };
    for (int j = 0; j < P; ++j) {
        C(0, j) = 1.0 / std::sqrt(static_cast<double>(P));
        for (int k = 1; k <= (P - 1) / 2; ++k)
            C(k, j) = std::sqrt(2.0 / P) * std::cos(2.0 * pi * k * j / P);
        if (P % 2 == 0) C(P / 2, j) = (j % 2 == 0 ? 1.0 : -1.0) / std::sqrt(static_cast<double>(P));
        for (int k = P / 2 + 1; k < P; ++k)
            C(k, j) = std::sqrt(2.0 / P) * std::sin(2.0 * pi * k * j / P);
    }
    return basis;
}

void NormalModeBasis::to_modes(const double* beads, double* modes,
                               int stride) const {
    const int P = n_beads;
    for (int k = 0; k < P; ++k) {
        double acc = 0.0;
        for (int j = 0; j < P; ++j) acc += at(k, j) * beads[j * stride];
        modes[k] = acc;
    }
}

void NormalModeBasis::to_beads(const double* modes, double* beads,
                               int stride) const {
    const int P = n_beads;
    for (int j = 0; j < P; ++j) {
        double acc = 0.0;
        for (int k = 0; k < P; ++k) acc += at(k, j) * modes[k];
        beads[j * stride] = acc;
    }
}

}  // namespace npi
