#ifndef NPI_SAMPLING_HPP
#define NPI_SAMPLING_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "npi/estimators.hpp"
#include "npi/integrator.hpp"

namespace npi {

struct SamplingPlan {
    long n_steps = 0;
    int sample_stride = 1;
    int snapshot_stride = 0;  // 0 = keep no snapshots
    std::vector<std::pair<std::string, SliceObservable>> observables;
    bool record_estimators = true;  // potential/spring/kinetic/e_prim/e_vir/temp
};

struct TrajectoryRecord {
    std::vector<EstimatorSample> samples;
    std::vector<RingPolymerState> snapshots;  // at steps snapshot_stride, 2*...
    int sample_stride = 1;
    int snapshot_stride = 0;
    double dt = 0.0;

    std::vector<double> series(const std::string& name) const;
};

// Drives the integrator for plan.n_steps, sampling bead-averaged observables
// every sample_stride steps (Eq.-style time averages are then plain means of
// the recorded series).
TrajectoryRecord run_sampling(BaoabIntegrator& integ, RingPolymerState& state,
                              const SamplingPlan& plan);

// convenience: mean of a stationary series
double mean(const std::vector<double>& xs);
double standard_error(const std::vector<double>& xs);

// Integrated autocorrelation time (in samples) via block averaging; used to
// check harvest spacing against decorrelation.
double integrated_autocorrelation_time(const std::vector<double>& xs);

}  // namespace npi

#endif
