#pragma once

#include <cstdint>
#include <vector>

#include "gainterm/config.hpp"
#include "gainterm/report.hpp"

namespace gainterm::verify {

/// Partition-of-unity, cutoff and region-classifier invariants (both ramps).
report::EstimateReport partition_suite(const Config& cfg);

/// Random-pair critical-point calculus: vanishing gradients, Hessians vs
/// central finite differences, pre-collision involution and conservation.
report::EstimateReport geometry_suite(const Config& cfg, std::uint64_t seed,
                                      int n_trials);

/// Quadrature vs two-critical-point leading order across a (gamma, theta0,
/// lambda) lattice, plus the pinned colinear closed form and the quadrature
/// stability invariants. Cells where the difference sits at the quadrature
/// floor are certified by the stronger exactness bound; a slope fit is
/// reported whenever the residual rises above the noise floor.
report::EstimateReport stationary_decay_suite(const Config& cfg,
                                              const std::vector<double>& gammas,
                                              const std::vector<double>& theta0s,
                                              const std::vector<double>& lambdas);

/// Mass / weak-form / split / covariance / scaling identities, the loss and
/// Radon closed forms, the point-mass limits, and oracle agreement.
report::EstimateReport identity_suite(const Config& cfg, std::uint64_t seed,
                                      int n_trials);

/// Ratio sweeps for the regularizing estimates: homogeneous/inhomogeneous/
/// convolution ratios, large-velocity-part ratios, transform ratios on
/// mean-zero data, dilation invariance, refinement deltas.
report::EstimateReport estimate_suite(const Config& cfg, std::uint64_t seed,
                                      int n_trials,
                                      const std::vector<std::pair<double, double>>& pq,
                                      const std::vector<double>& gammas);

/// Discrete Schur bounds sqrt(omega*beta) against power-iteration singular
/// values for the region-C and zone-III bounding kernels.
report::EstimateReport schur_suite(const Config& cfg);

/// Zone-III scan of |a| Lambda^{1/2} with regression slopes per gamma.
report::EstimateReport region3_suite(const Config& cfg, std::uint64_t seed, int n);

/// Every suite at its default sizes, in a fixed order.
std::vector<report::EstimateReport> run_all(const Config& cfg);

}  // namespace gainterm::verify
