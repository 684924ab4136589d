#pragma once

#include "realign/types.hpp"

namespace realign {

/// Linear annealing schedule from 1 at step 0 to 0.5 at step == total_steps.
double anneal_phi(int step, int total_steps);

/// Mixed temporal/optimality Laplace prior on an n x m grid (1-based indices).
/// Q(i,j) = phi * exp(-d_t/b) + (1-phi) * exp(-d_o/b) with
///   d_t = |i/n - j/m| / sqrt(1/n^2 + 1/m^2)
///   d_o = (|i/n - i_o/n| + |j/m - j_o/m|) / (2 sqrt(1/n^2 + 1/m^2))
PriorMatrix laplace_prior(Index n, Index m, double b, double phi, Center center);

/// IDM injection scores on the augmented (n+1) x (m+1) grid, 1-based:
/// s_ij = lambda1 * ( 1/((i/(n+1) - j/(m+1))^2 + 1) + 1/(d_m/2 + 1) ),
/// d_m = ((i - i_o)/(n+1))^2 + ((j - j_o)/(m+1))^2.
ScoreMatrix idm_score(Index n, Index m, double lambda1, Center center);

/// IDM mixture value of a plan, summed over the real block only:
/// phi * sum t_ij / ((i/N - j/M)^2 + 1) + (1-phi) * sum t_ij / (d_m/2 + 1),
/// with d_m on (N+1),(M+1) denominators.
double idm_value(const TransportPlan& plan, double phi, Center center);

/// Appends a strictly positive virtual row/column to the prior.
PriorMatrix augment_prior(const PriorMatrix& q, double virtual_value);

}  // namespace realign
