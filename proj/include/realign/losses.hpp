#pragma once

#include "realign/types.hpp"

namespace realign {

enum class InterSelection { Rows, Cols, RowsAndCols };

struct LossConfig {
    int delta = 15;         // neighborhood window
    double lambda3 = 2.0;   // hinge margin
    double c1 = 0.0;        // 0 resolves to 1/(N*M) at evaluation time
    double c2 = 0.5;
    double c3 = 0.0001;
    InterSelection selection = InterSelection::RowsAndCols;
};

/// Contrastive IDM loss over all ordered frame pairs of one sequence:
/// non-neighbors pay gamma * max(0, lambda3 - d), neighbors pay d / gamma,
/// gamma = (i-j)^2 + 1, neighbors = |i-j| <= delta.
double cidm_loss(const EmbeddingSequence& x, const LossConfig& cfg);

/// Exact gradient of cidm_loss w.r.t. every embedding coordinate.
/// Subgradient conventions: 0 at d == 0 and at the hinge boundary d == lambda3.
Matrix cidm_gradient(const EmbeddingSequence& x, const LossConfig& cfg);

/// Inter-sequence loss: per-row (and/or per-column, per cfg.selection) best and
/// worst matches from the plan's real block; mean distances of those pairs feed
/// a 2-way softmax cross-entropy against the target [0, 1].
double inter_loss(const TransportPlan& plan, const EmbeddingSequence& x,
                  const EmbeddingSequence& y, const LossConfig& cfg = {});

struct RealignLossParts {
    double rfpgwot_objective = 0.0;
    double cidm_x = 0.0;
    double cidm_y = 0.0;
    double inter = 0.0;
};

/// c1 * objective + c2 * (I(X) + I(Y)) + c3 * inter.
double realign_loss(const RealignLossParts& parts, const LossConfig& cfg, Index n, Index m);

}  // namespace realign
