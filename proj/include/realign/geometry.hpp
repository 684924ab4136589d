#pragma once

#include "realign/types.hpp"

namespace realign {

/// Virtual-frame cost rule: cost = max(factor * max finite entry, floor).
struct VirtualCostPolicy {
    double factor = 2.0;
    double floor = 1.0;

    double value_for(const Matrix& c) const;
};

/// Pairwise appearance costs between two sequences of equal dimension.
/// Euclidean is C_ij = |x_i - y_j|_2; cosine is 1 - cosine similarity.
CostMatrix pairwise_cost(const EmbeddingSequence& x, const EmbeddingSequence& y,
                         Metric metric = Metric::Euclidean);

/// Temporal structure matrix for a sequence of `length` frames.
/// Option A: PSD kernel exp(-|lag|/scale) or exp(-lag^2/(2 scale^2)).
/// Option B: raw distance |lag|/length.
StructureMatrix structure_matrix(Index length, StructureOption option, double scale,
                                 KernelShape kernel = KernelShape::Laplace);

/// Appends the virtual row/column with the policy cost.
CostMatrix augment_virtual(const CostMatrix& c, const VirtualCostPolicy& policy = {});

/// Appends a zero-interaction virtual row/column to a structure matrix.
StructureMatrix augment_structure(const StructureMatrix& s);

/// Divides all entries by the max entry (no-op for an all-zero matrix).
CostMatrix normalize_max(const CostMatrix& c);

}  // namespace realign
