#pragma once

#include <vector>

#include "realign/types.hpp"

namespace realign {

struct SegmentLabeling {
    std::vector<int> labels;           // per-frame label in {0..k-1}
    std::vector<bool> background;      // frames excluded from supervision
    double energy = 0.0;
};

struct KeyStepOrder {
    std::vector<int> indices;  // permutation of {0..k-1}
};

/// Multi-label segmentation instance. Frames form one or more temporal chains
/// (n-links only inside a chain); excluded frames pay no data cost and are
/// reported with their nearest in-chain neighbor's label.
struct SegmentationProblem {
    Matrix frames;                            // total_frames x dim
    std::vector<std::pair<Index, Index>> chains;  // [lo, hi) frame ranges
    int k = 1;
    double smoothness_weight = -1.0;          // <0: 1.0 x median seed data cost
    unsigned seed = 0;
    std::vector<bool> excluded;               // empty = none
};

/// Deterministic farthest-point seeding over the given rows.
Matrix farthest_point_seed(const Matrix& points, int k, unsigned seed);

/// Energy of a labeling under squared-distance data costs and Potts smoothness.
double labeling_energy(const SegmentationProblem& p, const std::vector<int>& labels,
                       const Matrix& prototypes);

/// One alpha-expansion move solved exactly by chain DP: every frame keeps its
/// label or switches to alpha_label; energy never increases.
std::vector<int> expansion_move(const SegmentationProblem& p, const std::vector<int>& labels,
                                const Matrix& prototypes, int alpha_label);

/// Iterated alpha-expansion with prototype re-estimation between sweeps.
SegmentLabeling segment(const SegmentationProblem& p);

/// Convenience: single chain over one sequence.
SegmentLabeling segment(const EmbeddingSequence& frames, int k, double smoothness_weight,
                        unsigned seed);

/// Cluster order by ascending geometric-mean normalized timestamp (1-based);
/// empty clusters go last, stable by label id.
KeyStepOrder order_key_steps(const std::vector<int>& labels, int k);

/// Modal order; ties broken by the lexicographically smallest order.
KeyStepOrder canonical_order(const std::vector<KeyStepOrder>& orders);

}  // namespace realign
