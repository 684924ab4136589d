#pragma once

#include <optional>
#include <vector>

#include "realign/evaluation.hpp"
#include "realign/losses.hpp"
#include "realign/procedure.hpp"
#include "realign/solver.hpp"

namespace realign {

struct PipelineConfig {
    SolverConfig solver;
    int k = 7;                        // key steps for segmentation
    double smoothness_weight = -1.0;  // <0: median seed data cost
    unsigned seed = 0;
    int threads = 1;                  // concurrent pair solves
};

struct PairAlignment {
    int a = 0, b = 0;  // video indices
    TransportPlan plan;
    std::vector<bool> row_mask, col_mask;
    bool converged = false;
    double objective = 0.0;
};

struct PipelineResult {
    std::vector<PairAlignment> pairs;
    std::vector<std::vector<bool>> background;  // per video, majority-voted
    std::vector<SegmentLabeling> labelings;     // per video
    std::vector<KeyStepOrder> orders;           // per video
    KeyStepOrder canonical;
    std::optional<MetricsReport> metrics;       // present when ground truth given
    std::vector<MetricsReport> per_video_metrics;
};

/// Full procedure-learning pass over one task: all-pairs alignment,
/// majority-voted background filtering, shared-prototype segmentation over the
/// concatenated corpus (n-links within videos only), per-video ordering and
/// canonical order, metrics when ground truth is present.
PipelineResult run_pipeline(const std::vector<EmbeddingSequence>& videos,
                            const PipelineConfig& cfg,
                            const std::vector<std::vector<int>>* ground_truth = nullptr,
                            int k_gt = 0);

}  // namespace realign
