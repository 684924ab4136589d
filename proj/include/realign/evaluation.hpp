#pragma once

#include <vector>

#include "realign/procedure.hpp"
#include "realign/types.hpp"

namespace realign {

constexpr int kBackgroundLabel = -1;

struct StepScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double iou = 0.0;
};

struct MetricsReport {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double iou = 0.0;
    std::vector<StepScores> per_step;       // indexed by ground-truth step
    std::vector<int> matching;              // gt step -> matched pred label (-1 if none)
};

/// Minimum-cost perfect matching. Rectangular inputs are padded to square with
/// a uniform large constant; the returned assignment maps each row to a column
/// (entries >= cols mean "matched to padding").
std::vector<Index> hungarian(const Matrix& cost);

/// Framewise precision/recall/F1/IoU against ground truth with background
/// sentinel kBackgroundLabel. GT background frames are excluded entirely;
/// predicted-background frames count as no prediction. Averages are unweighted
/// means over ground-truth steps (unmatched steps contribute zeros).
MetricsReport framewise_metrics(const SegmentLabeling& pred, const std::vector<int>& gt,
                                int k_pred, int k_gt);

}  // namespace realign
