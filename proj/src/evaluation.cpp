#include "realign/evaluation.hpp"

#include <cmath>
#include <limits>

namespace realign {

// Jonker-Volgenant style shortest augmenting path assignment, O(n^3).
std::vector<Index> hungarian(const Matrix& cost) {
    if (cost.size() == 0) throw std::invalid_argument("hungarian: empty matrix");
    if (!cost.allFinite()) throw std::invalid_argument("hungarian: non-finite costs");

    const Index n = std::max(cost.rows(), cost.cols());
    const double pad = cost.cwiseAbs().maxCoeff() + 1.0;
    Matrix a = Matrix::Constant(n, n, pad);
    a.topLeftCorner(cost.rows(), cost.cols()) = cost;

    // potentials and matching over 1-based internal arrays
    std::vector<double> u(size_t(n + 1), 0.0), v(size_t(n + 1), 0.0);
    std::vector<Index> p(size_t(n + 1), 0), way(size_t(n + 1), 0);
    for (Index i = 1; i <= n; ++i) {
        p[0] = i;
        Index j0 = 0;
        std::vector<double> minv(size_t(n + 1), std::numeric_limits<double>::infinity());
        std::vector<bool> used(size_t(n + 1), false);
        do {
            used[size_t(j0)] = true;
            Index i0 = p[size_t(j0)], j1 = 0;
            double delta = std::numeric_limits<double>::infinity();
            for (Index j = 1; j <= n; ++j) {
                if (used[size_t(j)]) continue;
                double cur = a(i0 - 1, j - 1) - u[size_t(i0)] - v[size_t(j)];
                if (cur < minv[size_t(j)]) {
                    minv[size_t(j)] = cur;
                    way[size_t(j)] = j0;
                }
                if (minv[size_t(j)] < delta) {
                    delta = minv[size_t(j)];
                    j1 = j;
                }
            }
            for (Index j = 0; j <= n; ++j) {
                if (used[size_t(j)]) {
                    u[size_t(p[size_t(j)])] += delta;
                    v[size_t(j)] -= delta;
                } else {
                    minv[size_t(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[size_t(j0)] != 0);
        do {
            Index j1 = way[size_t(j0)];
            p[size_t(j0)] = p[size_t(j1)];
            j0 = j1;
        } while (j0);
    }
    std::vector<Index> row_to_col(size_t(cost.rows()), -1);
    for (Index j = 1; j <= n; ++j)
        if (p[size_t(j)] >= 1 && p[size_t(j)] <= cost.rows())
            row_to_col[size_t(p[size_t(j)] - 1)] = j - 1;
    return row_to_col;
}

MetricsReport framewise_metrics(const SegmentLabeling& pred, const std::vector<int>& gt,
                                int k_pred, int k_gt) {
    if (pred.labels.size() != gt.size())
        throw std::invalid_argument("framewise_metrics: length mismatch");

    Matrix overlap = Matrix::Zero(k_pred, k_gt);
    std::vector<double> pred_count(size_t(k_pred), 0.0), gt_count(size_t(k_gt), 0.0);
    for (size_t f = 0; f < gt.size(); ++f) {
        int g = gt[f];
        if (g == kBackgroundLabel) continue;  // GT background excluded entirely
        if (g < 0 || g >= k_gt) throw std::invalid_argument("framewise_metrics: gt label range");
        gt_count[size_t(g)] += 1.0;
        if (!pred.background.empty() && pred.background[f]) continue;  // no prediction
        int pl = pred.labels[f];
        if (pl < 0 || pl >= k_pred)
            throw std::invalid_argument("framewise_metrics: pred label range");
        overlap(pl, g) += 1.0;
        pred_count[size_t(pl)] += 1.0;
    }

    std::vector<Index> row_to_col = hungarian(-overlap);  // max overlap = min negative
    std::vector<int> gt_to_pred(size_t(k_gt), -1);
    for (int pl = 0; pl < k_pred; ++pl) {
        Index g = row_to_col[size_t(pl)];
        if (g >= 0 && g < k_gt) gt_to_pred[size_t(g)] = pl;
    }

    MetricsReport rep;
    rep.matching = gt_to_pred;
    rep.per_step.resize(size_t(k_gt));
    for (int g = 0; g < k_gt; ++g) {
        int pl = gt_to_pred[size_t(g)];
        double tp = pl >= 0 ? overlap(pl, g) : 0.0;
        double fp = pl >= 0 ? pred_count[size_t(pl)] - tp : 0.0;
        double fn = gt_count[size_t(g)] - tp;
        StepScores& s = rep.per_step[size_t(g)];
        s.precision = tp + fp > 0.0 ? tp / (tp + fp) : 0.0;
        s.recall = tp + fn > 0.0 ? tp / (tp + fn) : 0.0;
        s.f1 = s.precision + s.recall > 0.0
                   ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
                   : 0.0;
        s.iou = tp + fp + fn > 0.0 ? tp / (tp + fp + fn) : 0.0;
        rep.precision += s.precision;
        rep.recall += s.recall;
        rep.f1 += s.f1;
        rep.iou += s.iou;
    }
    if (k_gt > 0) {
        rep.precision /= k_gt;
        rep.recall /= k_gt;
        rep.f1 /= k_gt;
        rep.iou /= k_gt;
    }
    return rep;
}

}  // namespace realign
