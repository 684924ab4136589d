#include "realign/losses.hpp"

#include <cmath>

namespace realign {

double cidm_loss(const EmbeddingSequence& x, const LossConfig& cfg) {
    x.validate();
    if (cfg.lambda3 <= 0.0) throw std::invalid_argument("cidm_loss: lambda3 must be positive");
    const Index n = x.length();
    double loss = 0.0;
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            double gamma = double((i - j) * (i - j)) + 1.0;
            double d = (x.data.row(i) - x.data.row(j)).norm();
            if (std::abs(double(i - j)) <= cfg.delta)
                loss += d / gamma;
            else
                loss += gamma * std::max(0.0, cfg.lambda3 - d);
        }
    }
    return loss;
}

Matrix cidm_gradient(const EmbeddingSequence& x, const LossConfig& cfg) {
    x.validate();
    const Index n = x.length();
    Matrix grad = Matrix::Zero(n, x.dim());
    // each unordered pair appears twice in the ordered sum; fold the factor 2 in
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            Eigen::RowVectorXd diff = x.data.row(i) - x.data.row(j);
            double d = diff.norm();
            if (d == 0.0) continue;  // defined subgradient 0 at coincident points
            double gamma = double((i - j) * (i - j)) + 1.0;
            double coef;
            if (std::abs(double(i - j)) <= cfg.delta) {
                coef = 2.0 / gamma;  // d / gamma
            } else if (d < cfg.lambda3) {
                coef = -2.0 * gamma;  // gamma * (lambda3 - d), hinge active
            } else {
                continue;  // hinge flat (0 at the boundary)
            }
            Eigen::RowVectorXd g = coef * diff / d;
            grad.row(i) += g;
            grad.row(j) -= g;
        }
    }
    return grad;
}

namespace {

// mean distance of row-wise argmax/argmin pairs, ties to the smallest index
std::pair<double, double> select_row_pairs(const Matrix& block, const Matrix& xd,
                                           const Matrix& yd) {
    double best = 0.0, worst = 0.0;
    const Index n = block.rows();
    for (Index i = 0; i < n; ++i) {
        Index jb = 0, jw = 0;
        for (Index j = 1; j < block.cols(); ++j) {
            if (block(i, j) > block(i, jb)) jb = j;
            if (block(i, j) < block(i, jw)) jw = j;
        }
        best += (xd.row(i) - yd.row(jb)).norm();
        worst += (xd.row(i) - yd.row(jw)).norm();
    }
    return {best / double(n), worst / double(n)};
}

}  // namespace

double inter_loss(const TransportPlan& plan, const EmbeddingSequence& x,
                  const EmbeddingSequence& y, const LossConfig& cfg) {
    if (plan.n_real < 1 || plan.m_real < 1)
        throw std::invalid_argument("inter_loss: empty real block");
    Matrix block = plan.real_block();
    double best = 0.0, worst = 0.0;
    if (cfg.selection == InterSelection::Rows) {
        std::tie(best, worst) = select_row_pairs(block, x.data, y.data);
    } else if (cfg.selection == InterSelection::Cols) {
        std::tie(best, worst) = select_row_pairs(block.transpose(), y.data, x.data);
    } else {
        auto [rb, rw] = select_row_pairs(block, x.data, y.data);
        auto [cb, cw] = select_row_pairs(block.transpose(), y.data, x.data);
        best = 0.5 * (rb + cb);
        worst = 0.5 * (rw + cw);
    }
    // cross-entropy of softmax([best, worst]) against [0, 1]
    double mx = std::max(best, worst);
    double lse = mx + std::log(std::exp(best - mx) + std::exp(worst - mx));
    return lse - worst;
}

double realign_loss(const RealignLossParts& parts, const LossConfig& cfg, Index n, Index m) {
    double c1 = cfg.c1 > 0.0 ? cfg.c1 : 1.0 / (double(n) * double(m));
    return c1 * parts.rfpgwot_objective + cfg.c2 * (parts.cidm_x + parts.cidm_y) +
           cfg.c3 * parts.inter;
}

}  // namespace realign
