#include "realign/procedure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

namespace realign {

Matrix farthest_point_seed(const Matrix& points, int k, unsigned seed) {
    const Index n = points.rows();
    if (k < 1 || Index(k) > n)
        throw std::invalid_argument("farthest_point_seed: need 1 <= k <= point count");
    std::vector<Index> chosen;
    chosen.push_back(Index(seed % unsigned(n)));
    Vector dist(n);
    for (Index i = 0; i < n; ++i)
        dist(i) = (points.row(i) - points.row(chosen[0])).squaredNorm();
    while (Index(chosen.size()) < k) {
        Index next = 0;
        dist.maxCoeff(&next);
        chosen.push_back(next);
        for (Index i = 0; i < n; ++i)
            dist(i) = std::min(dist(i), (points.row(i) - points.row(next)).squaredNorm());
    }
    Matrix protos(k, points.cols());
    for (int c = 0; c < k; ++c) protos.row(c) = points.row(chosen[c]);
    return protos;
}

namespace {

bool frame_excluded(const SegmentationProblem& p, Index f) {
    return !p.excluded.empty() && p.excluded[size_t(f)];
}

double data_cost(const SegmentationProblem& p, const Matrix& protos, Index f, int lab) {
    if (frame_excluded(p, f)) return 0.0;  // uniform data cost for background frames
    return (p.frames.row(f) - protos.row(lab)).squaredNorm();
}

}  // namespace

double labeling_energy(const SegmentationProblem& p, const std::vector<int>& labels,
                       const Matrix& prototypes) {
    double e = 0.0;
    for (Index f = 0; f < p.frames.rows(); ++f) e += data_cost(p, prototypes, f, labels[size_t(f)]);
    for (auto [lo, hi] : p.chains)
        for (Index f = lo; f + 1 < hi; ++f)
            if (labels[size_t(f)] != labels[size_t(f) + 1]) e += p.smoothness_weight;
    return e;
}

std::vector<int> expansion_move(const SegmentationProblem& p, const std::vector<int>& labels,
                                const Matrix& prototypes, int alpha_label) {
    if (alpha_label < 0 || alpha_label >= p.k)
        throw std::invalid_argument("expansion_move: alpha_label out of range");
    std::vector<int> out = labels;
    const double w = p.smoothness_weight;
    for (auto [lo, hi] : p.chains) {
        const Index len = hi - lo;
        // dp over states {0: keep current label, 1: take alpha}
        std::vector<std::array<double, 2>> dp(static_cast<size_t>(len));
        std::vector<std::array<int, 2>> back(static_cast<size_t>(len));
        auto lab_of = [&](Index f, int st) { return st == 0 ? labels[size_t(lo + f)] : alpha_label; };
        dp[0] = {data_cost(p, prototypes, lo, lab_of(0, 0)),
                 data_cost(p, prototypes, lo, lab_of(0, 1))};
        for (Index f = 1; f < len; ++f) {
            for (int st = 0; st < 2; ++st) {
                double best = std::numeric_limits<double>::infinity();
                int arg = 0;
                for (int pv = 0; pv < 2; ++pv) {
                    double c = dp[size_t(f - 1)][size_t(pv)] +
                               (lab_of(f - 1, pv) != lab_of(f, st) ? w : 0.0);
                    if (c < best) {
                        best = c;
                        arg = pv;
                    }
                }
                dp[size_t(f)][size_t(st)] = best + data_cost(p, prototypes, lo + f, lab_of(f, st));
                back[size_t(f)][size_t(st)] = arg;
            }
        }
        int st = dp[size_t(len - 1)][0] <= dp[size_t(len - 1)][1] ? 0 : 1;
        for (Index f = len - 1; f >= 0; --f) {
            if (st == 1) out[size_t(lo + f)] = alpha_label;
            st = back[size_t(f)][size_t(st)];
            if (f == 0) break;
        }
    }
    return out;
}

SegmentLabeling segment(const SegmentationProblem& raw) {
    SegmentationProblem p = raw;
    const Index n = p.frames.rows();
    if (p.k < 1 || Index(p.k) > n)
        throw std::invalid_argument("segment: need 1 <= k <= frame count");
    if (p.chains.empty()) p.chains.push_back({0, n});
    if (!p.excluded.empty() && Index(p.excluded.size()) != n)
        throw std::invalid_argument("segment: excluded size mismatch");

    // seed prototypes on non-excluded frames
    std::vector<Index> fit;
    for (Index f = 0; f < n; ++f)
        if (!frame_excluded(p, f)) fit.push_back(f);
    Matrix fit_pts;
    if (Index(fit.size()) >= p.k) {
        fit_pts.resize(Index(fit.size()), p.frames.cols());
        for (size_t r = 0; r < fit.size(); ++r) fit_pts.row(Index(r)) = p.frames.row(fit[r]);
    } else {
        fit_pts = p.frames;
    }
    Matrix protos = farthest_point_seed(fit_pts, p.k, p.seed);

    if (p.smoothness_weight < 0.0) {
        // 1.0 x median nearest-prototype data cost over counted frames
        std::vector<double> costs;
        for (Index f = 0; f < n; ++f) {
            if (frame_excluded(p, f)) continue;
            double best = std::numeric_limits<double>::infinity();
            for (int c = 0; c < p.k; ++c)
                best = std::min(best, (p.frames.row(f) - protos.row(c)).squaredNorm());
            if (best > 0.0) costs.push_back(best);
        }
        if (costs.empty()) {
            p.smoothness_weight = 1.0;
        } else {
            std::nth_element(costs.begin(), costs.begin() + costs.size() / 2, costs.end());
            p.smoothness_weight = costs[costs.size() / 2];
        }
    }

    std::vector<int> labels(static_cast<size_t>(n));
    for (Index f = 0; f < n; ++f) {
        int best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (int c = 0; c < p.k; ++c) {
            double d = (p.frames.row(f) - protos.row(c)).squaredNorm();
            if (d < bd) {
                bd = d;
                best = c;
            }
        }
        labels[size_t(f)] = best;
    }
    double energy = labeling_energy(p, labels, protos);

    const int max_sweeps = 50;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool improved = false;
        for (int a = 0; a < p.k; ++a) {
            std::vector<int> cand = expansion_move(p, labels, protos, a);
            double e2 = labeling_energy(p, cand, protos);
            if (e2 < energy - 1e-12) {
                labels = std::move(cand);
                energy = e2;
                improved = true;
            }
        }
        Matrix next = protos;
        for (int c = 0; c < p.k; ++c) {
            Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(p.frames.cols());
            int cnt = 0;
            for (Index f = 0; f < n; ++f) {
                if (labels[size_t(f)] == c && !frame_excluded(p, f)) {
                    sum += p.frames.row(f);
                    ++cnt;
                }
            }
            if (cnt > 0) next.row(c) = sum / double(cnt);
        }
        double e2 = labeling_energy(p, labels, next);
        if (e2 < energy - 1e-12) {
            protos = std::move(next);
            energy = e2;
            improved = true;
        }
        if (!improved) break;
    }

    SegmentLabeling out;
    out.labels = labels;
    out.energy = energy;
    out.background.assign(size_t(n), false);
    if (!p.excluded.empty()) {
        out.background = p.excluded;
        // background frames inherit the nearest in-chain real neighbor's label
        for (auto [lo, hi] : p.chains) {
            for (Index f = lo; f < hi; ++f) {
                if (!out.background[size_t(f)]) continue;
                for (Index off = 1; off < hi - lo; ++off) {
                    if (f - off >= lo && !out.background[size_t(f - off)]) {
                        out.labels[size_t(f)] = out.labels[size_t(f - off)];
                        break;
                    }
                    if (f + off < hi && !out.background[size_t(f + off)]) {
                        out.labels[size_t(f)] = out.labels[size_t(f + off)];
                        break;
                    }
                }
            }
        }
    }
    return out;
}

SegmentLabeling segment(const EmbeddingSequence& frames, int k, double smoothness_weight,
                        unsigned seed) {
    SegmentationProblem p;
    p.frames = frames.data;
    p.k = k;
    p.smoothness_weight = smoothness_weight;
    p.seed = seed;
    return segment(p);
}

KeyStepOrder order_key_steps(const std::vector<int>& labels, int k) {
    const size_t n = labels.size();
    std::vector<double> log_sum(static_cast<size_t>(k), 0.0);
    std::vector<int> count(static_cast<size_t>(k), 0);
    for (size_t f = 0; f < n; ++f) {
        int lab = labels[f];
        if (lab < 0 || lab >= k)
            throw std::invalid_argument("order_key_steps: label out of range");
        log_sum[size_t(lab)] += std::log(double(f + 1) / double(n));
        count[size_t(lab)] += 1;
    }
    std::vector<double> cluster_time(static_cast<size_t>(k));
    for (int c = 0; c < k; ++c)
        cluster_time[size_t(c)] = count[size_t(c)] > 0
                                      ? std::exp(log_sum[size_t(c)] / count[size_t(c)])
                                      : std::numeric_limits<double>::infinity();
    KeyStepOrder order;
    order.indices.resize(size_t(k));
    for (int c = 0; c < k; ++c) order.indices[size_t(c)] = c;
    std::stable_sort(order.indices.begin(), order.indices.end(),
                     [&](int a, int b) { return cluster_time[size_t(a)] < cluster_time[size_t(b)]; });
    return order;
}

KeyStepOrder canonical_order(const std::vector<KeyStepOrder>& orders) {
    if (orders.empty()) throw std::invalid_argument("canonical_order: empty input");
    std::map<std::vector<int>, int> counts;
    for (const auto& o : orders) counts[o.indices] += 1;
    int best = 0;
    for (const auto& [o, c] : counts) best = std::max(best, c);
    for (const auto& [o, c] : counts)
        if (c == best) return KeyStepOrder{o};  // map iterates in lexicographic order
    return orders.front();
}

}  // namespace realign
