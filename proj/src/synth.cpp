#include "realign/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "realign/evaluation.hpp"

namespace realign {

void SynthConfig::validate() const {
    if (k < 1 || dim < 1) throw std::invalid_argument("SynthConfig: k and dim must be >= 1");
    if (dim < k)
        throw std::invalid_argument("SynthConfig: infeasible separation (needs dim >= k)");
    if (frames_per_step_min < 1 || frames_per_step_max < frames_per_step_min)
        throw std::invalid_argument("SynthConfig: bad frames_per_step range");
    if (step_separation <= 0.0)
        throw std::invalid_argument("SynthConfig: step_separation must be positive");
    if (noise_sigma < 0.0) throw std::invalid_argument("SynthConfig: negative noise_sigma");
    if (background_rate < 0.0 || background_rate >= 1.0 || repeat_rate < 0.0 ||
        repeat_rate >= 1.0 || background_rate + repeat_rate >= 1.0)
        throw std::invalid_argument("SynthConfig: background_rate + repeat_rate must be < 1");
    if (videos < 1) throw std::invalid_argument("SynthConfig: videos must be >= 1");
}

namespace {

using Rng = std::mt19937_64;

// fresh distribution per draw: normal_distribution caches a spare deviate,
// which would leak state between independently seeded streams
double draw_normal(Rng& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    return dist(rng);
}

// centroids on a random orthonormal frame, scaled so pairwise distances are
// at least step_separation
Matrix make_centroids(Rng& rng, const SynthConfig& cfg) {
    Matrix a(cfg.dim, cfg.k);
    for (Index j = 0; j < cfg.k; ++j)
        for (Index i = 0; i < cfg.dim; ++i) a(i, j) = draw_normal(rng);
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ() * Matrix::Identity(cfg.dim, cfg.k);
    std::uniform_real_distribution<double> scale(1.0, 1.3);
    Matrix centroids(cfg.k, cfg.dim);
    const double base = cfg.step_separation / std::sqrt(2.0);
    for (int c = 0; c < cfg.k; ++c) centroids.row(c) = (base * scale(rng)) * q.col(c).transpose();
    return centroids;
}

void gen_sequence(Rng& rng, const Matrix& centroids, const SynthConfig& cfg,
                  const std::vector<int>& order, EmbeddingSequence& seq, GroundTruth& gt) {
    const int k = cfg.k, dim = cfg.dim;
    std::uniform_int_distribution<int> fps(cfg.frames_per_step_min, cfg.frames_per_step_max);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<int> visit;
    for (size_t si = 0; si < order.size(); ++si) {
        visit.push_back(order[si]);
        if (si > 0 && unit(rng) < cfg.repeat_rate) {
            std::uniform_int_distribution<size_t> earlier(0, si - 1);
            visit.push_back(order[earlier(rng)]);
        }
    }

    std::vector<Eigen::RowVectorXd> frames;
    std::vector<int> labels;
    for (int s : visit) {
        int cnt = fps(rng);
        for (int f = 0; f < cnt; ++f) {
            Eigen::RowVectorXd noise(dim);
            for (int d = 0; d < dim; ++d) noise(d) = draw_normal(rng);
            frames.push_back(centroids.row(s) + cfg.noise_sigma * noise);
            labels.push_back(s);
        }
    }

    if (cfg.background_rate > 0.0) {
        const double p_ins = cfg.background_rate / (1.0 - cfg.background_rate);
        Eigen::RowVectorXd center = centroids.colwise().mean();
        double spread = 0.0;
        for (int c = 0; c < k; ++c)
            spread = std::max(spread, (centroids.row(c) - center).norm());
        const double radius = 3.0 * cfg.step_separation + spread;
        std::vector<Eigen::RowVectorXd> out_f;
        std::vector<int> out_l;
        for (size_t f = 0; f < frames.size(); ++f) {
            out_f.push_back(frames[f]);
            out_l.push_back(labels[f]);
            if (unit(rng) < p_ins) {
                Eigen::RowVectorXd bg;
                for (int attempt = 0; attempt < 100; ++attempt) {
                    Eigen::RowVectorXd dir(dim);
                    for (int d = 0; d < dim; ++d) dir(d) = draw_normal(rng);
                    dir /= dir.norm();
                    bg = center + radius * dir;
                    double min_dist = std::numeric_limits<double>::infinity();
                    for (int c = 0; c < k; ++c)
                        min_dist = std::min(min_dist, (bg - centroids.row(c)).norm());
                    if (min_dist >= 3.0 * cfg.step_separation) break;
                }
                Eigen::RowVectorXd noise(dim);
                for (int d = 0; d < dim; ++d) noise(d) = draw_normal(rng);
                out_f.push_back(bg + cfg.noise_sigma * noise);
                out_l.push_back(kBackgroundLabel);
            }
        }
        frames = std::move(out_f);
        labels = std::move(out_l);
    }

    seq.data.resize(Index(frames.size()), dim);
    for (size_t f = 0; f < frames.size(); ++f) seq.data.row(Index(f)) = frames[f];
    gt.labels = labels;
    gt.order = order;
}

}  // namespace

SynthTask generate_task(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    SynthTask task;
    task.centroids = make_centroids(rng, cfg);
    task.videos.resize(size_t(cfg.videos));
    task.truths.resize(size_t(cfg.videos));
    std::vector<int> identity(size_t(cfg.k));
    for (int c = 0; c < cfg.k; ++c) identity[size_t(c)] = c;
    for (int v = 0; v < cfg.videos; ++v) {
        std::vector<int> order = identity;
        if (cfg.permute && v > 0 && cfg.k > 1) {
            do {
                std::shuffle(order.begin(), order.end(), rng);
            } while (order == identity);
        }
        gen_sequence(rng, task.centroids, cfg, order, task.videos[size_t(v)],
                     task.truths[size_t(v)]);
    }
    return task;
}

SynthPair generate_pair(const SynthConfig& raw) {
    SynthConfig cfg = raw;
    cfg.videos = 2;
    SynthTask task = generate_task(cfg);
    return SynthPair{std::move(task.videos[0]), std::move(task.videos[1]),
                     std::move(task.truths[0]), std::move(task.truths[1])};
}

}  // namespace realign
