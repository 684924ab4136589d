#include "realign/pipeline.hpp"

#include <atomic>
#include <mutex>
#include <thread>

namespace realign {

PipelineResult run_pipeline(const std::vector<EmbeddingSequence>& videos,
                            const PipelineConfig& cfg,
                            const std::vector<std::vector<int>>* ground_truth, int k_gt) {
    const int v_count = int(videos.size());
    if (v_count < 2) throw std::invalid_argument("run_pipeline: need at least 2 sequences");
    for (const auto& v : videos) {
        v.validate();
        if (v.dim() != videos[0].dim())
            throw std::invalid_argument("run_pipeline: embedding dimension mismatch");
    }

    PipelineResult res;
    for (int a = 0; a < v_count; ++a)
        for (int b = a + 1; b < v_count; ++b) res.pairs.push_back(PairAlignment{a, b});

    // independent pair solves, optionally in parallel; results land by index
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        try {
            for (;;) {
                size_t idx = next.fetch_add(1);
                if (idx >= res.pairs.size()) return;
                PairAlignment& pa = res.pairs[idx];
                const EmbeddingSequence& x = videos[size_t(pa.a)];
                const EmbeddingSequence& y = videos[size_t(pa.b)];
                SolverConfig sc = cfg.solver.resolve(x.length(), y.length());
                Solution sol = solve_rfpgwot(x, y, sc);
                pa.plan = sol.plan;
                pa.converged = sol.converged;
                pa.objective = sol.objective_trace.empty() ? sol.initial_objective
                                                           : sol.objective_trace.back().total;
                if (sc.use_virtual) {
                    auto [rm, cm] = assign_virtual(sol.plan, sc.zeta, sol.alpha, sol.beta);
                    pa.row_mask = std::move(rm);
                    pa.col_mask = std::move(cm);
                } else {
                    pa.row_mask.assign(size_t(x.length()), false);
                    pa.col_mask.assign(size_t(y.length()), false);
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };
    int threads = std::max(1, cfg.threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    // majority vote per frame across the pair solves it participated in
    res.background.resize(size_t(v_count));
    std::vector<std::vector<int>> votes(static_cast<size_t>(v_count));
    std::vector<int> ballots(static_cast<size_t>(v_count), 0);
    for (int v = 0; v < v_count; ++v) votes[size_t(v)].assign(size_t(videos[size_t(v)].length()), 0);
    for (const PairAlignment& pa : res.pairs) {
        for (size_t f = 0; f < pa.row_mask.size(); ++f)
            votes[size_t(pa.a)][f] += pa.row_mask[f] ? 1 : 0;
        for (size_t f = 0; f < pa.col_mask.size(); ++f)
            votes[size_t(pa.b)][f] += pa.col_mask[f] ? 1 : 0;
        ballots[size_t(pa.a)] += 1;
        ballots[size_t(pa.b)] += 1;
    }
    // flag on at least half the ballots: missed background frames poison the
    // prototype seeding, while false exclusions only defer to neighbor labels
    for (int v = 0; v < v_count; ++v) {
        res.background[size_t(v)].resize(votes[size_t(v)].size());
        for (size_t f = 0; f < votes[size_t(v)].size(); ++f)
            res.background[size_t(v)][f] = 2 * votes[size_t(v)][f] >= ballots[size_t(v)];
    }

    // shared segmentation over the concatenated corpus
    SegmentationProblem prob;
    Index total = 0;
    for (const auto& vid : videos) total += vid.length();
    prob.frames.resize(total, videos[0].dim());
    prob.excluded.assign(size_t(total), false);
    Index off = 0;
    for (int v = 0; v < v_count; ++v) {
        const Index n = videos[size_t(v)].length();
        prob.frames.middleRows(off, n) = videos[size_t(v)].data;
        for (Index f = 0; f < n; ++f)
            prob.excluded[size_t(off + f)] = res.background[size_t(v)][size_t(f)];
        prob.chains.push_back({off, off + n});
        off += n;
    }
    prob.k = cfg.k;
    prob.smoothness_weight = cfg.smoothness_weight;
    prob.seed = cfg.seed;
    SegmentLabeling all = segment(prob);

    off = 0;
    for (int v = 0; v < v_count; ++v) {
        const Index n = videos[size_t(v)].length();
        SegmentLabeling lab;
        lab.labels.assign(all.labels.begin() + off, all.labels.begin() + off + n);
        lab.background.assign(all.background.begin() + off, all.background.begin() + off + n);
        lab.energy = all.energy;
        // ordering over the non-background frames
        std::vector<int> kept;
        for (Index f = 0; f < n; ++f)
            if (!lab.background[size_t(f)]) kept.push_back(lab.labels[size_t(f)]);
        if (kept.empty()) kept = lab.labels;
        res.orders.push_back(order_key_steps(kept, cfg.k));
        res.labelings.push_back(std::move(lab));
        off += n;
    }
    res.canonical = canonical_order(res.orders);

    if (ground_truth) {
        if (ground_truth->size() != size_t(v_count))
            throw std::invalid_argument("run_pipeline: ground truth count mismatch");
        MetricsReport mean;
        for (int v = 0; v < v_count; ++v) {
            MetricsReport r = framewise_metrics(res.labelings[size_t(v)],
                                                (*ground_truth)[size_t(v)], cfg.k, k_gt);
            mean.precision += r.precision;
            mean.recall += r.recall;
            mean.f1 += r.f1;
            mean.iou += r.iou;
            res.per_video_metrics.push_back(std::move(r));
        }
        mean.precision /= v_count;
        mean.recall /= v_count;
        mean.f1 /= v_count;
        mean.iou /= v_count;
        res.metrics = std::move(mean);
    }
    return res;
}

}  // namespace realign
