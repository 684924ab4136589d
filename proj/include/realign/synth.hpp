#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "realign/types.hpp"

namespace realign {

struct SynthConfig {
    int k = 4;                      // planted steps
    int dim = 16;                   // embedding dimension (needs dim >= k)
    int frames_per_step_min = 4;
    int frames_per_step_max = 8;
    double step_separation = 100.0;  // min pairwise centroid distance
    double noise_sigma = 1.0;
    double background_rate = 0.0;   // [0, 1)
    double repeat_rate = 0.0;       // [0, 1)
    bool permute = false;
    std::uint64_t seed = 0;
    int videos = 2;                 // sequences per generated task

    void validate() const;
};

struct GroundTruth {
    std::vector<int> labels;  // step id per frame, kBackgroundLabel for background
    std::vector<int> order;   // planted visit permutation of {0..k-1}
};

struct SynthTask {
    std::vector<EmbeddingSequence> videos;
    std::vector<GroundTruth> truths;
    Matrix centroids;  // k x dim
};

/// Generates `cfg.videos` sequences sharing one centroid set. The first video
/// visits steps in identity order; later ones are permuted iff cfg.permute.
/// Deterministic given the seed. Throws std::invalid_argument on infeasible
/// configs (dim < k).
SynthTask generate_task(const SynthConfig& cfg);

/// Two-sequence convenience wrapper matching the pairwise solver interface.
struct SynthPair {
    EmbeddingSequence x, y;
    GroundTruth gt_x, gt_y;
};
SynthPair generate_pair(const SynthConfig& cfg);

}  // namespace realign
