#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <utility>

namespace realign {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// A sequence of D-dimensional frame embeddings, one row per frame.
/// Timestamps are implicit: frame i lives at time i (unit spacing).
struct EmbeddingSequence {
    Matrix data;  // length x dim

    Index length() const { return data.rows(); }
    Index dim() const { return data.cols(); }

    void validate() const {
        if (data.rows() < 1 || data.cols() < 1)
            throw std::invalid_argument("EmbeddingSequence: length and dim must be >= 1");
        if (!data.allFinite())
            throw std::invalid_argument("EmbeddingSequence: non-finite entries");
    }
};

enum class Metric { Euclidean, Cosine };

/// Inter-sequence appearance costs. `augmented` marks the presence of the
/// virtual row/column (always the last row/column when present).
struct CostMatrix {
    Matrix data;
    bool augmented = false;

    Index rows() const { return data.rows(); }
    Index cols() const { return data.cols(); }
};

enum class StructureOption { A_psd_kernel, B_raw_distance };
enum class KernelShape { Laplace, Gaussian };

/// Intra-sequence structure. Option A holds a PSD temporal kernel with unit
/// diagonal; option B holds length-normalized raw temporal distances.
struct StructureMatrix {
    Matrix data;
    StructureOption option = StructureOption::A_psd_kernel;
    double scale = 1.0;
    bool augmented = false;  // zero virtual row/column appended
};

/// 1-based center index pair (i_o, j_o) for the optimality prior and IDM score.
struct Center {
    int i = 1;
    int j = 1;
};

/// Strictly positive prior over plan entries.
struct PriorMatrix {
    Matrix data;
    double phi = 1.0;
    Center center;
    bool augmented = false;
};

/// IDM injection scores s_ij; entries lie in (0, 2*lambda1].
struct ScoreMatrix {
    Matrix data;
};

/// Nonnegative (N+1)x(M+1) coupling; the last row/column is the virtual sink.
/// n_real/m_real give the real block dimensions (n_real == rows when the plan
/// was built without virtual augmentation).
struct TransportPlan {
    Matrix data;
    Index n_real = 0;
    Index m_real = 0;

    bool has_virtual() const { return data.rows() == n_real + 1; }
    auto real_block() const { return data.topLeftCorner(n_real, m_real); }
};

}  // namespace realign
