#include "realign/geometry.hpp"

#include <cmath>

namespace realign {

double VirtualCostPolicy::value_for(const Matrix& c) const {
    double m = c.size() > 0 ? c.maxCoeff() : 0.0;
    return std::max(factor * m, floor);
}

CostMatrix pairwise_cost(const EmbeddingSequence& x, const EmbeddingSequence& y,
                         Metric metric) {
    x.validate();
    y.validate();
    if (x.dim() != y.dim())
        throw std::invalid_argument("pairwise_cost: embedding dimension mismatch");

    const Index n = x.length(), m = y.length();
    CostMatrix out;
    out.data.resize(n, m);
    if (metric == Metric::Euclidean) {
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < m; ++j)
                out.data(i, j) = (x.data.row(i) - y.data.row(j)).norm();
    } else {
        Vector nx = x.data.rowwise().norm();
        Vector ny = y.data.rowwise().norm();
        for (Index i = 0; i < n; ++i) {
            for (Index j = 0; j < m; ++j) {
                double denom = nx(i) * ny(j);
                double sim = denom > 0.0 ? x.data.row(i).dot(y.data.row(j)) / denom : 0.0;
                out.data(i, j) = 1.0 - sim;
            }
        }
        // cosine costs can dip below zero by rounding; clip at 0
        out.data = out.data.cwiseMax(0.0);
    }
    return out;
}

StructureMatrix structure_matrix(Index length, StructureOption option, double scale,
                                 KernelShape kernel) {
    if (length < 1)
        throw std::invalid_argument("structure_matrix: length must be >= 1");
    if (scale <= 0.0)
        throw std::invalid_argument("structure_matrix: scale must be positive");

    StructureMatrix s;
    s.option = option;
    s.scale = scale;
    s.data.resize(length, length);
    for (Index i = 0; i < length; ++i) {
        for (Index j = 0; j < length; ++j) {
            double lag = std::abs(double(i - j));
            if (option == StructureOption::A_psd_kernel) {
                s.data(i, j) = kernel == KernelShape::Laplace
                                   ? std::exp(-lag / scale)
                                   : std::exp(-lag * lag / (2.0 * scale * scale));
            } else {
                s.data(i, j) = lag / double(length);
            }
        }
    }
    return s;
}

CostMatrix augment_virtual(const CostMatrix& c, const VirtualCostPolicy& policy) {
    if (c.augmented)
        throw std::invalid_argument("augment_virtual: matrix already augmented");
    const double v = policy.value_for(c.data);
    CostMatrix out;
    out.augmented = true;
    out.data = Matrix::Constant(c.rows() + 1, c.cols() + 1, v);
    out.data.topLeftCorner(c.rows(), c.cols()) = c.data;
    return out;
}

StructureMatrix augment_structure(const StructureMatrix& s) {
    if (s.augmented)
        throw std::invalid_argument("augment_structure: matrix already augmented");
    StructureMatrix out;
    out.option = s.option;
    out.scale = s.scale;
    out.augmented = true;
    const Index n = s.data.rows();
    out.data = Matrix::Zero(n + 1, n + 1);
    out.data.topLeftCorner(n, n) = s.data;
    return out;
}

CostMatrix normalize_max(const CostMatrix& c) {
    CostMatrix out = c;
    double m = c.data.size() > 0 ? c.data.maxCoeff() : 0.0;
    if (m > 0.0) out.data /= m;
    return out;
}

}  // namespace realign
