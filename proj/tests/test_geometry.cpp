#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "realign/geometry.hpp"

using namespace realign;

namespace {

EmbeddingSequence seq(std::initializer_list<std::initializer_list<double>> rows) {
    EmbeddingSequence s;
    s.data.resize(Index(rows.size()), Index(rows.begin()->size()));
    Index i = 0;
    for (const auto& r : rows) {
        Index j = 0;
        for (double v : r) s.data(i, j++) = v;
        ++i;
    }
    return s;
}

EmbeddingSequence random_seq(std::mt19937_64& rng, Index n, Index d) {
    std::normal_distribution<double> g;
    EmbeddingSequence s;
    s.data.resize(n, d);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < d; ++j) s.data(i, j) = g(rng);
    return s;
}

}  // namespace

TEST_CASE("pairwise_cost euclidean basics") {
    EmbeddingSequence z = seq({{0.0, 0.0, 0.0}});
    CHECK(pairwise_cost(z, z).data(0, 0) == 0.0);

    EmbeddingSequence a = seq({{0.0, 0.0}});
    EmbeddingSequence b = seq({{3.0, 4.0}});
    CHECK(pairwise_cost(a, b).data(0, 0) == doctest::Approx(5.0));
}

TEST_CASE("pairwise_cost matches a hand-looped oracle") {
    std::mt19937_64 rng(7);
    EmbeddingSequence x = random_seq(rng, 4, 3);
    EmbeddingSequence y = random_seq(rng, 5, 3);
    CostMatrix c = pairwise_cost(x, y);
    for (Index i = 0; i < 4; ++i) {
        for (Index j = 0; j < 5; ++j) {
            double acc = 0.0;
            for (Index d = 0; d < 3; ++d) {
                double diff = x.data(i, d) - y.data(j, d);
                acc += diff * diff;
            }
            CHECK(c.data(i, j) == doctest::Approx(std::sqrt(acc)).epsilon(1e-12));
        }
    }
}

TEST_CASE("pairwise_cost transpose symmetry and errors") {
    std::mt19937_64 rng(8);
    EmbeddingSequence x = random_seq(rng, 6, 4);
    EmbeddingSequence y = random_seq(rng, 3, 4);
    Matrix a = pairwise_cost(x, y).data;
    Matrix b = pairwise_cost(y, x).data;
    CHECK((a - b.transpose()).cwiseAbs().maxCoeff() == 0.0);

    EmbeddingSequence bad = random_seq(rng, 2, 5);
    CHECK_THROWS_AS(pairwise_cost(x, bad), std::invalid_argument);
    EmbeddingSequence nan = x;
    nan.data(0, 0) = std::nan("");
    CHECK_THROWS_AS(pairwise_cost(nan, y), std::invalid_argument);
}

TEST_CASE("cosine costs are nonnegative") {
    std::mt19937_64 rng(9);
    EmbeddingSequence x = random_seq(rng, 5, 3);
    EmbeddingSequence y = random_seq(rng, 5, 3);
    CostMatrix c = pairwise_cost(x, y, Metric::Cosine);
    CHECK(c.data.minCoeff() >= 0.0);
    CHECK(c.data.maxCoeff() <= 2.0 + 1e-12);
}

TEST_CASE("structure_matrix option A laplace") {
    StructureMatrix s = structure_matrix(3, StructureOption::A_psd_kernel, 1.0);
    for (Index i = 0; i < 3; ++i) CHECK(s.data(i, i) == 1.0);
    CHECK(s.data(0, 1) == doctest::Approx(std::exp(-1.0)));
    CHECK(s.data(2, 1) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("structure_matrix option A gaussian is PSD (eigen oracle)") {
    StructureMatrix s = structure_matrix(5, StructureOption::A_psd_kernel, 2.0,
                                         KernelShape::Gaussian);
    Eigen::SelfAdjointEigenSolver<Matrix> es(s.data);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9);
}

TEST_CASE("structure_matrix option A PSD for all lengths up to 64") {
    for (Index len : {2, 3, 8, 17, 33, 64}) {
        for (KernelShape ker : {KernelShape::Laplace, KernelShape::Gaussian}) {
            StructureMatrix s = structure_matrix(len, StructureOption::A_psd_kernel, 2.0, ker);
            CHECK((s.data - s.data.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
            Eigen::SelfAdjointEigenSolver<Matrix> es(s.data);
            CHECK(es.eigenvalues().minCoeff() >= -1e-9);
        }
    }
}

TEST_CASE("structure_matrix option B normalized toeplitz") {
    StructureMatrix s = structure_matrix(4, StructureOption::B_raw_distance, 1.0);
    CHECK(s.data(0, 0) == 0.0);
    CHECK(s.data(0, 1) == doctest::Approx(0.25));
    CHECK(s.data(0, 2) == doctest::Approx(0.5));
    CHECK(s.data(0, 3) == doctest::Approx(0.75));
    CHECK(s.data(3, 0) == doctest::Approx(0.75));
}

TEST_CASE("structure_matrix rejects bad scale") {
    CHECK_THROWS_AS(structure_matrix(3, StructureOption::A_psd_kernel, 0.0),
                    std::invalid_argument);
}

TEST_CASE("augment_virtual") {
    CostMatrix zero;
    zero.data = Matrix::Zero(1, 1);
    CostMatrix a = augment_virtual(zero);  // floor applies when max cost is 0
    CHECK(a.data.rows() == 2);
    CHECK(a.data(0, 1) == 1.0);
    CHECK(a.data(1, 0) == 1.0);
    CHECK(a.data(1, 1) == 1.0);

    std::mt19937_64 rng(10);
    EmbeddingSequence x = random_seq(rng, 3, 2), y = random_seq(rng, 3, 2);
    CostMatrix c = pairwise_cost(x, y);
    CostMatrix aug = augment_virtual(c);
    double expect = 2.0 * c.data.maxCoeff();
    for (Index i = 0; i < 4; ++i) {
        CHECK(aug.data(i, 3) == expect);
        CHECK(aug.data(3, i) == expect);
    }
    // original entries preserved bit-exactly
    CHECK((aug.data.topLeftCorner(3, 3).array() == c.data.array()).all());
    CHECK(aug.data.allFinite());

    CHECK_THROWS_AS(augment_virtual(aug), std::invalid_argument);
}

TEST_CASE("augment_structure appends zero interactions") {
    StructureMatrix s = structure_matrix(3, StructureOption::A_psd_kernel, 2.0);
    StructureMatrix a = augment_structure(s);
    CHECK(a.data.rows() == 4);
    CHECK(a.data.row(3).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.data.col(3).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(augment_structure(a), std::invalid_argument);
}
