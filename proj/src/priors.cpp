#include "realign/priors.hpp"

#include <cmath>

namespace realign {

double anneal_phi(int step, int total_steps) {
    if (total_steps <= 0)
        throw std::invalid_argument("anneal_phi: total_steps must be positive");
    if (step < 0 || step > total_steps)
        throw std::invalid_argument("anneal_phi: step out of range");
    return 1.0 - 0.5 * (double(step) / double(total_steps));
}

PriorMatrix laplace_prior(Index n, Index m, double b, double phi, Center center) {
    if (b <= 0.0)
        throw std::invalid_argument("laplace_prior: b must be positive");
    if (phi < 0.5 || phi > 1.0)
        throw std::invalid_argument("laplace_prior: phi outside [0.5, 1]");
    if (center.i < 1 || center.i > n || center.j < 1 || center.j > m)
        throw std::invalid_argument("laplace_prior: center out of range");

    PriorMatrix q;
    q.phi = phi;
    q.center = center;
    q.data.resize(n, m);
    const double denom = std::sqrt(1.0 / double(n * n) + 1.0 / double(m * m));
    const double io = double(center.i) / double(n);
    const double jo = double(center.j) / double(m);
    for (Index i = 1; i <= n; ++i) {
        for (Index j = 1; j <= m; ++j) {
            double ti = double(i) / double(n);
            double tj = double(j) / double(m);
            double dt = std::abs(ti - tj) / denom;
            double dopt = (std::abs(ti - io) + std::abs(tj - jo)) / (2.0 * denom);
            q.data(i - 1, j - 1) = phi * std::exp(-dt / b) + (1.0 - phi) * std::exp(-dopt / b);
        }
    }
    return q;
}

ScoreMatrix idm_score(Index n, Index m, double lambda1, Center center) {
    if (lambda1 <= 0.0)
        throw std::invalid_argument("idm_score: lambda1 must be positive");
    ScoreMatrix s;
    s.data.resize(n + 1, m + 1);
    const double np1 = double(n + 1), mp1 = double(m + 1);
    for (Index i = 1; i <= n + 1; ++i) {
        for (Index j = 1; j <= m + 1; ++j) {
            double diag = double(i) / np1 - double(j) / mp1;
            double t1 = 1.0 / (diag * diag + 1.0);
            double di = (double(i) - center.i) / np1;
            double dj = (double(j) - center.j) / mp1;
            double dm = di * di + dj * dj;
            double t2 = 1.0 / (0.5 * dm + 1.0);
            s.data(i - 1, j - 1) = lambda1 * (t1 + t2);
        }
    }
    return s;
}

double idm_value(const TransportPlan& plan, double phi, Center center) {
    if ((plan.data.array() < 0.0).any())
        throw std::invalid_argument("idm_value: plan must be nonnegative");
    const Index n = plan.n_real, m = plan.m_real;
    const double np1 = double(n + 1), mp1 = double(m + 1);
    double temporal = 0.0, optimal = 0.0;
    for (Index i = 1; i <= n; ++i) {
        for (Index j = 1; j <= m; ++j) {
            double t = plan.data(i - 1, j - 1);
            double diag = double(i) / double(n) - double(j) / double(m);
            temporal += t / (diag * diag + 1.0);
            double di = (double(i) - center.i) / np1;
            double dj = (double(j) - center.j) / mp1;
            optimal += t / (0.5 * (di * di + dj * dj) + 1.0);
        }
    }
    return phi * temporal + (1.0 - phi) * optimal;
}

PriorMatrix augment_prior(const PriorMatrix& q, double virtual_value) {
    if (q.augmented)
        throw std::invalid_argument("augment_prior: prior already augmented");
    if (virtual_value <= 0.0)
        throw std::invalid_argument("augment_prior: virtual_value must be positive");
    PriorMatrix out;
    out.phi = q.phi;
    out.center = q.center;
    out.augmented = true;
    out.data = Matrix::Constant(q.data.rows() + 1, q.data.cols() + 1, virtual_value);
    out.data.topLeftCorner(q.data.rows(), q.data.cols()) = q.data;
    return out;
}

}  // namespace realign
