#include "realign/solver.hpp"

#include <algorithm>
#include <cmath>

namespace realign {

namespace {

bool is_nan(double x) { return std::isnan(x); }

double clamp_exp(double e) { return std::exp(std::clamp(e, -700.0, 700.0)); }

}  // namespace

SolverConfig SolverConfig::resolve(Index n, Index m) const {
    SolverConfig r = *this;
    if (is_nan(r.lambda1)) r.lambda1 = 1.0 / double(n + m);
    if (is_nan(r.lambda2)) r.lambda2 = 0.1 * double(n) * double(m) / 4.0;
    if (is_nan(r.tau)) r.tau = r.lambda2 / 4.0;
    if (is_nan(r.zeta)) r.zeta = 2.0 * 5.0 / double(n + m);
    r.validate();
    return r;
}

void SolverConfig::validate() const {
    if (rho < 0.0 || rho > 1.0) throw std::invalid_argument("SolverConfig: rho outside [0,1]");
    if (!is_nan(lambda1) && lambda1 <= 0.0)
        throw std::invalid_argument("SolverConfig: lambda1 must be positive");
    if (!is_nan(lambda2) && lambda2 <= 0.0)
        throw std::invalid_argument("SolverConfig: lambda2 must be positive");
    if (!is_nan(tau) && tau <= 0.0)
        throw std::invalid_argument("SolverConfig: tau must be positive");
    if (epsilon <= 0.0) throw std::invalid_argument("SolverConfig: epsilon must be positive");
    if (b <= 0.0) throw std::invalid_argument("SolverConfig: b must be positive");
    if (inner_max < 1 || outer_max < 1)
        throw std::invalid_argument("SolverConfig: iteration budgets must be >= 1");
    if (inner_tol < 0.0 || outer_tol < 0.0)
        throw std::invalid_argument("SolverConfig: tolerances must be nonnegative");
    if (virtual_budget <= 0.0 || virtual_budget >= 1.0)
        throw std::invalid_argument("SolverConfig: virtual_budget outside (0,1)");
}

double SolverConfig::kappa() const {
    if (std::isinf(tau)) return 1.0;
    return tau / (tau + temperature());
}

double SolverConfig::temperature() const { return use_priors ? lambda2 : epsilon; }

double kl_divergence(const Matrix& a, const Matrix& b) {
    double s = 0.0;
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i) {
            double ai = a(i, j), bi = b(i, j);
            s += (ai > 0.0 ? ai * std::log(ai / bi) - ai : 0.0) + bi;
        }
    return s;
}

double kl_divergence(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (Index i = 0; i < a.size(); ++i) {
        double ai = a(i), bi = b(i);
        s += (ai > 0.0 ? ai * std::log(ai / bi) - ai : 0.0) + bi;
    }
    return s;
}

Matrix gibbs_kernel(const Matrix& d_tilde, const Matrix& q_hat, const Matrix& scores,
                    double lambda2) {
    if (lambda2 <= 0.0) throw std::invalid_argument("gibbs_kernel: lambda2 must be positive");
    if (d_tilde.rows() != q_hat.rows() || d_tilde.cols() != q_hat.cols() ||
        d_tilde.rows() != scores.rows() || d_tilde.cols() != scores.cols())
        throw std::invalid_argument("gibbs_kernel: shape mismatch");
    if ((q_hat.array() <= 0.0).any())
        throw std::invalid_argument("gibbs_kernel: prior must be strictly positive");

    Matrix k(d_tilde.rows(), d_tilde.cols());
    for (Index j = 0; j < k.cols(); ++j)
        for (Index i = 0; i < k.rows(); ++i)
            k(i, j) = q_hat(i, j) * clamp_exp((scores(i, j) - d_tilde(i, j)) / lambda2);
    return k;
}

SinkhornResult unbalanced_sinkhorn(const Matrix& kernel, const Vector& alpha,
                                   const Vector& beta, double kappa, int inner_max,
                                   double inner_tol) {
    if ((kernel.array() <= 0.0).any() || !kernel.allFinite())
        throw std::invalid_argument("unbalanced_sinkhorn: kernel entries must be in (0, inf)");
    if ((alpha.array() <= 0.0).any() || (beta.array() <= 0.0).any())
        throw std::invalid_argument("unbalanced_sinkhorn: marginals must be strictly positive");
    if (kappa <= 0.0 || kappa > 1.0)
        throw std::invalid_argument("unbalanced_sinkhorn: kappa outside (0, 1]");

    const bool balanced = kappa == 1.0;
    // keeps the divisions finite when clamped kernel entries underflow the
    // matvec; inert for any healthy kernel
    const double floor = 1e-300;
    SinkhornResult res;
    res.u = Vector::Ones(kernel.rows());
    res.v = Vector::Ones(kernel.cols());
    Vector row_prev = kernel * res.v;  // marginals of the all-ones scaling
    Vector col_prev = kernel.transpose() * res.u;

    for (int it = 0; it < inner_max; ++it) {
        Vector kv = (kernel * res.v).cwiseMax(floor);
        res.u = balanced ? (alpha.array() / kv.array()).matrix().eval()
                         : (alpha.array() / kv.array()).pow(kappa).matrix().eval();
        Vector ktu = (kernel.transpose() * res.u).cwiseMax(floor);
        res.v = balanced ? (beta.array() / ktu.array()).matrix().eval()
                         : (beta.array() / ktu.array()).pow(kappa).matrix().eval();
        Vector row = res.u.array() * (kernel * res.v).array();
        Vector col = res.v.array() * (kernel.transpose() * res.u).array();
        double mass = row.sum();
        double delta = (row - row_prev).cwiseAbs().sum() + (col - col_prev).cwiseAbs().sum();
        double residual = delta / std::max(mass, 1e-300);
        res.residual_trace.push_back(residual);
        row_prev = row;
        col_prev = col;
        res.iterations = it + 1;
        if (residual <= inner_tol) break;
    }
    res.plan.data = res.u.asDiagonal() * kernel * res.v.asDiagonal();
    res.plan.n_real = kernel.rows();
    res.plan.m_real = kernel.cols();
    return res;
}

Matrix gw_gradient(const StructureMatrix& cx, const StructureMatrix& cy,
                   const TransportPlan& plan, StructureOption option) {
    if (cx.data.rows() != plan.data.rows() || cy.data.rows() != plan.data.cols())
        throw std::invalid_argument("gw_gradient: shape mismatch");
    if (option == StructureOption::A_psd_kernel)
        return 2.0 * cx.data * plan.data * cy.data;
    return cx.data * plan.data * cy.data.transpose() +
           cx.data.transpose() * plan.data * cy.data;
}

CostMatrix fused_cost(const CostMatrix& c, const Matrix& g, double rho) {
    if (c.data.rows() != g.rows() || c.data.cols() != g.cols())
        throw std::invalid_argument("fused_cost: shape mismatch");
    CostMatrix out;
    out.augmented = c.augmented;
    out.data = (1.0 - rho) * c.data + rho * g;
    return out;
}

ObjectiveBreakdown objective(const TransportPlan& plan, const ObjectiveContext& ctx) {
    if ((plan.data.array() < 0.0).any())
        throw std::invalid_argument("objective: negative plan entries");
    const Matrix& t = plan.data;
    ObjectiveBreakdown br;
    br.fused_linear = (1.0 - ctx.rho) * (ctx.cost.array() * t.array()).sum();
    br.gw_quadratic = ctx.rho * ((ctx.cx * t * ctx.cy).array() * t.array()).sum();
    br.idm_reward = ctx.lambda1 > 0.0 ? (ctx.scores.array() * t.array()).sum() / ctx.lambda1
                                      : 0.0;
    br.prior_kl = kl_divergence(t, ctx.prior);
    Vector row = t.rowwise().sum();
    Vector col = t.colwise().sum();
    br.marginal_kl_row = kl_divergence(row, ctx.alpha);
    br.marginal_kl_col = kl_divergence(col, ctx.beta);
    br.total = br.fused_linear + br.gw_quadratic - ctx.lambda1 * br.idm_reward +
               ctx.temperature * br.prior_kl;
    if (!std::isinf(ctx.tau))
        br.total += ctx.tau * (br.marginal_kl_row + br.marginal_kl_col);
    return br;
}

std::pair<std::vector<bool>, std::vector<bool>> assign_virtual(const TransportPlan& plan,
                                                               double zeta) {
    std::vector<bool> rows(plan.n_real), cols(plan.m_real);
    for (Index i = 0; i < plan.n_real; ++i) {
        double mx = 0.0;
        for (Index j = 0; j < plan.m_real; ++j) mx = std::max(mx, plan.data(i, j));
        rows[i] = mx < zeta;
    }
    for (Index j = 0; j < plan.m_real; ++j) {
        double mx = 0.0;
        for (Index i = 0; i < plan.n_real; ++i) mx = std::max(mx, plan.data(i, j));
        cols[j] = mx < zeta;
    }
    return {rows, cols};
}

std::pair<std::vector<bool>, std::vector<bool>> assign_virtual(const TransportPlan& plan,
                                                               double zeta,
                                                               const Vector& alpha,
                                                               const Vector& beta) {
    TransportPlan scaled = plan;
    for (Index i = 0; i < plan.n_real; ++i)
        for (Index j = 0; j < plan.m_real; ++j)
            scaled.data(i, j) = plan.data(i, j) / alpha(i);
    auto row_masks = assign_virtual(scaled, zeta).first;
    for (Index i = 0; i < plan.n_real; ++i)
        for (Index j = 0; j < plan.m_real; ++j)
            scaled.data(i, j) = plan.data(i, j) / beta(j);
    auto col_masks = assign_virtual(scaled, zeta).second;
    return {row_masks, col_masks};
}

namespace {

struct ProblemData {
    CostMatrix cost;
    StructureMatrix cx, cy;
    Vector alpha, beta;
    Index n, m;
};

ProblemData build_problem(const EmbeddingSequence& x, const EmbeddingSequence& y,
                          const SolverConfig& cfg) {
    ProblemData p;
    p.n = x.length();
    p.m = y.length();
    CostMatrix c = pairwise_cost(x, y, cfg.metric);
    if (cfg.normalize_cost) c = normalize_max(c);
    p.cx = structure_matrix(p.n, cfg.option, cfg.b, cfg.kernel);
    p.cy = structure_matrix(p.m, cfg.option, cfg.b, cfg.kernel);
    if (cfg.use_virtual) {
        p.cost = augment_virtual(c, cfg.virtual_policy);
        p.cx = augment_structure(p.cx);
        p.cy = augment_structure(p.cy);
        p.alpha = Vector::Constant(p.n + 1, 1.0 / double(p.n));
        p.alpha(p.n) = cfg.virtual_budget;
        p.alpha /= p.alpha.sum();
        p.beta = Vector::Constant(p.m + 1, 1.0 / double(p.m));
        p.beta(p.m) = cfg.virtual_budget;
        p.beta /= p.beta.sum();
    } else {
        p.cost = c;
        p.alpha = Vector::Constant(p.n, 1.0 / double(p.n));
        p.beta = Vector::Constant(p.m, 1.0 / double(p.m));
    }
    return p;
}

struct PriorPack {
    Matrix q;
    Matrix s;
};

PriorPack build_priors(const ProblemData& p, const SolverConfig& cfg, double phi,
                       Center center) {
    PriorPack pk;
    const Index rows = p.cost.rows(), cols = p.cost.cols();
    if (cfg.use_priors) {
        PriorMatrix q = laplace_prior(p.n, p.m, cfg.b, phi, center);
        if (cfg.use_virtual)
            q = augment_prior(q, 1.0 / (double(p.n + 1) * double(p.m + 1)));
        pk.q = q.data;
        pk.s = idm_score(p.n, p.m, cfg.lambda1, center).data.topLeftCorner(rows, cols);
    } else {
        pk.q = Matrix::Ones(rows, cols);
        pk.s = Matrix::Zero(rows, cols);
    }
    return pk;
}

}  // namespace

Solution solve_rfpgwot(const EmbeddingSequence& x, const EmbeddingSequence& y,
                       const SolverConfig& raw_cfg) {
    const SolverConfig cfg = raw_cfg.resolve(x.length(), y.length());
    ProblemData p = build_problem(x, y, cfg);

    // both policies start from the midpoint; PlanArgmax re-centers after each step
    Center center{int((p.n + 1) / 2), int((p.m + 1) / 2)};
    double phi = cfg.phi_mode == PhiMode::AnnealOuter ? anneal_phi(0, cfg.outer_max) : cfg.phi;
    PriorPack pk = build_priors(p, cfg, phi, center);

    const double temp = cfg.temperature();
    const double kappa = cfg.kappa();
    const double score_lambda1 = cfg.use_priors ? cfg.lambda1 : 0.0;

    Solution sol;
    sol.alpha = p.alpha;
    sol.beta = p.beta;
    sol.plan.n_real = p.n;
    sol.plan.m_real = p.m;
    sol.plan.data = pk.q / pk.q.sum();  // T(0) = Q normalized to unit mass

    auto eval = [&](const TransportPlan& t, const PriorPack& pr) {
        ObjectiveContext ctx{p.cost.data, p.cx.data,  p.cy.data, pr.s, pr.q,
                             p.alpha,     p.beta,     cfg.rho,   score_lambda1,
                             temp,        cfg.tau};
        return objective(t, ctx);
    };
    sol.initial_objective = eval(sol.plan, pk).total;

    double prev_total = sol.initial_objective;
    for (int s = 0; s < cfg.outer_max; ++s) {
        Matrix g = cfg.rho > 0.0 ? gw_gradient(p.cx, p.cy, sol.plan, cfg.option)
                                 : Matrix::Zero(p.cost.rows(), p.cost.cols());
        CostMatrix d = fused_cost(p.cost, g, cfg.rho);
        Matrix kernel = gibbs_kernel(d.data, pk.q, pk.s, temp);
        SinkhornResult inner =
            unbalanced_sinkhorn(kernel, p.alpha, p.beta, kappa, cfg.inner_max, cfg.inner_tol);
        sol.plan.data = inner.plan.data;
        sol.u = inner.u;
        sol.v = inner.v;
        sol.inner_residuals.push_back(inner.residual_trace);

        ObjectiveBreakdown br = eval(sol.plan, pk);
        sol.objective_trace.push_back(br);
        sol.outer_steps_used = s + 1;
        double denom = std::max(std::abs(prev_total), 1e-12);
        if (std::abs(prev_total - br.total) <= cfg.outer_tol * denom) {
            sol.converged = true;
            break;
        }
        prev_total = br.total;

        bool dirty = false;
        if (cfg.center_policy == CenterPolicy::PlanArgmax) {
            // ties break to the smallest (i, j) lexicographically
            Index bi = 0, bj = 0;
            double best = sol.plan.data(0, 0);
            for (Index i = 0; i < p.n; ++i)
                for (Index j = 0; j < p.m; ++j)
                    if (sol.plan.data(i, j) > best) {
                        best = sol.plan.data(i, j);
                        bi = i;
                        bj = j;
                    }
            Center next{int(bi) + 1, int(bj) + 1};
            if (next.i != center.i || next.j != center.j) {
                center = next;
                dirty = true;
            }
        }
        if (cfg.phi_mode == PhiMode::AnnealOuter) {
            double next_phi = anneal_phi(s + 1, cfg.outer_max);
            if (next_phi != phi) {
                phi = next_phi;
                dirty = true;
            }
        }
        if (dirty) pk = build_priors(p, cfg, phi, center);
    }
    sol.final_center = center;
    sol.final_phi = phi;
    return sol;
}

Solution solve_entropic_kot(const CostMatrix& c, const Vector& alpha, const Vector& beta,
                            double epsilon, int max_iter, double tol) {
    if (epsilon <= 0.0) throw std::invalid_argument("solve_entropic_kot: epsilon must be positive");
    if (std::abs(alpha.sum() - beta.sum()) > 1e-9 * std::max(alpha.sum(), beta.sum()))
        throw std::invalid_argument("solve_entropic_kot: marginals must balance");
    Matrix kernel(c.data.rows(), c.data.cols());
    for (Index j = 0; j < kernel.cols(); ++j)
        for (Index i = 0; i < kernel.rows(); ++i)
            kernel(i, j) = clamp_exp(-c.data(i, j) / epsilon);
    SinkhornResult r = unbalanced_sinkhorn(kernel, alpha, beta, 1.0, max_iter, tol);
    Solution sol;
    sol.plan = r.plan;
    sol.u = r.u;
    sol.v = r.v;
    sol.inner_residuals.push_back(r.residual_trace);
    sol.converged = r.residual_trace.empty() ? false : r.residual_trace.back() <= tol;
    sol.outer_steps_used = 1;
    sol.alpha = alpha;
    sol.beta = beta;
    return sol;
}

}  // namespace realign
