#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "realign/geometry.hpp"
#include "realign/priors.hpp"
#include "realign/types.hpp"

namespace realign {

enum class CenterPolicy { FixedMid, PlanArgmax };
enum class PhiMode { Fixed, AnnealOuter };

constexpr double kBalancedTau = std::numeric_limits<double>::infinity();

/// All solver hyperparameters. Fields left NaN resolve to their Table-A1
/// style defaults for the instance at hand via resolve(n, m).
struct SolverConfig {
    double rho = 0.3;
    double lambda1 = nan_default();  // 1/(N+M)
    double lambda2 = nan_default();  // 0.1*N*M/4
    double tau = nan_default();      // lambda2/4; kBalancedTau = balanced
    double epsilon = 0.07;           // entropic KOT / no-priors fallback temperature
    double b = 2.0;                  // Laplace scale (3.0 for coarse/noisy regimes)
    double zeta = nan_default();     // 2*5/(N+M)
    int inner_max = 20;
    double inner_tol = 1e-3;
    int outer_max = 6;
    double outer_tol = 1e-4;
    StructureOption option = StructureOption::A_psd_kernel;
    KernelShape kernel = KernelShape::Laplace;
    double phi = 1.0;
    PhiMode phi_mode = PhiMode::AnnealOuter;
    CenterPolicy center_policy = CenterPolicy::PlanArgmax;
    Metric metric = Metric::Euclidean;
    double virtual_budget = 0.1;       // virtual marginal mass before renormalization
    VirtualCostPolicy virtual_policy;  // factor 2.0, floor 1.0
    bool normalize_cost = false;       // optional max-normalization of C
    bool use_priors = true;            // off: uniform prior, zero scores, temperature epsilon
    bool use_virtual = true;           // off: no sink row/column

    static double nan_default() { return std::numeric_limits<double>::quiet_NaN(); }

    /// Fills NaN fields with the instance-dependent defaults.
    SolverConfig resolve(Index n, Index m) const;

    void validate() const;

    /// Update exponent for the scaling iterations: tau/(tau+temperature),
    /// exactly 1 for the balanced sentinel.
    double kappa() const;

    /// Kernel temperature: lambda2 with priors, epsilon without.
    double temperature() const;
};

/// One evaluation of the penalized objective, term by term. Weights are
/// applied in `total`; the component fields are unweighted.
struct ObjectiveBreakdown {
    double fused_linear = 0.0;      // (1-rho) <C, T>
    double gw_quadratic = 0.0;      // rho <Cx T Cy, T>  (true quadratic term)
    double idm_reward = 0.0;        // <S, T>/lambda1 (0 when scores are off)
    double prior_kl = 0.0;          // KL(T || Q)
    double marginal_kl_row = 0.0;   // KL(T1 || alpha)
    double marginal_kl_col = 0.0;   // KL(T'1 || beta)
    double total = 0.0;
};

struct Solution {
    TransportPlan plan;
    Vector u, v;
    std::vector<ObjectiveBreakdown> objective_trace;  // one entry per outer step
    double initial_objective = 0.0;                   // J of the initialization
    std::vector<std::vector<double>> inner_residuals;
    bool converged = false;
    int outer_steps_used = 0;
    Vector alpha, beta;  // marginals used (with virtual mass when augmented)
    Center final_center;
    double final_phi = 1.0;
};

/// K_ij = q_ij * exp((s_ij - d_ij)/lambda2), exponents clamped to [-700, 700].
Matrix gibbs_kernel(const Matrix& d_tilde, const Matrix& q_hat, const Matrix& scores,
                    double lambda2);

struct SinkhornResult {
    Vector u, v;
    TransportPlan plan;
    std::vector<double> residual_trace;
    int iterations = 0;
};

/// Unbalanced scaling iterations u <- (alpha/Kv)^kappa, v <- (beta/K'u)^kappa.
/// kappa = 1 is the balanced case (plain division, no pow). Stops when the
/// L1 change of (T1, T'1) divided by total mass falls to inner_tol.
/// The returned plan treats the whole kernel as real; callers scaling an
/// augmented kernel adjust n_real/m_real themselves.
SinkhornResult unbalanced_sinkhorn(const Matrix& kernel, const Vector& alpha,
                                   const Vector& beta, double kappa, int inner_max,
                                   double inner_tol);

/// Linearized GW gradient. Option A (symmetric PSD): 2 Cx T Cy.
/// Option B: Cx T Cy' + Cx' T Cy.
Matrix gw_gradient(const StructureMatrix& cx, const StructureMatrix& cy,
                   const TransportPlan& plan, StructureOption option);

/// Fused cost (1-rho) C + rho G.
CostMatrix fused_cost(const CostMatrix& c, const Matrix& g, double rho);

/// Fixed problem data for objective evaluation.
struct ObjectiveContext {
    const Matrix& cost;            // C (same shape as plan)
    const Matrix& cx;              // structure, augmented to plan shape
    const Matrix& cy;
    const Matrix& scores;          // S (zeros when scores are off)
    const Matrix& prior;           // Q (strictly positive)
    const Vector& alpha;
    const Vector& beta;
    double rho;
    double lambda1;                // 0 disables the reward term
    double temperature;            // weight of the prior KL
    double tau;                    // kBalancedTau drops the marginal term from total
};

ObjectiveBreakdown objective(const TransportPlan& plan, const ObjectiveContext& ctx);

/// Row/column background masks: entry-vs-zeta with strict inequality.
/// Row i is flagged iff max over real columns of t_ij < zeta (and symmetrically).
std::pair<std::vector<bool>, std::vector<bool>> assign_virtual(const TransportPlan& plan,
                                                               double zeta);

/// Marginal-aware variant: compares t_ij/alpha_i (row test) and t_ij/beta_j
/// (column test) against zeta, i.e. matching probability against the frame's
/// mass budget. This is what the solver/pipeline use.
std::pair<std::vector<bool>, std::vector<bool>> assign_virtual(const TransportPlan& plan,
                                                               double zeta,
                                                               const Vector& alpha,
                                                               const Vector& beta);

/// Full R-FPGWOT solve (Appendix Algorithm 1 shape): outer MM loop with
/// per-step kernel rebuilds and unbalanced scaling inner loops.
Solution solve_rfpgwot(const EmbeddingSequence& x, const EmbeddingSequence& y,
                       const SolverConfig& cfg);

/// Classical entropic OT baseline: kernel exp(-C/epsilon), balanced Sinkhorn.
Solution solve_entropic_kot(const CostMatrix& c, const Vector& alpha, const Vector& beta,
                            double epsilon, int max_iter, double tol = 1e-12);

/// KL(A || B) = sum A log(A/B) - A + B with the 0 log 0 = 0 convention.
double kl_divergence(const Matrix& a, const Matrix& b);
double kl_divergence(const Vector& a, const Vector& b);

}  // namespace realign
