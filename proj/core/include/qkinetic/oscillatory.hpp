#pragma once

#include "qkinetic/histories.hpp"
#include "qkinetic/kernel.hpp"
#include "qkinetic/quadrature.hpp"

#include <functional>
#include <string>
#include <vector>

namespace qk {

// ---------------------------------------------------------------------------
// Model oscillatory integral
//
//   A_eps = int dx dxi dy deta int_0^{1/eps} ds exp(i xi.x - i s eta.y) chi(x, y, xi, eta)
//
// for a separable Gaussian chi = g_x(x) g_y(y) g_xi(xi) g_eta(eta) on R^{4d}.

/// a exp(-|z - c|^2 / (2 w^2)) on R^d.
struct GaussianFactor {
    double amplitude = 1.0;
    Vec center;
    double width = 1.0;

    double sup() const;
    double l1(int dim) const;
    double fourier_sup(int dim) const;
    double fourier_l1(int dim) const;
};

struct ModelChi {
    int dim = 2;
    GaussianFactor gx, gy, gxi, geta;

    /// Standard Gaussians centered at the origin.
    static ModelChi standard(int dim);
};

/// int dxi deta (F_{x,y} chi)(-xi, s eta, xi, eta): the s-integrand of A_eps.
cplx model_A_integrand(const ModelChi& chi, double s);
/// A_eps through the s-integral of the Fourier-side integrand.
cplx model_A_eps(const ModelChi& chi, double eps);
/// Limit of A_eps; throws std::domain_error for d = 1, where the s-integral
/// diverges logarithmically.
cplx model_A_limit(const ModelChi& chi);
/// Mixed-norm bound: N_a min(1, 1/eps) + N_b int_1^{1/eps} s^-d ds with
/// N_a = ||F chi||_{L1(xi,eta; Linf(alpha,beta))}, N_b = ||F chi||_{L1(alpha,beta; Linf(xi,eta))}.
double model_A_bound(const ModelChi& chi, double eps);

// ---------------------------------------------------------------------------
// Low order terms of the finite-eps hierarchy expansion

enum class Term { I1, I2, I3, I4_case1, I4_case2, I4_case3, I4_recollision, A_eps, T_eps };

std::string to_string(Term t);
/// Throws std::invalid_argument for unknown names.
Term term_from_string(const std::string& name);

/// Sum over both signs of every operator, or the single branch sigma = +1
/// (the magnitude of one branch, before the sign sum cancels leading orders).
enum class SignMode { summed, branch };

struct TermSelector {
    Term which = Term::I1;
    int j = 0; // observed subsystem size; 0 picks the smallest j with a nonempty term
    int dim = 2;
};

struct TermConfig {
    double t = 1.0;
    SignMode signs = SignMode::summed;
    int time_nodes = 16;    // Gauss-Legendre nodes per time panel
    Vec x, v;               // observation point of pointwise terms (defaults to 0.3 e_1 / 0.5 e_1)
};

/// Expected power of eps at dimension d.
double expected_slope(Term t, int dim);
/// Subsystem size used when sel.j == 0.
int default_subsystem(Term t);
/// Sign treatment under which the term shows its nominal power: summed for
/// I1, a single branch for the others, whose leading orders cancel
/// between the two signs.
SignMode default_sign_mode(Term t);
/// Whether the term is tested against a standard Gaussian rather than
/// evaluated at a point.
bool weakly_tested(Term t);

struct TermValue {
    cplx value;
    double error = 0.0; // time quadrature: difference to half the nodes
};

/// Value of an I term at finite eps. Every phase-space and momentum integral
/// is Gaussian and done in closed form; the one or two time integrals use
/// composite Gauss-Legendre rules graded towards the eps boundary layer.
/// Summed terms are real up to round-off; a single sign branch is complex.
TermValue eval_I_term(const TermSelector& sel, double eps, const InitialDatum& f0, const CrossSection& cs,
                     const TermConfig& cfg = {});

struct ScalingProbe {
    std::vector<double> eps;
    std::vector<double> magnitudes;
    std::vector<double> errors; // quadrature or Monte Carlo error per point
    double slope = 0.0;
    double slope_stderr = 0.0;
    double max_residual = 0.0;
    bool reliable = true;
};

/// Geometric ladder eps_0, eps_0 r, ..., with `points` entries.
std::vector<double> geometric_ladder(double first, double ratio, int points);

/// OLS fit of log|value| against log eps. For A_eps and T_eps the probed
/// magnitude is the gap to the limit.
ScalingProbe scaling_probe(const TermSelector& sel, const std::vector<double>& ladder, const InitialDatum& f0,
                           const CrossSection& cs, const TermConfig& cfg = {}, double residual_threshold = 0.1);

// ---------------------------------------------------------------------------
// Finite-eps history terms on the Fourier side

enum class SMethod { quadrature, monte_carlo };

struct TepsConfig {
    SMethod method = SMethod::quadrature;
    int nodes_per_panel = 12;   // quadrature: Gauss nodes per graded s panel
    McBudget budget{4096, 1, 0}; // monte_carlo: samples of s
};

/// Integrand of the rescaled term after the closed-form (Xi, K) integral:
/// (-1)^n sum_{sigma, sigma'} prod sigma sigma' int dXi dK / (2 pi)^{2dn} I(Xi, K; s).
cplx T_eps_s_integrand(const Graph& g, const TimeLadder& times, const std::vector<double>& s, double eps,
                       const Vec& x1, const Vec& v1, const InitialDatum& f0, const CrossSection& cs);

/// T^eps(t_1..t_n; l) at (x1, v1): the s integrals over [0, (t_j - t_{j+1})/eps]
/// by graded quadrature or importance-sampled Monte Carlo with density
/// proportional to prod (1 + s_j)^-d. n <= 2.
Estimate eval_T_eps_term(const Graph& g, const TimeLadder& times, double eps, const Vec& x1, const Vec& v1,
                         const InitialDatum& f0, const CrossSection& cs, const TepsConfig& cfg = {});

struct DirectConfig {
    int s_nodes = 12;        // Gauss nodes per graded s panel
    double xi_step = 0.25, xi_range = 8.0;
    double k_step = 0.1, k_range = 6.0;
    int phase_points = 48;   // trapezoid points per axis for x2 and v2
    double phase_range = 7.0; // in datum standard deviations
};

/// Brute-force tensor quadrature of the n = 1 term in d = 1 over
/// (s, xi, k, x2, v2), without the Fourier-side reduction. Oracle only.
double direct_T_eps_1d(const TimeLadder& times, double eps, double x1, double v1, const InitialDatum& f0,
                       const CrossSection& cs, const DirectConfig& cfg = {});

// ---------------------------------------------------------------------------
// Bounds and limits

/// int |prod phi_hat(k_j)| |f0_n_hat(-A^T Xi, A^T S K - A^T T Xi)| dXi dK
/// (summed over mixture terms, so an upper bound for mixtures).
double g_integral(const Graph& g, const TimeLadder& times, const std::vector<double>& s, const InitialDatum& f0,
                  const CrossSection& cs);

struct UniformBoundReport {
    std::vector<std::vector<double>> s_points;
    std::vector<double> integrals;  // int g at each s point
    std::vector<double> scaled;     // int g prod (1 + s_j)^d
    double constant = 0.0;          // C = 2^d max(||phi_hat||_1, ||phi_hat||_inf)
    double envelope = 0.0;          // C^n (N1 + N2)^n
    double observed_constant = 0.0; // smallest C consistent with the samples
    double decay_slope = 0.0;       // fit of log int g against log(1 + s), n = 1 only
    bool ok = true;
};

UniformBoundReport uniform_bound_check(const Graph& g, const TimeLadder& times,
                                       const std::vector<std::vector<double>>& s_points, const InitialDatum& f0,
                                       const CrossSection& cs);

struct DeltaCheckRow {
    double T = 0.0;
    double value = 0.0;    // int sin(T a)/a g(a) da by quadrature
    double fourier = 0.0;  // the same through int_0^T g_hat
    double relative_error = 0.0; // |value - pi g(0)| / (pi |g(0)|)
};

struct DeltaCheckReport {
    std::vector<DeltaCheckRow> rows;
    double odd_value = 0.0; // the same integral for an odd test function at the largest T
    bool halving = true;    // error at least halves along each doubling (or sits at round-off)
};

/// int_{-a_max}^{a_max} sin(T a)/a g(a) da for the standard Gaussian density g,
/// which tends to pi g(0) as T grows.
DeltaCheckReport mollified_delta_check(const std::vector<double>& T_ladder, double a_max = 12.0);

struct ConvergenceReport {
    std::vector<double> eps;
    std::vector<Estimate> values;
    Estimate limit;
    std::vector<double> gaps;
    bool decreasing = true;
    bool within_tolerance = true; // final gap below 3 combined stderr
};

/// |T^eps - T| along an eps ladder for a graph of order <= 2.
ConvergenceReport term_convergence_check(const Graph& g, const TimeLadder& times, const std::vector<double>& ladder,
                                         const Vec& x1, const Vec& v1, const InitialDatum& f0, const CrossSection& cs,
                                         const McBudget& limit_budget, const TepsConfig& cfg = {});

} // namespace qk
