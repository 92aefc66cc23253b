#pragma once

#include <vector>

#include "mdc/markov.hpp"
#include "mdc/types.hpp"

namespace mdc {

/// Block-diagonal stochastic complement of P with respect to a clustering,
/// in cluster-block order. perm[pos] is the original index of block position
/// pos; block k occupies rows [block_starts[k], block_starts[k+1]).
struct StochasticComplement {
  MatrixXd S;
  MatrixXd S_infinity;
  std::vector<int> perm;
  std::vector<int> block_starts;
  bool non_primitive = false;  // some block reducible/periodic within 1e-10
};

StochasticComplement stochastic_complement(const MatrixXd& P,
                                           const Clustering& clustering);

struct GeometricConstants {
  double lambda_next = 0.0;  // max over blocks of |second eigenvalue|
  double delta = 0.0;        // ||P - S||_inf
  double kappa = 1.0;        // ||Z||_inf ||Z^-1||_inf, unit-norm columns
  bool kappa_finite = true;  // false when S is defective within tolerance
  bool non_primitive = false;
  double delta_identity_gap = 0.0;  // | delta - 2 max_k ||P_k*||_inf |
};

GeometricConstants geometric_constants(const MatrixXd& P,
                                       const Clustering& clustering);
GeometricConstants geometric_constants(const MatrixXd& P,
                                       const StochasticComplement& sc);

struct EpsilonInterval {
  double epsilon = 0.0;
  double lower = 0.0;  // log(2 kappa / eps) / log(1 / |lambda_next|), 0 when lambda_next = 0
  double upper = 0.0;  // eps / (2 delta), +inf when delta = 0
  bool empty = false;
};

EpsilonInterval epsilon_interval(const GeometricConstants& c, double epsilon);

/// Worst row ratio sqrt(n)||row||_2 / ||row||_1 over P^t - S_infinity
/// (exactly the c_u statistic); zero rows contribute 1. Always in [1, sqrt n].
double gamma_stat(const MatrixXd& Pt, const MatrixXd& S_infinity);
double gamma_t(const MatrixXd& P, const MatrixXd& S_infinity, long long t);

struct SeparationProfile {
  double d_in = 0.0;   // max within-cluster diffusion distance
  double d_btw = 0.0;  // min between-cluster diffusion distance
  double ratio = 0.0;
};

SeparationProfile separation_profile(const MarkovModel& model,
                                     const Clustering& clustering, double t);

/// ratio <= eps / (1/sqrt(n) - eps); requires eps < 1/sqrt(n).
bool epsilon_separable(const SeparationProfile& profile, double epsilon, int n);

struct MeyerRecord {
  double t = 0.0;
  double lhs = 0.0;  // ||P^t - S_infinity||_inf
  double rhs = 0.0;  // delta t + kappa |lambda_next|^t
  bool holds = false;
};

std::vector<MeyerRecord> verify_meyer(const MarkovModel& model,
                                      const Clustering& clustering,
                                      const std::vector<long long>& times);

struct BoundsRecord {
  double t = 0.0;
  double d_in = 0.0;
  double d_btw = 0.0;
  double in_upper = 0.0;   // (2 gamma / sqrt(n pi_min))(delta t + kappa |lambda|^t)
  double btw_lower = 0.0;  // sqrt(2) min_w ||s_inf(w,:)||_{l2(1/pi)} - the same term
  double gamma = 1.0;
  double min_row_norm = 0.0;  // min_w ||s_inf(w,:)||_{l2(1/pi)}
};

BoundsRecord diffusion_bounds(const MarkovModel& model,
                              const Clustering& clustering, long long t);

enum class StabilityOrder { more_stable, less_stable, equal, incomparable };

/// Interval-length comparison of Def-style stability; empty intervals are
/// incomparable.
StabilityOrder stability_compare(const GeometricConstants& a,
                                 const GeometricConstants& b, double epsilon);

/// max_ij |(P^t)_ij - pi_j| / pi_j.
double relative_pointwise_distance(const MarkovModel& model, long long t);

/// Integer matrix power by repeated squaring.
MatrixXd matrix_power(const MatrixXd& A, long long t);

}  // namespace mdc
