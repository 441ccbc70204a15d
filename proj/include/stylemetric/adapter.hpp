#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stylemetric/style_checks.hpp"

namespace stylemetric::adapter {

using Vec = std::vector<double>;

/// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Vec data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  Vec row(std::size_t i) const { return Vec(data.begin() + i * cols, data.begin() + (i + 1) * cols); }

  Vec mul(const Vec& x) const;    // M x
  Vec mul_t(const Vec& y) const;  // M^T y
  void add_outer(const Vec& y, const Vec& x);  // M += y x^T

  static Matrix identity(std::size_t n);
  static Matrix gaussian(std::size_t r, std::size_t c, double scale, std::uint64_t seed);
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Trainable adapter weights. G is the gate width, H by default.
struct AdapterParams {
  std::size_t H = 0, V = 0, G = 0;
  Matrix W_h, W_c, W_s, W_g, W_k, W_r;
  Vec b_h, b_c, b_s, b_g, b_k, b_r;

  static AdapterParams zeros(std::size_t H, std::size_t V, std::size_t G = 0);
  static AdapterParams gaussian(std::size_t H, std::size_t V, std::uint64_t seed, double scale = 0.5,
                                std::size_t G = 0);
  /// Throws DimensionError or std::domain_error on non-finite entries.
  void validate() const;
  /// Every weight and bias, in a fixed order.
  std::vector<Vec*> blocks();
  std::vector<const Vec*> blocks() const;
};

struct UserStyleState {
  std::string user_id;
  Matrix p;            // m x H implicit features
  AttributeSet attrs;  // A_u
  Matrix a;            // |A_u| x H, rows in attribute order
  void validate(std::size_t H) const;
};

/// Frozen seeded decoder: h_t = tanh(W_in x_t + W_ctx mean(p) + b) over the
/// sequence x = [p_u; e].
struct DecoderWeights {
  Matrix W_in, W_ctx;
  Vec b;
  static DecoderWeights zeros(std::size_t H);
  static DecoderWeights seeded(std::size_t H, std::uint64_t seed);
};

std::vector<Vec> decode(const DecoderWeights& w, const Matrix& token_embeddings, const Matrix& p_u);
std::vector<Vec> toy_decoder(const Matrix& token_embeddings, const Matrix& p_u, std::uint64_t seed);

Vec softmax(const Vec& logits);
Vec style_hidden(const AdapterParams& params, const Vec& h);
Vec style_distribution(const AdapterParams& params, const Vec& s);
Vec gate(const AdapterParams& params, const Vec& p_s, const Vec& h);
/// g * P_s + (1 - g) * P_o, divided by its sum when `renormalize`. An all-zero
/// or all-one gate returns P_o or P_s unchanged.
Vec merge_distributions(const Vec& g, const Vec& p_s, const Vec& p_o, bool renormalize = true);

Vec global_style_feature(const UserStyleState& state);
Vec global_style_hidden(const std::vector<Vec>& s);

double cosine(const Vec& a, const Vec& b);

/// InfoNCE over a precomputed correlation matrix corr[u][v].
double contrastive_from_correlations(const std::vector<Vec>& corr, double tau = 0.5, bool include_positive = true);
double contrastive_loss(const std::vector<Vec>& anchors, const std::vector<Vec>& hidden, double tau = 0.5,
                        bool include_positive = true);

struct ContrastiveGrad {
  double loss = 0;
  std::vector<Vec> d_anchors;
  std::vector<Vec> d_hidden;
};
ContrastiveGrad contrastive_loss_grad(const std::vector<Vec>& anchors, const std::vector<Vec>& hidden,
                                      double tau = 0.5, bool include_positive = true);

double nll_loss(const std::vector<Vec>& distributions, const std::vector<int>& targets);
inline double total_loss(double l_imp, double l_cl, double alpha = 0.55) { return l_imp + alpha * l_cl; }

// ---- end-to-end toy model ----

struct Model {
  AdapterParams adapter;
  DecoderWeights decoder;  // frozen
  Matrix embed;            // V x H, frozen
  Matrix W_o;              // V x H, frozen generic head
  Vec b_o;
};

struct UserBatch {
  UserStyleState state;
  std::vector<int> tokens;   // n input tokens
  std::vector<int> targets;  // n next-token targets
};

struct LossOptions {
  double tau = 0.5;
  double alpha = 0.55;
  bool include_positive = true;
  bool renormalize = true;
};

struct LossTerms {
  double l_imp = 0;
  double l_cl = 0;
  double total = 0;
};

struct Gradients {
  AdapterParams adapter;
  std::vector<Matrix> p;
  std::vector<Matrix> a;
};

struct StepTrace {
  Vec p_s;
  Vec g;
  Vec p;
  int target = 0;
};

LossTerms evaluate_loss(const Model& model, const std::vector<UserBatch>& users, const LossOptions& opts);
LossTerms loss_and_gradients(const Model& model, const std::vector<UserBatch>& users, const LossOptions& opts,
                             Gradients& grads);
/// Per user, the code-position steps of the forward pass.
std::vector<std::vector<StepTrace>> trace(const Model& model, const std::vector<UserBatch>& users,
                                          const LossOptions& opts);

/// Trainable values as one vector: adapter blocks, then each user's p and a.
Vec flatten(const AdapterParams& adapter, const std::vector<Matrix>& p, const std::vector<Matrix>& a);
Vec flatten(const Model& model, const std::vector<UserBatch>& users);
Vec flatten(const Gradients& grads);
void unflatten(const Vec& x, Model& model, std::vector<UserBatch>& users);

struct GradCheckResult {
  double max_rel_error = 0;
  std::size_t worst_index = 0;
  std::size_t parameters = 0;
  int nudged = 0;  // gate units moved away from a ReLU kink
};

using Objective = std::function<double(const Vec&)>;

/// max_i |analytic_i - fd_i| / max(1, |fd_i|) with central differences.
/// Perturbations run in parallel; the serial version is the reference.
/// Throws std::domain_error on a non-finite loss.
GradCheckResult grad_check(const Objective& f, const Vec& analytic, const Vec& x, double step = 1e-5, int jobs = 0);
GradCheckResult grad_check_serial(const Objective& f, const Vec& analytic, const Vec& x, double step = 1e-5);

/// Shifts b_g so that no gate pre-activation lies within `margin` of zero;
/// returns the number of units moved.
int nudge_relu_kinks(Model& model, const std::vector<UserBatch>& users, double margin = 1e-3);

/// Nudges kinks, then checks the total loss gradient at the model's point.
GradCheckResult grad_check_model(Model& model, std::vector<UserBatch>& users, const LossOptions& opts,
                                 double step = 1e-5, int jobs = 0);

struct ScenarioOptions {
  std::size_t H = 8;
  std::size_t V = 16;
  std::size_t m = 5;
  std::size_t users = 3;
  std::size_t tokens = 6;
  double scale = 0.5;
};

/// Random toy model and user batch, fully determined by the seed.
struct Scenario {
  Model model;
  std::vector<UserBatch> users;
};
Scenario make_scenario(const ScenarioOptions& opts, std::uint64_t seed);

}  // namespace stylemetric::adapter
