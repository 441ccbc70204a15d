#include "stylemetric/adapter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stylemetric/random.hpp"

namespace stylemetric::adapter {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DimensionError(what);
}

void axpy(double alpha, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vec add(Vec a, const Vec& b) {
  axpy(1.0, b, a);
  return a;
}

double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Vec mean_rows(const Matrix& m) {
  Vec out(m.cols, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) out[j] += m(i, j);
  }
  for (double& v : out) v /= static_cast<double>(m.rows);
  return out;
}

// Softmax backward: dlogits = p * (dp - <dp, p>).
Vec softmax_backward(const Vec& p, const Vec& dp) {
  const double inner = dot(dp, p);
  Vec out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] * (dp[i] - inner);
  return out;
}

struct StepCache {
  Vec p_s, z, w, g, p_o, raw;
  double sum = 0;
  int target = 0;
};

struct UserCache {
  Vec ctx;
  std::vector<Vec> x, h, u, s;
  Vec s_hat, p_hat;
  std::vector<StepCache> steps;
};

UserCache forward_user(const Model& model, const UserBatch& user) {
  const auto& ap = model.adapter;
  const std::size_t m = user.state.p.rows;
  const std::size_t n = user.tokens.size();
  require(user.targets.size() == n, "targets and tokens differ in length");
  UserCache c;
  c.ctx = mean_rows(user.state.p);
  for (std::size_t t = 0; t < m + n; ++t) {
    if (t < m) {
      c.x.push_back(user.state.p.row(t));
    } else {
      const int tok = user.tokens[t - m];
      require(tok >= 0 && static_cast<std::size_t>(tok) < model.embed.rows, "token out of range");
      c.x.push_back(model.embed.row(static_cast<std::size_t>(tok)));
    }
    Vec pre = add(add(model.decoder.W_in.mul(c.x.back()), model.decoder.W_ctx.mul(c.ctx)), model.decoder.b);
    for (double& v : pre) v = std::tanh(v);
    c.h.push_back(std::move(pre));
    c.u.push_back(add(ap.W_h.mul(c.h.back()), ap.b_h));
    c.s.push_back(add(ap.W_c.mul(c.u.back()), ap.b_c));
  }
  c.s_hat = global_style_hidden(c.s);
  c.p_hat = global_style_feature(user.state);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t t = m + k;
    StepCache sc;
    sc.target = user.targets[k];
    require(sc.target >= 0 && static_cast<std::size_t>(sc.target) < ap.V, "target out of range");
    sc.p_s = style_distribution(ap, c.s[t]);
    sc.z = add(ap.W_g.mul(sc.p_s), ap.b_g);
    Vec sp = sc.z;
    for (double& v : sp) v = std::max(v, 0.0);
    sc.w = add(sp, add(ap.W_k.mul(c.h[t]), ap.b_k));
    sc.g = add(ap.W_r.mul(sc.w), ap.b_r);
    for (double& v : sc.g) v = sigmoid(v);
    sc.p_o = softmax(add(model.W_o.mul(c.h[t]), model.b_o));
    sc.raw = merge_distributions(sc.g, sc.p_s, sc.p_o, false);
    sc.sum = 0;
    for (const double v : sc.raw) sc.sum += v;
    c.steps.push_back(std::move(sc));
  }
  return c;
}

double step_nll(const StepCache& sc, bool renormalize) {
  const auto y = static_cast<std::size_t>(sc.target);
  const double py = renormalize ? sc.raw[y] / sc.sum : sc.raw[y];
  return -std::log(py);
}

}  // namespace

// ---- Matrix ----

Vec Matrix::mul(const Vec& x) const {
  require(x.size() == cols, "matrix-vector dimension mismatch");
  Vec y(rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < cols; ++j) s += data[i * cols + j] * x[j];
    y[i] = s;
  }
  return y;
}

Vec Matrix::mul_t(const Vec& y) const {
  require(y.size() == rows, "matrix-vector dimension mismatch");
  Vec x(cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) x[j] += data[i * cols + j] * y[i];
  }
  return x;
}

void Matrix::add_outer(const Vec& y, const Vec& x) {
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) data[i * cols + j] += y[i] * x[j];
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::gaussian(std::size_t r, std::size_t c, double scale, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(r, c);
  for (double& v : m.data) v = scale * rng.normal();
  return m;
}

// ---- parameters ----

AdapterParams AdapterParams::zeros(std::size_t H, std::size_t V, std::size_t G) {
  if (G == 0) G = H;
  AdapterParams p;
  p.H = H;
  p.V = V;
  p.G = G;
  p.W_h = Matrix(H, H);
  p.W_c = Matrix(H, H);
  p.W_s = Matrix(V, H);
  p.W_g = Matrix(G, V);
  p.W_k = Matrix(G, H);
  p.W_r = Matrix(V, G);
  p.b_h = Vec(H, 0.0);
  p.b_c = Vec(H, 0.0);
  p.b_s = Vec(V, 0.0);
  p.b_g = Vec(G, 0.0);
  p.b_k = Vec(G, 0.0);
  p.b_r = Vec(V, 0.0);
  return p;
}

AdapterParams AdapterParams::gaussian(std::size_t H, std::size_t V, std::uint64_t seed, double scale, std::size_t G) {
  AdapterParams p = zeros(H, V, G);
  Rng rng(seed);
  for (Vec* b : p.blocks()) {
    for (double& v : *b) v = scale * rng.normal();
  }
  return p;
}

std::vector<Vec*> AdapterParams::blocks() {
  return {&W_h.data, &b_h, &W_c.data, &b_c, &W_s.data, &b_s, &W_g.data, &b_g, &W_k.data, &b_k, &W_r.data, &b_r};
}

std::vector<const Vec*> AdapterParams::blocks() const {
  return {&W_h.data, &b_h, &W_c.data, &b_c, &W_s.data, &b_s, &W_g.data, &b_g, &W_k.data, &b_k, &W_r.data, &b_r};
}

void AdapterParams::validate() const {
  auto shape = [](const Matrix& m, std::size_t r, std::size_t c) {
    return m.rows == r && m.cols == c && m.data.size() == r * c;
  };
  require(shape(W_h, H, H) && shape(W_c, H, H) && shape(W_s, V, H) && shape(W_g, G, V) && shape(W_k, G, H) &&
              shape(W_r, V, G),
          "adapter weight shapes inconsistent");
  require(b_h.size() == H && b_c.size() == H && b_s.size() == V && b_g.size() == G && b_k.size() == G &&
              b_r.size() == V,
          "adapter bias shapes inconsistent");
  for (const Vec* b : blocks()) {
    for (const double v : *b) {
      if (!std::isfinite(v)) throw std::domain_error("adapter parameter is not finite");
    }
  }
}

void UserStyleState::validate(std::size_t H) const {
  require(p.rows >= 1, "m must be at least 1");
  require(p.cols == H, "implicit feature width differs from H");
  require(a.rows == static_cast<std::size_t>(attrs.size()), "one embedding per attribute required");
  require(a.rows == 0 || a.cols == H, "attribute embedding width differs from H");
}

DecoderWeights DecoderWeights::zeros(std::size_t H) { return {Matrix(H, H), Matrix(H, H), Vec(H, 0.0)}; }

DecoderWeights DecoderWeights::seeded(std::size_t H, std::uint64_t seed) {
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(H));
  DecoderWeights w = zeros(H);
  for (double& v : w.W_in.data) v = scale * rng.normal();
  for (double& v : w.W_ctx.data) v = scale * rng.normal();
  for (double& v : w.b) v = 0.1 * rng.normal();
  return w;
}

// ---- single operations ----

std::vector<Vec> decode(const DecoderWeights& w, const Matrix& e, const Matrix& p) {
  const std::size_t H = w.b.size();
  require(p.rows >= 1 && p.cols == H, "p_u must be m x H with m >= 1");
  require(e.rows == 0 || e.cols == H, "token embeddings must be n x H");
  require(w.W_in.rows == H && w.W_in.cols == H && w.W_ctx.rows == H && w.W_ctx.cols == H,
          "decoder weights must be H x H");
  const Vec ctx = w.W_ctx.mul(mean_rows(p));
  std::vector<Vec> h;
  h.reserve(p.rows + e.rows);
  for (std::size_t t = 0; t < p.rows + e.rows; ++t) {
    const Vec x = t < p.rows ? p.row(t) : e.row(t - p.rows);
    Vec pre = add(add(w.W_in.mul(x), ctx), w.b);
    for (double& v : pre) v = std::tanh(v);
    h.push_back(std::move(pre));
  }
  return h;
}

std::vector<Vec> toy_decoder(const Matrix& e, const Matrix& p, std::uint64_t seed) {
  return decode(DecoderWeights::seeded(p.cols, seed), e, p);
}

Vec softmax(const Vec& logits) {
  if (logits.empty()) return {};
  const double mx = *std::max_element(logits.begin(), logits.end());
  Vec out(logits.size());
  double sum = 0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - mx);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

Vec style_hidden(const AdapterParams& params, const Vec& h) {
  return add(params.W_c.mul(add(params.W_h.mul(h), params.b_h)), params.b_c);
}

Vec style_distribution(const AdapterParams& params, const Vec& s) {
  return softmax(add(params.W_s.mul(s), params.b_s));
}

Vec gate(const AdapterParams& params, const Vec& p_s, const Vec& h) {
  Vec sp = add(params.W_g.mul(p_s), params.b_g);
  for (double& v : sp) v = std::max(v, 0.0);
  Vec g = add(params.W_r.mul(add(sp, add(params.W_k.mul(h), params.b_k))), params.b_r);
  for (double& v : g) v = sigmoid(v);
  return g;
}

Vec merge_distributions(const Vec& g, const Vec& p_s, const Vec& p_o, bool renormalize) {
  require(g.size() == p_s.size() && p_s.size() == p_o.size(), "merge inputs differ in length");
  Vec out(g.size());
  double sum = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    out[i] = g[i] * p_s[i] + (1.0 - g[i]) * p_o[i];
    sum += out[i];
  }
  if (!(sum > 0)) throw std::domain_error("merged distribution has zero mass");
  if (!renormalize) return out;
  if (std::all_of(g.begin(), g.end(), [](double v) { return v == 0.0; })) return p_o;
  if (std::all_of(g.begin(), g.end(), [](double v) { return v == 1.0; })) return p_s;
  for (double& v : out) v /= sum;
  return out;
}

Vec global_style_feature(const UserStyleState& state) {
  if (state.attrs.empty() || state.a.rows == 0) throw std::invalid_argument("A_u is empty");
  if (state.p.rows == 0) throw std::invalid_argument("p_u is empty");
  require(state.a.cols == state.p.cols, "attribute and implicit feature widths differ");
  return add(mean_rows(state.p), mean_rows(state.a));
}

Vec global_style_hidden(const std::vector<Vec>& s) {
  if (s.empty()) throw std::invalid_argument("empty hidden-state sequence");
  Vec out(s.front().size(), 0.0);
  for (const Vec& v : s) {
    require(v.size() == out.size(), "hidden states differ in width");
    axpy(1.0, v, out);
  }
  for (double& v : out) v /= static_cast<double>(s.size());
  return out;
}

double cosine(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "cosine inputs differ in length");
  const double na = norm(a), nb = norm(b);
  if (na == 0 || nb == 0) throw std::domain_error("cosine of a zero-norm vector");
  return dot(a, b) / (na * nb);
}

namespace {

// Row-wise softmax weights of corr/tau over the denominator set, and the loss.
double infonce(const std::vector<Vec>& corr, double tau, bool include_positive, std::vector<Vec>* weights) {
  const std::size_t K = corr.size();
  if (K < 2) throw std::invalid_argument("contrastive loss needs at least two users");
  if (!(tau > 0)) throw std::invalid_argument("tau must be positive");
  double loss = 0;
  if (weights) weights->assign(K, Vec(K, 0.0));
  for (std::size_t u = 0; u < K; ++u) {
    require(corr[u].size() == K, "correlation matrix must be square");
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < K; ++v) {
      if (v != u || include_positive) mx = std::max(mx, corr[u][v] / tau);
    }
    double sum = 0;
    for (std::size_t v = 0; v < K; ++v) {
      if (v != u || include_positive) sum += std::exp(corr[u][v] / tau - mx);
    }
    loss += -(corr[u][u] / tau - mx - std::log(sum));
    if (weights) {
      for (std::size_t v = 0; v < K; ++v) {
        if (v != u || include_positive) (*weights)[u][v] = std::exp(corr[u][v] / tau - mx) / sum;
      }
    }
  }
  return loss / static_cast<double>(K);
}

}  // namespace

double contrastive_from_correlations(const std::vector<Vec>& corr, double tau, bool include_positive) {
  return infonce(corr, tau, include_positive, nullptr);
}

double contrastive_loss(const std::vector<Vec>& anchors, const std::vector<Vec>& hidden, double tau,
                        bool include_positive) {
  return contrastive_loss_grad(anchors, hidden, tau, include_positive).loss;
}

ContrastiveGrad contrastive_loss_grad(const std::vector<Vec>& anchors, const std::vector<Vec>& hidden, double tau,
                                      bool include_positive) {
  require(anchors.size() == hidden.size(), "anchor and hidden counts differ");
  const std::size_t K = anchors.size();
  std::vector<Vec> corr(K, Vec(K));
  for (std::size_t u = 0; u < K; ++u) {
    for (std::size_t v = 0; v < K; ++v) corr[u][v] = cosine(anchors[u], hidden[v]);
  }
  std::vector<Vec> w;
  ContrastiveGrad out;
  out.loss = infonce(corr, tau, include_positive, &w);
  out.d_anchors.assign(K, Vec(anchors[0].size(), 0.0));
  out.d_hidden.assign(K, Vec(hidden[0].size(), 0.0));
  const double scale = 1.0 / (tau * static_cast<double>(K));
  for (std::size_t u = 0; u < K; ++u) {
    const double na = norm(anchors[u]);
    for (std::size_t v = 0; v < K; ++v) {
      const double dc = scale * (w[u][v] - (u == v ? 1.0 : 0.0));
      if (dc == 0) continue;
      const double nb = norm(hidden[v]);
      // d cos / d a = b / (|a||b|) - cos a / |a|^2, symmetric for b.
      for (std::size_t i = 0; i < anchors[u].size(); ++i) {
        out.d_anchors[u][i] += dc * (hidden[v][i] / (na * nb) - corr[u][v] * anchors[u][i] / (na * na));
        out.d_hidden[v][i] += dc * (anchors[u][i] / (na * nb) - corr[u][v] * hidden[v][i] / (nb * nb));
      }
    }
  }
  return out;
}

double nll_loss(const std::vector<Vec>& distributions, const std::vector<int>& targets) {
  if (distributions.size() != targets.size()) throw std::invalid_argument("distributions and targets differ in length");
  double loss = 0;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    if (targets[t] < 0 || static_cast<std::size_t>(targets[t]) >= distributions[t].size()) {
      throw std::out_of_range("target index out of range");
    }
    loss -= std::log(distributions[t][static_cast<std::size_t>(targets[t])]);
  }
  return loss;
}

// ---- end-to-end model ----

LossTerms evaluate_loss(const Model& model, const std::vector<UserBatch>& users, const LossOptions& opts) {
  LossTerms out;
  std::vector<Vec> anchors, hidden;
  for (const auto& user : users) {
    const UserCache c = forward_user(model, user);
    for (const auto& sc : c.steps) out.l_imp += step_nll(sc, opts.renormalize);
    anchors.push_back(c.p_hat);
    hidden.push_back(c.s_hat);
  }
  out.l_cl = contrastive_loss(anchors, hidden, opts.tau, opts.include_positive);
  out.total = total_loss(out.l_imp, out.l_cl, opts.alpha);
  if (!std::isfinite(out.total)) throw std::domain_error("loss is not finite");
  return out;
}

std::vector<std::vector<StepTrace>> trace(const Model& model, const std::vector<UserBatch>& users,
                                          const LossOptions& opts) {
  std::vector<std::vector<StepTrace>> out;
  for (const auto& user : users) {
    const UserCache c = forward_user(model, user);
    auto& steps = out.emplace_back();
    for (const auto& sc : c.steps) {
      Vec p = sc.raw;
      if (opts.renormalize) {
        for (double& v : p) v /= sc.sum;
      }
      steps.push_back({sc.p_s, sc.g, std::move(p), sc.target});
    }
  }
  return out;
}

LossTerms loss_and_gradients(const Model& model, const std::vector<UserBatch>& users, const LossOptions& opts,
                             Gradients& grads) {
  const auto& ap = model.adapter;
  ap.validate();
  const std::size_t H = ap.H;
  std::vector<UserCache> caches;
  LossTerms out;
  std::vector<Vec> anchors, hidden;
  for (const auto& user : users) {
    user.state.validate(H);
    caches.push_back(forward_user(model, user));
    for (const auto& sc : caches.back().steps) out.l_imp += step_nll(sc, opts.renormalize);
    anchors.push_back(caches.back().p_hat);
    hidden.push_back(caches.back().s_hat);
  }
  const ContrastiveGrad cg = contrastive_loss_grad(anchors, hidden, opts.tau, opts.include_positive);
  out.l_cl = cg.loss;
  out.total = total_loss(out.l_imp, out.l_cl, opts.alpha);
  if (!std::isfinite(out.total)) throw std::domain_error("loss is not finite");

  grads.adapter = AdapterParams::zeros(ap.H, ap.V, ap.G);
  grads.p.clear();
  grads.a.clear();
  auto& ga = grads.adapter;

  for (std::size_t ui = 0; ui < users.size(); ++ui) {
    const auto& user = users[ui];
    const UserCache& c = caches[ui];
    const std::size_t m = user.state.p.rows;
    const std::size_t T = c.h.size();
    std::vector<Vec> dh(T, Vec(H, 0.0));
    std::vector<Vec> ds(T, Vec(H, 0.0));
    for (std::size_t t = 0; t < T; ++t) axpy(opts.alpha / static_cast<double>(T), cg.d_hidden[ui], ds[t]);

    for (std::size_t k = 0; k < c.steps.size(); ++k) {
      const StepCache& sc = c.steps[k];
      const std::size_t t = m + k;
      const auto y = static_cast<std::size_t>(sc.target);
      const std::size_t V = ap.V;
      Vec r(V, opts.renormalize ? 1.0 / sc.sum : 0.0);
      r[y] -= 1.0 / sc.raw[y];

      Vec dq(V), dps(V), dpo(V);
      for (std::size_t j = 0; j < V; ++j) {
        const double dg = r[j] * (sc.p_s[j] - sc.p_o[j]);
        dq[j] = dg * sc.g[j] * (1.0 - sc.g[j]);
        dps[j] = r[j] * sc.g[j];
        dpo[j] = r[j] * (1.0 - sc.g[j]);
      }
      ga.W_r.add_outer(dq, sc.w);
      axpy(1.0, dq, ga.b_r);
      const Vec dw = ap.W_r.mul_t(dq);

      Vec dz = dw;
      for (std::size_t j = 0; j < dz.size(); ++j) {
        if (!(sc.z[j] > 0)) dz[j] = 0;
      }
      ga.W_g.add_outer(dz, sc.p_s);
      axpy(1.0, dz, ga.b_g);
      axpy(1.0, ap.W_g.mul_t(dz), dps);

      ga.W_k.add_outer(dw, c.h[t]);
      axpy(1.0, dw, ga.b_k);
      axpy(1.0, ap.W_k.mul_t(dw), dh[t]);

      const Vec dls = softmax_backward(sc.p_s, dps);
      ga.W_s.add_outer(dls, c.s[t]);
      axpy(1.0, dls, ga.b_s);
      axpy(1.0, ap.W_s.mul_t(dls), ds[t]);

      const Vec dlo = softmax_backward(sc.p_o, dpo);
      axpy(1.0, model.W_o.mul_t(dlo), dh[t]);
    }

    Matrix dp(m, H);
    Vec dctx(H, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
      ga.W_c.add_outer(ds[t], c.u[t]);
      axpy(1.0, ds[t], ga.b_c);
      const Vec du = ap.W_c.mul_t(ds[t]);
      ga.W_h.add_outer(du, c.h[t]);
      axpy(1.0, du, ga.b_h);
      axpy(1.0, ap.W_h.mul_t(du), dh[t]);

      Vec dpre(H);
      for (std::size_t i = 0; i < H; ++i) dpre[i] = dh[t][i] * (1.0 - c.h[t][i] * c.h[t][i]);
      if (t < m) {
        const Vec dx = model.decoder.W_in.mul_t(dpre);
        for (std::size_t i = 0; i < H; ++i) dp(t, i) += dx[i];
      }
      axpy(1.0, model.decoder.W_ctx.mul_t(dpre), dctx);
    }

    const Vec& dphat = cg.d_anchors[ui];
    const std::size_t kattr = user.state.a.rows;
    Matrix da(kattr, H);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < H; ++j) {
        dp(i, j) += dctx[j] / static_cast<double>(m) + opts.alpha * dphat[j] / static_cast<double>(m);
      }
    }
    for (std::size_t i = 0; i < kattr; ++i) {
      for (std::size_t j = 0; j < H; ++j) da(i, j) = opts.alpha * dphat[j] / static_cast<double>(kattr);
    }
    grads.p.push_back(std::move(dp));
    grads.a.push_back(std::move(da));
  }
  return out;
}

// ---- flattening ----

Vec flatten(const AdapterParams& adapter, const std::vector<Matrix>& p, const std::vector<Matrix>& a) {
  Vec out;
  for (const Vec* b : adapter.blocks()) out.insert(out.end(), b->begin(), b->end());
  for (const auto& m : p) out.insert(out.end(), m.data.begin(), m.data.end());
  for (const auto& m : a) out.insert(out.end(), m.data.begin(), m.data.end());
  return out;
}

Vec flatten(const Model& model, const std::vector<UserBatch>& users) {
  std::vector<Matrix> p, a;
  for (const auto& u : users) {
    p.push_back(u.state.p);
    a.push_back(u.state.a);
  }
  return flatten(model.adapter, p, a);
}

Vec flatten(const Gradients& grads) { return flatten(grads.adapter, grads.p, grads.a); }

void unflatten(const Vec& x, Model& model, std::vector<UserBatch>& users) {
  std::size_t pos = 0;
  auto take = [&](Vec& dst) {
    require(pos + dst.size() <= x.size(), "flat vector too short");
    std::copy(x.begin() + static_cast<std::ptrdiff_t>(pos), x.begin() + static_cast<std::ptrdiff_t>(pos + dst.size()),
              dst.begin());
    pos += dst.size();
  };
  for (Vec* b : model.adapter.blocks()) take(*b);
  for (auto& u : users) take(u.state.p.data);
  for (auto& u : users) take(u.state.a.data);
  require(pos == x.size(), "flat vector length mismatch");
}

// ---- gradient checking ----

namespace {

double central_difference(const Objective& f, Vec& x, std::size_t i, double step) {
  const double keep = x[i];
  x[i] = keep + step;
  const double up = f(x);
  x[i] = keep - step;
  const double down = f(x);
  x[i] = keep;
  if (!std::isfinite(up) || !std::isfinite(down)) throw std::domain_error("loss is not finite");
  return (up - down) / (2.0 * step);
}

void fold(GradCheckResult& acc, double err, std::size_t i) {
  if (err > acc.max_rel_error || (err == acc.max_rel_error && i < acc.worst_index)) {
    acc.max_rel_error = err;
    acc.worst_index = i;
  }
}

}  // namespace

GradCheckResult grad_check_serial(const Objective& f, const Vec& analytic, const Vec& x, double step) {
  if (analytic.size() != x.size()) throw std::invalid_argument("gradient and point differ in length");
  if (!std::isfinite(f(x))) throw std::domain_error("loss is not finite");
  GradCheckResult out;
  out.parameters = x.size();
  Vec work = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double fd = central_difference(f, work, i, step);
    fold(out, std::abs(analytic[i] - fd) / std::max(1.0, std::abs(fd)), i);
  }
  return out;
}

GradCheckResult grad_check(const Objective& f, const Vec& analytic, const Vec& x, double step, int jobs) {
  if (analytic.size() != x.size()) throw std::invalid_argument("gradient and point differ in length");
  if (!std::isfinite(f(x))) throw std::domain_error("loss is not finite");
  if (jobs <= 0) jobs = 1;
  Vec err(x.size(), 0.0);
  const auto n = static_cast<std::int64_t>(x.size());
  bool failed = false;
#pragma omp parallel num_threads(jobs)
  {
    Vec work = x;
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      try {
        const double fd = central_difference(f, work, k, step);
        err[k] = std::abs(analytic[k] - fd) / std::max(1.0, std::abs(fd));
      } catch (const std::domain_error&) {
#pragma omp atomic write
        failed = true;
      }
    }
  }
  if (failed) throw std::domain_error("loss is not finite");
  GradCheckResult out;
  out.parameters = x.size();
  for (std::size_t i = 0; i < err.size(); ++i) fold(out, err[i], i);
  return out;
}

int nudge_relu_kinks(Model& model, const std::vector<UserBatch>& users, double margin) {
  std::vector<Vec> zs;
  for (const auto& user : users) {
    for (auto& sc : forward_user(model, user).steps) zs.push_back(std::move(sc.z));
  }
  int moved = 0;
  for (std::size_t j = 0; j < model.adapter.G; ++j) {
    auto clear = [&](double shift) {
      return std::all_of(zs.begin(), zs.end(), [&](const Vec& z) { return std::abs(z[j] + shift) >= margin; });
    };
    if (clear(0.0)) continue;
    for (int k = 1; k <= 10000; ++k) {
      const double shift = (k % 2 ? 1.0 : -1.0) * margin * ((k + 1) / 2);
      if (clear(shift)) {
        model.adapter.b_g[j] += shift;
        ++moved;
        break;
      }
    }
  }
  return moved;
}

GradCheckResult grad_check_model(Model& model, std::vector<UserBatch>& users, const LossOptions& opts, double step,
                                 int jobs) {
  const int moved = nudge_relu_kinks(model, users);
  Gradients grads;
  loss_and_gradients(model, users, opts, grads);
  const Vec x = flatten(model, users);
  const Model base_model = model;
  const std::vector<UserBatch> base_users = users;
  Objective f = [&](const Vec& v) {
    Model mm = base_model;
    std::vector<UserBatch> uu = base_users;
    unflatten(v, mm, uu);
    return evaluate_loss(mm, uu, opts).total;
  };
  GradCheckResult out = jobs == 1 ? grad_check_serial(f, flatten(grads), x, step)
                                  : grad_check(f, flatten(grads), x, step, jobs);
  out.nudged = moved;
  return out;
}

Scenario make_scenario(const ScenarioOptions& o, std::uint64_t seed) {
  Rng rng(seed);
  Scenario sc;
  sc.model.adapter = AdapterParams::gaussian(o.H, o.V, rng.next(), o.scale);
  sc.model.decoder = DecoderWeights::seeded(o.H, rng.next());
  sc.model.embed = Matrix::gaussian(o.V, o.H, 1.0, rng.next());
  sc.model.W_o = Matrix::gaussian(o.V, o.H, 1.0, rng.next());
  sc.model.b_o = Matrix::gaussian(1, o.V, 0.1, rng.next()).data;
  for (std::size_t u = 0; u < o.users; ++u) {
    UserBatch b;
    b.state.user_id = "u" + std::to_string(u);
    b.state.p = Matrix::gaussian(o.m, o.H, o.scale, rng.next());
    const std::size_t k = 1 + rng.below(3);
    while (static_cast<std::size_t>(b.state.attrs.size()) < k) {
      b.state.attrs.insert(static_cast<Attribute>(rng.below(kAttributeCount)));
    }
    b.state.a = Matrix::gaussian(k, o.H, o.scale, rng.next());
    for (std::size_t t = 0; t <= o.tokens; ++t) b.tokens.push_back(static_cast<int>(rng.below(o.V)));
    b.targets.assign(b.tokens.begin() + 1, b.tokens.end());
    b.tokens.pop_back();
    sc.users.push_back(std::move(b));
  }
  return sc;
}

}  // namespace stylemetric::adapter
