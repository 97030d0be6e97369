#include "numlearn/agent.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace numlearn {

const char* ToString(ParamBlock block) {
  switch (block) {
    case ParamBlock::kEmbedding:
      return "embedding";
    case ParamBlock::kInputWeights:
      return "input_weights";
    case ParamBlock::kRecurrentWeights:
      return "recurrent_weights";
    case ParamBlock::kGateBias:
      return "gate_bias";
    case ParamBlock::kHeadWeights:
      return "head_weights";
    case ParamBlock::kHeadBias:
      return "head_bias";
  }
  return "?";
}

AgentParams::AgentParams(std::vector<Symbol> alphabet)
    : alphabet_(std::move(alphabet)) {
  std::sort(alphabet_.begin(), alphabet_.end());
  alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()),
                  alphabet_.end());
  std::size_t total = 0;
  for (ParamBlock b : kAllParamBlocks) total += block_size(b);
  values_.assign(total, 0.0);
}

AgentParams AgentParams::Initialize(std::vector<Symbol> alphabet,
                                    std::mt19937_64& rng) {
  AgentParams params(std::move(alphabet));
  const double k = 1.0 / std::sqrt(static_cast<double>(kHiddenDim));
  std::uniform_real_distribution<double> embed(-1.0, 1.0);
  std::uniform_real_distribution<double> weight(-k, k);
  for (double& v : params.block(ParamBlock::kEmbedding)) v = embed(rng);
  for (ParamBlock b : {ParamBlock::kInputWeights, ParamBlock::kRecurrentWeights,
                       ParamBlock::kGateBias, ParamBlock::kHeadWeights}) {
    for (double& v : params.block(b)) v = weight(rng);
  }
  return params;
}

std::size_t AgentParams::block_size(ParamBlock b) const {
  switch (b) {
    case ParamBlock::kEmbedding:
      return alphabet_.size() * kEmbedDim;
    case ParamBlock::kInputWeights:
      return kGateDim * kEmbedDim;
    case ParamBlock::kRecurrentWeights:
      return kGateDim * kHiddenDim;
    case ParamBlock::kGateBias:
      return kGateDim;
    case ParamBlock::kHeadWeights:
      return kHiddenDim;
    case ParamBlock::kHeadBias:
      return 1;
  }
  return 0;
}

std::size_t AgentParams::block_offset(ParamBlock b) const {
  std::size_t offset = 0;
  for (ParamBlock other : kAllParamBlocks) {
    if (other == b) return offset;
    offset += block_size(other);
  }
  return offset;
}

std::span<double> AgentParams::block(ParamBlock b) {
  return std::span<double>(values_).subspan(block_offset(b), block_size(b));
}

std::span<const double> AgentParams::block(ParamBlock b) const {
  return std::span<const double>(values_).subspan(block_offset(b),
                                                  block_size(b));
}

int AgentParams::IndexOf(Symbol symbol) const {
  auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), symbol);
  if (it == alphabet_.end() || *it != symbol) {
    throw UnknownSymbolError("symbol '" + symbol.ToString() +
                             "' has no embedding");
  }
  return static_cast<int>(it - alphabet_.begin());
}

std::vector<int> AgentParams::Encode(const Numeral& numeral) const {
  std::vector<int> out;
  out.reserve(numeral.length());
  for (const Symbol& s : numeral.symbols()) out.push_back(IndexOf(s));
  return out;
}

double Logistic(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

struct Layout {
  const double* w_in;
  const double* w_rec;
  const double* bias;
  const double* head_w;
  double head_b;

  explicit Layout(const AgentParams& p)
      : w_in(p.block(ParamBlock::kInputWeights).data()),
        w_rec(p.block(ParamBlock::kRecurrentWeights).data()),
        bias(p.block(ParamBlock::kGateBias).data()),
        head_w(p.block(ParamBlock::kHeadWeights).data()),
        head_b(p.block(ParamBlock::kHeadBias)[0]) {}
};

}  // namespace

double ForwardTokens(const AgentParams& params, std::span<const int> tokens,
                     LstmTrace* trace) {
  const Layout L(params);
  std::array<double, kHiddenDim> h{}, c{};
  std::array<double, kGateDim> a;
  if (trace != nullptr) {
    const std::size_t T = tokens.size();
    trace->tokens.assign(tokens.begin(), tokens.end());
    for (auto* v : {&trace->input_gate, &trace->forget_gate, &trace->cell_input,
                    &trace->output_gate, &trace->cell, &trace->cell_tanh,
                    &trace->hidden}) {
      v->resize(T);
    }
  }
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const double* x = params.embedding(tokens[t]);
    for (int r = 0; r < kGateDim; ++r) {
      const double* wi = L.w_in + r * kEmbedDim;
      const double* wr = L.w_rec + r * kHiddenDim;
      double sum = L.bias[r];
      for (int j = 0; j < kEmbedDim; ++j) sum += wi[j] * x[j];
      for (int j = 0; j < kHiddenDim; ++j) sum += wr[j] * h[j];
      a[r] = sum;
    }
    for (int j = 0; j < kHiddenDim; ++j) {
      const double ig = Logistic(a[j]);
      const double fg = Logistic(a[kHiddenDim + j]);
      const double gg = std::tanh(a[2 * kHiddenDim + j]);
      const double og = Logistic(a[3 * kHiddenDim + j]);
      c[j] = fg * c[j] + ig * gg;
      const double tc = std::tanh(c[j]);
      h[j] = og * tc;
      if (trace != nullptr) {
        trace->input_gate[t][j] = ig;
        trace->forget_gate[t][j] = fg;
        trace->cell_input[t][j] = gg;
        trace->output_gate[t][j] = og;
        trace->cell[t][j] = c[j];
        trace->cell_tanh[t][j] = tc;
        trace->hidden[t][j] = h[j];
      }
    }
  }
  double logit = L.head_b;
  for (int j = 0; j < kHiddenDim; ++j) logit += L.head_w[j] * h[j];
  const double mu = Logistic(logit);
  if (trace != nullptr) {
    trace->logit = logit;
    trace->mu = mu;
  }
  return mu;
}

double Forward(const AgentParams& params, const Numeral& numeral) {
  const auto tokens = params.Encode(numeral);
  return ForwardTokens(params, tokens);
}

void BackwardFromLogit(const AgentParams& params, const LstmTrace& trace,
                       double dloss_dlogit, std::span<double> grad) {
  const Layout L(params);
  double* g_emb = grad.data() + params.block_offset(ParamBlock::kEmbedding);
  double* g_in = grad.data() + params.block_offset(ParamBlock::kInputWeights);
  double* g_rec =
      grad.data() + params.block_offset(ParamBlock::kRecurrentWeights);
  double* g_bias = grad.data() + params.block_offset(ParamBlock::kGateBias);
  double* g_head = grad.data() + params.block_offset(ParamBlock::kHeadWeights);
  double* g_head_b = grad.data() + params.block_offset(ParamBlock::kHeadBias);

  const std::size_t T = trace.tokens.size();
  std::array<double, kHiddenDim> dh{}, dc{};
  *g_head_b += dloss_dlogit;
  for (int j = 0; j < kHiddenDim; ++j) {
    const double h_last = T > 0 ? trace.hidden[T - 1][j] : 0.0;
    g_head[j] += dloss_dlogit * h_last;
    dh[j] = dloss_dlogit * L.head_w[j];
  }
  std::array<double, kGateDim> da;
  for (std::size_t step = T; step-- > 0;) {
    const auto& ig = trace.input_gate[step];
    const auto& fg = trace.forget_gate[step];
    const auto& gg = trace.cell_input[step];
    const auto& og = trace.output_gate[step];
    const auto& tc = trace.cell_tanh[step];
    for (int j = 0; j < kHiddenDim; ++j) {
      const double c_prev = step > 0 ? trace.cell[step - 1][j] : 0.0;
      const double d_o = dh[j] * tc[j];
      dc[j] += dh[j] * og[j] * (1.0 - tc[j] * tc[j]);
      const double d_i = dc[j] * gg[j];
      const double d_g = dc[j] * ig[j];
      const double d_f = dc[j] * c_prev;
      da[j] = d_i * ig[j] * (1.0 - ig[j]);
      da[kHiddenDim + j] = d_f * fg[j] * (1.0 - fg[j]);
      da[2 * kHiddenDim + j] = d_g * (1.0 - gg[j] * gg[j]);
      da[3 * kHiddenDim + j] = d_o * og[j] * (1.0 - og[j]);
      dc[j] *= fg[j];
    }
    const int token = trace.tokens[step];
    const double* x = params.embedding(token);
    double* gx = g_emb + token * kEmbedDim;
    std::array<double, kHiddenDim> dh_prev{};
    for (int r = 0; r < kGateDim; ++r) {
      const double d = da[r];
      if (d == 0.0) continue;
      g_bias[r] += d;
      const double* wi = L.w_in + r * kEmbedDim;
      double* gi = g_in + r * kEmbedDim;
      for (int j = 0; j < kEmbedDim; ++j) {
        gi[j] += d * x[j];
        gx[j] += d * wi[j];
      }
      if (step > 0) {
        const auto& h_prev = trace.hidden[step - 1];
        const double* wr = L.w_rec + r * kHiddenDim;
        double* gr = g_rec + r * kHiddenDim;
        for (int j = 0; j < kHiddenDim; ++j) {
          gr[j] += d * h_prev[j];
          dh_prev[j] += d * wr[j];
        }
      }
    }
    dh = dh_prev;
  }
}

double Reward(double prediction, int target, double alpha) {
  const double rounded = std::round(prediction);
  if (!(rounded > 0.0 && rounded < 100.0)) return 0.0;
  return std::exp(-alpha * std::abs(prediction - target));
}

double GaussianLogDensity(double x, double mean, double sigma) {
  const double z = (x - mean) / sigma;
  return -0.5 * z * z - std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
}

PolicyStep MakePolicyStep(double mu, double sigma, double action) {
  return PolicyStep{mu, sigma, action, 100.0 * action,
                    GaussianLogDensity(action, mu, sigma)};
}

}  // namespace numlearn
