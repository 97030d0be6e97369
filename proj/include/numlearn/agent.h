#ifndef NUMLEARN_AGENT_H_
#define NUMLEARN_AGENT_H_

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "numlearn/numeral.h"

namespace numlearn {

inline constexpr int kEmbedDim = 5;
inline constexpr int kHiddenDim = 10;
inline constexpr int kGateDim = 4 * kHiddenDim;  // input, forget, cell, output

enum class ParamBlock {
  kEmbedding,         // vocab x kEmbedDim
  kInputWeights,      // kGateDim x kEmbedDim
  kRecurrentWeights,  // kGateDim x kHiddenDim
  kGateBias,          // kGateDim
  kHeadWeights,       // kHiddenDim
  kHeadBias,          // 1
};
inline constexpr ParamBlock kAllParamBlocks[] = {
    ParamBlock::kEmbedding,  ParamBlock::kInputWeights,
    ParamBlock::kRecurrentWeights, ParamBlock::kGateBias,
    ParamBlock::kHeadWeights, ParamBlock::kHeadBias};
const char* ToString(ParamBlock block);

class UnknownSymbolError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Embedding table, single-layer LSTM and a logistic scalar head, stored as
// one flat vector so the optimizer can treat it uniformly.
class AgentParams {
 public:
  // All parameters zero.
  explicit AgentParams(std::vector<Symbol> alphabet);

  // Embeddings U(-1, 1), LSTM and head weights U(-k, k) with
  // k = 1/sqrt(kHiddenDim), head bias 0 (so mu starts near 0.5).
  static AgentParams Initialize(std::vector<Symbol> alphabet,
                                std::mt19937_64& rng);

  std::span<const Symbol> alphabet() const { return alphabet_; }
  int vocab_size() const { return static_cast<int>(alphabet_.size()); }
  int IndexOf(Symbol symbol) const;
  std::vector<int> Encode(const Numeral& numeral) const;

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::span<double> block(ParamBlock b);
  std::span<const double> block(ParamBlock b) const;
  std::size_t block_offset(ParamBlock b) const;

  const double* embedding(int token) const {
    return values_.data() + token * kEmbedDim;
  }

  friend bool operator==(const AgentParams&, const AgentParams&) = default;

 private:
  std::size_t block_size(ParamBlock b) const;

  std::vector<Symbol> alphabet_;  // sorted, unique
  std::vector<double> values_;
};

// Activations kept from a forward pass for backpropagation.
struct LstmTrace {
  using Vec = std::array<double, kHiddenDim>;
  std::vector<int> tokens;
  std::vector<Vec> input_gate, forget_gate, cell_input, output_gate;
  std::vector<Vec> cell, cell_tanh, hidden;
  double logit = 0.0;
  double mu = 0.0;
};

double Logistic(double x);

// Runs the LSTM over `tokens` and returns mu = logistic(head(h_T)).
double ForwardTokens(const AgentParams& params, std::span<const int> tokens,
                     LstmTrace* trace = nullptr);
// Throws UnknownSymbolError for symbols outside the embedding table.
double Forward(const AgentParams& params, const Numeral& numeral);

// Adds d(loss)/d(params) to `grad` given d(loss)/d(logit) for the pass
// recorded in `trace`.
void BackwardFromLogit(const AgentParams& params, const LstmTrace& trace,
                       double dloss_dlogit, std::span<double> grad);

// 1[0 < round(prediction) < 100] * exp(-alpha * |prediction - target|),
// rounding half away from zero.
double Reward(double prediction, int target, double alpha);

struct PolicyStep {
  double mu = 0.0;
  double sigma = 0.0;
  double action = 0.0;
  double prediction = 0.0;  // 100 * action
  double log_prob = 0.0;
};

double GaussianLogDensity(double x, double mean, double sigma);
PolicyStep MakePolicyStep(double mu, double sigma, double action);

}  // namespace numlearn

#endif  // NUMLEARN_AGENT_H_
