#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "hrl/encoder.hpp"
#include "hrl/rng.hpp"
#include "hrl/tagging.hpp"

namespace hrl {

struct ModelDims {
  int word_dim = 300;
  int hidden_dim = 300;  // concatenated; each direction gets half
  int state_dim = 300;
  int relation_dim = 300;
  int tag_dim = 300;

  bool operator==(const ModelDims&) const = default;
};

void to_json(nlohmann::json& j, const ModelDims& dims);
void from_json(const nlohmann::json& j, ModelDims& dims);

/// Relation-detection policy. relation_embedding row 0 is the reserved
/// "no relation yet" row; row option_of(r) belongs to relation r.
struct HighPolicyParams {
  Matrix state_weight;  // S × (H + Dr + S)
  Vector state_bias;
  Matrix option_weight;  // (|R| + 1) × S
  Vector option_bias;
  Matrix relation_embedding;  // (|R| + 1) × Dr
};

/// Entity-tagging policy. tag_embedding has one row per tag plus the
/// reserved start row at index kTagCount.
struct LowPolicyParams {
  Matrix state_weight;  // S × (H + De + S + S)
  Vector state_bias;
  Matrix context_weight;  // S × S
  Vector context_bias;
  std::vector<Matrix> action_weight;  // |R| × (7 × S)
  std::vector<Vector> action_bias;    // |R| × 7
  Matrix tag_embedding;               // 8 × De
};

inline constexpr int kInitialTagRow = kTagCount;
inline constexpr int kInitialRelationRow = 0;

struct ModelParams {
  EncoderParams encoder;
  HighPolicyParams high;
  LowPolicyParams low;

  int relation_count() const { return static_cast<int>(low.action_weight.size()); }
  int state_dim() const { return static_cast<int>(high.state_bias.size()); }

  /// Calls fn(name, tensor) for every learnable tensor in a fixed order.
  /// `tensor` is an Eigen::MatrixXd or Eigen::VectorXd.
  template <class Fn>
  void visit(Fn&& fn) {
    visit_impl(*this, fn);
  }
  template <class Fn>
  void visit(Fn&& fn) const {
    visit_impl(*this, fn);
  }

 private:
  template <class Self, class Fn>
  static void visit_impl(Self& self, Fn& fn) {
    fn("encoder.embedding", self.encoder.embedding);
    fn("encoder.forward.input_weight", self.encoder.forward.input_weight);
    fn("encoder.forward.hidden_weight", self.encoder.forward.hidden_weight);
    fn("encoder.forward.bias", self.encoder.forward.bias);
    fn("encoder.backward.input_weight", self.encoder.backward.input_weight);
    fn("encoder.backward.hidden_weight", self.encoder.backward.hidden_weight);
    fn("encoder.backward.bias", self.encoder.backward.bias);
    fn("high.state_weight", self.high.state_weight);
    fn("high.state_bias", self.high.state_bias);
    fn("high.option_weight", self.high.option_weight);
    fn("high.option_bias", self.high.option_bias);
    fn("high.relation_embedding", self.high.relation_embedding);
    fn("low.state_weight", self.low.state_weight);
    fn("low.state_bias", self.low.state_bias);
    fn("low.context_weight", self.low.context_weight);
    fn("low.context_bias", self.low.context_bias);
    for (std::size_t r = 0; r < self.low.action_weight.size(); ++r) {
      fn("low.action_weight." + std::to_string(r), self.low.action_weight[r]);
      fn("low.action_bias." + std::to_string(r), self.low.action_bias[r]);
    }
    fn("low.tag_embedding", self.low.tag_embedding);
  }
};

/// All-zero parameters with the given shapes.
ModelParams zero_params(const ModelDims& dims, int vocab_size, int relation_count);
ModelParams zeros_like(const ModelParams& params);

/// Uniform(-scale, scale) entries (biases zero if asked), LSTM forget-gate bias 1.0, rounded to float32.
ModelParams init_params(const ModelDims& dims, int vocab_size, int relation_count, Rng& rng, double scale = 0.08,
                        bool zero_biases = false);

/// Rounds every entry to the nearest float32 so checkpoints are lossless.
void round_to_float(ModelParams& params);

/// Shapes as {rows} for vectors and {rows, cols} for matrices, in visit order.
struct TensorInfo {
  std::string name;
  std::vector<int> shape;
};
std::vector<TensorInfo> tensor_manifest(const ModelParams& params);

std::size_t parameter_count(const ModelParams& params);
double squared_norm(const ModelParams& params);
/// params += scale * other
void add_scaled(ModelParams& params, const ModelParams& other, double scale);
void scale(ModelParams& params, double factor);

}  // namespace hrl
