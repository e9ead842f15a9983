#include "hrl/model.hpp"

#include <stdexcept>

namespace hrl {

using nlohmann::json;

void to_json(json& j, const ModelDims& d) {
  j = json{{"word_dim", d.word_dim},
           {"hidden_dim", d.hidden_dim},
           {"state_dim", d.state_dim},
           {"relation_dim", d.relation_dim},
           {"tag_dim", d.tag_dim}};
}

void from_json(const json& j, ModelDims& d) {
  d.word_dim = j.value("word_dim", d.word_dim);
  d.hidden_dim = j.value("hidden_dim", d.hidden_dim);
  d.state_dim = j.value("state_dim", d.state_dim);
  d.relation_dim = j.value("relation_dim", d.relation_dim);
  d.tag_dim = j.value("tag_dim", d.tag_dim);
}

namespace {

LstmParams zero_lstm(int input, int hidden) {
  return LstmParams{Matrix::Zero(4 * hidden, input), Matrix::Zero(4 * hidden, hidden), Vector::Zero(4 * hidden)};
}

}  // namespace

ModelParams zero_params(const ModelDims& d, int vocab_size, int relation_count) {
  if (d.hidden_dim % 2 != 0) throw std::invalid_argument("hidden_dim must be even (split across two directions)");
  if (d.word_dim < 1 || d.hidden_dim < 2 || d.state_dim < 1 || d.relation_dim < 1 || d.tag_dim < 1) {
    throw std::invalid_argument("model dimensions must be positive");
  }
  if (vocab_size < 1 || relation_count < 1) throw std::invalid_argument("vocabulary and schema must be non-empty");
  const int half = d.hidden_dim / 2;
  const int S = d.state_dim;
  ModelParams p;
  p.encoder.embedding = Matrix::Zero(vocab_size, d.word_dim);
  p.encoder.forward = zero_lstm(d.word_dim, half);
  p.encoder.backward = zero_lstm(d.word_dim, half);
  p.high.state_weight = Matrix::Zero(S, d.hidden_dim + d.relation_dim + S);
  p.high.state_bias = Vector::Zero(S);
  p.high.option_weight = Matrix::Zero(relation_count + 1, S);
  p.high.option_bias = Vector::Zero(relation_count + 1);
  p.high.relation_embedding = Matrix::Zero(relation_count + 1, d.relation_dim);
  p.low.state_weight = Matrix::Zero(S, d.hidden_dim + d.tag_dim + 2 * S);
  p.low.state_bias = Vector::Zero(S);
  p.low.context_weight = Matrix::Zero(S, S);
  p.low.context_bias = Vector::Zero(S);
  p.low.action_weight.assign(static_cast<std::size_t>(relation_count), Matrix::Zero(kTagCount, S));
  p.low.action_bias.assign(static_cast<std::size_t>(relation_count), Vector::Zero(kTagCount));
  p.low.tag_embedding = Matrix::Zero(kTagCount + 1, d.tag_dim);
  return p;
}

ModelParams zeros_like(const ModelParams& params) {
  ModelParams z = params;
  z.visit([](const std::string&, auto& t) { t.setZero(); });
  return z;
}

ModelParams init_params(const ModelDims& dims, int vocab_size, int relation_count, Rng& rng, double scale,
                        bool zero_biases) {
  ModelParams p = zero_params(dims, vocab_size, relation_count);
  // Random biases add a position-independent component to every state, which early
  // policy-gradient updates can latch onto before the encoder learns anything.
  p.visit([&](const std::string& name, auto& t) {
    if (zero_biases && name.find("bias") != std::string::npos) return;
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = rng.uniform(-scale, scale);
  });
  for (LstmParams* lstm : {&p.encoder.forward, &p.encoder.backward}) {
    const int H = lstm->hidden_size();
    lstm->bias.segment(H, H).setConstant(1.0);
  }
  round_to_float(p);
  return p;
}

void round_to_float(ModelParams& params) {
  params.visit([](const std::string&, auto& t) {
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = static_cast<double>(static_cast<float>(t.data()[i]));
  });
}

std::vector<TensorInfo> tensor_manifest(const ModelParams& params) {
  std::vector<TensorInfo> out;
  params.visit([&](const std::string& name, const auto& t) {
    using T = std::decay_t<decltype(t)>;
    if constexpr (T::ColsAtCompileTime == 1) {
      out.push_back({name, {static_cast<int>(t.rows())}});
    } else {
      out.push_back({name, {static_cast<int>(t.rows()), static_cast<int>(t.cols())}});
    }
  });
  return out;
}

std::size_t parameter_count(const ModelParams& params) {
  std::size_t n = 0;
  params.visit([&](const std::string&, const auto& t) { n += static_cast<std::size_t>(t.size()); });
  return n;
}

double squared_norm(const ModelParams& params) {
  double total = 0.0;
  params.visit([&](const std::string&, const auto& t) { total += t.squaredNorm(); });
  return total;
}

void add_scaled(ModelParams& params, const ModelParams& other, double factor) {
  std::vector<const double*> sources;
  other.visit([&](const std::string&, const auto& t) { sources.push_back(t.data()); });
  std::size_t k = 0;
  params.visit([&](const std::string&, auto& t) {
    const double* src = sources[k++];
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] += factor * src[i];
  });
}

void scale(ModelParams& params, double factor) {
  params.visit([&](const std::string&, auto& t) { t *= factor; });
}

}  // namespace hrl
