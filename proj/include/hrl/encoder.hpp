#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "hrl/corpus.hpp"

namespace hrl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Token → row id mapping. Id 0 is the reserved unknown-word row.
class Vocabulary {
 public:
  static constexpr int kUnknown = 0;
  static constexpr const char* kUnknownToken = "<unk>";

  Vocabulary();
  explicit Vocabulary(const std::vector<std::string>& words);

  /// Adds `word` if absent; returns its id.
  int add(const std::string& word);
  int id(const std::string& word) const;
  std::vector<int> ids(const std::vector<std::string>& tokens) const;

  int size() const { return static_cast<int>(words_.size()); }
  const std::vector<std::string>& words() const { return words_; }

  bool operator==(const Vocabulary& other) const { return words_ == other.words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> ids_;
};

/// Vocabulary over all tokens of `sentences`, in first-occurrence order.
Vocabulary build_vocabulary(const std::vector<Sentence>& sentences);

/// Gate rows are stacked [input; forget; candidate; output], each hidden-sized.
struct LstmParams {
  Matrix input_weight;   // 4H × D
  Matrix hidden_weight;  // 4H × H
  Vector bias;           // 4H

  int hidden_size() const { return static_cast<int>(hidden_weight.cols()); }
};

struct EncoderParams {
  Matrix embedding;  // V × D
  LstmParams forward;
  LstmParams backward;

  int word_dim() const { return static_cast<int>(embedding.cols()); }
  int hidden_dim() const { return forward.hidden_size() + backward.hidden_size(); }
};

/// Rows of `embedding` for each token id.
Matrix embed(const std::vector<int>& token_ids, const Matrix& embedding);
Matrix embed(const std::vector<std::string>& tokens, const Vocabulary& vocab, const Matrix& embedding);

/// Activations of one direction, one row per processed step (in processing order).
struct LstmTrace {
  Matrix input_gate, forget_gate, candidate, output_gate;
  Matrix cell, hidden;
};

struct EncoderCache {
  Matrix inputs;  // L × D
  LstmTrace forward;
  LstmTrace backward;
};

/// Bidirectional LSTM; row t is [forward h_t; backward h_t]. Fills `cache` when given.
Matrix encode(const Matrix& inputs, const EncoderParams& params, EncoderCache* cache = nullptr);

/// Reverse-mode pass of encode. Accumulates weight gradients into `grads`
/// (embedding excluded) and returns the gradient w.r.t. the inputs.
Matrix encode_backward(const Matrix& grad_hidden, const EncoderCache& cache, const EncoderParams& params,
                       EncoderParams& grads);

/// Scatters per-position input gradients onto embedding rows.
void accumulate_embedding_grad(const std::vector<int>& token_ids, const Matrix& grad_inputs, Matrix& grad_embedding);

/// Reads `token v1 ... vD` lines, overwriting rows of known tokens.
/// Returns the number of rows replaced.
int load_embeddings(const std::filesystem::path& path, const Vocabulary& vocab, Matrix& embedding);

}  // namespace hrl
