#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "fixtures.hpp"
#include "hrl/encoder.hpp"

namespace hrl {
namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

LstmParams scalar_lstm(double wi, double wf, double wc, double wo, double ui, double uf, double uc, double uo, double b) {
  LstmParams p{Matrix(4, 1), Matrix(4, 1), Vector::Constant(4, b)};
  p.input_weight << wi, wf, wc, wo;
  p.hidden_weight << ui, uf, uc, uo;
  return p;
}

TEST(Vocabulary, UnknownFallback) {
  Vocabulary v({"a", "b"});
  EXPECT_EQ(v.size(), 3);
  EXPECT_EQ(v.id("a"), 1);
  EXPECT_EQ(v.id("zzz"), Vocabulary::kUnknown);
  EXPECT_EQ(v.add("a"), 1);
  EXPECT_EQ(v.add("c"), 3);
}

TEST(Embed, LookupAndEmpty) {
  Vocabulary v({"a", "b"});
  Matrix table(3, 2);
  table << 0.5, 0.5, 1, 2, 3, 4;
  const Matrix e = embed(std::vector<std::string>{"b", "zzz", "a"}, v, table);
  EXPECT_EQ(e.row(0), table.row(2));
  EXPECT_EQ(e.row(1), table.row(0));
  EXPECT_EQ(e.row(2), table.row(1));
  EXPECT_EQ(embed(std::vector<std::string>{}, v, table).rows(), 0);
}

TEST(Encode, ZeroWeightsGiveZeroStates) {
  EncoderParams p;
  p.embedding = Matrix::Zero(1, 3);
  p.forward = LstmParams{Matrix::Zero(8, 3), Matrix::Zero(8, 2), Vector::Zero(8)};
  p.backward = p.forward;
  const Matrix h = encode(Matrix::Random(4, 3), p);
  EXPECT_EQ(h.rows(), 4);
  EXPECT_EQ(h.cols(), 4);
  EXPECT_EQ(h.norm(), 0.0);
}

TEST(Encode, SingleTokenShape) {
  const ModelParams m = testing::random_params(5, 2, 1);
  const Matrix h = encode(Matrix::Random(1, 8), m.encoder);
  EXPECT_EQ(h.rows(), 1);
  EXPECT_EQ(h.cols(), 8);
}

TEST(Encode, HandExecutedScalarCell) {
  EncoderParams p;
  p.embedding = Matrix::Zero(1, 1);
  p.forward = scalar_lstm(0.5, -0.3, 0.8, 0.2, 0.1, 0.4, -0.6, 0.3, 0.1);
  p.backward = scalar_lstm(-0.2, 0.7, 0.4, -0.5, 0.2, -0.1, 0.9, 0.6, -0.2);
  Matrix x(2, 1);
  x << 1.0, -2.0;

  auto step = [](const LstmParams& w, double in, double& h, double& c) {
    const double i = sigmoid(w.input_weight(0) * in + w.hidden_weight(0) * h + w.bias(0));
    const double f = sigmoid(w.input_weight(1) * in + w.hidden_weight(1) * h + w.bias(1));
    const double g = std::tanh(w.input_weight(2) * in + w.hidden_weight(2) * h + w.bias(2));
    const double o = sigmoid(w.input_weight(3) * in + w.hidden_weight(3) * h + w.bias(3));
    c = f * c + i * g;
    h = o * std::tanh(c);
  };
  double hf = 0, cf = 0, hb = 0, cb = 0;
  step(p.forward, 1.0, hf, cf);
  const double f0 = hf;
  step(p.forward, -2.0, hf, cf);
  const double f1 = hf;
  step(p.backward, -2.0, hb, cb);
  const double b1 = hb;
  step(p.backward, 1.0, hb, cb);
  const double b0 = hb;

  const Matrix h = encode(x, p);
  EXPECT_NEAR(h(0, 0), f0, 1e-12);
  EXPECT_NEAR(h(1, 0), f1, 1e-12);
  EXPECT_NEAR(h(0, 1), b0, 1e-12);
  EXPECT_NEAR(h(1, 1), b1, 1e-12);
}

TEST(EncodeBackward, ZeroUpstreamGivesZeroGradients) {
  const ModelParams m = testing::random_params(5, 2, 3);
  EncoderCache cache;
  const Matrix x = Matrix::Random(3, 8);
  const Matrix h = encode(x, m.encoder, &cache);
  EncoderParams g = zeros_like(m).encoder;
  const Matrix gx = encode_backward(Matrix::Zero(h.rows(), h.cols()), cache, m.encoder, g);
  EXPECT_EQ(gx.norm(), 0.0);
  EXPECT_EQ(g.forward.input_weight.norm() + g.backward.hidden_weight.norm() + g.forward.bias.norm(), 0.0);
}

TEST(EncodeBackward, RepeatedTokenAccumulates) {
  // d/dE[row] of sum(weights .* encode(embed(ids))) by central differences.
  const ModelParams m = testing::random_params(4, 1, 9);
  const std::vector<int> ids{2, 1, 2};
  Rng rng(4);
  Matrix weights(3, 8);
  for (Eigen::Index i = 0; i < weights.size(); ++i) weights.data()[i] = rng.uniform(-1, 1);
  auto objective = [&](const Matrix& table) { return (encode(embed(ids, table), m.encoder).array() * weights.array()).sum(); };

  EncoderCache cache;
  encode(embed(ids, m.encoder.embedding), m.encoder, &cache);
  EncoderParams g = zeros_like(m).encoder;
  const Matrix gx = encode_backward(weights, cache, m.encoder, g);
  Matrix grad_table = Matrix::Zero(m.encoder.embedding.rows(), m.encoder.embedding.cols());
  accumulate_embedding_grad(ids, gx, grad_table);

  for (int c = 0; c < grad_table.cols(); ++c) {
    Matrix plus = m.encoder.embedding, minus = m.encoder.embedding;
    plus(2, c) += 1e-5;
    minus(2, c) -= 1e-5;
    const double numeric = (objective(plus) - objective(minus)) / 2e-5;
    EXPECT_NEAR(grad_table(2, c), numeric, 1e-6 * std::max(1.0, std::abs(numeric)));
  }
  EXPECT_EQ(grad_table.row(3).norm(), 0.0);
}

TEST(Encode, Deterministic) {
  const ModelParams m = testing::random_params(5, 2, 3);
  const Matrix x = embed(std::vector<int>{1, 2, 3, 4}, m.encoder.embedding);
  EXPECT_EQ(encode(x, m.encoder), encode(x, m.encoder));
}

TEST(LoadEmbeddings, ReplacesKnownRows) {
  const auto path = std::filesystem::temp_directory_path() / "hrl_embeddings_test.txt";
  {
    std::ofstream out(path);
    out << "a 1 2\nzzz 5 5\n";
  }
  Vocabulary v({"a", "b"});
  Matrix table = Matrix::Zero(3, 2);
  EXPECT_EQ(load_embeddings(path, v, table), 1);
  EXPECT_EQ(table(1, 0), 1.0);
  EXPECT_EQ(table(1, 1), 2.0);
  EXPECT_EQ(table.row(2).norm(), 0.0);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace hrl
