#include "hrl/encoder.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace hrl {

Vocabulary::Vocabulary() { add(kUnknownToken); }

Vocabulary::Vocabulary(const std::vector<std::string>& words) {
  if (words.empty() || words.front() != kUnknownToken) add(kUnknownToken);
  for (const auto& w : words) add(w);
}

int Vocabulary::add(const std::string& word) {
  auto [it, inserted] = ids_.emplace(word, size());
  if (inserted) words_.push_back(word);
  return it->second;
}

int Vocabulary::id(const std::string& word) const {
  auto it = ids_.find(word);
  return it == ids_.end() ? kUnknown : it->second;
}

std::vector<int> Vocabulary::ids(const std::vector<std::string>& tokens) const {
  std::vector<int> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(id(t));
  return out;
}

Vocabulary build_vocabulary(const std::vector<Sentence>& sentences) {
  Vocabulary vocab;
  for (const auto& s : sentences) {
    for (const auto& t : s.tokens) vocab.add(t);
  }
  return vocab;
}

Matrix embed(const std::vector<int>& token_ids, const Matrix& embedding) {
  Matrix out(static_cast<Eigen::Index>(token_ids.size()), embedding.cols());
  for (std::size_t t = 0; t < token_ids.size(); ++t) out.row(static_cast<Eigen::Index>(t)) = embedding.row(token_ids[t]);
  return out;
}

Matrix embed(const std::vector<std::string>& tokens, const Vocabulary& vocab, const Matrix& embedding) {
  return embed(vocab.ids(tokens), embedding);
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Runs one direction over `inputs` in the given order, recording rows in processing order.
void run_direction(const Matrix& inputs, const LstmParams& p, bool reverse, LstmTrace& trace) {
  const Eigen::Index L = inputs.rows();
  const Eigen::Index H = p.hidden_size();
  trace.input_gate.resize(L, H);
  trace.forget_gate.resize(L, H);
  trace.candidate.resize(L, H);
  trace.output_gate.resize(L, H);
  trace.cell.resize(L, H);
  trace.hidden.resize(L, H);
  Vector h = Vector::Zero(H);
  Vector c = Vector::Zero(H);
  for (Eigen::Index k = 0; k < L; ++k) {
    const Eigen::Index t = reverse ? L - 1 - k : k;
    const Vector z = p.input_weight * inputs.row(t).transpose() + p.hidden_weight * h + p.bias;
    const Vector i = z.segment(0, H).unaryExpr(&sigmoid);
    const Vector f = z.segment(H, H).unaryExpr(&sigmoid);
    const Vector g = z.segment(2 * H, H).array().tanh();
    const Vector o = z.segment(3 * H, H).unaryExpr(&sigmoid);
    c = f.cwiseProduct(c) + i.cwiseProduct(g);
    h = o.cwiseProduct(c.array().tanh().matrix());
    trace.input_gate.row(k) = i;
    trace.forget_gate.row(k) = f;
    trace.candidate.row(k) = g;
    trace.output_gate.row(k) = o;
    trace.cell.row(k) = c;
    trace.hidden.row(k) = h;
  }
}

/// grad_hidden rows are in processing order. Returns input gradients in processing order.
Matrix backprop_direction(const Matrix& grad_hidden, const Matrix& inputs_in_order, const LstmTrace& tr,
                          const LstmParams& p, LstmParams& g) {
  const Eigen::Index L = grad_hidden.rows();
  const Eigen::Index H = p.hidden_size();
  Matrix grad_inputs = Matrix::Zero(L, p.input_weight.cols());
  Vector dh_next = Vector::Zero(H);
  Vector dc_next = Vector::Zero(H);
  Vector dz(4 * H);
  for (Eigen::Index k = L - 1; k >= 0; --k) {
    const Vector dh = grad_hidden.row(k).transpose() + dh_next;
    const Vector c = tr.cell.row(k).transpose();
    const Vector tanh_c = c.array().tanh();
    const Vector i = tr.input_gate.row(k).transpose();
    const Vector f = tr.forget_gate.row(k).transpose();
    const Vector gc = tr.candidate.row(k).transpose();
    const Vector o = tr.output_gate.row(k).transpose();
    const Vector c_prev = k > 0 ? Vector(tr.cell.row(k - 1).transpose()) : Vector::Zero(H);
    const Vector h_prev = k > 0 ? Vector(tr.hidden.row(k - 1).transpose()) : Vector::Zero(H);

    const Vector dc = dc_next + dh.cwiseProduct(o).cwiseProduct((1.0 - tanh_c.array().square()).matrix());
    dz.segment(0, H) = dc.cwiseProduct(gc).cwiseProduct(i.cwiseProduct((1.0 - i.array()).matrix()));
    dz.segment(H, H) = dc.cwiseProduct(c_prev).cwiseProduct(f.cwiseProduct((1.0 - f.array()).matrix()));
    dz.segment(2 * H, H) = dc.cwiseProduct(i).cwiseProduct((1.0 - gc.array().square()).matrix());
    dz.segment(3 * H, H) = dh.cwiseProduct(tanh_c).cwiseProduct(o.cwiseProduct((1.0 - o.array()).matrix()));

    g.input_weight.noalias() += dz * inputs_in_order.row(k);
    g.hidden_weight.noalias() += dz * h_prev.transpose();
    g.bias += dz;
    grad_inputs.row(k) = (p.input_weight.transpose() * dz).transpose();
    dh_next = p.hidden_weight.transpose() * dz;
    dc_next = dc.cwiseProduct(f);
  }
  return grad_inputs;
}

}  // namespace

Matrix encode(const Matrix& inputs, const EncoderParams& params, EncoderCache* cache) {
  EncoderCache local;
  EncoderCache& c = cache ? *cache : local;
  c.inputs = inputs;
  run_direction(inputs, params.forward, false, c.forward);
  run_direction(inputs, params.backward, true, c.backward);
  const Eigen::Index L = inputs.rows();
  const Eigen::Index Hf = params.forward.hidden_size();
  const Eigen::Index Hb = params.backward.hidden_size();
  Matrix out(L, Hf + Hb);
  out.leftCols(Hf) = c.forward.hidden;
  out.rightCols(Hb) = c.backward.hidden.colwise().reverse();
  return out;
}

Matrix encode_backward(const Matrix& grad_hidden, const EncoderCache& cache, const EncoderParams& params,
                       EncoderParams& grads) {
  const Eigen::Index Hf = params.forward.hidden_size();
  const Eigen::Index Hb = params.backward.hidden_size();
  const Matrix forward_in = cache.inputs;
  const Matrix backward_in = cache.inputs.colwise().reverse();
  Matrix grad = backprop_direction(grad_hidden.leftCols(Hf), forward_in, cache.forward, params.forward, grads.forward);
  grad += backprop_direction(grad_hidden.rightCols(Hb).colwise().reverse(), backward_in, cache.backward,
                             params.backward, grads.backward)
              .colwise()
              .reverse();
  return grad;
}

void accumulate_embedding_grad(const std::vector<int>& token_ids, const Matrix& grad_inputs, Matrix& grad_embedding) {
  for (std::size_t t = 0; t < token_ids.size(); ++t) {
    grad_embedding.row(token_ids[t]) += grad_inputs.row(static_cast<Eigen::Index>(t));
  }
}

int load_embeddings(const std::filesystem::path& path, const Vocabulary& vocab, Matrix& embedding) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embedding file " + path.string());
  std::string line;
  int replaced = 0;
  int line_number = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_number;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    values.clear();
    for (double v; fields >> v;) values.push_back(v);
    if (static_cast<Eigen::Index>(values.size()) != embedding.cols()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_number) + ": expected " +
                               std::to_string(embedding.cols()) + " values, found " + std::to_string(values.size()));
    }
    const int id = vocab.id(token);
    if (id == Vocabulary::kUnknown && token != Vocabulary::kUnknownToken) continue;
    embedding.row(id) = Eigen::Map<const Eigen::RowVectorXd>(values.data(), embedding.cols());
    ++replaced;
  }
  return replaced;
}

}  // namespace hrl
