#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "hrl/training.hpp"

namespace hrl {

using nlohmann::json;

namespace {

constexpr std::array<char, 4> kMagic = {'H', 'R', 'L', 'X'};

template <class U>
void write_le(std::ostream& out, U value) {
  std::array<char, sizeof(U)> bytes;
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

template <class U>
U read_le(std::istream& in, const char* what) {
  std::array<unsigned char, sizeof(U)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw CheckpointError(std::string("corrupt checkpoint: truncated ") + what);
  }
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
  return value;
}

json manifest_json(const ModelParams& params) {
  json tensors = json::array();
  for (const TensorInfo& t : tensor_manifest(params)) tensors.push_back({{"name", t.name}, {"shape", t.shape}});
  return tensors;
}

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
  const json header{{"config", ckpt.config},
                    {"schema", ckpt.schema.names()},
                    {"vocab", ckpt.vocab.words()},
                    {"tensors", manifest_json(ckpt.params)}};
  const std::string text = header.dump();
  out.write(kMagic.data(), kMagic.size());
  write_le<std::uint32_t>(out, Checkpoint::kVersion);
  write_le<std::uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  ckpt.params.visit([&](const std::string&, const auto& t) {
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      write_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(static_cast<float>(t.data()[i])));
    }
  });
  if (!out) throw CheckpointError("failed writing checkpoint");
}

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot open " + path.string() + " for writing");
  write_checkpoint(out, checkpoint);
}

Checkpoint read_checkpoint(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw CheckpointError("corrupt checkpoint: bad magic bytes");
  }
  const auto version = read_le<std::uint32_t>(in, "version");
  if (version != Checkpoint::kVersion) {
    throw CheckpointError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                          std::to_string(Checkpoint::kVersion) + ")");
  }
  const auto header_size = read_le<std::uint64_t>(in, "header size");
  if (header_size > (1ULL << 32)) throw CheckpointError("corrupt checkpoint: implausible header size");
  std::string text(header_size, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(header_size))) {
    throw CheckpointError("corrupt checkpoint: truncated header");
  }

  Checkpoint ckpt;
  json header;
  try {
    header = json::parse(text);
    header.at("config").get_to(ckpt.config);
    ckpt.schema = RelationSchema(header.at("schema").get<std::vector<std::string>>());
    ckpt.vocab = Vocabulary(header.at("vocab").get<std::vector<std::string>>());
  } catch (const std::exception& e) {
    throw CheckpointError(std::string("corrupt checkpoint header: ") + e.what());
  }

  try {
    ckpt.params = zero_params(ckpt.config.dims, ckpt.vocab.size(), ckpt.schema.relation_count());
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(std::string("corrupt checkpoint header: ") + e.what());
  }
  if (manifest_json(ckpt.params) != header.at("tensors")) {
    throw CheckpointError("shape mismatch: tensor manifest disagrees with the stored schema, vocabulary and dims");
  }
  ckpt.params.visit([&](const std::string& name, auto& t) {
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      const auto bits = read_le<std::uint32_t>(in, ("tensor " + name).c_str());
      t.data()[i] = static_cast<double>(std::bit_cast<float>(bits));
    }
  });
  if (in.peek() != std::char_traits<char>::eof()) throw CheckpointError("corrupt checkpoint: trailing bytes");
  return ckpt;
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  return read_checkpoint(in);
}

Checkpoint load_checkpoint(const std::filesystem::path& path, const RelationSchema& schema) {
  Checkpoint ckpt = load_checkpoint(path);
  if (ckpt.schema.relation_count() != schema.relation_count()) {
    throw CheckpointError("shape mismatch: checkpoint has " + std::to_string(ckpt.schema.relation_count()) +
                          " relation types, schema has " + std::to_string(schema.relation_count()));
  }
  if (!(ckpt.schema == schema)) throw CheckpointError("schema mismatch: relation names differ from the checkpoint");
  return ckpt;
}

}  // namespace hrl
