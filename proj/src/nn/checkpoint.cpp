#include "mtp/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace mtp::nn {

namespace {
constexpr char kMagic[] = "MTPCKPT1\n";
constexpr std::size_t kMagicLen = sizeof(kMagic) - 1;

void write_u64(std::ofstream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t read_u64(std::ifstream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}
}  // namespace

void save_checkpoint(const std::string& path, const ParamStore& params,
                     const CheckpointMeta& meta) {
  nlohmann::json manifest;
  manifest["version"] = meta.version;
  manifest["master_seed"] = meta.master_seed;
  manifest["hyper"] = meta.hyper;
  auto& entries = manifest["entries"];
  entries = nlohmann::json::array();
  for (int i = 0; i < params.count(); ++i) {
    const auto& e = params.entry(i);
    entries.push_back({{"name", e.name}, {"shape", e.shape}, {"seed", e.seed}});
  }
  const std::string text = manifest.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
  out.write(kMagic, static_cast<std::streamsize>(kMagicLen));
  write_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  static_assert(sizeof(double) == 8);
  for (int i = 0; i < params.count(); ++i) {
    const auto& e = params.entry(i);
    out.write(reinterpret_cast<const char*>(e.value.data()),
              static_cast<std::streamsize>(e.value.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("save_checkpoint: write failed " + path);
}

ParamStore load_checkpoint(const std::string& path, CheckpointMeta* meta) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
  char magic[kMagicLen];
  in.read(magic, static_cast<std::streamsize>(kMagicLen));
  if (!in || std::memcmp(magic, kMagic, kMagicLen) != 0) {
    throw std::runtime_error("load_checkpoint: bad magic in " + path);
  }
  const std::uint64_t len = read_u64(in);
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  const auto manifest = nlohmann::json::parse(text);

  CheckpointMeta m;
  m.version = manifest.at("version").get<int>();
  m.master_seed = manifest.at("master_seed").get<std::uint64_t>();
  if (manifest.contains("hyper")) {
    m.hyper = manifest.at("hyper").get<std::map<std::string, std::string>>();
  }

  ParamStore store(m.master_seed);
  for (const auto& je : manifest.at("entries")) {
    const int id = store.add_zeros(je.at("name").get<std::string>(),
                                   je.at("shape").get<std::vector<std::size_t>>());
    auto& e = store.entry(id);
    e.seed = je.at("seed").get<std::uint64_t>();
    in.read(reinterpret_cast<char*>(e.value.data()),
            static_cast<std::streamsize>(e.value.size() * sizeof(double)));
  }
  if (!in) throw std::runtime_error("load_checkpoint: truncated " + path);
  if (meta) *meta = m;
  return store;
}

}  // namespace mtp::nn
