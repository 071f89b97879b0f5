#include "nge/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace nge::io {

namespace {

constexpr char kMagic[8] = {'N', 'G', 'E', 'C', 'K', 'P', 'T', '1'};

void put_u16(std::ostream& out, std::uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
  out.write(b, 2);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) {
    b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  }
  out.write(b, 4);
}

void put_f64(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  char b[8];
  for (int i = 0; i < 8; ++i) {
    b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  }
  out.write(b, 8);
}

[[noreturn]] void truncated(const std::string& path) {
  throw std::runtime_error("checkpoint truncated: " + path);
}

std::uint16_t get_u16(std::istream& in, const std::string& path) {
  unsigned char b[2];
  if (!in.read(reinterpret_cast<char*>(b), 2)) {
    truncated(path);
  }
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

std::uint32_t get_u32(std::istream& in, const std::string& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    truncated(path);
  }
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) {
    v = (v << 8) | b[i];
  }
  return v;
}

double get_f64(std::istream& in, const std::string& path) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) {
    truncated(path);
  }
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) {
    bits = (bits << 8) | b[i];
  }
  return std::bit_cast<double>(bits);
}

}  // namespace

void save_checkpoint(const model::ModelParams& params,
                     const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) {
      throw std::runtime_error("cannot write checkpoint: " + tmp);
    }
    out.write(kMagic, sizeof(kMagic));
    put_u32(out, kCheckpointVersion);
    put_u32(out, static_cast<std::uint32_t>(params.latent_dim));
    const auto named = params.named_tensors();
    put_u32(out, static_cast<std::uint32_t>(named.size()));
    for (const auto& [name, tensor] : named) {
      put_u16(out, static_cast<std::uint16_t>(name.size()));
      out.write(name.data(), static_cast<std::streamsize>(name.size()));
      put_u32(out, static_cast<std::uint32_t>(tensor->rows));
      put_u32(out, static_cast<std::uint32_t>(tensor->cols));
      for (double v : tensor->data) {
        put_f64(out, v);
      }
    }
    out.flush();
    if (!out) {
      throw std::runtime_error("failed writing checkpoint: " + tmp);
    }
  }
  std::filesystem::rename(tmp, path);
}

model::ModelParams load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open checkpoint: " + path);
  }
  char magic[8];
  if (!in.read(magic, 8)) {
    truncated(path);
  }
  if (std::memcmp(magic, kMagic, 8) != 0) {
    throw std::runtime_error("not a checkpoint file: " + path);
  }
  const std::uint32_t version = get_u32(in, path);
  if (version != kCheckpointVersion) {
    throw std::runtime_error(
        "checkpoint version " + std::to_string(version) +
        " is not readable by this build (version " +
        std::to_string(kCheckpointVersion) + ")");
  }
  const std::uint32_t latent_dim = get_u32(in, path);
  if (latent_dim == 0) {
    throw std::runtime_error("checkpoint has zero latent dimension: " + path);
  }

  model::ModelParams params = model::ModelParams::init(latent_dim, 0);
  auto named = params.named_tensors();
  const std::uint32_t count = get_u32(in, path);
  if (count != named.size()) {
    throw std::runtime_error("checkpoint holds " + std::to_string(count) +
                             " tensors, expected " +
                             std::to_string(named.size()));
  }
  for (auto& [expected_name, tensor] : named) {
    const std::uint16_t name_len = get_u16(in, path);
    std::string name(name_len, '\0');
    if (!in.read(name.data(), name_len)) {
      truncated(path);
    }
    if (name != expected_name) {
      throw std::runtime_error("checkpoint tensor '" + name +
                               "' where '" + expected_name + "' was expected");
    }
    const std::uint32_t rows = get_u32(in, path);
    const std::uint32_t cols = get_u32(in, path);
    if (rows != tensor->rows || cols != tensor->cols) {
      throw std::runtime_error(
          "checkpoint tensor '" + name + "' is " + std::to_string(rows) + "x" +
          std::to_string(cols) + ", expected " + tensor->shape_str());
    }
    for (double& v : tensor->data) {
      v = get_f64(in, path);
    }
  }
  char extra;
  if (in.read(&extra, 1)) {
    throw std::runtime_error("checkpoint has trailing data: " + path);
  }
  return params;
}

}  // namespace nge::io
