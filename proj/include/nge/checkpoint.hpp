#pragma once

#include <cstdint>
#include <string>

#include "nge/model.hpp"

namespace nge::io {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Binary container: 8-byte magic "NGECKPT1", then version, latent_dim and
// tensor count (u32 little-endian each), then every named tensor in
// ModelParams::named_tensors() order as u16 name length + name bytes +
// u32 rows + u32 cols + row-major f64 little-endian data. Written to a
// temp file renamed into place. Round trips are bit-exact.
void save_checkpoint(const model::ModelParams& params, const std::string& path);

// Throws std::runtime_error on missing files, foreign magic, a version
// mismatch (naming both versions), unexpected tensor names/shapes, or
// truncation.
model::ModelParams load_checkpoint(const std::string& path);

}  // namespace nge::io
