#pragma once

#include <string>

#include "tkge/model.hpp"

namespace tkge {

// Single-file binary checkpoint: a format-version header followed by one
// block per parameter (name, shape, data, Adam state). Serialization order
// is the trainable() order, so identical state produces identical bytes.
void save_checkpoint(const std::string& path, const ModelParameters& params);

// Throws DataError on bad magic/version or on blocks that do not match the
// scorer's expected parameter set.
ModelParameters load_checkpoint(const std::string& path);

}  // namespace tkge
