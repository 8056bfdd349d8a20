#pragma once

#include <filesystem>

#include "specgal/problems.hpp"

namespace specgal::io {

enum class MatrixFileFormat { text, binary };

// Container format (version 1), both variants carry a header (dim, a_hat flag)
// followed by row-major complex entries for T-hat, M, and optional A-hat.
//   text:   "specgal matrices v1" / "dim <n> a_hat <0|1>" / "t_hat" <entries>
//           "mass" <entries> ["a_hat" <entries>], entries as "re im" pairs
//   binary: magic "SGMXBIN1", u32 version, u32 flags (bit0 = a_hat), u64 dim,
//           raw little-endian doubles (re, im) per entry
// Loading validates finiteness, Hermiticity of T-hat and M, and
// positive-definiteness of M, and reports the first violated check.
problems::FormMatrices import_matrices(const std::filesystem::path& path);

void export_matrices(const std::filesystem::path& path, const problems::FormMatrices& fm,
                     MatrixFileFormat format);

}  // namespace specgal::io
