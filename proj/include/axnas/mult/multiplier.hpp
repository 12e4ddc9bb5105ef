// Copyright 2026 The axnas Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace axnas::mult {

inline constexpr std::size_t kTableSize = 65536;

/// Forms the 16-bit LUT address from two unsigned 8-bit operands.
constexpr std::uint32_t lut_address(std::uint8_t a, std::uint8_t b) {
  return (static_cast<std::uint32_t>(a) << 8) | b;
}

enum class MultiplierSource { kBuiltin, kImported };

/// An unsigned 8x8-bit multiplier described by its full product table.
///
/// The table is indexed by `lut_address(a, b)`. A weight-major copy of the
/// table is kept alongside so convolution kernels can stream one weight's
/// 256 products contiguously. Instances are immutable and safe to share.
class MultiplierSpec {
 public:
  using Table = std::vector<std::uint16_t>;

  MultiplierSpec(std::string name, Table table, double energy_per_op,
                 MultiplierSource source);

  const std::string& name() const { return name_; }
  std::span<const std::uint16_t> table() const { return table_; }
  double energy_per_op() const { return energy_per_op_; }
  MultiplierSource source() const { return source_; }

  std::uint16_t multiply(std::uint8_t a, std::uint8_t b) const {
    return table_[lut_address(a, b)];
  }

  /// Row of 256 products `w * a` for a = 0..255, i.e. entry a is
  /// table[(a << 8) | w].
  const std::uint16_t* weight_row(std::uint8_t w) const {
    return weight_major_.data() + (static_cast<std::size_t>(w) << 8);
  }

  /// FNV-1a 64 over the little-endian table bytes.
  std::uint64_t checksum() const;

  bool is_exact() const;

 private:
  std::string name_;
  Table table_;
  Table weight_major_;
  double energy_per_op_;
  MultiplierSource source_;
};

using MultiplierPtr = std::shared_ptr<const MultiplierSpec>;

/// Builtin multipliers: exact (k = 0) or truncation of the k low operand bits.
struct BuiltinKind {
  int truncated_bits = 0;  // 0 = exact, 1..4 = trunc_k

  static BuiltinKind exact() { return {0}; }
  static BuiltinKind trunc(int k) { return {k}; }
};

/// Energy of the exact 8-bit multiplier, taken from the mul8u_1JFF row.
inline constexpr double kExactEnergy = 0.391;

MultiplierSpec build_builtin_multiplier(BuiltinKind kind);

/// Parses "exact" or "trunc_1".."trunc_4".
std::optional<BuiltinKind> parse_builtin_name(std::string_view name);

/// Loads a multiplier table in the binary ("AXMULT01") or the text
/// ("a b p" per line) format. The format is detected from the magic bytes.
/// Throws MultiplierError with a position on malformed input.
MultiplierSpec load_multiplier(const std::filesystem::path& path,
                               double energy_per_op);

/// Writes the binary format: magic + 65536 little-endian u16 products.
void save_multiplier_binary(const MultiplierSpec& m,
                            const std::filesystem::path& path);
void save_multiplier_text(const MultiplierSpec& m,
                          const std::filesystem::path& path);

/// Published characteristics of the EvoApproxLib multipliers used as
/// references (errors in percent, energy in the source's units).
struct ReferenceRow {
  std::string_view name;
  double mre_pct;
  double ep_pct;
  double mae_pct;
  double wce_pct;
  double energy;
};

std::span<const ReferenceRow> reference_multipliers();
std::optional<ReferenceRow> find_reference(std::string_view name);

/// Resolves a builtin name, or a table file path. For files, the energy is
/// `energy_override` if set, else the reference energy when the file stem
/// names a known EvoApproxLib multiplier, else the exact-multiplier energy.
MultiplierPtr resolve_multiplier(std::string_view name_or_path,
                                 std::optional<double> energy_override = {});

}  // namespace axnas::mult
