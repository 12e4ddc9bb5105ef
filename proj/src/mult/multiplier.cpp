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

#include "axnas/mult/multiplier.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "axnas/errors.hpp"

namespace axnas::mult {
namespace {

constexpr std::string_view kMagic = "AXMULT01";

constexpr std::array<ReferenceRow, 4> kReferenceRows{{
    {"mul8u_1JFF", 0.0, 0.0, 0.0, 0.0, 0.391},
    {"mul8u_2AC", 1.25, 98.12, 0.04, 0.12, 0.311},
    {"mul8u_NGR", 1.90, 96.37, 0.07, 0.25, 0.276},
    {"mul8u_DM1", 4.73, 98.16, 0.20, 0.89, 0.195},
}};

std::string position(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

MultiplierSpec::Table read_binary(const std::filesystem::path& path,
                                  std::string_view bytes) {
  const std::size_t payload = bytes.size() - kMagic.size();
  if (payload != kTableSize * 2) {
    throw MultiplierError(path.string() + ": expected " +
                          std::to_string(kTableSize) + " entries, found " +
                          std::to_string(payload / 2) +
                          (payload % 2 ? " and a trailing odd byte" : "") +
                          " (byte offset " + std::to_string(bytes.size()) +
                          ")");
  }
  MultiplierSpec::Table table(kTableSize);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) +
                  kMagic.size();
  for (std::size_t i = 0; i < kTableSize; ++i) {
    table[i] = static_cast<std::uint16_t>(p[2 * i] | (p[2 * i + 1] << 8));
  }
  return table;
}

bool parse_field(std::string_view tok, long long& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

MultiplierSpec::Table read_text(const std::filesystem::path& path,
                                const std::string& bytes) {
  MultiplierSpec::Table table(kTableSize, 0);
  std::vector<bool> seen(kTableSize, false);
  std::size_t count = 0;
  std::istringstream in(bytes);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    std::array<long long, 3> fields{};
    std::size_t n = 0;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      if (n == 3 || !parse_field(line.substr(i, j - i), fields[n])) {
        throw MultiplierError(position(path, line_no) +
                              ": expected three decimal fields \"a b p\"");
      }
      ++n;
      i = j;
    }
    if (n == 0) continue;
    if (n != 3) {
      throw MultiplierError(position(path, line_no) +
                            ": expected three decimal fields \"a b p\"");
    }
    const auto [a, b, p] = fields;
    if (a < 0 || a > 255 || b < 0 || b > 255) {
      throw MultiplierError(position(path, line_no) +
                            ": operand out of range [0, 255]");
    }
    if (p < 0 || p > 65535) {
      throw MultiplierError(position(path, line_no) + ": product " +
                            std::to_string(p) + " out of range [0, 65535]");
    }
    const auto addr = lut_address(static_cast<std::uint8_t>(a),
                                  static_cast<std::uint8_t>(b));
    if (seen[addr]) {
      throw MultiplierError(position(path, line_no) + ": duplicate pair (" +
                            std::to_string(a) + ", " + std::to_string(b) + ")");
    }
    seen[addr] = true;
    table[addr] = static_cast<std::uint16_t>(p);
    ++count;
  }
  if (count != kTableSize) {
    throw MultiplierError(path.string() + ": expected " +
                          std::to_string(kTableSize) + " entries, found " +
                          std::to_string(count) + " (after line " +
                          std::to_string(line_no) + ")");
  }
  return table;
}

}  // namespace

MultiplierSpec::MultiplierSpec(std::string name, Table table,
                               double energy_per_op, MultiplierSource source)
    : name_(std::move(name)),
      table_(std::move(table)),
      weight_major_(kTableSize),
      energy_per_op_(energy_per_op),
      source_(source) {
  if (table_.size() != kTableSize) {
    throw MultiplierError("multiplier '" + name_ + "': table has " +
                          std::to_string(table_.size()) + " entries, expected " +
                          std::to_string(kTableSize));
  }
  if (!(energy_per_op_ > 0.0)) {
    throw MultiplierError("multiplier '" + name_ +
                          "': energy_per_op must be positive");
  }
  for (std::uint32_t a = 0; a < 256; ++a) {
    for (std::uint32_t w = 0; w < 256; ++w) {
      weight_major_[(w << 8) | a] = table_[(a << 8) | w];
    }
  }
}

std::uint64_t MultiplierSpec::checksum() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint16_t v : table_) {
    for (int byte = 0; byte < 2; ++byte) {
      h ^= static_cast<std::uint8_t>(v >> (8 * byte));
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

bool MultiplierSpec::is_exact() const {
  for (std::uint32_t a = 0; a < 256; ++a) {
    for (std::uint32_t b = 0; b < 256; ++b) {
      if (table_[(a << 8) | b] != a * b) return false;
    }
  }
  return true;
}

MultiplierSpec build_builtin_multiplier(BuiltinKind kind) {
  const int k = kind.truncated_bits;
  if (k < 0 || k > 4) {
    throw MultiplierError("trunc_k requires k in 1..4, got " +
                          std::to_string(k));
  }
  const std::uint32_t mask = ~((1u << k) - 1u) & 0xFFu;
  MultiplierSpec::Table table(kTableSize);
  for (std::uint32_t a = 0; a < 256; ++a) {
    for (std::uint32_t b = 0; b < 256; ++b) {
      table[(a << 8) | b] = static_cast<std::uint16_t>((a & mask) * (b & mask));
    }
  }
  // Truncated-multiplier energies are placeholders scaled off the exact one.
  const double energy = kExactEnergy * (1.0 - 0.05 * k);
  std::string name = k == 0 ? "exact" : "trunc_" + std::to_string(k);
  return MultiplierSpec(std::move(name), std::move(table), energy,
                        MultiplierSource::kBuiltin);
}

std::optional<BuiltinKind> parse_builtin_name(std::string_view name) {
  if (name == "exact") return BuiltinKind::exact();
  if (name.size() == 7 && name.substr(0, 6) == "trunc_" && name[6] >= '1' &&
      name[6] <= '4') {
    return BuiltinKind::trunc(name[6] - '0');
  }
  return std::nullopt;
}

MultiplierSpec load_multiplier(const std::filesystem::path& path,
                               double energy_per_op) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw MultiplierError(path.string() + ": cannot open multiplier file");
  }
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  MultiplierSpec::Table table;
  if (bytes.compare(0, kMagic.size(), kMagic) == 0) {
    table = read_binary(path, bytes);
  } else if (bytes.size() >= 6 && bytes.compare(0, 6, "AXMULT") == 0) {
    throw MultiplierError(path.string() +
                          ": unsupported header (byte offset 0), expected " +
                          std::string(kMagic));
  } else {
    table = read_text(path, bytes);
  }
  return MultiplierSpec(path.stem().string(), std::move(table), energy_per_op,
                        MultiplierSource::kImported);
}

void save_multiplier_binary(const MultiplierSpec& m,
                            const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw MultiplierError(path.string() + ": cannot open for writing");
  out.write(kMagic.data(), static_cast<std::streamsize>(kMagic.size()));
  std::string buf(kTableSize * 2, '\0');
  auto table = m.table();
  for (std::size_t i = 0; i < kTableSize; ++i) {
    buf[2 * i] = static_cast<char>(table[i] & 0xFF);
    buf[2 * i + 1] = static_cast<char>(table[i] >> 8);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw MultiplierError(path.string() + ": write failed");
}

void save_multiplier_text(const MultiplierSpec& m,
                          const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw MultiplierError(path.string() + ": cannot open for writing");
  out << "# " << m.name() << ": a b product\n";
  for (std::uint32_t a = 0; a < 256; ++a) {
    for (std::uint32_t b = 0; b < 256; ++b) {
      out << a << ' ' << b << ' '
          << m.multiply(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b))
          << '\n';
    }
  }
}

std::span<const ReferenceRow> reference_multipliers() { return kReferenceRows; }

std::optional<ReferenceRow> find_reference(std::string_view name) {
  for (const auto& row : kReferenceRows) {
    if (row.name == name || row.name.substr(6) == name) return row;
  }
  return std::nullopt;
}

MultiplierPtr resolve_multiplier(std::string_view name_or_path,
                                 std::optional<double> energy_override) {
  if (auto kind = parse_builtin_name(name_or_path)) {
    auto spec = build_builtin_multiplier(*kind);
    if (energy_override) {
      return std::make_shared<const MultiplierSpec>(
          spec.name(), MultiplierSpec::Table(spec.table().begin(), spec.table().end()),
          *energy_override, MultiplierSource::kBuiltin);
    }
    return std::make_shared<const MultiplierSpec>(std::move(spec));
  }
  const std::filesystem::path path(name_or_path);
  if (!std::filesystem::exists(path)) {
    throw MultiplierError("unknown multiplier '" + std::string(name_or_path) +
                          "': not a builtin (exact, trunc_1..trunc_4) and no "
                          "such file");
  }
  double energy = kExactEnergy;
  if (energy_override) {
    energy = *energy_override;
  } else if (auto ref = find_reference(path.stem().string())) {
    energy = ref->energy;
  }
  return std::make_shared<const MultiplierSpec>(load_multiplier(path, energy));
}

}  // namespace axnas::mult
