// Copyright 2026 The linkrisk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "fnv_internal.h"
#include "json.hpp"
#include "linkrisk/anonymity.h"

namespace linkrisk {
namespace {

using Json = nlohmann::json;

constexpr char kFormat[] = "linkrisk-distance-matrix";
constexpr char kOrdering[] = "upper-triangle-row-major";
constexpr char kDtype[] = "float32-le";
constexpr std::uint64_t kMaxHeaderBytes = 1ULL << 30;

void PutLe(std::string& out, std::uint64_t v, int bytes) {
  for (int b = 0; b < bytes; ++b) {
    out += static_cast<char>((v >> (8 * b)) & 0xff);
  }
}

std::uint64_t GetLe(const unsigned char* p, int bytes) {
  std::uint64_t v = 0;
  for (int b = bytes - 1; b >= 0; --b) v = (v << 8) | p[b];
  return v;
}

}  // namespace

absl::Status WriteDistanceMatrix(const DistanceMatrix& m, std::ostream& out) {
  std::string payload;
  payload.reserve(m.packed().size() * 4);
  for (double v : m.packed()) {
    PutLe(payload, std::bit_cast<std::uint32_t>(static_cast<float>(v)), 4);
  }
  Fnv1a64 checksum;
  checksum.Update(payload);
  const Json header = {{"format", kFormat},
                       {"version", 1},
                       {"keys", m.keys()},
                       {"ordering", kOrdering},
                       {"dtype", kDtype},
                       {"count", m.size()},
                       {"checksum", absl::StrCat("fnv1a64:", checksum.hex())}};
  const std::string header_text = header.dump();
  std::string prefix;
  PutLe(prefix, header_text.size(), 8);
  out << prefix << header_text << payload;
  if (!out) return absl::InternalError("failed writing distance matrix");
  return absl::OkStatus();
}

absl::StatusOr<DistanceMatrix> ReadDistanceMatrix(std::istream& in) {
  unsigned char len_bytes[8];
  if (!in.read(reinterpret_cast<char*>(len_bytes), 8)) {
    return absl::InvalidArgumentError("truncated matrix header length");
  }
  const std::uint64_t header_len = GetLe(len_bytes, 8);
  if (header_len == 0 || header_len > kMaxHeaderBytes) {
    return absl::InvalidArgumentError("implausible matrix header length");
  }
  std::string header_text(header_len, '\0');
  if (!in.read(header_text.data(), static_cast<std::streamsize>(header_len))) {
    return absl::InvalidArgumentError("truncated matrix header");
  }
  const Json header = Json::parse(header_text, nullptr, false);
  if (header.is_discarded() || !header.is_object()) {
    return absl::InvalidArgumentError("matrix header is not a JSON object");
  }
  if (header.value("format", "") != kFormat || header.value("version", 0) != 1 ||
      header.value("ordering", "") != kOrdering ||
      header.value("dtype", "") != kDtype) {
    return absl::InvalidArgumentError("unsupported matrix format");
  }
  if (!header.contains("keys") || !header["keys"].is_array()) {
    return absl::InvalidArgumentError("matrix header has no keys");
  }
  std::vector<std::string> keys;
  for (const Json& key : header["keys"]) {
    if (!key.is_string()) return absl::InvalidArgumentError("non-string key");
    keys.push_back(key.get<std::string>());
  }
  if (header.value("count", std::size_t{0}) != keys.size()) {
    return absl::InvalidArgumentError("count does not match keys");
  }
  const std::size_t n = keys.size();
  const std::size_t values = n < 2 ? 0 : n * (n - 1) / 2;
  std::string payload(values * 4, '\0');
  if (!in.read(payload.data(), static_cast<std::streamsize>(payload.size()))) {
    return absl::InvalidArgumentError("truncated matrix payload");
  }
  Fnv1a64 checksum;
  checksum.Update(payload);
  if (header.value("checksum", "") != absl::StrCat("fnv1a64:", checksum.hex())) {
    return absl::DataLossError("matrix checksum mismatch");
  }
  std::vector<double> upper(values);
  const auto* bytes = reinterpret_cast<const unsigned char*>(payload.data());
  for (std::size_t i = 0; i < values; ++i) {
    upper[i] = std::bit_cast<float>(
        static_cast<std::uint32_t>(GetLe(bytes + 4 * i, 4)));
  }
  return DistanceMatrix::FromPacked(std::move(keys), std::move(upper));
}

}  // namespace linkrisk
