// gopaf/src/corpus_io.cc

// Copyright 2026 The gopaf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gopaf/corpus_io.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace gopaf {

namespace {

using nlohmann::json;

constexpr std::size_t kHeaderBytes = 16;

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}

std::uint32_t get_u32(std::string_view bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + b])) << (8 * b);
  return v;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

json number_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error("expected a number, got " + j.dump());
}

json span_to_json(const FrameSpan& s) { return json::array({s.first, s.last}); }

FrameSpan span_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error("a span must be [t1, t2]");
  return {j[0].get<int>(), j[1].get<int>()};
}

template <typename T>
std::optional<T> optional_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

json parse_json_object(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error("record is not a JSON object");
  return j;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

std::string encode_posteriorgram(const Posteriorgram& post) {
  std::string out;
  out.reserve(kHeaderBytes + 4 * post.data().size());
  out.append(kPosteriorgramMagic, 4);
  put_u32(out, kPosteriorgramVersion);
  put_u32(out, static_cast<std::uint32_t>(post.frames()));
  put_u32(out, static_cast<std::uint32_t>(post.symbols()));
  for (double x : post.data()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(x)));
  return out;
}

Posteriorgram decode_posteriorgram(std::string_view bytes, double tolerance) {
  if (bytes.size() < kHeaderBytes) throw Error("posteriorgram file is truncated");
  if (std::memcmp(bytes.data(), kPosteriorgramMagic, 4) != 0)
    throw Error("not a posteriorgram file (bad magic)");
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kPosteriorgramVersion)
    throw Error("unsupported posteriorgram version " + std::to_string(version));
  const std::uint64_t frames = get_u32(bytes, 8);
  const std::uint64_t symbols = get_u32(bytes, 12);
  if (frames == 0 || symbols == 0) throw Error("posteriorgram has no frames or symbols");
  if (frames > std::numeric_limits<int>::max() || symbols > std::numeric_limits<int>::max())
    throw Error("posteriorgram dimensions too large");
  if (bytes.size() != kHeaderBytes + 4 * frames * symbols)
    throw Error("posteriorgram size " + std::to_string(bytes.size()) +
                " does not match header (" + std::to_string(frames) + " x " +
                std::to_string(symbols) + ")");
  std::vector<double> data(frames * symbols);
  for (std::size_t k = 0; k < data.size(); ++k)
    data[k] = std::bit_cast<float>(get_u32(bytes, kHeaderBytes + 4 * k));
  return Posteriorgram(static_cast<int>(frames), static_cast<int>(symbols),
                       std::move(data), tolerance);
}

void write_posteriorgram(const std::filesystem::path& path, const Posteriorgram& post) {
  write_file(path, encode_posteriorgram(post));
}

Posteriorgram read_posteriorgram(const std::filesystem::path& path, double tolerance) {
  try {
    return decode_posteriorgram(read_file(path), tolerance);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

PhoneInventory parse_inventory(std::string_view text) {
  std::vector<std::string> names;
  std::optional<PhoneId> blank;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    std::istringstream fields(trim(raw.substr(0, hash)));
    std::string name, mark, extra;
    if (!(fields >> name)) continue;
    if (fields >> mark) {
      if (mark != "blank" || (fields >> extra))
        throw Error("inventory line " + std::to_string(lineno) + ": unexpected '" + mark + "'");
      if (blank) throw Error("inventory marks more than one blank");
      blank = static_cast<PhoneId>(names.size());
    }
    names.push_back(name);
  }
  if (!blank) throw Error("inventory has no blank symbol");
  return PhoneInventory(std::move(names), *blank);
}

std::string format_inventory(const PhoneInventory& inventory) {
  std::string out;
  for (PhoneId i = 0; i < inventory.size(); ++i) {
    out += inventory.name(i);
    if (i == inventory.blank()) out += " blank";
    out += '\n';
  }
  return out;
}

PhoneInventory read_inventory(const std::filesystem::path& path) {
  try {
    return parse_inventory(read_file(path));
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_inventory(const std::filesystem::path& path, const PhoneInventory& inventory) {
  write_file(path, format_inventory(inventory));
}

std::filesystem::path Manifest::posteriorgram_path(const ManifestEntry& e) const {
  std::filesystem::path p(e.posteriorgram);
  return p.is_absolute() ? p : base_dir / p;
}

ManifestEntry parse_manifest_line(std::string_view line) {
  const json j = parse_json_object(line);
  ManifestEntry e;
  try {
    e.utt_id = j.at("utt_id").get<std::string>();
    e.posteriorgram = j.at("posteriorgram").get<std::string>();
    e.phones = j.at("phones").get<std::vector<std::string>>();
    e.labels = optional_field<std::vector<int>>(j, "labels");
    if (auto it = j.find("alignment"); it != j.end() && !it->is_null()) {
      std::vector<FrameSpan> spans;
      for (const json& s : *it) spans.push_back(span_from_json(s));
      e.alignment = std::move(spans);
    }
    e.human = optional_field<std::vector<std::string>>(j, "human");
    e.problematic = optional_field<bool>(j, "problematic");
    e.targets = optional_field<std::vector<int>>(j, "targets");
    e.frame_rate = optional_field<double>(j, "frame_rate");
  } catch (const json::exception& ex) {
    throw Error(std::string("malformed manifest record: ") + ex.what());
  }
  if (e.utt_id.empty()) throw Error("manifest record without utt_id");
  return e;
}

std::string format_manifest_line(const ManifestEntry& e) {
  json j = json::object();
  j["utt_id"] = e.utt_id;
  j["posteriorgram"] = e.posteriorgram;
  j["phones"] = e.phones;
  if (e.labels) j["labels"] = *e.labels;
  if (e.alignment) {
    json spans = json::array();
    for (const FrameSpan& s : *e.alignment) spans.push_back(span_to_json(s));
    j["alignment"] = std::move(spans);
  }
  if (e.human) j["human"] = *e.human;
  if (e.problematic) j["problematic"] = *e.problematic;
  if (e.targets) j["targets"] = *e.targets;
  if (e.frame_rate) j["frame_rate"] = *e.frame_rate;
  return j.dump();
}

Manifest read_manifest(const std::filesystem::path& path) {
  Manifest m;
  m.base_dir = path.parent_path();
  std::istringstream in(read_file(path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      m.entries.push_back(parse_manifest_line(line));
    } catch (const Error& e) {
      throw Error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return m;
}

void write_manifest(const std::filesystem::path& path,
                    std::span<const ManifestEntry> entries) {
  std::string out;
  for (const ManifestEntry& e : entries) out += format_manifest_line(e) + '\n';
  write_file(path, out);
}

std::optional<std::vector<int>> manifest_labels(const ManifestEntry& entry,
                                                bool unproblematic_as_correct) {
  if (entry.labels) return entry.labels;
  if (unproblematic_as_correct && entry.problematic == false)
    return std::vector<int>(entry.phones.size(), 0);
  if (entry.human) return levenshtein_label(entry.phones, *entry.human);
  return std::nullopt;
}

CanonicalUtterance to_utterance(const ManifestEntry& entry,
                                const PhoneInventory& inventory,
                                bool unproblematic_as_correct) {
  CanonicalUtterance utt;
  utt.id = entry.utt_id;
  for (const std::string& name : entry.phones) utt.phones.push_back(inventory.id(name));
  utt.labels = manifest_labels(entry, unproblematic_as_correct);
  utt.alignment = entry.alignment;
  utt.validate(inventory);
  return utt;
}

ManifestEntry to_manifest_entry(const CanonicalUtterance& utt,
                                const PhoneInventory& inventory,
                                std::string posteriorgram) {
  ManifestEntry e;
  e.utt_id = utt.id;
  e.posteriorgram = std::move(posteriorgram);
  for (PhoneId p : utt.phones) e.phones.push_back(inventory.name(p));
  e.labels = utt.labels;
  e.alignment = utt.alignment;
  return e;
}

std::vector<int> levenshtein_label(std::span<const std::string> canonical,
                                   std::span<const std::string> human) {
  if (canonical.empty() || human.empty())
    throw Error("Levenshtein labelling needs two non-empty sequences");
  const std::size_t n = canonical.size(), m = human.size();
  std::vector<std::vector<int>> d(n + 1, std::vector<int>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      d[i][j] = std::min({d[i - 1][j - 1] + (canonical[i - 1] == human[j - 1] ? 0 : 1),
                          d[i - 1][j] + 1, d[i][j - 1] + 1});

  std::vector<int> labels(n, 0);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && canonical[i - 1] == human[j - 1] && d[i][j] == d[i - 1][j - 1]) {
      --i, --j;
    } else if (i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + 1) {
      labels[--i] = 1;
      --j;
    } else if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      labels[--i] = 1;
    } else {
      --j;
    }
  }
  return labels;
}

std::string format_score_record(const ScoreRecord& r) {
  json j = json::object();
  j["utt_id"] = r.utt_id;
  j["phone_index"] = r.phone_index;
  j["phone"] = r.phone;
  j["method"] = r.method;
  j["value"] = number_to_json(r.value);
  j["occupancy"] = r.occupancy ? number_to_json(*r.occupancy) : json(nullptr);
  j["span"] = r.span ? span_to_json(*r.span) : json(nullptr);
  if (r.label) j["label"] = *r.label;
  return j.dump();
}

ScoreRecord parse_score_record(std::string_view line) {
  const json j = parse_json_object(line);
  ScoreRecord r;
  try {
    r.utt_id = j.at("utt_id").get<std::string>();
    r.phone_index = j.at("phone_index").get<int>();
    r.phone = j.value("phone", std::string());
    r.method = j.value("method", std::string());
    r.value = number_from_json(j.at("value"));
    if (auto it = j.find("occupancy"); it != j.end() && !it->is_null())
      r.occupancy = number_from_json(*it);
    if (auto it = j.find("span"); it != j.end() && !it->is_null())
      r.span = span_from_json(*it);
    r.label = optional_field<int>(j, "label");
  } catch (const json::exception& ex) {
    throw Error(std::string("malformed score record: ") + ex.what());
  }
  return r;
}

std::vector<ScoreRecord> read_scores(const std::filesystem::path& path) {
  std::vector<ScoreRecord> out;
  std::istringstream in(read_file(path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      out.push_back(parse_score_record(line));
    } catch (const Error& e) {
      throw Error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace gopaf
