// gopaf/include/gopaf/corpus_io.h

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

#ifndef GOPAF_CORPUS_IO_H_
#define GOPAF_CORPUS_IO_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gopaf/types.h"

namespace gopaf {

// Binary posteriorgram layout (little-endian):
//   "GOPG" | u32 version = 1 | u32 T | u32 V | float32[T * V] log posteriors
inline constexpr char kPosteriorgramMagic[4] = {'G', 'O', 'P', 'G'};
inline constexpr std::uint32_t kPosteriorgramVersion = 1;
inline constexpr double kLoadTolerance = 1e-5;

std::string encode_posteriorgram(const Posteriorgram& post);
// Throws Error on a bad header, a length mismatch or rows that do not
// exponentiate-sum to one within `tolerance`.
Posteriorgram decode_posteriorgram(std::string_view bytes,
                                   double tolerance = kLoadTolerance);

void write_posteriorgram(const std::filesystem::path& path,
                         const Posteriorgram& post);
Posteriorgram read_posteriorgram(const std::filesystem::path& path,
                                 double tolerance = kLoadTolerance);

// One symbol per line in id order. The blank line carries a second field
// "blank". Blank lines and text after '#' are ignored.
PhoneInventory parse_inventory(std::string_view text);
std::string format_inventory(const PhoneInventory& inventory);
PhoneInventory read_inventory(const std::filesystem::path& path);
void write_inventory(const std::filesystem::path& path,
                     const PhoneInventory& inventory);

/// One JSON line of a corpus manifest.
struct ManifestEntry {
  std::string utt_id;
  std::string posteriorgram;  // relative paths resolve against the manifest
  std::vector<std::string> phones;
  std::optional<std::vector<int>> labels;
  std::optional<std::vector<FrameSpan>> alignment;
  std::optional<std::vector<std::string>> human;
  std::optional<bool> problematic;
  std::optional<std::vector<int>> targets;  // phone indices to score
  std::optional<double> frame_rate;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct Manifest {
  std::filesystem::path base_dir;
  std::vector<ManifestEntry> entries;

  std::filesystem::path posteriorgram_path(const ManifestEntry& e) const;
};

ManifestEntry parse_manifest_line(std::string_view line);
std::string format_manifest_line(const ManifestEntry& entry);
// Throws Error naming the line number of the first malformed record.
Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path,
                    std::span<const ManifestEntry> entries);

// Per-phone labels of an entry: its own labels, else all zeros when
// `unproblematic_as_correct` and problematic = false, else Levenshtein labels
// against `human`, else none.
std::optional<std::vector<int>> manifest_labels(const ManifestEntry& entry,
                                                bool unproblematic_as_correct);

// Resolves phone names; labels come from the entry, else from `human` via
// levenshtein_label. With `unproblematic_as_correct`, an entry marked
// problematic = false gets all-zero labels.
CanonicalUtterance to_utterance(const ManifestEntry& entry,
                                const PhoneInventory& inventory,
                                bool unproblematic_as_correct = false);
ManifestEntry to_manifest_entry(const CanonicalUtterance& utt,
                                const PhoneInventory& inventory,
                                std::string posteriorgram);

// Unit-cost edit alignment of the two sequences. A canonical phone gets 1
// when it is substituted or deleted, 0 when matched. Ties prefer match,
// then substitution, deletion, insertion. Throws Error on empty input.
std::vector<int> levenshtein_label(std::span<const std::string> canonical,
                                   std::span<const std::string> human);

/// One JSON line of a score file.
struct ScoreRecord {
  std::string utt_id;
  int phone_index = 0;
  std::string phone;
  std::string method;
  double value = 0.0;
  std::optional<double> occupancy;
  std::optional<FrameSpan> span;
  std::optional<int> label;
};

// Non-finite values are written as the strings "-inf", "inf" and "nan".
std::string format_score_record(const ScoreRecord& record);
ScoreRecord parse_score_record(std::string_view line);
std::vector<ScoreRecord> read_scores(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace gopaf

#endif  // GOPAF_CORPUS_IO_H_
