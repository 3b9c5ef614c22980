// core/src/corpus.cc

// Copyright 2026 The antispoof Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "antispoof/corpus.h"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "antispoof/error.h"
#include "binary_io.h"

namespace antispoof {

// ---------------------------------------------------------------------------
// WAV

AudioBuffer ReadWav(const std::filesystem::path &path) {
  const std::string bytes = internal::ReadFileBytes(path);
  const std::string what = "wav file " + path.string();
  internal::ByteReader in(bytes, what);
  if (in.remaining() < 12 || in.GetBytes(4) != "RIFF")
    throw Error(ErrorCategory::kInput, what + ": not a RIFF file");
  in.GetLe<std::uint32_t>();
  if (in.GetBytes(4) != "WAVE")
    throw Error(ErrorCategory::kInput, what + ": not a WAVE file");

  bool have_fmt = false;
  int channels = 0, bits = 0;
  std::uint32_t rate = 0;
  while (in.remaining() >= 8) {
    const std::string_view id = in.GetBytes(4);
    const std::uint32_t size = in.GetLe<std::uint32_t>();
    if (id == "fmt ") {
      if (size < 16) throw Error(ErrorCategory::kInput, what + ": short fmt chunk");
      const std::string_view body = in.GetBytes(size);
      internal::ByteReader fmt(body, what);
      const int format_tag = fmt.GetLe<std::uint16_t>();
      channels = fmt.GetLe<std::uint16_t>();
      rate = fmt.GetLe<std::uint32_t>();
      fmt.GetLe<std::uint32_t>();  // byte rate
      fmt.GetLe<std::uint16_t>();  // block align
      bits = fmt.GetLe<std::uint16_t>();
      if (format_tag != 1)
        throw Error(ErrorCategory::kInput,
                    what + ": unsupported encoding: format tag " +
                        std::to_string(format_tag) + " (need PCM)");
      if (channels != 1)
        throw Error(ErrorCategory::kInput,
                    what + ": unsupported channel count: " +
                        std::to_string(channels));
      if (bits != 16)
        throw Error(ErrorCategory::kInput,
                    what + ": unsupported bit depth: " + std::to_string(bits));
      if (rate == 0)
        throw Error(ErrorCategory::kInput, what + ": sample rate is zero");
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt)
        throw Error(ErrorCategory::kInput, what + ": data chunk before fmt");
      const std::string_view body = in.GetBytes(size);
      internal::ByteReader data(body, what);
      AudioBuffer audio;
      audio.sample_rate = static_cast<int>(rate);
      audio.utterance_id = path.stem().string();
      audio.samples.resize(size / 2);
      for (double &s : audio.samples)
        s = static_cast<std::int16_t>(data.GetLe<std::uint16_t>()) / 32768.0;
      return audio;
    } else {
      in.GetBytes(size);
    }
    if (size % 2 == 1 && in.remaining() > 0) in.GetBytes(1);
  }
  throw Error(ErrorCategory::kInput, what + ": no data chunk");
}

void WriteWav(const std::filesystem::path &path, const AudioBuffer &audio) {
  const auto data_bytes = static_cast<std::uint32_t>(2 * audio.samples.size());
  std::string out;
  out.reserve(44 + data_bytes);
  out.append("RIFF");
  internal::PutLe<std::uint32_t>(&out, 36 + data_bytes);
  out.append("WAVEfmt ");
  internal::PutLe<std::uint32_t>(&out, 16);
  internal::PutLe<std::uint16_t>(&out, 1);
  internal::PutLe<std::uint16_t>(&out, 1);
  internal::PutLe<std::uint32_t>(&out, audio.sample_rate);
  internal::PutLe<std::uint32_t>(&out, audio.sample_rate * 2);
  internal::PutLe<std::uint16_t>(&out, 2);
  internal::PutLe<std::uint16_t>(&out, 16);
  out.append("data");
  internal::PutLe<std::uint32_t>(&out, data_bytes);
  for (double s : audio.samples) {
    const double scaled = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
    internal::PutLe(&out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }
  internal::WriteFileAtomic(path, out);
}

// ---------------------------------------------------------------------------
// Protocols

std::string_view SplitName(Split split) {
  return split == Split::kTrain ? "train" : "dev";
}

namespace {

std::vector<std::string> Fields(const std::string &line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string f; is >> f;) out.push_back(f);
  return out;
}

bool ValidUtteranceId(const std::string &id) {
  return !id.empty() && id != "." && id != ".." &&
         id.find('/') == std::string::npos &&
         id.find('\\') == std::string::npos;
}

}  // namespace

std::vector<ProtocolEntry> ParseProtocolText(std::string_view text,
                                             Split split,
                                             std::string_view source) {
  std::vector<ProtocolEntry> out;
  std::istringstream is{std::string(text)};
  std::string line;
  for (int line_no = 1; std::getline(is, line); ++line_no) {
    const auto f = Fields(line);
    if (f.empty() || f[0][0] == '#') continue;
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    if (f.size() != 4)
      throw Error(ErrorCategory::kInput,
                  where + ": expected 4 fields (utt_id path label attack), got " +
                      std::to_string(f.size()));
    ProtocolEntry e;
    e.utterance_id = f[0];
    e.audio_path = f[1];
    e.split = split;
    if (!ValidUtteranceId(e.utterance_id))
      throw Error(ErrorCategory::kInput,
                  where + ": bad utterance id '" + e.utterance_id + "'");
    if (f[2] == "human")
      e.label = Label::kGenuine;
    else if (f[2] == "spoof")
      e.label = Label::kSpoof;
    else
      throw Error(ErrorCategory::kInput,
                  where + ": label must be human or spoof, got '" + f[2] + "'");
    try {
      e.attack = ParseAttack(f[3]);
    } catch (const Error &err) {
      throw Error(ErrorCategory::kInput, where + ": " + err.what());
    }
    if (e.label == Label::kGenuine && e.attack != Attack::kNone)
      throw Error(ErrorCategory::kInput,
                  where + ": human utterance with attack tag " + f[3]);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ProtocolEntry> ParseProtocol(const std::filesystem::path &path,
                                         Split split) {
  return ParseProtocolText(internal::ReadFileBytes(path), split, path.string());
}

std::string FormatProtocol(std::span<const ProtocolEntry> entries) {
  std::string out;
  for (const ProtocolEntry &e : entries) {
    out += e.utterance_id + "\t" + e.audio_path + "\t" +
           (e.label == Label::kGenuine ? "human" : "spoof") + "\t" +
           std::string(AttackName(e.attack)) + "\n";
  }
  return out;
}

ProtocolCounts CountProtocol(std::span<const ProtocolEntry> entries) {
  ProtocolCounts counts;
  for (const ProtocolEntry &e : entries) {
    if (e.label == Label::kGenuine) {
      ++counts.genuine;
    } else {
      ++counts.spoof;
      if (e.attack == Attack::kNone)
        ++counts.untagged_spoof;
      else
        ++counts.per_attack[static_cast<int>(e.attack) - 1];
    }
  }
  return counts;
}

std::string ConvertAsvspoof2015Protocol(std::string_view text,
                                        std::string_view audio_dir) {
  std::istringstream is{std::string(text)};
  std::string line, out;
  for (int line_no = 1; std::getline(is, line); ++line_no) {
    const auto f = Fields(line);
    if (f.empty()) continue;
    const std::string where = "ASVspoof protocol:" + std::to_string(line_no);
    if (f.size() != 5)
      throw Error(ErrorCategory::kInput, where + ": expected 5 fields");
    const std::string &utt = f[1];
    const std::string &attack = f[3];
    const std::string &key = f[4];
    std::string label, tag;
    if (key == "human") {
      label = "human";
      tag = "-";
    } else if (key == "spoof") {
      label = "spoof";
      try {
        tag = std::string(AttackName(ParseAttack(attack)));
      } catch (const Error &) {
        throw Error(ErrorCategory::kInput,
                    where + ": unknown attack tag '" + attack + "'");
      }
    } else {
      throw Error(ErrorCategory::kInput, where + ": unknown key '" + key + "'");
    }
    std::string path = std::string(audio_dir);
    if (!path.empty() && path.back() != '/') path += '/';
    out += utt + "\t" + path + utt + ".wav\t" + label + "\t" + tag + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Feature cache

std::string Sha256Hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1)
    throw Error(ErrorCategory::kIo, "SHA-256 computation failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

namespace {

std::string DynamicsDirName(Dynamics d) {
  switch (d) {
    case Dynamics::kStatic: return "static";
    case Dynamics::kStaticDeltas: return "static_deltas";
    case Dynamics::kDeltasOnly: return "deltas";
  }
  return "unknown";
}

}  // namespace

FeatureCache::FeatureCache(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_);
  LoadManifest();
}

std::filesystem::path FeatureCache::PathFor(const Key &key) const {
  return root_ / std::string(FamilyName(key.family)) /
         DynamicsDirName(key.dynamics) / (key.utterance_id + ".ftr");
}

void FeatureCache::LoadManifest() {
  const auto path = root_ / "manifest.tsv";
  if (!std::filesystem::exists(path)) return;
  std::istringstream is(internal::ReadFileBytes(path));
  std::string line;
  for (int line_no = 1; std::getline(is, line); ++line_no) {
    const auto f = Fields(line);
    if (f.empty()) continue;
    if (f.size() != 5)
      throw Error(ErrorCategory::kCorruption,
                  path.string() + ":" + std::to_string(line_no) +
                      ": expected 5 fields");
    auto id = [&](const std::string &text) {
      int v = -1;
      const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
      if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw Error(ErrorCategory::kCorruption,
                    path.string() + ":" + std::to_string(line_no) +
                        ": bad id '" + text + "'");
      return v;
    };
    Key key{f[0], FamilyFromId(id(f[1])), DynamicsFromId(id(f[2]))};
    records_[key] = Record{f[3], f[4]};
  }
}

void FeatureCache::SaveManifest() const {
  std::string text;
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (const auto &[key, rec] : records_) {
      text += key.utterance_id + "\t" +
              std::to_string(static_cast<int>(key.family)) + "\t" +
              std::to_string(static_cast<int>(key.dynamics)) + "\t" +
              rec.relative_path + "\t" + rec.digest + "\n";
    }
  }
  internal::WriteFileAtomic(root_ / "manifest.tsv", text);
}

std::size_t FeatureCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return records_.size();
}

bool FeatureCache::Contains(const Key &key) const {
  std::lock_guard<std::mutex> lock(mu_);
  return records_.count(key) > 0;
}

bool FeatureCache::IsValid(const Key &key) const {
  Record rec;
  {
    std::lock_guard<std::mutex> lock(mu_);
    const auto it = records_.find(key);
    if (it == records_.end()) return false;
    rec = it->second;
  }
  const auto path = root_ / rec.relative_path;
  if (!std::filesystem::exists(path)) return false;
  try {
    return Sha256Hex(internal::ReadFileBytes(path)) == rec.digest;
  } catch (const Error &) {
    return false;
  }
}

FeatureMatrix FeatureCache::Load(const Key &key) const {
  Record rec;
  {
    std::lock_guard<std::mutex> lock(mu_);
    const auto it = records_.find(key);
    if (it == records_.end())
      throw Error(ErrorCategory::kIo,
                  "no cached " + std::string(FamilyName(key.family)) + "/" +
                      std::string(DynamicsName(key.dynamics)) +
                      " features for " + key.utterance_id +
                      "; run extract first");
    rec = it->second;
  }
  const auto path = root_ / rec.relative_path;
  const std::string bytes = internal::ReadFileBytes(path);
  if (Sha256Hex(bytes) != rec.digest)
    throw Error(ErrorCategory::kCorruption,
                "digest mismatch for " + path.string());
  FeatureMatrix out = ParseFeatures(bytes);
  if (out.config.family != key.family || out.config.dynamics != key.dynamics)
    throw Error(ErrorCategory::kCorruption,
                path.string() + " holds features of a different configuration");
  out.utterance_id = key.utterance_id;
  return out;
}

void FeatureCache::Store(const FeatureMatrix &features) {
  if (!ValidUtteranceId(features.utterance_id))
    throw Error(ErrorCategory::kInput,
                "cannot cache features with utterance id '" +
                    features.utterance_id + "'");
  const Key key{features.utterance_id, features.config.family,
                features.config.dynamics};
  const std::string bytes = SerializeFeatures(features);
  const auto path = PathFor(key);
  internal::WriteFileAtomic(path, bytes);
  Record rec{std::filesystem::relative(path, root_).generic_string(),
             Sha256Hex(bytes)};
  std::lock_guard<std::mutex> lock(mu_);
  records_[key] = std::move(rec);
}

}  // namespace antispoof
