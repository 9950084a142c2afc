/*
 * Copyright 2026 The ragfix Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ragfix/corpus.hpp"

#include <algorithm>
#include <deque>
#include <system_error>

#include "ragfix/error.hpp"
#include "ragfix/text.hpp"

namespace ragfix {

std::string_view to_string(Origin origin) noexcept {
  switch (origin) {
    case Origin::kOfficialDocs: return "official_docs";
    case Origin::kTutorial: return "tutorial";
    case Origin::kCommunity: return "community";
  }
  return "official_docs";
}

Origin origin_from_string(std::string_view name) {
  if (name == "official_docs") return Origin::kOfficialDocs;
  if (name == "tutorial") return Origin::kTutorial;
  if (name == "community") return Origin::kCommunity;
  throw FormatError("unknown origin '" + std::string(name) + "'");
}

void ChunkingConfig::validate() const {
  if (chunk_size == 0) throw ConfigError("chunk_size must be positive");
  if (overlap >= chunk_size) {
    throw ConfigError("overlap (" + std::to_string(overlap) + ") must be smaller than chunk_size (" +
                      std::to_string(chunk_size) + ")");
  }
  if (separators.empty() || !separators.back().empty()) {
    throw ConfigError("separator list must end with the empty (per-character) separator");
  }
}

namespace {

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const noexcept { return end - begin; }
};

class RecursiveSplitter {
 public:
  RecursiveSplitter(const std::u32string& text, const ChunkingConfig& config)
      : text_(text), config_(config) {
    for (const auto& s : config.separators) separators_.push_back(utf8_decode(s));
  }

  std::vector<Span> run() {
    std::vector<Span> out;
    split({0, text_.size()}, 0, out);
    return out;
  }

 private:
  std::size_t find(const std::u32string& needle, std::size_t from, std::size_t end) const {
    const auto pos = std::u32string_view(text_).substr(0, end).find(needle, from);
    return pos == std::u32string_view::npos ? end : pos;
  }

  void split(Span range, std::size_t sep_index, std::vector<Span>& out) {
    std::size_t chosen = separators_.size() - 1;
    for (std::size_t i = sep_index; i < separators_.size(); ++i) {
      if (separators_[i].empty() || find(separators_[i], range.begin, range.end) != range.end) {
        chosen = i;
        break;
      }
    }
    const auto& sep = separators_[chosen];
    const bool has_finer = !sep.empty() && chosen + 1 < separators_.size();

    std::vector<Span> pieces;
    if (sep.empty()) {
      for (std::size_t i = range.begin; i < range.end; ++i) pieces.push_back({i, i + 1});
    } else {
      // Each separator opens the piece that follows it.
      std::size_t piece_start = range.begin;
      std::size_t pos = find(sep, range.begin, range.end);
      while (pos != range.end) {
        if (pos > piece_start) pieces.push_back({piece_start, pos});
        piece_start = pos;
        pos = find(sep, pos + sep.size(), range.end);
      }
      if (range.end > piece_start) pieces.push_back({piece_start, range.end});
    }

    std::vector<Span> small;
    for (const Span& piece : pieces) {
      if (piece.size() < config_.chunk_size) {
        small.push_back(piece);
        continue;
      }
      merge(small, out);
      small.clear();
      if (has_finer) {
        split(piece, chosen + 1, out);
      } else {
        emit(piece.begin, piece.end, out);
      }
    }
    merge(small, out);
  }

  void merge(const std::vector<Span>& pieces, std::vector<Span>& out) {
    std::deque<Span> window;
    std::size_t total = 0;
    for (const Span& piece : pieces) {
      if (total + piece.size() > config_.chunk_size) {
        if (!window.empty()) {
          emit(window.front().begin, window.back().end, out);
          while (total > config_.overlap || (total > 0 && total + piece.size() > config_.chunk_size)) {
            total -= window.front().size();
            window.pop_front();
          }
        }
      }
      window.push_back(piece);
      total += piece.size();
    }
    if (!window.empty()) emit(window.front().begin, window.back().end, out);
  }

  void emit(std::size_t begin, std::size_t end, std::vector<Span>& out) const {
    while (begin < end && is_unicode_space(text_[begin])) ++begin;
    while (end > begin && is_unicode_space(text_[end - 1])) --end;
    if (end > begin) out.push_back({begin, end});
  }

  const std::u32string& text_;
  const ChunkingConfig& config_;
  std::vector<std::u32string> separators_;
};

}  // namespace

std::vector<Chunk> split_text(std::string_view text, const ChunkingConfig& config) {
  config.validate();
  const std::u32string chars = utf8_decode(text);
  std::vector<Chunk> chunks;
  if (chars.empty()) return chunks;

  const auto spans = RecursiveSplitter(chars, config).run();
  chunks.reserve(spans.size());
  for (const Span& span : spans) {
    Chunk chunk;
    chunk.chunk_id = static_cast<std::int64_t>(chunks.size());
    chunk.start_offset = span.begin;
    chunk.length = span.size();
    chunk.text = utf8_encode(std::u32string_view(chars).substr(span.begin, span.size()));
    chunks.push_back(std::move(chunk));
  }
  return chunks;
}

namespace {

bool iequals_prefix(std::string_view s, std::size_t pos, std::string_view word) {
  if (pos + word.size() > s.size()) return false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    const char c = s[pos + i];
    const char lower = (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
    if (lower != word[i]) return false;
  }
  return true;
}

void append_entity(std::string_view entity, std::string& out) {
  if (entity == "lt") out += '<';
  else if (entity == "gt") out += '>';
  else if (entity == "amp") out += '&';
  else if (entity == "quot") out += '"';
  else if (entity == "apos" || entity == "#39") out += '\'';
  else if (entity == "nbsp" || entity == "#160") out += ' ';
  else {
    out += '&';
    out += entity;
    out += ';';
  }
}

}  // namespace

std::string strip_html(std::string_view html) {
  std::string out;
  out.reserve(html.size());
  std::size_t i = 0;
  while (i < html.size()) {
    const char c = html[i];
    if (c == '<') {
      if (html.substr(i, 4) == "<!--") {
        const auto end = html.find("-->", i + 4);
        i = end == std::string_view::npos ? html.size() : end + 3;
        continue;
      }
      for (std::string_view raw : {std::string_view("script"), std::string_view("style")}) {
        if (iequals_prefix(html, i + 1, raw)) {
          std::size_t close = i + 1;
          while ((close = html.find("</", close)) != std::string_view::npos &&
                 !iequals_prefix(html, close + 2, raw)) {
            close += 2;
          }
          i = close == std::string_view::npos ? html.size() : close;
          break;
        }
      }
      if (i >= html.size()) break;
      const auto end = html.find('>', i);
      if (end == std::string_view::npos) break;
      // Block-level tags become line breaks so paragraphs survive for the splitter.
      const auto tag = html.substr(i + 1, end - i - 1);
      if (iequals_prefix(tag, tag.starts_with('/') ? 1 : 0, "p") ||
          iequals_prefix(tag, 0, "br") || iequals_prefix(tag, tag.starts_with('/') ? 1 : 0, "h") ||
          iequals_prefix(tag, tag.starts_with('/') ? 1 : 0, "pre") ||
          iequals_prefix(tag, tag.starts_with('/') ? 1 : 0, "li")) {
        out += '\n';
      }
      i = end + 1;
    } else if (c == '&') {
      const auto semi = html.find(';', i);
      if (semi != std::string_view::npos && semi - i <= 8) {
        append_entity(html.substr(i + 1, semi - i - 1), out);
        i = semi + 1;
      } else {
        out += c;
        ++i;
      }
    } else {
      out += c;
      ++i;
    }
  }
  return out;
}

namespace {

bool is_corpus_file(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return ext == ".txt" || ext == ".md" || ext == ".markdown" || ext == ".html" || ext == ".htm";
}

bool is_html(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return ext == ".html" || ext == ".htm";
}

Origin origin_for(const std::string& doc_id) {
  const auto top = doc_id.substr(0, doc_id.find('/'));
  if (top == "tutorial" || top == "tutorials") return Origin::kTutorial;
  if (top == "community") return Origin::kCommunity;
  return Origin::kOfficialDocs;
}

}  // namespace

IngestResult ingest_corpus(const std::filesystem::path& root, const ChunkingConfig& config) {
  config.validate();
  std::error_code ec;
  if (!std::filesystem::is_directory(root, ec)) {
    throw EnvironmentError("corpus directory not found: " + root.string());
  }

  std::vector<std::string> rel_paths;
  for (auto it = std::filesystem::recursive_directory_iterator(
           root, std::filesystem::directory_options::skip_permission_denied, ec);
       it != std::filesystem::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) break;
    if (it->is_regular_file(ec) && is_corpus_file(it->path())) {
      rel_paths.push_back(std::filesystem::relative(it->path(), root).generic_string());
    }
  }
  std::sort(rel_paths.begin(), rel_paths.end());
  if (rel_paths.empty()) throw InputError("empty corpus: no .txt/.md/.html files under " + root.string());

  IngestResult result;
  for (const auto& rel : rel_paths) {
    std::string raw;
    try {
      raw = read_file(root / rel);
    } catch (const Error& e) {
      result.manifest.warnings.push_back(rel + ": unreadable, skipped");
      continue;
    }
    if (!is_valid_utf8(raw)) {
      result.manifest.warnings.push_back(rel + ": not valid UTF-8, skipped");
      continue;
    }
    SourceDocument doc{rel, is_html(rel) ? strip_html(raw) : std::move(raw), origin_for(rel)};
    if (trim(doc.text).empty()) {
      result.manifest.warnings.push_back(rel + ": no text, skipped");
      continue;
    }

    auto chunks = split_text(doc.text, config);
    result.manifest.documents.push_back({doc.doc_id, doc.origin, chunks.size(), sha256_hex(doc.text)});
    for (auto& chunk : chunks) {
      chunk.chunk_id = static_cast<std::int64_t>(result.chunks.size());
      chunk.doc_id = doc.doc_id;
      result.chunks.push_back(std::move(chunk));
    }
    result.documents.push_back(std::move(doc));
  }
  if (result.documents.empty()) throw InputError("empty corpus: no readable documents under " + root.string());
  result.manifest.total_chunks = result.chunks.size();
  return result;
}

void to_json(nlohmann::json& j, const CorpusManifest& manifest) {
  auto docs = nlohmann::json::array();
  for (const auto& d : manifest.documents) {
    docs.push_back({{"doc_id", d.doc_id},
                    {"origin", to_string(d.origin)},
                    {"chunk_count", d.chunk_count},
                    {"sha256", d.sha256}});
  }
  j = {{"documents", std::move(docs)}, {"total_chunks", manifest.total_chunks}, {"warnings", manifest.warnings}};
}

void from_json(const nlohmann::json& j, CorpusManifest& manifest) {
  manifest = {};
  for (const auto& d : j.at("documents")) {
    manifest.documents.push_back({d.at("doc_id").get<std::string>(),
                                  origin_from_string(d.at("origin").get<std::string>()),
                                  d.at("chunk_count").get<std::size_t>(), d.at("sha256").get<std::string>()});
  }
  manifest.total_chunks = j.at("total_chunks").get<std::size_t>();
  manifest.warnings = j.value("warnings", std::vector<std::string>{});
}

void to_json(nlohmann::json& j, const Chunk& chunk) {
  j = {{"chunk_id", chunk.chunk_id},
       {"doc_id", chunk.doc_id},
       {"start_offset", chunk.start_offset},
       {"length", chunk.length},
       {"text", chunk.text}};
}

void from_json(const nlohmann::json& j, Chunk& chunk) {
  chunk.chunk_id = j.at("chunk_id").get<std::int64_t>();
  chunk.doc_id = j.at("doc_id").get<std::string>();
  chunk.start_offset = j.at("start_offset").get<std::size_t>();
  chunk.text = j.at("text").get<std::string>();
  chunk.length = j.contains("length") ? j.at("length").get<std::size_t>() : utf8_length(chunk.text);
}

}  // namespace ragfix
