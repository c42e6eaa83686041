#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>

#include "genex/tokens.hpp"

namespace genex {

/// Maps text to the token granularity a scoring backend works at.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual TokenSeq tokenize(std::string_view text) const = 0;
  virtual std::string detokenize(const TokenSeq& toks) const = 0;
};

/// Word-level: splits on whitespace, joins with single spaces.
class WhitespaceTokenizer final : public Tokenizer {
 public:
  TokenSeq tokenize(std::string_view text) const override { return split_whitespace(text); }
  std::string detokenize(const TokenSeq& toks) const override { return join(toks); }
};

/// Greedy longest-match segmentation over a fixed piece vocabulary. Word-initial
/// pieces carry the U+2581 marker, as in sentencepiece vocabularies, so that
/// detokenize restores word boundaries exactly.
class SubwordTokenizer final : public Tokenizer {
 public:
  static constexpr std::string_view kWordMarker = "\xE2\x96\x81";

  explicit SubwordTokenizer(std::unordered_map<std::string, int> vocab);

  /// Throws TokenizerError when a word cannot be segmented.
  TokenSeq tokenize(std::string_view text) const override;
  std::string detokenize(const TokenSeq& toks) const override;

  const std::unordered_map<std::string, int>& vocab() const { return vocab_; }

 private:
  std::unordered_map<std::string, int> vocab_;
  std::size_t longest_piece_ = 0;
};

/// Vocab file: one piece per line, optionally followed by whitespace and an integer
/// id (defaults to the line's ordinal). Blank and `#` lines are skipped.
SubwordTokenizer load_subword_vocab(std::istream& in);
SubwordTokenizer load_subword_vocab_file(const std::string& path);

}  // namespace genex
