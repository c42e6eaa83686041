#include "genex/tokenizer.hpp"

#include <algorithm>
#include <fstream>
#include <istream>

#include "genex/error.hpp"

namespace genex {

SubwordTokenizer::SubwordTokenizer(std::unordered_map<std::string, int> vocab) : vocab_(std::move(vocab)) {
  for (const auto& [piece, id] : vocab_) {
    if (piece.empty() || piece == kWordMarker || !is_content_token(piece)) {
      throw TokenizerError("illegal vocabulary piece '" + piece + "'");
    }
    longest_piece_ = std::max(longest_piece_, piece.size());
  }
}

TokenSeq SubwordTokenizer::tokenize(std::string_view text) const {
  TokenSeq out;
  for (const auto& word : split_whitespace(text)) {
    std::string marked = std::string(kWordMarker) + word;
    std::size_t pos = 0;
    while (pos < marked.size()) {
      std::size_t len = std::min(longest_piece_, marked.size() - pos);
      for (; len > 0; --len) {
        if (vocab_.count(marked.substr(pos, len)) != 0) break;
      }
      if (len == 0) throw TokenizerError("cannot segment '" + word + "' with the subword vocabulary");
      out.push_back(marked.substr(pos, len));
      pos += len;
    }
  }
  return out;
}

std::string SubwordTokenizer::detokenize(const TokenSeq& toks) const {
  std::string out;
  for (const auto& t : toks) {
    std::string_view piece = t;
    if (piece.substr(0, kWordMarker.size()) == kWordMarker) {
      if (!out.empty()) out += ' ';
      piece.remove_prefix(kWordMarker.size());
    }
    out += piece;
  }
  return out;
}

SubwordTokenizer load_subword_vocab(std::istream& in) {
  std::unordered_map<std::string, int> vocab;
  std::string line;
  int ordinal = 0;
  while (std::getline(in, line)) {
    auto fields = split_whitespace(line);
    if (fields.empty() || fields[0].front() == '#') continue;
    int id = ordinal;
    if (fields.size() > 1) {
      try {
        id = std::stoi(fields[1]);
      } catch (const std::exception&) {
        throw ParseError("vocab line '" + line + "': bad id");
      }
    }
    vocab.emplace(fields[0], id);
    ++ordinal;
  }
  return SubwordTokenizer(std::move(vocab));
}

SubwordTokenizer load_subword_vocab_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open vocab file '" + path + "'");
  return load_subword_vocab(in);
}

}  // namespace genex
