#pragma once

#include <set>
#include <string>
#include <vector>

// Small deterministic text helpers shared by the retrieval pipeline and the
// entity linker: UTF-8 aware lowercasing, diacritic folding, keyword
// tokenization, and surface normalization.
namespace agree::text {

// Decode UTF-8 into codepoints; invalid bytes become U+FFFD.
std::vector<char32_t> decode_utf8(const std::string& s);
std::string encode_utf8(const std::vector<char32_t>& cps);

// Lowercase ASCII and Latin-1/Extended-A letters; everything else unchanged.
char32_t lower(char32_t cp);

// Map accented Latin letters to their ASCII base ("ö" -> "o"); combining
// marks (U+0300..U+036F) fold to nothing. Returns empty string for marks,
// the folded ASCII for foldable letters, or the codepoint itself re-encoded.
std::string fold(char32_t cp);

// Lowercase alphanumeric tokens, split on non-alphanumerics, no stemming.
std::vector<std::string> tokenize(const std::string& s);

// tokenize() minus stopwords, as an ordered unique set.
std::set<std::string> keyword_set(const std::string& s,
                                  const std::set<std::string>& stopwords);

// Linking normalization: compatibility-fold diacritics, lowercase,
// punctuation to spaces, collapse whitespace, trim. Idempotent.
std::string normalize_surface(const std::string& s);

const std::set<std::string>& default_stopwords();

std::string trim(const std::string& s);
std::string to_lower_ascii(std::string s);

}  // namespace agree::text
