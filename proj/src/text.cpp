#include "agree/text.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

namespace agree::text {

std::vector<char32_t> decode_utf8(const std::string& s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        char32_t cp = 0xFFFD;
        std::size_t len = 1;
        if (c < 0x80) {
            cp = c;
        } else if ((c & 0xE0) == 0xC0 && i + 1 < s.size() &&
                   (s[i + 1] & 0xC0) == 0x80) {
            cp = ((c & 0x1F) << 6) | (s[i + 1] & 0x3F);
            len = 2;
        } else if ((c & 0xF0) == 0xE0 && i + 2 < s.size() &&
                   (s[i + 1] & 0xC0) == 0x80 && (s[i + 2] & 0xC0) == 0x80) {
            cp = ((c & 0x0F) << 12) | ((s[i + 1] & 0x3F) << 6) | (s[i + 2] & 0x3F);
            len = 3;
        } else if ((c & 0xF8) == 0xF0 && i + 3 < s.size() &&
                   (s[i + 1] & 0xC0) == 0x80 && (s[i + 2] & 0xC0) == 0x80 &&
                   (s[i + 3] & 0xC0) == 0x80) {
            cp = ((c & 0x07) << 18) | ((s[i + 1] & 0x3F) << 12) |
                 ((s[i + 2] & 0x3F) << 6) | (s[i + 3] & 0x3F);
            len = 4;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string encode_utf8(const std::vector<char32_t>& cps) {
    std::string out;
    for (char32_t cp : cps) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

char32_t lower(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;  // Latin-1
    if (cp >= 0x100 && cp <= 0x17F && (cp % 2 == 0)) return cp + 1;  // Extended-A pairs
    return cp;
}

namespace {

// Latin letter -> ASCII base, covering Latin-1 supplement after lowercasing.
const char* latin1_base(char32_t cp) {
    switch (cp) {
        case 0xE0: case 0xE1: case 0xE2: case 0xE3: case 0xE4: case 0xE5:
            return "a";
        case 0xE6: return "ae";
        case 0xE7: return "c";
        case 0xE8: case 0xE9: case 0xEA: case 0xEB: return "e";
        case 0xEC: case 0xED: case 0xEE: case 0xEF: return "i";
        case 0xF0: return "d";
        case 0xF1: return "n";
        case 0xF2: case 0xF3: case 0xF4: case 0xF5: case 0xF6: case 0xF8:
            return "o";
        case 0xF9: case 0xFA: case 0xFB: case 0xFC: return "u";
        case 0xFD: case 0xFF: return "y";
        case 0xFE: return "th";
        case 0xDF: return "ss";
        default: return nullptr;
    }
}

bool is_combining_mark(char32_t cp) { return cp >= 0x300 && cp <= 0x36F; }

// Latin Extended-A ranges by base letter (code chart layout).
const char* extended_a_base(char32_t cp) {
    if (cp < 0x100 || cp > 0x17F) return nullptr;
    struct Range { char32_t lo, hi; const char* base; };
    static const Range ranges[] = {
        {0x100, 0x105, "a"},  {0x106, 0x10D, "c"},  {0x10E, 0x111, "d"},
        {0x112, 0x11B, "e"},  {0x11C, 0x123, "g"},  {0x124, 0x127, "h"},
        {0x128, 0x131, "i"},  {0x132, 0x133, "ij"}, {0x134, 0x135, "j"},
        {0x136, 0x138, "k"},  {0x139, 0x142, "l"},  {0x143, 0x149, "n"},
        {0x14A, 0x14B, "ng"}, {0x14C, 0x151, "o"},  {0x152, 0x153, "oe"},
        {0x154, 0x159, "r"},  {0x15A, 0x161, "s"},  {0x162, 0x167, "t"},
        {0x168, 0x173, "u"},  {0x174, 0x175, "w"},  {0x176, 0x178, "y"},
        {0x179, 0x17E, "z"},  {0x17F, 0x17F, "s"},
    };
    for (const auto& r : ranges)
        if (cp >= r.lo && cp <= r.hi) return r.base;
    return nullptr;
}

}  // namespace

std::string fold(char32_t cp) {
    cp = lower(cp);
    if (is_combining_mark(cp)) return "";
    if (const char* b = latin1_base(cp)) return b;
    if (const char* b = extended_a_base(cp)) return b;
    std::vector<char32_t> one{cp};
    return encode_utf8(one);
}

namespace {

bool folded_is_alnum(const std::string& folded) {
    if (folded.empty()) return false;
    unsigned char c = static_cast<unsigned char>(folded[0]);
    if (c < 0x80) return std::isalnum(c) != 0;
    // non-Latin scripts count as word characters; punctuation blocks do not
    auto cps = decode_utf8(folded);
    char32_t cp = cps[0];
    if (cp >= 0x2000 && cp <= 0x206F) return false;  // general punctuation
    if (cp >= 0x3000 && cp <= 0x303F) return false;  // CJK punctuation
    return true;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& s) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char32_t cp : decode_utf8(s)) {
        std::string f = fold(cp);
        if (f.empty()) continue;  // combining mark
        if (folded_is_alnum(f)) {
            cur += f;
        } else if (!cur.empty()) {
            tokens.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(cur);
    return tokens;
}

std::set<std::string> keyword_set(const std::string& s,
                                  const std::set<std::string>& stopwords) {
    std::set<std::string> out;
    for (auto& t : tokenize(s))
        if (!stopwords.count(t)) out.insert(std::move(t));
    return out;
}

std::string normalize_surface(const std::string& s) {
    std::string joined;
    for (char32_t cp : decode_utf8(s)) {
        std::string f = fold(cp);
        if (f.empty()) continue;
        if (folded_is_alnum(f))
            joined += f;
        else
            joined += ' ';
    }
    // collapse whitespace and trim
    std::string out;
    bool pending_space = false;
    for (char c : joined) {
        if (c == ' ') {
            pending_space = !out.empty();
        } else {
            if (pending_space) out += ' ';
            pending_space = false;
            out += c;
        }
    }
    return out;
}

const std::set<std::string>& default_stopwords() {
    static const std::set<std::string> words = {
        "a",    "an",   "and",  "are",  "as",   "at",   "be",   "by",
        "for",  "from", "has",  "have", "in",   "is",   "it",   "its",
        "of",   "on",   "or",   "that", "the",  "this", "to",   "was",
        "were", "what", "when", "where", "which", "who", "will", "with"};
    return words;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string to_lower_ascii(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return s;
}

}  // namespace agree::text
