#pragma once

#include "error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace llna {

enum class LemmaMode { none, partial, full };

inline std::string_view to_string(LemmaMode m) {
    switch (m) {
        case LemmaMode::none: return "none";
        case LemmaMode::partial: return "partial";
        case LemmaMode::full: return "full";
    }
    return "none";
}

inline LemmaMode parse_lemma_mode(std::string_view s) {
    if (s == "none") return LemmaMode::none;
    if (s == "partial") return LemmaMode::partial;
    if (s == "full") return LemmaMode::full;
    throw Error(ErrorKind::usage, "unknown lemma mode '" + std::string(s) + "' (expected none|partial|full)");
}

enum class DatasetRole { rule_selection, validation };

inline std::string_view to_string(DatasetRole r) {
    return r == DatasetRole::rule_selection ? "rule-selection" : "validation";
}

inline DatasetRole parse_dataset_role(std::string_view s) {
    if (s == "rule-selection") return DatasetRole::rule_selection;
    if (s == "validation") return DatasetRole::validation;
    throw Error(ErrorKind::data, "unknown dataset_role '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Manifest

struct ManifestEntry {
    std::string author;
    std::string title;
    std::string source;  // local path, or a remote identifier ("108" / "gutenberg:108")
    DatasetRole role = DatasetRole::validation;
};

inline std::string slugify(std::string_view s) {
    std::string out;
    bool dash = false;
    for (unsigned char c : s) {
        if (std::isalnum(c)) {
            out.push_back(static_cast<char>(std::tolower(c)));
            dash = false;
        } else if (!out.empty() && !dash) {
            out.push_back('-');
            dash = true;
        }
    }
    while (!out.empty() && out.back() == '-') out.pop_back();
    return out;
}

/// Stable document id used for file names and seed derivation.
inline std::string document_id(const ManifestEntry& e) { return slugify(e.author) + "--" + slugify(e.title); }

/// Returns the remote identifier if `source` names one, otherwise nullopt.
inline std::optional<std::string> remote_identifier(std::string_view source) {
    std::string_view s = source;
    if (s.starts_with("gutenberg:")) s.remove_prefix(10);
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
        return std::nullopt;
    return std::string(s);
}

struct CorpusManifest {
    std::vector<ManifestEntry> entries;
    std::filesystem::path base_dir;  // local sources are resolved relative to this

    static CorpusManifest from_json(const nlohmann::json& j, std::filesystem::path base_dir = {}) {
        if (!j.is_array()) throw Error(ErrorKind::data, "manifest must be a JSON array");
        CorpusManifest m;
        m.base_dir = std::move(base_dir);
        for (const auto& item : j) {
            if (!item.is_object()) throw Error(ErrorKind::data, "manifest entries must be objects");
            ManifestEntry e;
            try {
                e.author = item.at("author").get<std::string>();
                e.title = item.at("title").get<std::string>();
                e.source = item.at("source").get<std::string>();
                e.role = parse_dataset_role(item.at("dataset_role").get<std::string>());
            } catch (const nlohmann::json::exception& ex) {
                throw Error(ErrorKind::data, std::string("manifest entry: ") + ex.what());
            }
            m.entries.push_back(std::move(e));
        }
        m.validate();
        return m;
    }

    static CorpusManifest load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw Error(ErrorKind::dependency, "cannot open manifest " + path.string());
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& ex) {
            throw Error(ErrorKind::data, "manifest " + path.string() + ": " + ex.what());
        }
        return from_json(j, path.parent_path());
    }

    nlohmann::json to_json() const {
        auto arr = nlohmann::json::array();
        for (const auto& e : entries)
            arr.push_back({{"author", e.author},
                           {"title", e.title},
                           {"source", e.source},
                           {"dataset_role", std::string(to_string(e.role))}});
        return arr;
    }

    void validate() const {
        std::set<std::pair<std::string, std::string>> seen;
        std::set<std::string> ids;
        for (const auto& e : entries) {
            if (e.author.empty()) throw Error(ErrorKind::data, "manifest entry with empty author");
            if (!seen.emplace(e.author, e.title).second)
                throw Error(ErrorKind::data, "duplicate manifest entry: " + e.author + " / " + e.title);
            if (!ids.insert(document_id(e)).second)
                throw Error(ErrorKind::data, "manifest entries collide on document id " + document_id(e));
        }
    }

    std::vector<ManifestEntry> with_role(DatasetRole role) const {
        std::vector<ManifestEntry> out;
        for (const auto& e : entries)
            if (e.role == role) out.push_back(e);
        return out;
    }

    /// Books per author within a role.
    std::map<std::string, std::size_t> author_counts(DatasetRole role) const {
        std::map<std::string, std::size_t> counts;
        for (const auto& e : entries)
            if (e.role == role) ++counts[e.author];
        return counts;
    }

    /// True when every author of the role has exactly `per_author` books.
    bool is_balanced(DatasetRole role, std::size_t per_author) const {
        const auto counts = author_counts(role);
        return !counts.empty() &&
               std::all_of(counts.begin(), counts.end(), [&](const auto& kv) { return kv.second == per_author; });
    }
};

// ---------------------------------------------------------------------------
// Tokenization

struct TokenSequence {
    std::vector<std::string> tokens;
    std::string document_id;
    LemmaMode lemma_mode = LemmaMode::none;
};

namespace detail {

inline char32_t decode_utf8(std::string_view s, std::size_t& i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    auto cont = [&](std::size_t k) -> unsigned {
        if (i + k >= s.size()) return 0x100;
        const auto b = static_cast<unsigned char>(s[i + k]);
        return (b & 0xC0) == 0x80 ? (b & 0x3F) : 0x100;
    };
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    if ((b0 & 0xE0) == 0xC0) {
        const unsigned c1 = cont(1);
        if (c1 <= 0x3F) {
            i += 2;
            return static_cast<char32_t>(((b0 & 0x1F) << 6) | c1);
        }
    } else if ((b0 & 0xF0) == 0xE0) {
        const unsigned c1 = cont(1), c2 = cont(2);
        if (c1 <= 0x3F && c2 <= 0x3F) {
            i += 3;
            return static_cast<char32_t>(((b0 & 0x0F) << 12) | (c1 << 6) | c2);
        }
    } else if ((b0 & 0xF8) == 0xF0) {
        const unsigned c1 = cont(1), c2 = cont(2), c3 = cont(3);
        if (c1 <= 0x3F && c2 <= 0x3F && c3 <= 0x3F) {
            i += 4;
            return static_cast<char32_t>(((b0 & 0x07) << 18) | (c1 << 12) | (c2 << 6) | c3);
        }
    }
    ++i;
    return 0xFFFD;
}

inline void encode_utf8(char32_t cp, std::string& out) {
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

inline bool is_space(char32_t c) {
    return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' || c == U'\v' || c == 0xA0 ||
           (c >= 0x2000 && c <= 0x200B) || c == 0x2028 || c == 0x2029 || c == 0x3000 || c == 0xFEFF;
}

inline bool is_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

inline bool is_apostrophe(char32_t c) { return c == U'\'' || c == 0x2019 || c == 0x02BC; }

inline bool is_letter(char32_t c) {
    if (c < 0x80) return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
    if (c < 0xC0 || c == 0xD7 || c == 0xF7 || c == 0xFFFD) return false;
    if (c >= 0x2000 && c <= 0x2BFF) return false;  // punctuation, symbols, arrows, box drawing
    if (c >= 0x3000 && c <= 0x303F) return false;
    if (c >= 0xFE30 && c <= 0xFE4F) return false;
    if (c >= 0xFF00 && c <= 0xFF20) return false;
    return true;
}

inline char32_t to_lower(char32_t c) {
    if (c >= U'A' && c <= U'Z') return c + 32;
    if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
    if (((c >= 0x100 && c <= 0x137) || (c >= 0x14A && c <= 0x177)) && (c % 2 == 0)) return c + 1;
    return c;
}

}  // namespace detail

/// A token is punctuation when it contains neither a letter nor a digit.
inline bool is_punctuation(std::string_view token) {
    std::size_t i = 0;
    while (i < token.size()) {
        const char32_t c = detail::decode_utf8(token, i);
        if (detail::is_letter(c) || detail::is_digit(c)) return false;
    }
    return true;
}

/// Split text into lowercase word tokens (letter runs, apostrophes kept when
/// between letters), digit runs, and single punctuation marks. Hyphens split.
inline TokenSequence tokenize(std::string_view text, std::string document_id = {}) {
    TokenSequence seq;
    seq.document_id = std::move(document_id);

    std::vector<char32_t> cps;
    cps.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) cps.push_back(detail::decode_utf8(text, i));

    std::string current;
    enum class Run { none, word, number } run = Run::none;
    auto flush = [&] {
        if (!current.empty()) seq.tokens.push_back(std::move(current));
        current.clear();
        run = Run::none;
    };

    for (std::size_t i = 0; i < cps.size(); ++i) {
        const char32_t c = cps[i];
        if (detail::is_letter(c)) {
            if (run == Run::number) flush();
            run = Run::word;
            detail::encode_utf8(detail::to_lower(c), current);
        } else if (detail::is_digit(c)) {
            if (run == Run::word) flush();
            run = Run::number;
            current.push_back(static_cast<char>(c));
        } else if (detail::is_apostrophe(c) && run == Run::word && i + 1 < cps.size() &&
                   detail::is_letter(cps[i + 1])) {
            current.push_back('\'');
        } else if (detail::is_space(c)) {
            flush();
        } else {
            flush();
            std::string mark;
            detail::encode_utf8(detail::is_apostrophe(c) ? U'\'' : c, mark);
            seq.tokens.push_back(std::move(mark));
        }
    }
    flush();
    return seq;
}

// ---------------------------------------------------------------------------
// Stopwords

class StopwordList {
  public:
    StopwordList() = default;
    explicit StopwordList(std::unordered_set<std::string> words) : words_(std::move(words)) {
        for (const auto& w : words_)
            if (tokenize(w).tokens != std::vector<std::string>{w} && !is_punctuation(w))
                throw Error(ErrorKind::data, "stopword '" + w + "' is not a lowercase token");
    }

    /// Punctuation tokens are always stopwords.
    bool contains(const std::string& token) const { return is_punctuation(token) || words_.contains(token); }

    const std::unordered_set<std::string>& words() const noexcept { return words_; }

    /// One word per line, case-folded; blank lines and lines starting with '#' are skipped.
    static StopwordList load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw Error(ErrorKind::dependency, "cannot open stopword file " + path.string());
        std::unordered_set<std::string> words;
        std::string line;
        while (std::getline(in, line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
                line.pop_back();
            if (line.empty() || line.front() == '#') continue;
            auto folded = tokenize(line).tokens;
            words.insert(folded.size() == 1 ? folded.front() : line);
        }
        return StopwordList(std::move(words));
    }

    static const StopwordList& english_default();

  private:
    std::unordered_set<std::string> words_;
};

inline const StopwordList& StopwordList::english_default() {
    static const StopwordList list(std::unordered_set<std::string>{
        "a", "about", "above", "after", "again", "against", "all", "am", "an", "and", "any", "are", "as", "at",
        "be", "because", "been", "before", "being", "below", "between", "both", "but", "by", "can", "could",
        "did", "do", "does", "doing", "down", "during", "each", "few", "for", "from", "further", "had", "has",
        "have", "having", "he", "her", "here", "hers", "herself", "him", "himself", "his", "how", "i", "if", "in",
        "into", "is", "it", "its", "itself", "just", "me", "more", "most", "my", "myself", "no", "nor", "not",
        "now", "of", "off", "on", "once", "only", "or", "other", "ought", "our", "ours", "ourselves", "out",
        "over", "own", "same", "shall", "she", "should", "so", "some", "such", "than", "that", "the", "their",
        "theirs", "them", "themselves", "then", "there", "these", "they", "this", "those", "through", "to",
        "too", "under", "until", "up", "upon", "very", "was", "we", "were", "what", "when", "where", "which",
        "while", "who", "whom", "whose", "why", "will", "with", "would", "you", "your", "yours", "yourself",
        "yourselves", "also", "may", "might", "must", "yet", "though", "although", "unto", "thee", "thou",
        "thy", "thine", "ye", "o", "s", "t", "don't", "i'm", "it's", "he's", "she's", "that's", "there's"});
    return list;
}

/// Drop stopwords and punctuation, keeping survivor order.
inline TokenSequence remove_stopwords(const TokenSequence& seq, const StopwordList& list) {
    TokenSequence out;
    out.document_id = seq.document_id;
    out.lemma_mode = seq.lemma_mode;
    out.tokens.reserve(seq.tokens.size());
    for (const auto& t : seq.tokens)
        if (!list.contains(t)) out.tokens.push_back(t);
    return out;
}

// ---------------------------------------------------------------------------
// Lemmatization

struct SuffixRule {
    std::string pattern;
    std::string replacement;
};

/// Dictionary plus suffix-rule lemmatizer for nouns and verbs.
///
/// Lookup for one part of speech: an explicit map entry wins; otherwise the
/// suffix rules are tried in order and the first one whose candidate is a
/// known lemma of that part of speech is applied; otherwise the token is
/// left unchanged. Every lemma is registered as a fixed point of its map, so
/// lemmatization is idempotent.
class LemmaTable {
  public:
    enum class Pos { noun, verb };

    void add(Pos pos, const std::string& surface, const std::string& lemma) {
        auto& m = map(pos);
        m.insert_or_assign(surface, lemma);
        m.try_emplace(lemma, lemma);
    }

    void add_rule(Pos pos, std::string pattern, std::string replacement) {
        rules(pos).push_back({std::move(pattern), std::move(replacement)});
    }

    const std::unordered_map<std::string, std::string>& noun_map() const noexcept { return nouns_; }
    const std::unordered_map<std::string, std::string>& verb_map() const noexcept { return verbs_; }
    const std::vector<SuffixRule>& noun_rules() const noexcept { return noun_rules_; }
    const std::vector<SuffixRule>& verb_rules() const noexcept { return verb_rules_; }

    std::string lookup(Pos pos, const std::string& token) const {
        const auto& m = map(pos);
        if (auto it = m.find(token); it != m.end()) return it->second;
        for (const auto& r : rules(pos)) {
            if (token.size() <= r.pattern.size() || !token.ends_with(r.pattern)) continue;
            std::string candidate = token.substr(0, token.size() - r.pattern.size()) + r.replacement;
            if (auto it = m.find(candidate); it != m.end() && it->second == candidate) return candidate;
        }
        return token;
    }

    /// TSV rows: surface, lemma, pos (N or V). Rows with surface == lemma only
    /// declare vocabulary. The built-in suffix rules are kept.
    static LemmaTable load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw Error(ErrorKind::dependency, "cannot open lemma table " + path.string());
        LemmaTable t = with_default_rules();
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line.front() == '#') continue;
            std::istringstream row(line);
            std::string surface, lemma, pos;
            if (!std::getline(row, surface, '\t') || !std::getline(row, lemma, '\t') || !std::getline(row, pos))
                throw Error(ErrorKind::parse, path.string() + ":" + std::to_string(lineno) + ": expected 3 columns");
            if (pos == "N")
                t.add(Pos::noun, surface, lemma);
            else if (pos == "V")
                t.add(Pos::verb, surface, lemma);
            else
                throw Error(ErrorKind::parse, path.string() + ":" + std::to_string(lineno) + ": pos must be N or V");
        }
        return t;
    }

    static LemmaTable with_default_rules() {
        LemmaTable t;
        for (auto [p, r] : {std::pair{"ies", "y"}, {"ves", "f"}, {"ves", "fe"}, {"ses", "s"}, {"xes", "x"},
                            {"ches", "ch"}, {"shes", "sh"}, {"zes", "z"}, {"oes", "o"}, {"s", ""}})
            t.add_rule(Pos::noun, p, r);
        for (const char* c : {"b", "d", "g", "l", "m", "n", "p", "r", "t"}) {
            t.add_rule(Pos::verb, std::string(2, c[0]) + "ed", c);
            t.add_rule(Pos::verb, std::string(2, c[0]) + "ing", c);
        }
        for (auto [p, r] : {std::pair{"ies", "y"}, {"ied", "y"}, {"es", ""}, {"s", ""}, {"ed", "e"}, {"ed", ""},
                            {"ing", "e"}, {"ing", ""}})
            t.add_rule(Pos::verb, p, r);
        return t;
    }

    /// Irregular nouns and verbs plus the default suffix rules.
    static const LemmaTable& english_default();

  private:
    std::unordered_map<std::string, std::string>& map(Pos p) { return p == Pos::noun ? nouns_ : verbs_; }
    const std::unordered_map<std::string, std::string>& map(Pos p) const { return p == Pos::noun ? nouns_ : verbs_; }
    std::vector<SuffixRule>& rules(Pos p) { return p == Pos::noun ? noun_rules_ : verb_rules_; }
    const std::vector<SuffixRule>& rules(Pos p) const { return p == Pos::noun ? noun_rules_ : verb_rules_; }

    std::unordered_map<std::string, std::string> nouns_;
    std::unordered_map<std::string, std::string> verbs_;
    std::vector<SuffixRule> noun_rules_;
    std::vector<SuffixRule> verb_rules_;
};

inline const LemmaTable& LemmaTable::english_default() {
    static const LemmaTable table = [] {
        LemmaTable t = with_default_rules();
        const std::pair<const char*, const char*> nouns[] = {
            {"men", "man"},        {"women", "woman"},     {"children", "child"}, {"feet", "foot"},
            {"teeth", "tooth"},    {"geese", "goose"},     {"mice", "mouse"},     {"people", "person"},
            {"oxen", "ox"},        {"wives", "wife"},      {"lives", "life"},     {"knives", "knife"},
            {"leaves", "leaf"},    {"wolves", "wolf"},     {"halves", "half"},    {"selves", "self"},
            {"shelves", "shelf"},  {"thieves", "thief"},   {"loaves", "loaf"},    {"data", "datum"},
            {"phenomena", "phenomenon"}, {"criteria", "criterion"}, {"analyses", "analysis"},
            {"crises", "crisis"},  {"theses", "thesis"},   {"brethren", "brother"}, {"dice", "die"},
            {"gentlemen", "gentleman"}, {"ladies", "lady"}, {"countries", "country"}, {"eyes", "eye"},
            {"hands", "hand"},     {"days", "day"},        {"years", "year"},     {"things", "thing"},
            {"words", "word"},     {"friends", "friend"},  {"rooms", "room"},     {"doors", "door"},
            {"houses", "house"},   {"horses", "horse"},    {"times", "time"},     {"ways", "way"},
            {"heads", "head"},     {"faces", "face"},      {"letters", "letter"}, {"books", "book"},
            {"cats", "cat"},       {"dogs", "dog"},        {"mats", "mat"},       {"species", "species"},
            {"news", "news"},      {"series", "series"},   {"sheep", "sheep"},    {"deer", "deer"}};
        for (auto [s, l] : nouns) t.add(Pos::noun, s, l);
        const std::pair<const char*, const char*> verbs[] = {
            {"is", "be"},         {"are", "be"},         {"was", "be"},         {"were", "be"},
            {"been", "be"},       {"being", "be"},       {"am", "be"},          {"has", "have"},
            {"had", "have"},      {"having", "have"},    {"does", "do"},        {"did", "do"},
            {"done", "do"},       {"doing", "do"},       {"went", "go"},        {"gone", "go"},
            {"goes", "go"},       {"going", "go"},       {"said", "say"},       {"says", "say"},
            {"saw", "see"},       {"seen", "see"},       {"sees", "see"},       {"came", "come"},
            {"coming", "come"},   {"took", "take"},      {"taken", "take"},     {"taking", "take"},
            {"made", "make"},     {"making", "make"},    {"knew", "know"},      {"known", "know"},
            {"thought", "think"}, {"got", "get"},        {"gotten", "get"},     {"getting", "get"},
            {"gave", "give"},     {"given", "give"},     {"giving", "give"},    {"found", "find"},
            {"told", "tell"},     {"felt", "feel"},      {"left", "leave"},     {"kept", "keep"},
            {"began", "begin"},   {"begun", "begin"},    {"brought", "bring"},  {"bought", "buy"},
            {"heard", "hear"},    {"held", "hold"},      {"stood", "stand"},    {"understood", "understand"},
            {"sat", "sit"},       {"ran", "run"},        {"running", "run"},    {"runs", "run"},
            {"spoke", "speak"},   {"spoken", "speak"},   {"wrote", "write"},    {"written", "write"},
            {"rose", "rise"},     {"risen", "rise"},     {"fell", "fall"},      {"fallen", "fall"},
            {"met", "meet"},      {"led", "lead"},       {"lain", "lie"},
            {"laid", "lay"},      {"paid", "pay"},       {"sent", "send"},      {"spent", "spend"},
            {"built", "build"},   {"lost", "lose"},      {"meant", "mean"},     {"sold", "sell"},
            {"caught", "catch"},  {"taught", "teach"},   {"fought", "fight"},   {"sought", "seek"},
            {"drew", "draw"},     {"drawn", "draw"},     {"grew", "grow"},      {"grown", "grow"},
            {"threw", "throw"},   {"thrown", "throw"},   {"flew", "fly"},       {"flown", "fly"},
            {"wore", "wear"},     {"worn", "wear"},      {"bore", "bear"},      {"borne", "bear"},
            {"broke", "break"},   {"broken", "break"},   {"chose", "choose"},   {"chosen", "choose"},
            {"drove", "drive"},   {"driven", "drive"},   {"ate", "eat"},        {"eaten", "eat"},
            {"forgot", "forget"}, {"forgotten", "forget"}, {"hid", "hide"},     {"hidden", "hide"},
            {"rode", "ride"},     {"ridden", "ride"},    {"shook", "shake"},    {"shaken", "shake"},
            {"sang", "sing"},     {"sung", "sing"},      {"sank", "sink"},      {"sunk", "sink"},
            {"stole", "steal"},   {"stolen", "steal"},   {"swam", "swim"},      {"swum", "swim"},
            {"woke", "wake"},     {"woken", "wake"},     {"won", "win"},        {"struck", "strike"},
            {"stuck", "stick"},   {"hung", "hang"},      {"slept", "sleep"},    {"wept", "weep"},
            {"crept", "creep"},   {"swept", "sweep"},    {"dealt", "deal"},     {"dreamt", "dream"},
            {"lit", "light"},     {"fed", "feed"},       {"fled", "flee"},      {"bled", "bleed"},
            {"bit", "bite"},      {"bitten", "bite"},    {"shot", "shoot"},     {"shone", "shine"},
            {"became", "become"}, {"forgave", "forgive"}, {"forgiven", "forgive"}, {"looked", "look"},
            {"walked", "walk"},   {"asked", "ask"},      {"turned", "turn"},    {"seemed", "seem"},
            {"answered", "answer"}, {"cried", "cry"},    {"tried", "try"},      {"lived", "live"},
            {"loved", "love"},    {"hoped", "hope"},     {"stopped", "stop"},   {"sitting", "sit"}};
        for (auto [s, l] : verbs) t.add(Pos::verb, s, l);
        return t;
    }();
    return table;
}

/// Map tokens to lemmas. `partial` lemmatizes nouns; `full` applies the verb
/// step to the result of the noun step, so full merges a superset of what
/// partial merges. Sequence length is unchanged.
inline TokenSequence lemmatize(const TokenSequence& seq, const LemmaTable& table, LemmaMode mode) {
    TokenSequence out;
    out.document_id = seq.document_id;
    out.lemma_mode = mode;
    out.tokens.reserve(seq.tokens.size());
    for (const auto& t : seq.tokens) {
        if (mode == LemmaMode::none) {
            out.tokens.push_back(t);
            continue;
        }
        std::string lemma = table.lookup(LemmaTable::Pos::noun, t);
        if (mode == LemmaMode::full) lemma = table.lookup(LemmaTable::Pos::verb, lemma);
        out.tokens.push_back(std::move(lemma));
    }
    return out;
}

/// Full preprocessing chain: tokenize, drop stopwords, lemmatize.
inline TokenSequence preprocess(std::string_view text, const StopwordList& stopwords, const LemmaTable& table,
                                LemmaMode mode, std::string document_id = {}) {
    return lemmatize(remove_stopwords(tokenize(text, std::move(document_id)), stopwords), table, mode);
}

// Token files hold one token per line.

inline void write_tokens(const std::filesystem::path& path, const TokenSequence& seq) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::data, "cannot write " + path.string());
    for (const auto& t : seq.tokens) out << t << '\n';
}

inline TokenSequence read_tokens(const std::filesystem::path& path, std::string document_id = {},
                                 LemmaMode mode = LemmaMode::none) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::dependency, "missing token file " + path.string());
    TokenSequence seq;
    seq.document_id = std::move(document_id);
    seq.lemma_mode = mode;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) seq.tokens.push_back(line);
    return seq;
}

}  // namespace llna
