#include "llna/corpus.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

using namespace llna;

namespace {

std::vector<std::string> toks(std::initializer_list<const char*> xs) { return {xs.begin(), xs.end()}; }

TokenSequence seq(std::initializer_list<const char*> xs) { return {toks(xs), "doc", LemmaMode::none}; }

std::filesystem::path temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("llna_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace

TEST(Tokenize, WordsAndPunctuation) {
    EXPECT_EQ(tokenize("The cat, the mat.").tokens, toks({"the", "cat", ",", "the", "mat", "."}));
}

TEST(Tokenize, EmptyText) { EXPECT_TRUE(tokenize("").tokens.empty()); }

TEST(Tokenize, InternalApostropheKept) {
    EXPECT_EQ(tokenize("Don't stop").tokens, toks({"don't", "stop"}));
    EXPECT_EQ(tokenize("Don’t").tokens, toks({"don't"}));
    EXPECT_EQ(tokenize("'tis the dogs' bone").tokens, toks({"'", "tis", "the", "dogs", "'", "bone"}));
}

TEST(Tokenize, HyphensSplitWords) {
    EXPECT_EQ(tokenize("well-known").tokens, toks({"well", "-", "known"}));
}

TEST(Tokenize, NonAsciiLettersLowercased) {
    EXPECT_EQ(tokenize("CafÉ À la").tokens, toks({"café", "à", "la"}));
}

TEST(Tokenize, DigitsAreSeparateTokens) { EXPECT_EQ(tokenize("chapter 12").tokens, toks({"chapter", "12"})); }

TEST(Tokenize, NoEmptyTokens) {
    for (const auto& t : tokenize("  ...  --  a\t\nb  ").tokens) EXPECT_FALSE(t.empty());
}

TEST(Stopwords, RemovesListedWordsAndPunctuation) {
    StopwordList list({"the"});
    EXPECT_EQ(remove_stopwords(seq({"the", "cat", ",", "the", "mat", "."}), list).tokens, toks({"cat", "mat"}));
}

TEST(Stopwords, EmptyListIsIdentityOnWords) {
    StopwordList list;
    EXPECT_EQ(remove_stopwords(seq({"cat", "mat"}), list).tokens, toks({"cat", "mat"}));
}

TEST(Stopwords, TotalRemoval) {
    StopwordList list({"the"});
    EXPECT_TRUE(remove_stopwords(seq({"the", "the", "the"}), list).tokens.empty());
}

TEST(Stopwords, PunctuationAlwaysStopword) {
    StopwordList list;
    EXPECT_TRUE(list.contains(","));
    EXPECT_TRUE(list.contains("—"));
    EXPECT_FALSE(list.contains("cat"));
}

TEST(Stopwords, OutputIsSubsequence) {
    const auto text = synth::synthetic_text(500, 3);
    const auto in = tokenize(text);
    const auto out = remove_stopwords(in, StopwordList::english_default());
    std::size_t j = 0;
    for (const auto& t : in.tokens)
        if (j < out.tokens.size() && out.tokens[j] == t) ++j;
    EXPECT_EQ(j, out.tokens.size());
    for (const auto& t : out.tokens) EXPECT_FALSE(StopwordList::english_default().contains(t));
}

TEST(Stopwords, LoadSkipsCommentsAndBlankLines) {
    const auto dir = temp_dir("stop");
    std::ofstream(dir / "s.txt") << "# comment\nthe\n\nA\n";
    const auto list = StopwordList::load(dir / "s.txt");
    EXPECT_TRUE(list.contains("the"));
    EXPECT_TRUE(list.contains("a"));
    EXPECT_FALSE(list.contains("# comment"));
}

TEST(Lemmatize, ModeNoneIsIdentity) {
    LemmaTable t = LemmaTable::with_default_rules();
    t.add(LemmaTable::Pos::noun, "cats", "cat");
    t.add(LemmaTable::Pos::verb, "running", "run");
    EXPECT_EQ(lemmatize(seq({"cats", "running"}), t, LemmaMode::none).tokens, toks({"cats", "running"}));
}

TEST(Lemmatize, PartialMapsNounsOnly) {
    LemmaTable t = LemmaTable::with_default_rules();
    t.add(LemmaTable::Pos::noun, "cats", "cat");
    t.add(LemmaTable::Pos::verb, "running", "run");
    EXPECT_EQ(lemmatize(seq({"cats", "running"}), t, LemmaMode::partial).tokens, toks({"cat", "running"}));
}

TEST(Lemmatize, FullMapsNounsAndVerbs) {
    LemmaTable t = LemmaTable::with_default_rules();
    t.add(LemmaTable::Pos::noun, "cats", "cat");
    t.add(LemmaTable::Pos::verb, "running", "run");
    const auto out = lemmatize(seq({"cats", "running"}), t, LemmaMode::full);
    EXPECT_EQ(out.tokens, toks({"cat", "run"}));
    EXPECT_EQ(out.lemma_mode, LemmaMode::full);
}

TEST(Lemmatize, SuffixRulesNeedKnownLemma) {
    LemmaTable t = LemmaTable::with_default_rules();
    t.add(LemmaTable::Pos::noun, "city", "city");
    t.add(LemmaTable::Pos::verb, "stop", "stop");
    EXPECT_EQ(t.lookup(LemmaTable::Pos::noun, "cities"), "city");
    EXPECT_EQ(t.lookup(LemmaTable::Pos::noun, "glass"), "glass");  // no known lemma "glas"
    EXPECT_EQ(t.lookup(LemmaTable::Pos::verb, "stopped"), "stop");
    EXPECT_EQ(t.lookup(LemmaTable::Pos::verb, "stopping"), "stop");
    EXPECT_EQ(t.lookup(LemmaTable::Pos::verb, "string"), "string");  // "str" unknown
}

TEST(Lemmatize, IdempotentWithBuiltinTable) {
    const auto& t = LemmaTable::english_default();
    const auto in = remove_stopwords(tokenize(synth::synthetic_text(2000, 11)), StopwordList::english_default());
    for (auto mode : {LemmaMode::none, LemmaMode::partial, LemmaMode::full}) {
        const auto once = lemmatize(in, t, mode);
        EXPECT_EQ(lemmatize(once, t, mode).tokens, once.tokens) << to_string(mode);
        EXPECT_EQ(once.tokens.size(), in.tokens.size());
    }
}

TEST(Lemmatize, VocabularyMonotoneAcrossModes) {
    const auto& t = LemmaTable::english_default();
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto in = remove_stopwords(tokenize(synth::synthetic_text(3000, s)), StopwordList::english_default());
        auto vocab = [&](LemmaMode m) {
            const auto out = lemmatize(in, t, m);
            return std::set<std::string>(out.tokens.begin(), out.tokens.end()).size();
        };
        EXPECT_LE(vocab(LemmaMode::full), vocab(LemmaMode::partial));
        EXPECT_LE(vocab(LemmaMode::partial), vocab(LemmaMode::none));
        EXPECT_LT(vocab(LemmaMode::full), vocab(LemmaMode::none));
    }
}

TEST(Lemmatize, TableFileOverridesAndExtends) {
    const auto dir = temp_dir("lemma");
    std::ofstream(dir / "t.tsv") << "# surface\tlemma\tpos\ngeese\tgoose\tN\nswam\tswim\tV\n";
    const auto t = LemmaTable::load(dir / "t.tsv");
    EXPECT_EQ(t.lookup(LemmaTable::Pos::noun, "geese"), "goose");
    EXPECT_EQ(t.lookup(LemmaTable::Pos::verb, "swam"), "swim");
    std::ofstream(dir / "bad.tsv") << "geese\tgoose\tX\n";
    EXPECT_THROW(LemmaTable::load(dir / "bad.tsv"), Error);
}

TEST(Lemmatize, ModeNames) {
    for (auto m : {LemmaMode::none, LemmaMode::partial, LemmaMode::full}) EXPECT_EQ(parse_lemma_mode(to_string(m)), m);
    EXPECT_THROW(parse_lemma_mode("some"), Error);
}

TEST(Preprocess, Deterministic) {
    const auto text = synth::synthetic_text(1000, 5);
    const auto a = preprocess(text, StopwordList::english_default(), LemmaTable::english_default(), LemmaMode::full, "d");
    const auto b = preprocess(text, StopwordList::english_default(), LemmaTable::english_default(), LemmaMode::full, "d");
    EXPECT_EQ(a.tokens, b.tokens);
}

TEST(Preprocess, TokenFileRoundTrip) {
    const auto dir = temp_dir("tokens");
    TokenSequence s{toks({"cat", "don't", "café"}), "d", LemmaMode::partial};
    write_tokens(dir / "d.tok", s);
    EXPECT_EQ(read_tokens(dir / "d.tok", "d", LemmaMode::partial).tokens, s.tokens);
}

TEST(Manifest, ParsesAndValidates) {
    const auto j = nlohmann::json::parse(R"([
        {"author": "Arthur Conan Doyle", "title": "Uncle Bernac", "source": "texts/bernac.txt", "dataset_role": "validation"},
        {"author": "Jane Austen", "title": "Emma", "source": "gutenberg:158", "dataset_role": "rule-selection"}
    ])");
    const auto m = CorpusManifest::from_json(j, "/data");
    m.validate();
    ASSERT_EQ(m.entries.size(), 2u);
    EXPECT_EQ(m.entries[0].role, DatasetRole::validation);
    EXPECT_EQ(document_id(m.entries[0]), "arthur-conan-doyle--uncle-bernac");
    EXPECT_EQ(remote_identifier(m.entries[1].source), std::optional<std::string>("158"));
    EXPECT_FALSE(remote_identifier(m.entries[0].source).has_value());
    EXPECT_EQ(m.with_role(DatasetRole::rule_selection).size(), 1u);
}

TEST(Manifest, RejectsDuplicatesAndEmptyAuthors) {
    auto dup = nlohmann::json::parse(R"([
        {"author": "A", "title": "T", "source": "1", "dataset_role": "validation"},
        {"author": "A", "title": "T", "source": "2", "dataset_role": "validation"}])");
    EXPECT_THROW(CorpusManifest::from_json(dup).validate(), Error);
    auto empty = nlohmann::json::parse(R"([{"author": "", "title": "T", "source": "1", "dataset_role": "validation"}])");
    EXPECT_THROW(CorpusManifest::from_json(empty).validate(), Error);
    auto role = nlohmann::json::parse(R"([{"author": "A", "title": "T", "source": "1", "dataset_role": "test"}])");
    EXPECT_THROW(CorpusManifest::from_json(role), Error);
}

TEST(Manifest, BalanceIsChecked) {
    CorpusManifest m;
    for (int i = 0; i < 5; ++i) m.entries.push_back({"A", "a" + std::to_string(i), "x", DatasetRole::validation});
    for (int i = 0; i < 4; ++i) m.entries.push_back({"B", "b" + std::to_string(i), "x", DatasetRole::validation});
    EXPECT_FALSE(m.is_balanced(DatasetRole::validation, 5));
    m.entries.push_back({"B", "b4", "x", DatasetRole::validation});
    EXPECT_TRUE(m.is_balanced(DatasetRole::validation, 5));
}

TEST(ShippedData, LemmaTableIsIdempotent) {
    const auto t = LemmaTable::load(std::filesystem::path(LLNA_DATA_DIR) / "lemma_table_en.tsv");
    std::vector<std::string> words;
    for (const auto& [s, l] : t.noun_map()) words.push_back(s), words.push_back(l);
    for (const auto& [s, l] : t.verb_map()) words.push_back(s), words.push_back(l);
    ASSERT_GT(words.size(), 10000u);
    const TokenSequence in{words, "vocab", LemmaMode::none};
    for (auto mode : {LemmaMode::partial, LemmaMode::full}) {
        const auto once = lemmatize(in, t, mode);
        EXPECT_EQ(lemmatize(once, t, mode).tokens, once.tokens) << to_string(mode);
    }
    EXPECT_EQ(t.lookup(LemmaTable::Pos::noun, "children"), "child");
    EXPECT_EQ(t.lookup(LemmaTable::Pos::verb, "went"), "go");
}

TEST(ShippedData, StopwordFileMatchesDefault) {
    const auto list = StopwordList::load(std::filesystem::path(LLNA_DATA_DIR) / "stopwords_en.txt");
    EXPECT_EQ(list.words(), StopwordList::english_default().words());
}
