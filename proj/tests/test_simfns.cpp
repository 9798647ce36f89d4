// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "cdcr/simfns.hpp"
#include "oracles.hpp"

using namespace cdcr;
using Catch::Approx;

namespace {

std::string random_string(std::mt19937& rng, int maxLen, std::string_view alphabet = "abcde") {
    std::uniform_int_distribution<int> len(0, maxLen);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::string s;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) s.push_back(alphabet[pick(rng)]);
    return s;
}

}  // namespace

TEST_CASE("edit distance reproduces the worked example") {
    CHECK(sim::edit_distance("window", "widow") == 1);
    CHECK(sim::edit_distance("abc", "abc") == 0);
    CHECK(sim::edit_distance("abc", "") == 3);
    CHECK(sim::edit_distance("", "abc") == 3);
}

TEST_CASE("edit distance matches the recursive oracle") {
    std::mt19937 rng(7);
    for (int i = 0; i < 500; ++i) {
        const std::string a = random_string(rng, 8);
        const std::string b = random_string(rng, 8);
        CHECK(sim::edit_distance(a, b) == oracle::edit_distance_recursive(a, b));
    }
}

TEST_CASE("edit distance metric axioms") {
    std::mt19937 rng(11);
    for (int i = 0; i < 300; ++i) {
        const std::string a = random_string(rng, 20);
        const std::string b = random_string(rng, 20);
        const std::string c = random_string(rng, 20);
        CHECK(sim::edit_distance(a, a) == 0);
        CHECK(sim::edit_distance(a, b) == sim::edit_distance(b, a));
        CHECK(sim::edit_distance(a, c) <=
              sim::edit_distance(a, b) + sim::edit_distance(b, c));
    }
}

TEST_CASE("edit similarity normalization") {
    CHECK(sim::edit_similarity("window", "widow") == Approx(1.0 - 1.0 / 6.0));
    CHECK(sim::edit_similarity("same", "same") == 1.0);
    CHECK(sim::edit_similarity("a", "b") == 0.0);
    CHECK(sim::edit_similarity("", "") == 1.0);
}

TEST_CASE("jaro on the classic pair") {
    CHECK(sim::jaro("MARTHA", "MARHTA") == Approx(0.944444).margin(1e-4));
    CHECK(sim::jaro("same", "same") == 1.0);
    CHECK(sim::jaro("abc", "xyz") == 0.0);
    CHECK(sim::jaro("", "") == 1.0);
    CHECK(sim::jaro("a", "") == 0.0);
}

TEST_CASE("jaro-winkler boosts by common prefix") {
    CHECK(sim::jaro_winkler("MARTHA", "MARHTA") == Approx(0.961111).margin(1e-4));
    CHECK(sim::jaro_winkler("same", "same") == 1.0);
    // No common prefix: equals plain jaro.
    CHECK(sim::jaro_winkler("xabc", "yabc") == Approx(sim::jaro("xabc", "yabc")));
    CHECK_THROWS_AS(sim::jaro_winkler("a", "b", 0.5), ConfigError);
    CHECK_THROWS_AS(sim::jaro_winkler("a", "b", -0.1), ConfigError);
}

TEST_CASE("qgrams of susan") {
    auto grams = sim::qgrams("susan", 2);
    REQUIRE(grams == std::vector<std::string>{"su", "us", "sa", "an"});
    CHECK(sim::qgrams("a", 2).empty());
    CHECK(sim::qgrams("", 2).empty());
}

TEST_CASE("qgram similarity") {
    sim::QGramConfig cfg;  // q=2, maximum
    CHECK(sim::qgram_similarity("susan", "susan", cfg) == 1.0);
    CHECK(sim::qgram_similarity("susan", "suzan", cfg) == Approx(0.5));
    CHECK(sim::qgram_similarity("", "", cfg) == 1.0);
    CHECK(sim::qgram_similarity("ab", "", cfg) == 0.0);

    sim::QGramConfig minCfg{2, sim::QGramDenominator::minimum};
    sim::QGramConfig avgCfg{2, sim::QGramDenominator::average};
    // "aba" has grams {ab, ba}; "ab" has {ab}: common 1.
    CHECK(sim::qgram_similarity("aba", "ab", minCfg) == Approx(1.0));
    CHECK(sim::qgram_similarity("aba", "ab", avgCfg) == Approx(1.0 / 1.5));
    CHECK(sim::qgram_similarity("aba", "ab", cfg) == Approx(0.5));
}

TEST_CASE("qgram maximum denominator is 1 iff multisets equal") {
    std::mt19937 rng(13);
    for (int i = 0; i < 500; ++i) {
        const std::string a = random_string(rng, 10, "abc");
        const std::string b = random_string(rng, 10, "abc");
        auto ga = sim::qgrams(a, 2);
        auto gb = sim::qgrams(b, 2);
        std::sort(ga.begin(), ga.end());
        std::sort(gb.begin(), gb.end());
        const bool equalMultisets = ga == gb;
        const double s = sim::qgram_similarity(a, b);
        CHECK((s == 1.0) == equalMultisets);
    }
}

TEST_CASE("jaccard reproduces the worked example") {
    CHECK(sim::jaccard("school of computer science", "computer science school") == Approx(0.75));
    CHECK(sim::jaccard("same tokens here", "same tokens here") == 1.0);
    CHECK(sim::jaccard("aa bb", "cc dd") == 0.0);
    CHECK(sim::jaccard("", "") == 1.0);
    CHECK(sim::jaccard("x", "") == 0.0);
    // Duplicates collapse (set semantics).
    CHECK(sim::jaccard("a a a b", "a b") == 1.0);
}

TEST_CASE("jaccard is 1 iff token sets equal") {
    std::mt19937 rng(17);
    auto randomTokens = [&](int maxTok) {
        std::uniform_int_distribution<int> ntok(1, maxTok);
        std::string s;
        const int n = ntok(rng);
        for (int i = 0; i < n; ++i) {
            if (!s.empty()) s.push_back(' ');
            s += random_string(rng, 3, "abc");
        }
        return s;
    };
    for (int i = 0; i < 300; ++i) {
        const std::string a = randomTokens(4);
        const std::string b = randomTokens(4);
        std::set<std::string> sa, sb;
        for (auto t : text::split_ws(a)) sa.emplace(t);
        for (auto t : text::split_ws(b)) sb.emplace(t);
        if (sa.empty() || sb.empty()) continue;
        CHECK((sim::jaccard(a, b) == 1.0) == (sa == sb));
    }
}

TEST_CASE("tfidf cosine basics") {
    sim::CorpusStats stats;
    stats.add_document_text("alpha beta gamma");
    stats.add_document_text("alpha beta");
    stats.add_document_text("alpha delta");
    stats.finalize();

    CHECK(sim::tfidf_cosine("beta gamma", "beta gamma", stats) == Approx(1.0));
    CHECK(sim::tfidf_cosine("beta", "delta", stats) == 0.0);
    // alpha appears in every document: idf = ln(3/3) = 0, a zero vector.
    CHECK(sim::tfidf_cosine("alpha", "alpha", stats) == 0.0);

    sim::CorpusStats empty;
    CHECK_THROWS_AS(sim::tfidf_cosine("a", "b", empty), ConfigError);
}

TEST_CASE("tfidf cosine matches direct formula evaluation") {
    // Independent oracle: evaluate tf*idf dot products with a plain map.
    sim::CorpusStats stats;
    const std::vector<std::string> docs = {"the quick brown fox", "the lazy dog",
                                           "quick quick dog"};
    for (const auto& d : docs) stats.add_document_text(d);
    stats.finalize();

    auto oracle_cosine = [&](const std::string& a, const std::string& b) {
        auto vec = [&](const std::string& s) {
            std::map<std::string, double> tf;
            for (auto t : text::split_ws(s)) tf[std::string(t)] += 1.0;
            for (auto& [tok, f] : tf) {
                double df = 1.0;
                auto it = stats.doc_freq().find(tok);
                if (it != stats.doc_freq().end()) df = static_cast<double>(it->second);
                f *= std::log(3.0 / df);
            }
            return tf;
        };
        auto va = vec(a), vb = vec(b);
        double dot = 0, na = 0, nb = 0;
        for (auto& [t, w] : va) {
            na += w * w;
            if (vb.count(t)) dot += w * vb.at(t);
        }
        for (auto& [t, w] : vb) nb += w * w;
        if (na == 0 || nb == 0) return 0.0;
        return dot / (std::sqrt(na) * std::sqrt(nb));
    };

    const std::vector<std::string> probes = {"quick brown fox", "lazy dog",
                                             "quick dog dog", "fox unseen token",
                                             "the quick", "brown brown fox lazy"};
    for (const auto& a : probes)
        for (const auto& b : probes)
            CHECK(sim::tfidf_cosine(a, b, stats) == Approx(oracle_cosine(a, b)).margin(1e-12));
}

TEST_CASE("soundex reproduces the paper codes") {
    CHECK(sim::soundex("daniel") == "d540");
    CHECK(sim::soundex("damiel") == "d540");
    CHECK(sim::soundex("a") == "a000");
    CHECK(sim::soundex("Daniel") == "d540");
    CHECK(sim::soundex("barack") == "b620");
    CHECK_THROWS_AS(sim::soundex("123"), DomainError);
    CHECK_THROWS_AS(sim::soundex(""), DomainError);
    // Leading non-letters are skipped.
    CHECK(sim::soundex("  'daniel") == "d540");
}

TEST_CASE("soundex output shape") {
    std::mt19937 rng(23);
    for (int i = 0; i < 500; ++i) {
        std::string s = random_string(rng, 12, "abcdefghijklmnopqrstuvwxyz");
        if (s.empty()) continue;
        const std::string code = sim::soundex(s);
        REQUIRE(code.size() == 4);
        CHECK(text::is_ascii_letter(static_cast<unsigned char>(code[0])));
        for (int k = 1; k < 4; ++k) CHECK(text::is_ascii_digit(static_cast<unsigned char>(code[k])));
    }
}

TEST_CASE("phonetic equality score") {
    CHECK(sim::phonetic_equal("daniel", "damiel") == 1.0);
    CHECK(sim::phonetic_equal("same", "same") == 1.0);
    CHECK(sim::phonetic_equal("daniel", "robert") == 0.0);
}

TEST_CASE("hamming distance") {
    CHECK(sim::hamming_distance("2121", "2021") == 1);
    CHECK(sim::hamming_distance("2121", "2121") == 0);
    CHECK(sim::hamming_distance("00", "11") == 2);
    CHECK_THROWS_AS(sim::hamming_distance("123", "12"), DomainError);
}

TEST_CASE("hamming triangle inequality") {
    std::mt19937 rng(29);
    std::uniform_int_distribution<int> digit(0, 9);
    for (int iter = 0; iter < 300; ++iter) {
        std::string a(6, '0'), b(6, '0'), c(6, '0');
        for (int i = 0; i < 6; ++i) {
            a[i] = static_cast<char>('0' + digit(rng));
            b[i] = static_cast<char>('0' + digit(rng));
            c[i] = static_cast<char>('0' + digit(rng));
        }
        CHECK(sim::hamming_distance(a, c) <=
              sim::hamming_distance(a, b) + sim::hamming_distance(b, c));
    }
}

TEST_CASE("relative distance similarity") {
    CHECK(sim::relative_distance_similarity(100, 100) == 1.0);
    CHECK(sim::relative_distance_similarity(50, 100) == Approx(0.5));
    CHECK(sim::relative_distance_similarity(1, 1000) == Approx(0.001));
    CHECK_THROWS_AS(sim::relative_distance_similarity(0, 5), DomainError);
    CHECK_THROWS_AS(sim::relative_distance_similarity(5, -1), DomainError);
}

TEST_CASE("normalize_date") {
    CHECK(sim::normalize_date("04/08/1961", sim::DateFormat::ddmmyyyy) == 19610804);
    CHECK(sim::normalize_date("August 4, 1961", sim::DateFormat::month_name) == 19610804);
    CHECK(sim::normalize_date("Aug 4 1961", sim::DateFormat::month_name) == 19610804);
    CHECK(sim::normalize_date("1961-08-04", sim::DateFormat::iso) == 19610804);
    CHECK(sim::normalize_date("08/04/1961", sim::DateFormat::mmddyyyy) == 19610804);
    CHECK_THROWS_AS(sim::normalize_date("31/02/2000", sim::DateFormat::ddmmyyyy), DataError);
    CHECK_THROWS_AS(sim::normalize_date("nonsense", sim::DateFormat::month_name), DataError);
    // Leap handling.
    CHECK(sim::normalize_date("29/02/2000", sim::DateFormat::ddmmyyyy) == 20000229);
    CHECK_THROWS_AS(sim::normalize_date("29/02/1900", sim::DateFormat::ddmmyyyy), DataError);
}

TEST_CASE("date similarity") {
    CHECK(sim::date_similarity(19610804, 19610804) == 1.0);
    CHECK(sim::date_similarity(19610804, 19610805) == Approx(0.5));
    CHECK(sim::date_similarity(19610804, 19610813) == Approx(0.1));
    // Crosses a month boundary correctly.
    CHECK(sim::date_similarity(19611231, 19620101) == Approx(0.5));
}

TEST_CASE("categorical similarity from the insurance table") {
    sim::CategoryTable table;
    table.set("Car", "Motorbike", 0.7);
    table.set("Home", "Travel", 0.3);
    CHECK(sim::categorical_similarity("Car", "Motorbike", table) == Approx(0.7));
    CHECK(sim::categorical_similarity("Motorbike", "Car", table) == Approx(0.7));
    CHECK(sim::categorical_similarity("Home", "Travel", table) == Approx(0.3));
    CHECK(sim::categorical_similarity("Car", "Car", table) == 1.0);
    CHECK(sim::categorical_similarity("Car", "Home", table) == 0.0);
}

TEST_CASE("category table io") {
    namespace fs = std::filesystem;
    const fs::path p = fs::temp_directory_path() / "cdcr_cats.tsv";
    std::ofstream(p) << "# insurance types\nCar\tMotorbike\t0.7\nHome\tTravel\t0.3\n";
    auto table = sim::CategoryTable::load(p);
    CHECK(table.lookup("Motorbike", "Car") == Approx(0.7));
    CHECK(table.lookup("Travel", "Home") == Approx(0.3));
    fs::remove(p);
}

TEST_CASE("similarity outputs stay in range and symmetric") {
    std::mt19937 rng(31);
    sim::CorpusStats stats;
    stats.add_document_text("aa bb cc dd ee");
    stats.add_document_text("aa ff gg");
    stats.finalize();

    for (int i = 0; i < 2000; ++i) {
        const std::string a = random_string(rng, 12, "abcd ");
        const std::string b = random_string(rng, 12, "abcd ");
        for (double s : {sim::edit_similarity(a, b), sim::jaro(a, b), sim::jaro_winkler(a, b),
                         sim::qgram_similarity(a, b), sim::jaccard(a, b),
                         sim::tfidf_cosine(a, b, stats)}) {
            CHECK(s >= 0.0);
            CHECK(s <= 1.0);
        }
        CHECK(sim::jaro(a, b) == Approx(sim::jaro(b, a)));
        CHECK(sim::jaro_winkler(a, b) == Approx(sim::jaro_winkler(b, a)));
        CHECK(sim::edit_similarity(a, b) == Approx(sim::edit_similarity(b, a)));
        CHECK(sim::qgram_similarity(a, b) == Approx(sim::qgram_similarity(b, a)));
        CHECK(sim::jaccard(a, b) == Approx(sim::jaccard(b, a)));
        CHECK(sim::tfidf_cosine(a, b, stats) == Approx(sim::tfidf_cosine(b, a, stats)));
    }
}
