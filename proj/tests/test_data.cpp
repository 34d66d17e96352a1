#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "testutil.hpp"
#include "tkge/dataset.hpp"
#include "tkge/errors.hpp"

using namespace tkge;

TEST_CASE("temporal alphabet is the 32 fixed tokens") {
    const auto& a = temporal_alphabet();
    REQUIRE(a.size() == 32);
    CHECK(a[0] == "0y");
    CHECK(a[9] == "9y");
    CHECK(a[10] == "01m");
    CHECK(a[21] == "12m");
    CHECK(a[22] == "0d");
    CHECK(a[31] == "9d");
    CHECK(temporal_token_index("03m") == 12);
    CHECK(temporal_token_index("bogus") == -1);
}

TEST_CASE("timestamp tokenization goldens") {
    SUBCASE("year only") {
        Timestamp ts;
        ts.year = 1961;
        CHECK(tokenize_timestamp(ts) == std::vector<std::string>{"1y", "9y", "6y", "1y"});
    }
    SUBCASE("year and month") {
        Timestamp ts;
        ts.year = 2009;
        ts.month = 1;
        CHECK(tokenize_timestamp(ts) == std::vector<std::string>{"2y", "0y", "0y", "9y", "01m"});
    }
    SUBCASE("full date") {
        Timestamp ts;
        ts.year = 2014;
        ts.month = 3;
        ts.day = 7;
        CHECK(tokenize_timestamp(ts) ==
              std::vector<std::string>{"2y", "0y", "1y", "4y", "03m", "0d", "7d"});
    }
    SUBCASE("zero-padded year") {
        Timestamp ts;
        ts.year = 25;
        CHECK(tokenize_timestamp(ts) == std::vector<std::string>{"0y", "0y", "2y", "5y"});
    }
    SUBCASE("year outside four digits is unsupported") {
        Timestamp ts;
        ts.year = 10000;
        CHECK_THROWS_AS(tokenize_timestamp(ts), DataError);
        ts.year = -431;
        CHECK_THROWS_AS(tokenize_timestamp(ts), DataError);
    }
    SUBCASE("granularity prefix is enforced") {
        Timestamp ts;
        ts.year = 2000;
        ts.day = 5;  // day without month
        CHECK_THROWS_AS(tokenize_timestamp(ts), std::invalid_argument);
    }
}

TEST_CASE("parse_fact_line") {
    SUBCASE("plain triple") {
        const ParsedFact f = parse_fact_line("BarackObama\tcountry\tUS", Dialect::Plain);
        CHECK(f.subject == "BarackObama");
        CHECK(f.relation == "country");
        CHECK(f.object == "US");
        CHECK(f.modifier == TemporalModifier::None);
        CHECK(!f.timestamp.has_value());
    }
    SUBCASE("modifier with partial timestamp") {
        const ParsedFact f =
            parse_fact_line("BarackObama\tpresident\tUS\toccursSince\t2009-01-##", Dialect::YAGO);
        CHECK(f.modifier == TemporalModifier::OccursSince);
        REQUIRE(f.timestamp.has_value());
        CHECK(f.timestamp->year == 2009);
        CHECK(f.timestamp->month == 1);
        CHECK(!f.timestamp->day.has_value());
    }
    SUBCASE("modifier without timestamp is an error") {
        CHECK_THROWS_AS(parse_fact_line("A\tr\tB\toccursSince", Dialect::YAGO), ParseError);
    }
    SUBCASE("unknown modifier literal is an error") {
        CHECK_THROWS_AS(parse_fact_line("A\tr\tB\toccursAround\t1999", Dialect::YAGO), ParseError);
    }
    SUBCASE("icews full date") {
        const ParsedFact f = parse_fact_line("Barack Obama\tMake a visit\tFrance\t2014-03-07",
                                             Dialect::ICEWS);
        CHECK(f.modifier == TemporalModifier::None);
        REQUIRE(f.timestamp.has_value());
        CHECK(f.timestamp->day == 7);
    }
    SUBCASE("yago decorations are stripped") {
        const ParsedFact f = parse_fact_line(
            "<Albert_Einstein>\t<wasBornIn>\t<Ulm>\t<occursSince>\t\"1879-##-##\"^^xsd:date",
            Dialect::YAGO);
        CHECK(f.subject == "Albert_Einstein");
        CHECK(f.relation == "wasBornIn");
        CHECK(f.modifier == TemporalModifier::OccursSince);
        REQUIRE(f.timestamp.has_value());
        CHECK(f.timestamp->year == 1879);
        CHECK(!f.timestamp->month.has_value());
    }
    SUBCASE("wikidata year-only interval") {
        const ParsedFact f = parse_fact_line("Q1\tP6\tQ2\toccursUntil\t1991", Dialect::WikidataInterval);
        CHECK(f.modifier == TemporalModifier::OccursUntil);
        CHECK(f.timestamp->year == 1991);
    }
    SUBCASE("malformed field counts") {
        CHECK_THROWS_AS(parse_fact_line("onlyone", Dialect::Plain), ParseError);
        CHECK_THROWS_AS(parse_fact_line("a\tb", Dialect::Plain), ParseError);
        CHECK_THROWS_AS(parse_fact_line("a\tb\tc\td\te\tf", Dialect::Plain), ParseError);
    }
    SUBCASE("out-of-range date components") {
        CHECK_THROWS_AS(parse_fact_line("a\tr\tb\t2014-13-01", Dialect::ICEWS), ParseError);
        CHECK_THROWS_AS(parse_fact_line("a\tr\tb\t2014-01-32", Dialect::ICEWS), ParseError);
        CHECK_THROWS_AS(parse_fact_line("a\tr\tb\t2014-##-07", Dialect::ICEWS), ParseError);
    }
    SUBCASE("error carries file and line") {
        try {
            parse_fact_line("a\tb", Dialect::Plain, "facts.txt", 17);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.file == "facts.txt");
            CHECK(e.line_no == 17);
            CHECK(std::string(e.what()).find("facts.txt:17") != std::string::npos);
        }
    }
}

TEST_CASE("token vocabulary layout") {
    Vocabulary rels;
    rels.intern("country");
    rels.intern("born");
    rels.intern("president");
    TokenVocabulary vocab(rels);
    CHECK(vocab.size() == 3 + 2 + 32);
    CHECK(vocab.relation_token_id(0) == 0);
    CHECK(vocab.modifier_token_id(TemporalModifier::OccursSince) == 3);
    CHECK(vocab.modifier_token_id(TemporalModifier::OccursUntil) == 4);
    CHECK(vocab.temporal_token_id("0y") == 5);
    CHECK(vocab.temporal_token_id("9d") == 3 + 2 + 31);
    CHECK(vocab.token_name(1) == "born");
    CHECK(vocab.token_name(3) == "since");
    CHECK(vocab.token_name(5) == "0y");
    CHECK_THROWS_AS(vocab.token_name(100), DataError);
}

TEST_CASE("predicate sequences match the worked examples") {
    Vocabulary rels;
    const int country = rels.intern("country");
    const int born = rels.intern("born");
    const int president = rels.intern("president");
    TokenVocabulary vocab(rels);

    const auto names = [&vocab](const PredicateSequence& seq) {
        std::vector<std::string> out;
        for (int id : seq.token_ids) out.push_back(vocab.token_name(id));
        return out;
    };

    SUBCASE("(Obama, country, US)") {
        const PredicateSequence seq =
            build_predicate_sequence(country, TemporalModifier::None, std::nullopt, vocab);
        CHECK(names(seq) == std::vector<std::string>{"country"});
    }
    SUBCASE("(Obama, born, US, 1961)") {
        Timestamp ts;
        ts.year = 1961;
        const PredicateSequence seq = build_predicate_sequence(born, TemporalModifier::None, ts, vocab);
        CHECK(names(seq) == std::vector<std::string>{"born", "1y", "9y", "6y", "1y"});
    }
    SUBCASE("(Obama, president, US, since, 2009-01)") {
        Timestamp ts;
        ts.year = 2009;
        ts.month = 1;
        const PredicateSequence seq =
            build_predicate_sequence(president, TemporalModifier::OccursSince, ts, vocab);
        CHECK(names(seq) ==
              std::vector<std::string>{"president", "since", "2y", "0y", "0y", "9y", "01m"});
    }
    SUBCASE("unknown relation id") {
        CHECK_THROWS_AS(build_predicate_sequence(99, TemporalModifier::None, std::nullopt, vocab),
                        DataError);
    }
}

TEST_CASE("sequence round trip and bounds over random timestamps") {
    Vocabulary rels;
    for (int i = 0; i < 5; ++i) rels.intern("rel" + std::to_string(i));
    TokenVocabulary vocab(rels);
    Rng rng(123);
    for (int iter = 0; iter < 500; ++iter) {
        const int rel = rng.uniform_int(5);
        const int granularity = rng.uniform_int(4);  // 0: none, 1: y, 2: ym, 3: ymd
        std::optional<Timestamp> ts;
        if (granularity > 0) {
            Timestamp t;
            t.year = rng.uniform_int(10000);
            if (granularity > 1) t.month = 1 + rng.uniform_int(12);
            if (granularity > 2) t.day = 1 + rng.uniform_int(31);
            ts = t;
        }
        TemporalModifier mod = TemporalModifier::None;
        if (ts && rng.uniform_int(2) == 1) {
            mod = rng.uniform_int(2) == 0 ? TemporalModifier::OccursSince : TemporalModifier::OccursUntil;
        }
        const PredicateSequence seq = build_predicate_sequence(rel, mod, ts, vocab);

        CHECK(seq.length() >= 1);
        CHECK(seq.length() <= 9);
        // Every non-first token past the modifier is in the 32-token alphabet.
        for (std::size_t i = 1; i < seq.token_ids.size(); ++i) {
            const bool mod_pos = i == 1 && mod != TemporalModifier::None;
            if (!mod_pos) CHECK(vocab.is_temporal_token(seq.token_ids[i]));
        }

        const DecodedSequence dec = decode_predicate_sequence(seq, vocab);
        CHECK(dec.relation == "rel" + std::to_string(rel));
        CHECK(dec.modifier == mod);
        CHECK(dec.timestamp == ts);
    }
}

TEST_CASE("build_dataset assembles vocabularies, stats and the filter index") {
    using test::make_fact;
    Timestamp y2014_0101;
    y2014_0101.year = 2014;
    y2014_0101.month = 1;
    y2014_0101.day = 1;
    Timestamp y1961;
    y1961.year = 1961;

    std::vector<ParsedFact> train = {
        make_fact("a", "r1", "b", TemporalModifier::None, y2014_0101),
        make_fact("b", "r2", "c"),
        make_fact("a", "r1", "b", TemporalModifier::None, y2014_0101),  // duplicate collapses
        make_fact("c", "r1", "a", TemporalModifier::OccursSince, y1961),
    };
    std::vector<ParsedFact> valid = {make_fact("a", "r2", "d")};  // d appears only here
    std::vector<ParsedFact> test = {make_fact("d", "r3", "a", TemporalModifier::None, y1961)};

    const DatasetBundle bundle = build_dataset(train, valid, test);

    CHECK(bundle.num_entities() == 4);
    CHECK(bundle.num_relations() == 3);
    CHECK(bundle.train_stats.facts == 4);
    CHECK(bundle.train_stats.with_time == 3);
    CHECK(bundle.valid_stats.facts == 1);
    CHECK(bundle.test_stats.with_time == 1);
    CHECK(bundle.distinct_timestamps == 2);  // 2014-01-01 and 1961-##-##

    // Every fact of every split has its key in the filter index; the
    // duplicate collapsed.
    for (const auto* split : {&bundle.train, &bundle.valid, &bundle.test}) {
        for (const TemporalFact& f : *split) {
            CHECK(bundle.known_fact(f.subject, f.seq_id, f.object));
        }
    }
    CHECK(bundle.filter_index.size() == 5);

    // Timestamp keys come from the training split only and fold the modifier.
    CHECK(bundle.timestamp_keys.size() == 2);
    CHECK(bundle.timestamp_key_ids.count("@2014-01-01") == 1);
    CHECK(bundle.timestamp_key_ids.count("since@1961-##-##") == 1);
    // Same timestamp but no matching train key (modifier differs): unseen.
    CHECK(bundle.test[0].ts_key == -1);
}

TEST_CASE("dataset loading errors") {
    using test::make_fact;
    SUBCASE("empty training split") {
        CHECK_THROWS_AS(build_dataset({}, {}, {}), DataError);
    }
    SUBCASE("year outside 0..9999 rejected at load") {
        Timestamp bad;
        bad.year = -431;
        CHECK_THROWS_AS(build_dataset({make_fact("a", "r", "b", TemporalModifier::None, bad)}, {}, {}),
                        DataError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_dataset("/nonexistent/train.txt", "x", "y", Dialect::Plain), DataError);
    }
    SUBCASE("train file exists but holds no facts") {
        namespace fs = std::filesystem;
        const fs::path p = fs::temp_directory_path() / "tkge_empty_train.txt";
        std::ofstream(p) << "\n\n";
        try {
            load_dataset(p.string(), p.string(), p.string(), Dialect::Plain);
            FAIL("expected DataError");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find("empty") != std::string::npos);
        }
        fs::remove(p);
    }
}

TEST_CASE("facts sharing relation but differing in timestamp get distinct filter keys") {
    using test::make_fact;
    Timestamp t1, t2;
    t1.year = 1961;
    t2.year = 1962;
    const DatasetBundle bundle = build_dataset({make_fact("s", "bornIn", "a", TemporalModifier::None, t1),
                                                make_fact("s", "bornIn", "b", TemporalModifier::None, t2)},
                                               {}, {});
    const TemporalFact& f1 = bundle.train[0];
    const TemporalFact& f2 = bundle.train[1];
    CHECK(f1.seq_id != f2.seq_id);
    CHECK(bundle.known_fact(f1.subject, f1.seq_id, f1.object));
    CHECK(!bundle.known_fact(f1.subject, f1.seq_id, f2.object));
    // Time-agnostic keys collapse them.
    CHECK(bundle.known_relation_fact(f1.subject, f1.relation, f2.object));
}
