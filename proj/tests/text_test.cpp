#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "cloze/csv.hpp"
#include "cloze/errors.hpp"
#include "cloze/text.hpp"

using namespace cloze;

TEST_CASE("normalize_word collapses tokenization variants") {
    CHECK(text::normalize_word(" cat") == "cat");
    CHECK(text::normalize_word("Cat") == "cat");
    CHECK(text::normalize_word("cat") == "cat");
}

TEST_CASE("normalize_word drops all-symbol tokens") {
    CHECK(!text::normalize_word("42!"));
    CHECK(!text::normalize_word("  "));
    CHECK(!text::normalize_word(""));
    CHECK(!text::normalize_word("!!"));
}

TEST_CASE("normalize_word keeps non-ASCII letters") {
    CHECK(text::normalize_word("Tür.") == "tür");
    CHECK(text::normalize_word("ÄPFEL") == "äpfel");
    CHECK(text::normalize_word(" Straße\n") == "straße");
    CHECK(text::normalize_word("naïve!") == "naïve");
}

TEST_CASE("normalize_word strips internal separators") {
    CHECK(text::normalize_word("ice cream") == "icecream");
    CHECK(text::normalize_word("don't") == "dont");
    CHECK(text::normalize_word("e-mail") == "email");
}

TEST_CASE("lower_trim leaves punctuation alone") {
    CHECK(text::lower_trim("  Sugar ") == "sugar");
    CHECK(text::lower_trim("Tür.") == "tür.");
    CHECK(text::lower_trim("\tA B\n") == "a b");
}

TEST_CASE("utf8 validation") {
    CHECK(text::is_valid_utf8("plain ascii"));
    CHECK(text::is_valid_utf8("tür äöü ß"));
    CHECK(!text::is_valid_utf8("\xff\xfe"));
    CHECK(!text::is_valid_utf8("trunc \xc3"));
    CHECK(!text::is_valid_utf8("\xc0\xaf"));  // overlong '/'
}

TEST_CASE("has_internal_whitespace ignores the edges") {
    CHECK(!text::has_internal_whitespace("  word  "));
    CHECK(text::has_internal_whitespace("two words"));
    CHECK(text::has_internal_whitespace(" a\tb "));
    CHECK(!text::has_internal_whitespace(""));
}

TEST_CASE("csv reader handles quotes, embedded delimiters and CRLF") {
    std::istringstream in(
        "a,b,c\r\n"
        "1,\"x, y\",\"he said \"\"hi\"\"\"\n"
        "2,\"multi\nline\",plain\n");
    csv::Reader reader(in);
    auto header = reader.next();
    REQUIRE(header);
    CHECK(header->fields == std::vector<std::string>{"a", "b", "c"});
    auto r1 = reader.next();
    REQUIRE(r1);
    CHECK(r1->fields == std::vector<std::string>{"1", "x, y", "he said \"hi\""});
    CHECK(r1->line_no == 2);
    auto r2 = reader.next();
    REQUIRE(r2);
    CHECK(r2->fields == std::vector<std::string>{"2", "multi\nline", "plain"});
    CHECK(!reader.next());
}

TEST_CASE("csv reader reports malformed quoting") {
    std::istringstream open_quote("a\n\"unterminated\n");
    csv::Reader r1(open_quote);
    r1.next();
    CHECK_THROWS_AS(r1.next(), MalformedRowError);

    std::istringstream stray("a\nfoo\"bar\n");
    csv::Reader r2(stray);
    r2.next();
    CHECK_THROWS_AS(r2.next(), MalformedRowError);
}

TEST_CASE("csv writer round-trips awkward fields") {
    std::ostringstream out;
    csv::write_row(out, {"id", "x, y", "say \"hi\"", "nl\nend"});
    std::istringstream in(out.str());
    csv::Reader reader(in);
    auto row = reader.next();
    REQUIRE(row);
    CHECK(row->fields == std::vector<std::string>{"id", "x, y", "say \"hi\"", "nl\nend"});
}

TEST_CASE("csv reader honors a custom delimiter") {
    std::istringstream in("a;b\n1;2\n");
    csv::Reader reader(in, ';');
    auto header = reader.next();
    REQUIRE(header);
    CHECK(header->fields == std::vector<std::string>{"a", "b"});
    auto row = reader.next();
    REQUIRE(row);
    CHECK(row->fields == std::vector<std::string>{"1", "2"});
}
