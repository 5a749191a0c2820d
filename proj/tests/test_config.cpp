#include "multibump/config.hpp"

#include <gtest/gtest.h>

#include <filesystem>

#include "multibump/csvio.hpp"

using multibump::Config;
using multibump::ConfigError;

namespace {

Config parse(const std::string& text) { return Config::parse_string(text, "test.cfg"); }

std::string thrown_message(const std::string& text) {
    try {
        Config::parse_string(text, "test.cfg");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Config, SectionPrefixesKeys) {
    const Config c = parse("[curve]\nkind = circle\n[chain]\nn = 4\n");
    EXPECT_EQ(c.get_string("curve.kind"), "circle");
    EXPECT_EQ(c.get_int("chain.n"), 4);
    EXPECT_FALSE(c.has("kind"));
}

TEST(Config, BareKeysBeforeFirstSection) {
    const Config c = parse("seed = 7\n[curve]\nkind = segment\n");
    EXPECT_EQ(c.get_int("seed"), 7);
}

TEST(Config, CommentsAndBlankLinesSkipped) {
    const Config c = parse("# header comment\n\n[a]\nx = 1  # trailing\n\n# tail\n");
    EXPECT_DOUBLE_EQ(c.get_double("a.x"), 1.0);
    EXPECT_EQ(c.keys().size(), 1u);
}

TEST(Config, TypedGettersAndFallbacks) {
    const Config c = parse("[p]\nlam = -0.25\nn = 12\nflag = yes\nname = abc\n");
    EXPECT_DOUBLE_EQ(c.get_double("p.lam"), -0.25);
    EXPECT_EQ(c.get_int("p.n"), 12);
    EXPECT_TRUE(c.get_bool("p.flag"));
    EXPECT_EQ(c.get_string("p.name"), "abc");
    EXPECT_DOUBLE_EQ(c.get_double("p.absent", 2.5), 2.5);
    EXPECT_EQ(c.get_int("p.absent", -3), -3);
    EXPECT_FALSE(c.get_bool("p.absent", false));
    EXPECT_EQ(c.get_string("p.absent", "dflt"), "dflt");
}

TEST(Config, ListSplitsOnCommas) {
    const Config c = parse("[s]\nR = 20, 40,80\n");
    const std::vector<double> r = c.get_list("s.R");
    ASSERT_EQ(r.size(), 3u);
    EXPECT_DOUBLE_EQ(r[0], 20.0);
    EXPECT_DOUBLE_EQ(r[2], 80.0);
    EXPECT_THROW(c.get_list("s.missing"), ConfigError);
}

TEST(Config, DuplicateKeyNamesBothLines) {
    const std::string msg = thrown_message("[a]\nx = 1\nx = 2\n");
    EXPECT_NE(msg.find("test.cfg:3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("duplicate key 'a.x'"), std::string::npos) << msg;
    EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

TEST(Config, WhereReportsOriginAndLine) {
    const Config c = parse("[a]\n\nx = 1\n");
    EXPECT_EQ(c.where("a.x"), "test.cfg:3: key 'a.x'");
}

TEST(Config, MissingKeyMentionsOrigin) {
    const Config c = parse("[a]\nx = 1\n");
    try {
        c.get_double("a.y");
        FAIL() << "expected a parse error";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("test.cfg"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("a.y"), std::string::npos);
    }
}

TEST(Config, MalformedLinesRejected) {
    EXPECT_THROW(parse("[a\nx = 1\n"), ConfigError);      // unterminated header
    EXPECT_THROW(parse("[9bad]\n"), ConfigError);          // section name
    EXPECT_THROW(parse("[a]\njust a line\n"), ConfigError);  // no equals
    EXPECT_THROW(parse("[a]\n2x = 1\n"), ConfigError);     // key name
    EXPECT_THROW(parse("[a]\nx =\n"), ConfigError);        // empty value
}

TEST(Config, ValueValidation) {
    const Config c = parse("[a]\nx = abc\nn = 2.5\nbig = 99999999999\nb = maybe\n");
    EXPECT_THROW(c.get_double("a.x"), ConfigError);
    EXPECT_THROW(c.get_int("a.n"), ConfigError);
    EXPECT_THROW(c.get_int("a.big"), ConfigError);
    EXPECT_THROW(c.get_bool("a.b"), ConfigError);
    EXPECT_THROW(c.get_list("a.x"), ConfigError);
}

TEST(Config, FileRoundTripAndMissingFile) {
    const std::string path = (std::filesystem::temp_directory_path() /
                              "multibump_config_roundtrip.cfg")
                                 .string();
    multibump::write_text_atomic(path, "[s]\nR = 20, 40, 80\n");
    const Config c = Config::parse_file(path);
    EXPECT_EQ(c.get_list("s.R").size(), 3u);
    EXPECT_NE(c.where("s.R").find(path), std::string::npos);
    EXPECT_THROW(Config::parse_file(path + ".nope"), ConfigError);
    std::filesystem::remove(path);
}
