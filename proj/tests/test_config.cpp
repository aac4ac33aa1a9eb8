#include "qdcav/config.hpp"
#include "qdcav/units.hpp"

#include <doctest.h>

#include <string>

using namespace qdcav::config;

namespace {

// Returns the line number carried by the parse error, or -1 when none.
int error_line(std::string_view text)
{
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST_CASE("grammar")
{
    const auto s = parse(
        "# leading comment\n"
        "command = indist\n"
        "seed = 42   # trailing comment\n"
        "\n"
        "[indist]\n"
        "lifetime = 650 ps\n"
        "lambda = 929nm\n"
        "mu = 37.2 D\n"
        "alpha = 1e0\n"
        "no_jitter = false\n"
        "model = eq3\n"
        "label = \"two words # not a comment\"\n");
    REQUIRE(s.size() == 2);
    CHECK(s[0].name.empty());
    CHECK(s[0].entries.size() == 2);
    CHECK(s[1].name == "indist");
    CHECK(s[1].line == 5);
    const auto& e = s[1].entries;
    CHECK(e[0].second.number == 650.0);
    CHECK(e[0].second.unit == "ps");
    CHECK(e[0].second.line == 6);
    CHECK(e[1].second.unit == "nm");
    CHECK(e[2].second.unit == "D");
    CHECK(e[3].second.kind == Value::Kind::number);
    CHECK(e[4].second.kind == Value::Kind::boolean);
    CHECK_FALSE(e[4].second.boolean);
    CHECK(e[5].second.kind == Value::Kind::string);
    CHECK(e[5].second.text == "eq3");
    CHECK(e[6].second.text == "two words # not a comment");
}

TEST_CASE("syntax errors carry line numbers")
{
    CHECK(error_line("command = x\nfoo\n") == 2);
    CHECK(error_line("a = 1\na = 2\n") == 2);
    CHECK(error_line("[s]\n[s]\n") == 2);
    CHECK(error_line("[s\n") == 1);
    CHECK(error_line("\n\nx = 12abc\n") == 3);
    CHECK(error_line("x = \"open\n") == 1);
    CHECK(error_line("x =\n") == 1);
    CHECK(error_line("bad key = 1\n") == 1);
    CHECK(error_line("x = two words\n") == 1);
    CHECK(error_line("x = 1\n[s]\nx = 1\n") == -1);

    try {
        parse("ok = 1\n= 3\n");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).rfind("line 2:", 0) == 0);
    }
}

TEST_CASE("typed reader converts at the boundary")
{
    const auto s = parse("[p]\nt = 650 ps\nu = 3 ns\nv = 2.5\nl = 929 nm\nmu = 20.8 D\nraw = 1e-29\nn = 1e6\nk = 12\nf = true\n");
    ParamReader r(&s[1], "p.");
    CHECK(r.time_ns("t", std::nullopt) == doctest::Approx(0.65).epsilon(1e-15));
    CHECK(r.time_ns("u", std::nullopt) == 3.0);
    CHECK(r.time_ns("v", std::nullopt) == 2.5);
    CHECK(r.length_nm("l", std::nullopt) == 929.0);
    CHECK(r.dipole_cm("mu", std::nullopt) == doctest::Approx(20.8 * 3.33564e-30).epsilon(1e-5));
    CHECK(r.dipole_cm("raw", std::nullopt) == 1e-29);
    CHECK(r.count("n", std::nullopt) == 1000000);
    CHECK(r.count("k", std::nullopt) == 12);
    CHECK(r.flag("f", std::nullopt));
    CHECK(r.number("missing", 7.0) == 7.0);
    CHECK_NOTHROW(r.finish());
    CHECK(r.resolved().front().first == "p.t (ns)");
    CHECK(r.resolved().front().second == format_number(0.65));
}

TEST_CASE("typed reader rejects misuse")
{
    const auto s = parse("[p]\nrate = 3 ns\nlen = 4 ps\nc = 2.5\nneg = -1\nb = yes\nstr = 5\nextra = 1\n");
    ParamReader r(&s[1]);
    CHECK_THROWS_AS(r.rate_per_ns("rate", std::nullopt), ConfigError);
    CHECK_THROWS_AS(r.length_nm("len", std::nullopt), ConfigError);
    CHECK_THROWS_AS(r.count("c", std::nullopt), ConfigError);
    CHECK_THROWS_AS(r.count("neg", std::nullopt), ConfigError);
    CHECK_THROWS_AS(r.flag("b", std::nullopt), ConfigError);
    CHECK_THROWS_AS(r.text("str", std::nullopt), ConfigError);
    CHECK_THROWS_AS(r.number("absent", std::nullopt), ConfigError);
    try {
        r.finish();
        FAIL("expected an unknown-key error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 8);
        CHECK(std::string(e.what()).find("extra") != std::string::npos);
    }
}

TEST_CASE("missing section reads defaults")
{
    ParamReader r(nullptr, "x.");
    CHECK(r.number("a", 1.5) == 1.5);
    CHECK_NOTHROW(r.finish());
    CHECK(format_number(0.1) == "0.10000000000000001");
}
