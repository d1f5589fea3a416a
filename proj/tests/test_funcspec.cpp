#include <doctest.h>

#include <cctype>
#include <string>

#include "gen.hpp"
#include "imagearc/errors.hpp"
#include "imagearc/funcspec.hpp"

using namespace imagearc;

namespace {

// Start of the identifier or number token covering byte i of s, or i itself.
std::size_t token_start(const std::string& s, std::size_t i) {
    const auto word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    while (i > 0 && word(s[i - 1])) --i;
    return i;
}

std::size_t parse_error_position(const std::string& text) {
    try {
        parse(text);
    } catch (const ParseError& e) {
        return e.position();
    }
    return std::string::npos;
}

}  // namespace

TEST_CASE("grammar examples parse to the stated trees") {
    CHECK(parse("koebe()") == MapExpr::koebe());
    CHECK(parse("koebe()").domain() == MetricId::HyperbolicDisc);
    CHECK(parse("scale(0.5+0i) . koebe()") == MapExpr::compose(MapExpr::scale(0.5), MapExpr::koebe()));

    const MapExpr b = MapExpr::blaschke_half_plane({1.0, 4.0, 9.0, 16.0});
    const MapExpr q = MapExpr::quotient(MapExpr::compose(b, MapExpr::shift(1.0)), MapExpr::compose(b, MapExpr::shift(-1.0)));
    const MapExpr parsed = parse("blaschke_hp([1,4,9,16]) . shift(1+0i) / blaschke_hp([1,4,9,16]) . shift(-1+0i)");
    CHECK(parsed == q);
    CHECK(parsed.domain() == MetricId::HyperbolicHalfPlane);
}

TEST_CASE("unparse examples") {
    CHECK(unparse(MapExpr::koebe()) == "koebe()");
    CHECK(unparse(MapExpr::compose(MapExpr::scale(2.0), MapExpr::identity())) == "scale(2+0i) . z()");
}

TEST_CASE("composition binds tighter than product") {
    const MapExpr a = MapExpr::koebe(), b = MapExpr::scale(0.5), c = MapExpr::identity();
    CHECK(parse("koebe() . scale(0.5) * z()") == MapExpr::product(MapExpr::compose(a, b), c));
    CHECK(parse("koebe() . (scale(0.5) * z())") == MapExpr::compose(a, MapExpr::product(b, c)));
    CHECK(parse("z() / z() * z()") ==
          MapExpr::product(MapExpr::quotient(MapExpr::identity(), MapExpr::identity()), MapExpr::identity()));
    CHECK(parse("  koebe ( )\t.\nscale( 0.5 )") == parse("koebe().scale(0.5)"));
}

TEST_CASE("complex literals") {
    CHECK(parse_complex("0.5+0i") == Complex(0.5, 0.0));
    CHECK(parse_complex("-2i") == Complex(0.0, -2.0));
    CHECK(parse_complex("3") == Complex(3.0, 0.0));
    CHECK(parse_complex("1e-3-2.5i") == Complex(1e-3, -2.5));
    CHECK_THROWS_AS(parse_complex("1+2"), ParseError);
    CHECK_THROWS_AS(parse_complex("i"), ParseError);
    gen::Gen g(61);
    for (int k = 0; k < 200; ++k) {
        const Complex z = g.complex(g.coin() ? 1e-6 : 1e6);
        CHECK(parse_complex(format_complex(z)) == z);
    }
}

TEST_CASE("parse errors carry the offending position") {
    const auto at = [](const std::string& text) { return parse_error_position(text); };
    CHECK(at("koebe(") == 6);
    CHECK(at("kobe()") == 0);
    CHECK(at("koebe() * ") == 10);
    CHECK(at("scale(1+2)") == 9);
    CHECK(at("koebe() koebe()") == 8);
    CHECK(at("") == 0);
    try {
        parse("z() $ z()");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position() == 4);
        CHECK(e.found().find('$') != std::string::npos);
    }
    CHECK_THROWS_AS(parse(std::string(kMaxSourceBytes + 1, ' ')), ParseError);
}

TEST_CASE("mismatched composition tags are typed errors") {
    CHECK_THROWS_AS(parse("blaschke_hp([1]) . koebe()"), CompositionError);
    CHECK_THROWS_AS(parse("koebe() . inv_cayley()"), CompositionError);
    CHECK_NOTHROW(parse("blaschke_hp([1]) . inv_cayley()"));
    CHECK_NOTHROW(parse("koebe() . blaschke_hp([1])"));
    CHECK_THROWS_AS(parse("blaschke_hp([1]) * koebe()"), CompositionError);
}

TEST_CASE("property: parse inverts unparse on random trees") {
    gen::Gen g(62);
    for (int k = 0; k < 100; ++k) {
        const MapExpr f = g.tree(4);
        const std::string text = unparse(f);
        CHECK_MESSAGE(parse(text) == f, text);
        CHECK(unparse(parse(text)) == text);
    }
}

TEST_CASE("property: a single illegal byte is reported where it was inserted") {
    gen::Gen g(63);
    const std::string illegal = "#$@!?;&%`~^|";
    int checked = 0;
    for (int k = 0; k < 300; ++k) {
        std::string text = unparse(g.tree(3));
        const std::size_t at = static_cast<std::size_t>(g.integer(0, static_cast<int>(text.size())));
        const char bad = illegal[static_cast<std::size_t>(g.integer(0, static_cast<int>(illegal.size()) - 1))];
        const std::size_t start = token_start(text, at);
        text.insert(at, 1, bad);
        const std::size_t pos = parse_error_position(text);
        REQUIRE_MESSAGE(pos != std::string::npos, text);
        CHECK_MESSAGE((pos == at || pos == start), text, " reported ", pos);
        ++checked;
    }
    CHECK(checked == 300);
}
