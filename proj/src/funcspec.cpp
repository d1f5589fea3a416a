#include "imagearc/funcspec.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>

#include "imagearc/errors.hpp"

namespace imagearc {

namespace {

struct Value {
    enum class Kind { Number, List, Map } kind = Kind::Number;
    std::size_t pos = 0;
    Complex number;
    std::vector<Value> items;
    std::optional<MapExpr> map;
};

std::string_view kind_name(Value::Kind k) {
    switch (k) {
        case Value::Kind::Number: return "complex literal";
        case Value::Kind::List: return "list";
        case Value::Kind::Map: return "map expression";
    }
    return "?";
}

bool is_name_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_name_char(char c) { return is_name_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

constexpr std::array<std::string_view, 13> kNames = {"z",      "const",       "scale",         "shift",       "mobius",
                                                      "koebe",  "exp",         "log",           "powerseries", "blaschke_disc",
                                                      "blaschke_hp", "cayley", "inv_cayley"};

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    MapExpr parse_all() {
        MapExpr e = expr();
        skip_ws();
        if (pos_ != src_.size()) fail("'*', '/', '.' or end of input");
        return e;
    }

    Complex complex_all() {
        skip_ws();
        const Complex c = complex_literal();
        skip_ws();
        if (pos_ != src_.size()) fail("end of complex literal");
        return c;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
    bool at_end() const { return pos_ >= src_.size(); }

    void skip_ws() {
        while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\n' || peek() == '\r')) ++pos_;
    }

    std::string found_at(std::size_t p) const {
        if (p >= src_.size()) return "end of input";
        const auto c = static_cast<unsigned char>(src_[p]);
        if (c >= 0x20 && c < 0x7f) return std::string("'") + src_[p] + "'";
        char buf[16];
        std::snprintf(buf, sizeof buf, "byte 0x%02x", c);
        return buf;
    }

    [[noreturn]] void fail(const std::string& expected) const { throw ParseError(pos_, expected, found_at(pos_)); }

    void expect(char c) {
        skip_ws();
        if (peek() != c) fail(std::string("'") + c + "'");
        ++pos_;
    }

    MapExpr expr() {
        MapExpr left = term();
        for (;;) {
            skip_ws();
            const char op = peek();
            if (op != '*' && op != '/') return left;
            ++pos_;
            const MapExpr right = term();
            left = op == '*' ? left * right : left / right;
        }
    }

    MapExpr term() {
        MapExpr left = atom();
        for (;;) {
            skip_ws();
            if (peek() != '.') return left;
            ++pos_;
            left = MapExpr::compose(left, atom());
        }
    }

    MapExpr atom() {
        skip_ws();
        if (peek() == '(') {
            ++pos_;
            MapExpr e = expr();
            expect(')');
            return e;
        }
        if (is_name_start(peek())) return call();
        fail("function name or '('");
    }

    double real(bool allow_sign) {
        const std::size_t start = pos_;
        bool negative = false;
        if (allow_sign && (peek() == '+' || peek() == '-')) {
            negative = peek() == '-';
            ++pos_;
        }
        if (!is_digit(peek()) && peek() != '.') fail("number");
        const std::size_t digits = pos_;
        double v = 0.0;
        const auto [end, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), v);
        if (ec == std::errc::result_out_of_range) throw ParseError(start, "finite number", "out-of-range literal");
        if (ec != std::errc()) fail("number");
        pos_ = static_cast<std::size_t>(end - src_.data());
        if (pos_ == digits) fail("number");
        if (peek() == 'e' || peek() == 'E') {
            // from_chars stops before an incomplete exponent; blame its first bad byte.
            ++pos_;
            if (peek() == '+' || peek() == '-') ++pos_;
            fail("exponent digits");
        }
        return negative ? -v : v;
    }

    Complex complex_literal() {
        const double first = real(true);
        if (peek() == 'i') {
            ++pos_;
            return {0.0, first};
        }
        const std::size_t save = pos_;
        skip_ws();
        if (peek() == '+' || peek() == '-') {
            const bool negative = peek() == '-';
            ++pos_;
            skip_ws();
            const double second = real(false);
            if (peek() != 'i') fail("'i'");
            ++pos_;
            return {first, negative ? -second : second};
        }
        pos_ = save;
        return {first, 0.0};
    }

    Value value() {
        skip_ws();
        Value v;
        v.pos = pos_;
        const char c = peek();
        if (c == '[') {
            ++pos_;
            v.kind = Value::Kind::List;
            skip_ws();
            if (peek() == ']') {
                ++pos_;
                return v;
            }
            for (;;) {
                v.items.push_back(value());
                skip_ws();
                if (peek() == ']') {
                    ++pos_;
                    return v;
                }
                if (peek() != ',') fail("',' or ']'");
                ++pos_;
            }
        }
        if (is_digit(c) || c == '.' || c == '+' || c == '-') {
            v.kind = Value::Kind::Number;
            v.number = complex_literal();
            return v;
        }
        v.kind = Value::Kind::Map;
        v.map = expr();
        return v;
    }

    static Complex as_number(const Value& v) {
        if (v.kind != Value::Kind::Number) throw ParseError(v.pos, "complex literal", std::string(kind_name(v.kind)));
        return v.number;
    }

    static double as_real(const Value& v) {
        const Complex c = as_number(v);
        if (c.imag() != 0.0) throw ParseError(v.pos, "real number", "nonzero imaginary part");
        return c.real();
    }

    static const std::vector<Value>& as_list(const Value& v) {
        if (v.kind != Value::Kind::List) throw ParseError(v.pos, "list", std::string(kind_name(v.kind)));
        return v.items;
    }

    MapExpr call() {
        const std::size_t start = pos_;
        while (is_name_char(peek())) ++pos_;
        const std::string name(src_.substr(start, pos_ - start));
        if (std::find(kNames.begin(), kNames.end(), name) == kNames.end()) {
            throw ParseError(start, "function name", "'" + name + "'");
        }
        expect('(');
        std::vector<Value> args;
        skip_ws();
        if (peek() != ')') {
            for (;;) {
                args.push_back(value());
                skip_ws();
                if (peek() == ')') break;
                if (peek() != ',') fail("',' or ')'");
                ++pos_;
            }
        }
        const std::size_t close = pos_;
        ++pos_;

        const auto arity = [&](std::size_t lo, std::size_t hi) {
            if (args.size() > hi) throw ParseError(args[hi].pos, "')'", "extra argument to " + name);
            if (args.size() < lo) throw ParseError(close, "argument to " + name, "')'");
        };
        try {
            if (name == "z") return arity(0, 0), MapExpr::identity();
            if (name == "koebe") return arity(0, 0), MapExpr::koebe();
            if (name == "exp") return arity(0, 0), MapExpr::exp();
            if (name == "log") return arity(0, 0), MapExpr::log();
            if (name == "cayley") return arity(0, 0), MapExpr::cayley();
            if (name == "inv_cayley") return arity(0, 0), MapExpr::inverse_cayley();
            if (name == "const") return arity(1, 1), MapExpr::constant(as_number(args[0]));
            if (name == "scale") return arity(1, 1), MapExpr::scale(as_number(args[0]));
            if (name == "shift") return arity(1, 1), MapExpr::shift(as_number(args[0]));
            if (name == "mobius") {
                arity(4, 4);
                return MapExpr::mobius(MobiusTransform(as_number(args[0]), as_number(args[1]), as_number(args[2]),
                                                       as_number(args[3])));
            }
            if (name == "powerseries" || name == "blaschke_disc") {
                arity(1, 1);
                std::vector<Complex> cs;
                for (const Value& v : as_list(args[0])) cs.push_back(as_number(v));
                return name == "powerseries" ? MapExpr::power_series(std::move(cs))
                                             : MapExpr::blaschke_disc(std::move(cs));
            }
            // blaschke_hp
            arity(1, 2);
            std::vector<double> heights;
            for (const Value& v : as_list(args[0])) heights.push_back(as_real(v));
            std::vector<int> signs;
            if (args.size() == 2) {
                for (const Value& v : as_list(args[1])) {
                    const double s = as_real(v);
                    if (s != 1.0 && s != -1.0) throw ParseError(v.pos, "sign +1 or -1", "other number");
                    signs.push_back(static_cast<int>(s));
                }
            }
            return MapExpr::blaschke_half_plane(std::move(heights), std::move(signs));
        } catch (const ConstructionError& e) {
            throw ParseError(start, "valid arguments to " + name, e.what());
        }
    }
};

std::string real_text(double x) {
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    (void)ec;
    return std::string(buf.data(), end);
}

int precedence(const MapExpr& f) {
    const auto& k = f.node().kind;
    if (std::holds_alternative<node::Product>(k) || std::holds_alternative<node::Quotient>(k)) return 1;
    if (std::holds_alternative<node::Compose>(k)) return 2;
    return 3;
}

std::string emit(const MapExpr& f, int min_level);

std::string complex_list(const std::vector<Complex>& cs) {
    std::string s = "[";
    for (std::size_t i = 0; i < cs.size(); ++i) s += (i ? "," : "") + format_complex(cs[i]);
    return s + "]";
}

std::string raw(const MapExpr& f) {
    return std::visit(
        [](const auto& k) -> std::string {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, node::Identity>) return "z()";
            else if constexpr (std::is_same_v<K, node::Constant>) return "const(" + format_complex(k.value) + ")";
            else if constexpr (std::is_same_v<K, node::Scale>) return "scale(" + format_complex(k.factor) + ")";
            else if constexpr (std::is_same_v<K, node::Shift>) return "shift(" + format_complex(k.offset) + ")";
            else if constexpr (std::is_same_v<K, node::PowerSeries>) return "powerseries(" + complex_list(k.coefficients) + ")";
            else if constexpr (std::is_same_v<K, node::Mobius>) {
                const auto& t = k.transform;
                return "mobius(" + format_complex(t.a) + "," + format_complex(t.b) + "," + format_complex(t.c) + "," +
                       format_complex(t.d) + ")";
            } else if constexpr (std::is_same_v<K, node::Cayley>) return "cayley()";
            else if constexpr (std::is_same_v<K, node::InverseCayley>) return "inv_cayley()";
            else if constexpr (std::is_same_v<K, node::Koebe>) return "koebe()";
            else if constexpr (std::is_same_v<K, node::Exp>) return "exp()";
            else if constexpr (std::is_same_v<K, node::Log>) return "log()";
            else if constexpr (std::is_same_v<K, node::BlaschkeDisc>) return "blaschke_disc(" + complex_list(k.zeros) + ")";
            else if constexpr (std::is_same_v<K, node::BlaschkeHalfPlane>) {
                std::string s = "blaschke_hp([";
                for (std::size_t i = 0; i < k.heights.size(); ++i) s += (i ? "," : "") + real_text(k.heights[i]);
                s += "]";
                if (std::any_of(k.signs.begin(), k.signs.end(), [](int v) { return v != 1; })) {
                    s += ",[";
                    for (std::size_t i = 0; i < k.signs.size(); ++i) s += (i ? "," : "") + std::to_string(k.signs[i]);
                    s += "]";
                }
                return s + ")";
            } else if constexpr (std::is_same_v<K, node::Product>) return emit(k.left, 1) + " * " + emit(k.right, 2);
            else if constexpr (std::is_same_v<K, node::Quotient>) return emit(k.numerator, 1) + " / " + emit(k.denominator, 2);
            else return emit(k.outer, 2) + " . " + emit(k.inner, 3);
        },
        f.node().kind);
}

std::string emit(const MapExpr& f, int min_level) {
    const std::string s = raw(f);
    return precedence(f) < min_level ? "(" + s + ")" : s;
}

void check_source(std::string_view source) {
    if (source.size() > kMaxSourceBytes) throw ParseError(kMaxSourceBytes, "at most 65536 bytes", "longer source");
    for (std::size_t i = 0; i < source.size(); ++i) {
        const auto c = static_cast<unsigned char>(source[i]);
        if (c >= 0x80) {
            char buf[16];
            std::snprintf(buf, sizeof buf, "byte 0x%02x", c);
            throw ParseError(i, "ASCII character", buf);
        }
    }
}

}  // namespace

MapExpr parse(std::string_view source) {
    check_source(source);
    return Parser(source).parse_all();
}

Complex parse_complex(std::string_view text) {
    check_source(text);
    return Parser(text).complex_all();
}

std::string format_complex(Complex z) {
    return real_text(z.real()) + (std::signbit(z.imag()) ? "-" : "+") + real_text(std::abs(z.imag())) + "i";
}

std::string unparse(const MapExpr& f) { return emit(f, 1); }

}  // namespace imagearc
