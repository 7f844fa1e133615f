#include "mildsim/expressions.hpp"

#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>

#include "mildsim/errors.hpp"

namespace mildsim {

namespace {

struct Token {
    enum Kind { Ident, Number, LParen, RParen, Comma, Equals, End } kind;
    std::string text;
    double number = 0.0;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) {}

    Token next() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ >= s_.size()) return {Token::End, ""};
        const char c = s_[pos_];
        if (c == '(') { ++pos_; return {Token::LParen, "("}; }
        if (c == ')') { ++pos_; return {Token::RParen, ")"}; }
        if (c == ',') { ++pos_; return {Token::Comma, ","}; }
        if (c == '=') { ++pos_; return {Token::Equals, "="}; }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
                ++pos_;
            }
            return {Token::Ident, s_.substr(start, pos_ - start)};
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
            char* end = nullptr;
            const double v = std::strtod(s_.c_str() + pos_, &end);
            if (end == s_.c_str() + pos_) {
                throw ConfigError("expression: cannot parse number near '" + s_.substr(pos_) + "'");
            }
            std::string text = s_.substr(pos_, static_cast<std::size_t>(end - s_.c_str()) - pos_);
            pos_ = static_cast<std::size_t>(end - s_.c_str());
            return {Token::Number, text, v};
        }
        throw ConfigError(std::string("expression: unexpected character '") + c + "'");
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    explicit Parser(const std::string& s) : lex_(s), text_(s) { advance(); }

    PeriodicLimitFn parse() {
        PeriodicLimitFn f = parse_expr();
        expect(Token::End, "end of expression");
        return f;
    }

private:
    void advance() { cur_ = lex_.next(); }

    void expect(Token::Kind k, const char* what) {
        if (cur_.kind != k) {
            throw ConfigError("expression '" + text_ + "': expected " + what);
        }
    }

    struct Args {
        std::vector<double> positional;
        std::map<std::string, double> named;
        std::vector<PeriodicLimitFn> subexprs;

        double get(const std::string& name, std::size_t pos, std::optional<double> fallback,
                   const std::string& where) const {
            if (auto it = named.find(name); it != named.end()) return it->second;
            if (pos < positional.size()) return positional[pos];
            if (fallback) return *fallback;
            throw ConfigError("expression '" + where + "': missing argument '" + name + "'");
        }
    };

    Args parse_args(const std::string& where) {
        Args args;
        expect(Token::LParen, "'('");
        advance();
        if (cur_.kind == Token::RParen) {
            advance();
            return args;
        }
        for (;;) {
            if (cur_.kind == Token::Number) {
                args.positional.push_back(cur_.number);
                advance();
            } else if (cur_.kind == Token::Ident) {
                const std::string name = cur_.text;
                advance();
                if (cur_.kind == Token::Equals) {
                    advance();
                    if (cur_.kind != Token::Number) {
                        throw ConfigError("expression '" + where + "': '" + name +
                                          "=' needs a number");
                    }
                    args.named[name] = cur_.number;
                    advance();
                } else {
                    args.subexprs.push_back(parse_call(name));
                }
            } else {
                throw ConfigError("expression '" + where + "': bad argument");
            }
            if (cur_.kind == Token::Comma) {
                advance();
                continue;
            }
            break;
        }
        expect(Token::RParen, "')'");
        advance();
        return args;
    }

    PeriodicLimitFn parse_expr() {
        expect(Token::Ident, "a registry name");
        const std::string name = cur_.text;
        advance();
        return parse_call(name);
    }

    PeriodicLimitFn parse_call(const std::string& name) {
        Args args;
        if (cur_.kind == Token::LParen) args = parse_args(name);

        if (name == "spike") {
            require_arity(name, args, 0, 0);
            return spike_fn();
        }
        if (name == "spike_limit") {
            require_arity(name, args, 0, 0);
            PeriodicLimitFn f;
            f.omega = 2.0;
            f.sup_bound = 1.0;
            f.eval = [](double t) { return eval_spike_limit(t); };
            f.known_limit = f.eval;
            return f;
        }
        if (name == "const") {
            const double v = args.get("value", 0, std::nullopt, name);
            const double omega = args.get("period", 1, 2.0, name);
            return const_fn(v, omega);
        }
        if (name == "sin") {
            const double period = args.get("period", 0, 2.0, name);
            const double amplitude = args.get("amplitude", 1, 1.0, name);
            return sin_fn(amplitude, period);
        }
        if (name == "decaying_sin") {
            const double period = args.get("period", 0, 2.0, name);
            const double amplitude = args.get("amplitude", 1, 1.0, name);
            const double rate = args.get("rate", 2, 1.0, name);
            return decaying_sin_fn(amplitude, period, rate);
        }
        if (name == "sum") {
            if (args.subexprs.size() != 2) {
                throw ConfigError("expression 'sum': needs two sub-expressions");
            }
            return sum_fn(args.subexprs[0], args.subexprs[1]);
        }
        if (name == "scale") {
            if (args.subexprs.size() != 1 || args.positional.size() != 1) {
                throw ConfigError("expression 'scale': needs (factor, expr)");
            }
            return scale_fn(args.positional[0], args.subexprs[0]);
        }
        if (name == "shift") {
            if (args.subexprs.size() != 1 || args.positional.size() != 1) {
                throw ConfigError("expression 'shift': needs (offset, expr)");
            }
            return shift_fn(args.positional[0], args.subexprs[0]);
        }
        throw ConfigError("expression: unknown registry name '" + name + "'");
    }

    static void require_arity(const std::string& name, const Args& args, std::size_t pos,
                              std::size_t sub) {
        if (args.positional.size() > pos || args.subexprs.size() > sub || !args.named.empty()) {
            throw ConfigError("expression '" + name + "': unexpected arguments");
        }
    }

    Lexer lex_;
    Token cur_;
    std::string text_;
};

} // namespace

PeriodicLimitFn parse_expression(const std::string& text) { return Parser(text).parse(); }

const std::vector<std::string>& expression_names() {
    static const std::vector<std::string> names = {
        "spike", "spike_limit", "sin", "const", "decaying_sin", "sum", "scale", "shift"};
    return names;
}

} // namespace mildsim
