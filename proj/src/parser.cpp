#include "qclp/parser.hpp"

#include <cctype>
#include <map>
#include <optional>

namespace qclp {

namespace {

enum class Tok {
    LowerIdent,   // constructor / relation symbol
    UpperIdent,   // variable (uppercase or underscore initial)
    Number,       // decimal literal
    String,       // double-quoted (grammar terminals share this lexer)
    LParen,
    RParen,
    Comma,
    Equals,
    Amp,
    Dot,
    Arrow,        // <-
    RuleArrow,    // ->
    Colon,
    At,
    End,
    Bad,
};

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_space_and_comments();
        int line = line_, col = col_;
        if (eof()) return {Tok::End, "", line, col};
        char c = text_[pos_];
        if (c == '(') return take(Tok::LParen, 1, line, col);
        if (c == ')') return take(Tok::RParen, 1, line, col);
        if (c == ',') return take(Tok::Comma, 1, line, col);
        if (c == '=') return take(Tok::Equals, 1, line, col);
        if (c == '&') return take(Tok::Amp, 1, line, col);
        if (c == ':') return take(Tok::Colon, 1, line, col);
        if (c == '@') return take(Tok::At, 1, line, col);
        if (c == '<' && peek(1) == '-') return take(Tok::Arrow, 2, line, col);
        if (c == '-' && peek(1) == '>') return take(Tok::RuleArrow, 2, line, col);
        if (c == '.') {
            if (std::isdigit(static_cast<unsigned char>(peek(1)))) return lex_number(line, col);
            return take(Tok::Dot, 1, line, col);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(line, col);
        if (c == '"') return lex_string(line, col);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_ident(line, col);
        return take(Tok::Bad, 1, line, col);
    }

private:
    bool eof() const { return pos_ >= text_.size(); }
    char peek(size_t off = 0) const {
        return pos_ + off < text_.size() ? text_[pos_ + off] : '\0';
    }
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    Token take(Tok kind, int len, int line, int col) {
        std::string s(text_.substr(pos_, len));
        for (int i = 0; i < len; ++i) advance();
        return {kind, s, line, col};
    }
    void skip_space_and_comments() {
        while (!eof()) {
            char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '%') {
                while (!eof() && text_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }
    Token lex_number(int line, int col) {
        std::string s;
        while (!eof() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            s += text_[pos_];
            advance();
        }
        if (!eof() && text_[pos_] == '.' &&
            std::isdigit(static_cast<unsigned char>(peek(1)))) {
            s += '.';
            advance();
            while (!eof() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                s += text_[pos_];
                advance();
            }
        }
        return {Tok::Number, s, line, col};
    }
    Token lex_string(int line, int col) {
        advance();  // opening quote
        std::string s;
        while (!eof() && text_[pos_] != '"') {
            s += text_[pos_];
            advance();
        }
        if (eof()) return {Tok::Bad, s, line, col};
        advance();  // closing quote
        return {Tok::String, s, line, col};
    }
    Token lex_ident(int line, int col) {
        std::string s;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                          text_[pos_] == '_')) {
            s += text_[pos_];
            advance();
        }
        bool upper = std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_';
        return {upper ? Tok::UpperIdent : Tok::LowerIdent, s, line, col};
    }

    std::string_view text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

// Clause-local variable scoping plus signature bookkeeping shared between
// the program and query parsers.
class Parser {
public:
    Parser(std::string_view text, std::string file)
        : lexer_(text), file_(std::move(file)) {
        cur_ = lexer_.next();
    }

    ParseResult parse_program() {
        ParseResult result;
        while (cur_.kind != Tok::End) {
            var_scope_.clear();
            std::optional<RawClause> clause = parse_clause();
            if (clause) {
                result.program.clauses.push_back(normalize_clause(*clause));
            } else {
                sync_to_dot();
            }
        }
        result.program.signature = signature_;
        result.diagnostics = diagnostics_;
        if (result.ok()) {
            auto post = validate(result.program);
            for (Diagnostic& d : post) d.file = file_;
            result.diagnostics.insert(result.diagnostics.end(), post.begin(), post.end());
        }
        return result;
    }

    QueryParse parse_query_body() {
        QueryParse out;
        std::vector<Equation> eqs;
        if (!parse_body_items(out.atoms, eqs)) {
            out.diagnostics = diagnostics_;
            return out;
        }
        if (cur_.kind != Tok::End) error("unexpected input after query");
        out.constraint = HerbrandConstraint::of_equations(std::move(eqs));
        out.diagnostics = diagnostics_;
        return out;
    }

private:
    void advance() { cur_ = lexer_.next(); }

    void error(const std::string& msg) {
        diagnostics_.push_back(
            {file_, cur_.line, cur_.column, Diagnostic::Severity::Error, msg});
    }
    void error_at(const Token& t, const std::string& msg) {
        diagnostics_.push_back({file_, t.line, t.column, Diagnostic::Severity::Error, msg});
    }

    bool expect(Tok kind, const std::string& what) {
        if (cur_.kind != kind) {
            error("expected " + what);
            return false;
        }
        advance();
        return true;
    }

    void sync_to_dot() {
        while (cur_.kind != Tok::Dot && cur_.kind != Tok::End) advance();
        if (cur_.kind == Tok::Dot) advance();
    }

    Variable scoped_var(const std::string& name) {
        auto it = var_scope_.find(name);
        if (it != var_scope_.end()) return it->second;
        Variable v = Variable::fresh(name);
        var_scope_.emplace(name, v);
        return v;
    }

    std::optional<Term> parse_term() {
        if (cur_.kind == Tok::UpperIdent) {
            Term t{scoped_var(cur_.text)};
            advance();
            return t;
        }
        if (cur_.kind != Tok::LowerIdent) {
            error("expected a term");
            return std::nullopt;
        }
        Token name = cur_;
        advance();
        std::vector<Term> args;
        if (cur_.kind == Tok::LParen) {
            advance();
            while (true) {
                auto arg = parse_term();
                if (!arg) return std::nullopt;
                args.push_back(std::move(*arg));
                if (cur_.kind == Tok::Comma) {
                    advance();
                    continue;
                }
                break;
            }
            if (!expect(Tok::RParen, "')'")) return std::nullopt;
        }
        note_constructor(name, args.size());
        return Term(name.text, std::move(args));
    }

    void note_constructor(const Token& tok, size_t arity) {
        auto [it, inserted] = signature_.constructors.emplace(tok.text, arity);
        if (!inserted && it->second != arity)
            error_at(tok, "constructor '" + tok.text + "' used with arity " +
                              std::to_string(arity) + " after arity " +
                              std::to_string(it->second));
    }

    void note_relation(const Token& tok, size_t arity) {
        auto [it, inserted] = signature_.relations.emplace(tok.text, arity);
        if (!inserted && it->second != arity)
            error_at(tok, "relation '" + tok.text + "' used with arity " +
                              std::to_string(arity) + " after arity " +
                              std::to_string(it->second));
    }

    // An atom or the left side of an equation; decided by the next token.
    // Returns false on hard parse errors.
    bool parse_body_item(std::vector<RawAtom>& atoms, std::vector<Equation>& eqs) {
        if (cur_.kind == Tok::UpperIdent) {
            auto lhs = parse_term();
            if (!lhs) return false;
            if (!expect(Tok::Equals, "'=' after term")) return false;
            auto rhs = parse_term();
            if (!rhs) return false;
            eqs.push_back({std::move(*lhs), std::move(*rhs)});
            return true;
        }
        if (cur_.kind != Tok::LowerIdent) {
            error("expected an atom or an equation");
            return false;
        }
        Token name = cur_;
        advance();
        std::vector<Term> args;
        bool parens = cur_.kind == Tok::LParen;
        if (parens) {
            advance();
            while (true) {
                auto arg = parse_term();
                if (!arg) return false;
                args.push_back(std::move(*arg));
                if (cur_.kind == Tok::Comma) {
                    advance();
                    continue;
                }
                break;
            }
            if (!expect(Tok::RParen, "')'")) return false;
        }
        if (cur_.kind == Tok::Equals) {
            // It was a term after all: reinterpret as equation lhs.
            advance();
            note_constructor(name, args.size());
            Term lhs(name.text, std::move(args));
            auto rhs = parse_term();
            if (!rhs) return false;
            eqs.push_back({std::move(lhs), std::move(*rhs)});
            return true;
        }
        note_relation(name, args.size());
        atoms.push_back(RawAtom{name.text, std::move(args), name.line, name.column});
        return true;
    }

    bool parse_body_items(std::vector<RawAtom>& atoms, std::vector<Equation>& eqs) {
        while (true) {
            if (!parse_body_item(atoms, eqs)) return false;
            if (cur_.kind == Tok::Amp) {
                advance();
                continue;
            }
            return true;
        }
    }

    std::optional<RawClause> parse_clause() {
        RawClause clause;
        clause.line = cur_.line;
        if (cur_.kind != Tok::LowerIdent) {
            error("expected a clause head");
            return std::nullopt;
        }
        Token name = cur_;
        advance();
        std::vector<Term> args;
        if (cur_.kind == Tok::LParen) {
            advance();
            while (true) {
                auto arg = parse_term();
                if (!arg) return std::nullopt;
                args.push_back(std::move(*arg));
                if (cur_.kind == Tok::Comma) {
                    advance();
                    continue;
                }
                break;
            }
            if (!expect(Tok::RParen, "')'")) return std::nullopt;
        }
        note_relation(name, args.size());
        clause.head = RawAtom{name.text, std::move(args), name.line, name.column};

        if (cur_.kind == Tok::Dot) {
            advance();
            return clause;
        }
        if (!expect(Tok::Arrow, "'<-' or '.'")) return std::nullopt;

        if (cur_.kind == Tok::Number) {
            Token num = cur_;
            advance();
            auto value = parse_decimal(num.text);
            if (!value) {
                error_at(num, "malformed factor literal '" + num.text + "'");
                return std::nullopt;
            }
            if (*value <= 0 || *value > 1) {
                error_at(num, "factor " + num.text + " outside (0,1]");
                return std::nullopt;
            }
            clause.factor = Factor(*value);
            if (cur_.kind == Tok::Dot) {  // weighted fact: head <- f.
                advance();
                return clause;
            }
            if (!expect(Tok::Colon, "':' after factor")) return std::nullopt;
        }

        if (!parse_body_items(clause.body, clause.equations)) return std::nullopt;
        if (!expect(Tok::Dot, "'.' at end of clause")) return std::nullopt;
        return clause;
    }

    Lexer lexer_;
    Token cur_{Tok::End, "", 0, 0};
    std::string file_;
    Signature signature_;
    std::map<std::string, Variable> var_scope_;
    std::vector<Diagnostic> diagnostics_;

public:
    void seed_signature(const Signature& sig) { signature_ = sig; }
};

}  // namespace

ParseResult parse_program(std::string_view text, const std::string& file) {
    Parser p(text, file);
    return p.parse_program();
}

QueryParse parse_query(std::string_view text, const Signature& signature,
                       const std::string& file) {
    Parser p(text, file);
    p.seed_signature(signature);
    return p.parse_query_body();
}

}  // namespace qclp
