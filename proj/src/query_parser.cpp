#include "fdkb/query.hpp"

#include "fdkb/error.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace fdkb {

PrefixMap default_prefixes() { return {{"", ""}, {"rdf", "rdf:"}, {"xsd", "xsd:"}}; }

namespace {

enum class Tok {
    Word,      // bare identifier or keyword
    Var,       // ?x / $x
    Prefixed,  // pfx:local
    IriRef,    // <...>
    String,    // "..."
    Number,
    Hole,      // %name
    Punct,     // { } ( ) . = != , ; * ^^ / | ^ + < > <= >= && || ! @
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::size_t line = 1;
    std::size_t col = 1;
};

std::string upper(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

const std::set<std::string>& unsupported_keywords() {
    static const std::set<std::string> words{
        "OPTIONAL", "UNION",    "MINUS",  "GRAPH",  "SERVICE", "BIND",   "VALUES",       "ORDER",
        "LIMIT",    "OFFSET",   "GROUP",  "HAVING", "CONSTRUCT", "ASK",  "DESCRIBE",     "INSERT",
        "DELETE",   "PREFIX",   "BASE",   "FROM",   "REDUCED", "COUNT",  "SUM",          "MIN",
        "MAX",      "AVG",      "SAMPLE", "GROUP_CONCAT", "EXISTS", "NOT", "LOAD", "CLEAR", "WITH"};
    return words;
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            Token t;
            t.line = line_;
            t.col = col_;
            if (pos_ >= text_.size()) {
                t.kind = Tok::End;
                out.push_back(t);
                return out;
            }
            const char c = text_[pos_];
            if (c == '?' || c == '$') {
                advance();
                t.kind = Tok::Var;
                t.text = take_while([](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; });
                if (t.text.empty()) fail(t, "variable name");
            } else if (c == '%') {
                advance();
                t.kind = Tok::Hole;
                t.text = take_while([](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; });
                if (t.text.empty()) fail(t, "hole name");
            } else if (c == '<') {
                // Either an IRI reference or a comparison operator.
                std::size_t end = text_.find('>', pos_ + 1);
                bool iri = end != std::string_view::npos;
                if (iri) {
                    for (std::size_t i = pos_ + 1; i < end; ++i) {
                        if (std::isspace(static_cast<unsigned char>(text_[i]))) iri = false;
                    }
                    if (end == pos_ + 1) iri = false;
                }
                if (iri) {
                    t.kind = Tok::IriRef;
                    t.text = std::string(text_.substr(pos_ + 1, end - pos_ - 1));
                    while (pos_ <= end) advance();
                } else {
                    t.kind = Tok::Punct;
                    advance();
                    t.text = "<";
                    if (peek() == '=') {
                        advance();
                        t.text = "<=";
                    }
                }
            } else if (c == '"' || c == '\'') {
                t.kind = Tok::String;
                t.text = read_string(t, c);
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       ((c == '-' || c == '+') && pos_ + 1 < text_.size() &&
                        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
                t.kind = Tok::Number;
                t.text.push_back(c);
                advance();
                t.text += take_while([](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) != 0; });
                if (peek() == '.' && pos_ + 1 < text_.size() &&
                    std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
                    advance();
                    t.text.push_back('.');
                    t.text += take_while([](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) != 0; });
                }
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':') {
                std::string word = take_while(
                    [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-'; });
                if (peek() == ':') {
                    advance();
                    std::string local = take_local();
                    t.kind = Tok::Prefixed;
                    t.text = word + ":" + local;
                } else {
                    t.kind = Tok::Word;
                    t.text = word;
                }
            } else {
                t.kind = Tok::Punct;
                static const char* two[] = {"!=", "^^", "<=", ">=", "&&", "||"};
                t.text = std::string(1, c);
                for (const char* op : two) {
                    if (text_.substr(pos_, 2) == op) t.text = op;
                }
                for (std::size_t i = 0; i < t.text.size(); ++i) advance();
                static const std::string singles = "{}().=,;*/|^+>!@-";
                if (t.text.size() == 1 && singles.find(c) == std::string::npos) fail(t, "a token");
            }
            out.push_back(std::move(t));
        }
    }

private:
    [[noreturn]] void fail(const Token& at, const std::string& expected) {
        throw Error(ErrorCode::SyntaxError,
                    "syntax error at " + std::to_string(at.line) + ":" + std::to_string(at.col) + ": expected " + expected,
                    {{"line", at.line}, {"col", at.col}, {"expected", expected}});
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                advance();
            } else if (text_[pos_] == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    template <typename Pred>
    std::string take_while(Pred pred) {
        std::string out;
        while (pos_ < text_.size() && pred(text_[pos_])) {
            out.push_back(text_[pos_]);
            advance();
        }
        return out;
    }

    std::string take_local() {
        std::string out;
        while (pos_ < text_.size()) {
            const char ch = text_[pos_];
            const bool word = std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-';
            // A '.' belongs to the name only when followed by another name char.
            const bool inner_dot = ch == '.' && pos_ + 1 < text_.size() &&
                                   (std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])) || text_[pos_ + 1] == '_');
            if (!word && !inner_dot) break;
            out.push_back(ch);
            advance();
        }
        return out;
    }

    std::string read_string(const Token& at, char quote) {
        advance();
        std::string out;
        while (true) {
            if (pos_ >= text_.size()) fail(at, "closing quote");
            const char ch = text_[pos_];
            if (ch == quote) {
                advance();
                return out;
            }
            if (ch == '\n') fail(at, "closing quote");
            if (ch == '\\') {
                advance();
                if (pos_ >= text_.size()) fail(at, "escape sequence");
                const char e = text_[pos_];
                switch (e) {
                case 'n': out.push_back('\n'); break;
                case 't': out.push_back('\t'); break;
                case 'r': out.push_back('\r'); break;
                case '"': out.push_back('"'); break;
                case '\'': out.push_back('\''); break;
                case '\\': out.push_back('\\'); break;
                default: fail(at, "escape sequence");
                }
                advance();
                continue;
            }
            out.push_back(ch);
            advance();
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

std::string datatype_from_iri(const std::string& iri) {
    static const std::map<std::string, std::string> known{
        {"xsd:string", "string"},   {"xsd:integer", "integer"}, {"xsd:decimal", "decimal"},
        {"xsd:boolean", "boolean"}, {"xsd:anyURI", "uri"},      {"string", "string"},
        {"integer", "integer"},     {"decimal", "decimal"},     {"boolean", "boolean"},
        {"uri", "uri"}};
    auto it = known.find(iri);
    return it == known.end() ? std::string{} : it->second;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, const ParseOptions& options) : toks_(std::move(tokens)), opts_(options) {}

    QueryAst run() {
        QueryAst ast;
        expect_keyword("SELECT");
        if (is_keyword("DISTINCT")) ++pos_;
        if (cur().kind == Tok::Punct && cur().text == "*") unsupported("SELECT *");
        if (cur().kind == Tok::Punct && cur().text == "(") unsupported("SELECT expression");
        while (cur().kind == Tok::Var) {
            ast.select_vars.push_back(Variable{cur().text});
            ++pos_;
        }
        if (ast.select_vars.empty()) fail("variable");
        if (is_keyword("WHERE")) ++pos_;
        else check_unsupported_word();
        expect_punct("{");
        parse_group(ast);
        expect_punct("}");
        if (cur().kind != Tok::End) {
            check_unsupported_word();
            fail("end of query");
        }
        check_bound(ast);
        return ast;
    }

private:
    const Token& cur() const { return toks_[pos_]; }

    [[noreturn]] void fail(const std::string& expected) const {
        const auto& t = cur();
        throw Error(ErrorCode::SyntaxError,
                    "syntax error at " + std::to_string(t.line) + ":" + std::to_string(t.col) + ": expected " + expected,
                    {{"line", t.line}, {"col", t.col}, {"expected", expected}});
    }

    [[noreturn]] void unsupported(const std::string& feature) const {
        const auto& t = cur();
        throw Error(ErrorCode::UnsupportedFeature, feature + " is not supported",
                    {{"feature", feature}, {"line", t.line}, {"col", t.col}});
    }

    bool is_keyword(const char* word) const { return cur().kind == Tok::Word && upper(cur().text) == word; }

    void check_unsupported_word() const {
        if (cur().kind == Tok::Word && unsupported_keywords().count(upper(cur().text))) unsupported(upper(cur().text));
    }

    void expect_keyword(const char* word) {
        if (!is_keyword(word)) {
            check_unsupported_word();
            fail(word);
        }
        ++pos_;
    }

    void expect_punct(const char* p) {
        if (cur().kind != Tok::Punct || cur().text != p) {
            check_unsupported_word();
            fail(std::string("'") + p + "'");
        }
        ++pos_;
    }

    bool at_punct(const char* p) const { return cur().kind == Tok::Punct && cur().text == p; }

    void parse_group(QueryAst& ast) {
        while (!at_punct("}")) {
            if (cur().kind == Tok::End) fail("'}'");
            if (is_keyword("FILTER")) {
                ++pos_;
                ast.filters.push_back(parse_filter());
                if (at_punct(".")) ++pos_;
                continue;
            }
            check_unsupported_word();
            if (at_punct("{")) unsupported("nested group");
            ast.patterns.push_back(parse_triple());
            if (at_punct(";")) unsupported("predicate-object list");
            if (at_punct(",")) unsupported("object list");
            if (at_punct(".")) {
                ++pos_;
            } else if (!at_punct("}") && !is_keyword("FILTER")) {
                check_unsupported_word();
                fail("'.' or '}'");
            }
        }
    }

    TriplePattern parse_triple() {
        TriplePattern tp;
        tp.subject = parse_term(Position::Subject);
        tp.property = parse_term(Position::Property);
        if (cur().kind == Tok::Punct &&
            (cur().text == "/" || cur().text == "|" || cur().text == "*" || cur().text == "+" || cur().text == "^")) {
            unsupported("property path");
        }
        tp.object = parse_term(Position::Object);
        return tp;
    }

    Filter parse_filter() {
        expect_punct("(");
        Filter f;
        if (cur().kind == Tok::Word) unsupported("FILTER function");
        if (cur().kind != Tok::Var) fail("variable");
        f.var = Variable{cur().text};
        ++pos_;
        if (at_punct("=")) {
            f.op = FilterOp::Equal;
        } else if (at_punct("!=")) {
            f.op = FilterOp::NotEqual;
        } else if (cur().kind == Tok::Punct &&
                   (cur().text == "<" || cur().text == ">" || cur().text == "<=" || cur().text == ">=" ||
                    cur().text == "&&" || cur().text == "||")) {
            unsupported("FILTER operator " + cur().text);
        } else {
            fail("'=' or '!='");
        }
        ++pos_;
        if (cur().kind == Tok::Var) unsupported("FILTER variable comparison");
        f.value = parse_term(Position::Object);
        if (!at_punct(")")) {
            if (cur().kind == Tok::Punct && (cur().text == "&&" || cur().text == "||")) {
                unsupported("FILTER operator " + cur().text);
            }
            fail("')'");
        }
        ++pos_;
        return f;
    }

    enum class Position { Subject, Property, Object };

    std::string expand(const Token& t) {
        auto colon = t.text.find(':');
        const std::string prefix = t.text.substr(0, colon);
        auto it = opts_.prefixes.find(prefix);
        if (it == opts_.prefixes.end()) fail("declared prefix (got '" + prefix + ":')");
        return it->second + t.text.substr(colon + 1);
    }

    QueryTerm parse_term(Position position) {
        const Token t = cur();
        switch (t.kind) {
        case Tok::Var:
            ++pos_;
            return Variable{t.text};
        case Tok::Hole:
            if (!opts_.allow_holes) fail("term (holes are only valid in templates)");
            ++pos_;
            return Hole{t.text};
        case Tok::IriRef:
            ++pos_;
            return Iri{t.text};
        case Tok::Prefixed:
            ++pos_;
            return Iri{expand(t)};
        case Tok::Word:
            if (position == Position::Property && t.text == "a") {
                ++pos_;
                return Iri{std::string(kRdfType)};
            }
            if (position == Position::Object && (t.text == "true" || t.text == "false")) {
                ++pos_;
                return Literal{t.text, "boolean"};
            }
            check_unsupported_word();
            fail(position == Position::Property ? "property" : "term");
        case Tok::Number:
            if (position != Position::Object) fail("variable or IRI");
            ++pos_;
            return Literal{t.text, t.text.find('.') == std::string::npos ? "integer" : "decimal"};
        case Tok::String: {
            if (position != Position::Object) fail("variable or IRI");
            ++pos_;
            Literal lit{t.text, "string"};
            if (at_punct("@")) unsupported("language tag");
            if (at_punct("^^")) {
                ++pos_;
                std::string dt;
                if (cur().kind == Tok::IriRef) dt = cur().text;
                else if (cur().kind == Tok::Prefixed) dt = expand(cur());
                else fail("datatype IRI");
                lit.datatype = datatype_from_iri(dt);
                if (lit.datatype.empty()) fail("known datatype (string, integer, decimal, boolean, uri)");
                ++pos_;
            }
            return lit;
        }
        case Tok::Punct:
            if (t.text == "(" ) unsupported("expression");
            fail(position == Position::Property ? "property" : "term");
        case Tok::End:
            fail("term");
        }
        fail("term");
    }

    void check_bound(const QueryAst& ast) const {
        std::set<std::string> seen;
        for (const auto& p : ast.patterns) {
            for (const auto* term : {&p.subject, &p.property, &p.object}) {
                if (const auto* v = std::get_if<Variable>(term)) seen.insert(v->name);
            }
        }
        auto require = [&](const Variable& v) {
            if (!seen.count(v.name)) {
                throw Error(ErrorCode::UnboundSelectVar, "?" + v.name + " does not occur in any pattern",
                            {{"variable", v.name}});
            }
        };
        for (const auto& v : ast.select_vars) require(v);
        for (const auto& f : ast.filters) require(f.var);
    }

    std::vector<Token> toks_;
    const ParseOptions& opts_;
    std::size_t pos_ = 0;
};

std::string escape_string(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

} // namespace

QueryAst parse_query(std::string_view text, const ParseOptions& options) {
    return Parser(Lexer(text).run(), options).run();
}

namespace {

std::string print_term(const QueryTerm& term, bool property_position) {
    return std::visit(
        [property_position](const auto& t) -> std::string {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, Variable>) {
                return "?" + t.name;
            } else if constexpr (std::is_same_v<T, Iri>) {
                return property_position && t.value == kRdfType ? std::string("a") : "<" + t.value + ">";
            } else if constexpr (std::is_same_v<T, Hole>) {
                return "%" + t.name;
            } else {
                std::string s = "\"" + escape_string(t.lexical) + "\"";
                if (t.datatype == "uri") return s + "^^xsd:anyURI";
                if (t.datatype != "string") return s + "^^xsd:" + t.datatype;
                return s;
            }
        },
        term);
}

} // namespace

std::string term_to_string(const QueryTerm& term) { return print_term(term, false); }

std::string print_query(const QueryAst& ast) {
    std::string out = "SELECT";
    for (const auto& v : ast.select_vars) out += " ?" + v.name;
    out += " WHERE {";
    for (const auto& p : ast.patterns) {
        out += " " + term_to_string(p.subject) + " " + print_term(p.property, true) + " " + term_to_string(p.object) + " .";
    }
    for (const auto& f : ast.filters) {
        out += " FILTER(?" + f.var.name + (f.op == FilterOp::Equal ? " = " : " != ") + term_to_string(f.value) + ")";
    }
    out += " }";
    return out;
}

} // namespace fdkb
