#include "tickcheck/mdl.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace tickcheck::mdl {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string decode_string(const std::string& raw) {
    // raw includes the surrounding quotes
    std::string out;
    for (size_t i = 1; i + 1 < raw.size(); ++i) {
        char c = raw[i];
        if (c == '\\' && i + 2 < raw.size()) {
            char n = raw[++i];
            switch (n) {
                case 'n': out.push_back('\n'); break;
                case 't': out.push_back('\t'); break;
                default: out.push_back(n); break;
            }
        } else {
            out.push_back(c);
        }
    }
    return out;
}

std::string encode_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(c); break;
        }
    }
    out.push_back('"');
    return out;
}

bool looks_like_number(const std::string& t) {
    size_t i = 0;
    if (i < t.size() && (t[i] == '+' || t[i] == '-')) ++i;
    bool digits = false, dot = false;
    for (; i < t.size(); ++i) {
        if (is_digit(t[i])) {
            digits = true;
        } else if (t[i] == '.' && !dot) {
            dot = true;
        } else {
            return false;
        }
    }
    return digits;
}

}  // namespace

std::vector<Token> tokenize(const std::string& source, std::vector<Diagnostic>& diags) {
    std::vector<Token> tokens;
    int line = 1, col = 1;
    size_t i = 0;
    auto advance = [&](char c) {
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    };
    while (i < source.size()) {
        char c = source[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(c);
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < source.size() && source[i] != '\n') {
                advance(source[i]);
                ++i;
            }
            continue;
        }
        SourceSpan span{line, col, 1};
        if (c == '{' || c == '}') {
            tokens.push_back({c == '{' ? TokenKind::LBrace : TokenKind::RBrace,
                              std::string(1, c), span});
            advance(c);
            ++i;
            continue;
        }
        if (c == '"') {
            size_t start = i;
            advance(c);
            ++i;
            bool closed = false;
            while (i < source.size()) {
                char d = source[i];
                if (d == '\\' && i + 1 < source.size()) {
                    advance(d);
                    advance(source[i + 1]);
                    i += 2;
                    continue;
                }
                advance(d);
                ++i;
                if (d == '"') {
                    closed = true;
                    break;
                }
            }
            std::string lexeme = source.substr(start, i - start);
            span.length = static_cast<int>(lexeme.size());
            if (!closed) {
                diags.push_back(error_diag("UnterminatedString",
                                           "string literal not closed before end of file", span));
                return tokens;
            }
            tokens.push_back({TokenKind::String, lexeme, span});
            continue;
        }
        if (is_digit(c) || ((c == '-' || c == '+') && i + 1 < source.size() && is_digit(source[i + 1]))) {
            size_t start = i;
            advance(c);
            ++i;
            while (i < source.size() && (is_digit(source[i]) || source[i] == '.')) {
                advance(source[i]);
                ++i;
            }
            std::string lexeme = source.substr(start, i - start);
            span.length = static_cast<int>(lexeme.size());
            if (!looks_like_number(lexeme)) {
                diags.push_back(error_diag("IllegalCharacter", "malformed number: " + lexeme, span));
                return tokens;
            }
            tokens.push_back({TokenKind::Number, lexeme, span});
            continue;
        }
        if (is_ident_start(c)) {
            size_t start = i;
            while (i < source.size() && is_ident_char(source[i])) {
                advance(source[i]);
                ++i;
            }
            std::string lexeme = source.substr(start, i - start);
            span.length = static_cast<int>(lexeme.size());
            tokens.push_back({TokenKind::Identifier, lexeme, span});
            continue;
        }
        diags.push_back(error_diag(
            "IllegalCharacter", std::string("illegal character '") + c + "'", span));
        return tokens;
    }
    tokens.push_back({TokenKind::EndOfFile, "", {line, col, 0}});
    return tokens;
}

namespace {

class Parser {
  public:
    Parser(const std::vector<Token>& tokens, std::vector<Diagnostic>& diags)
        : tokens_(tokens), diags_(diags) {}

    std::optional<RawNode> parse_root() {
        const Token& first = peek();
        if (first.kind != TokenKind::Identifier || first.lexeme != "Model") {
            diags_.push_back(error_diag("MissingRoot", "document must start with 'Model'", first.span));
            return std::nullopt;
        }
        auto root = parse_node();
        if (!root) return std::nullopt;
        if (peek().kind != TokenKind::EndOfFile) {
            diags_.push_back(
                error_diag("UnbalancedBrace", "unexpected input after root block", peek().span));
            return std::nullopt;
        }
        return root;
    }

  private:
    const Token& peek(size_t ahead = 0) const {
        size_t i = pos_ + ahead;
        if (i >= tokens_.size()) return tokens_.back();
        return tokens_[i];
    }
    const Token& take() {
        const Token& t = peek();
        if (pos_ < tokens_.size() - 1) ++pos_;
        return t;
    }

    std::optional<RawNode> parse_node() {
        const Token& name = take();  // identifier, checked by caller
        RawNode node;
        node.kind = name.lexeme;
        node.span = name.span;
        if (peek().kind != TokenKind::LBrace) {
            diags_.push_back(error_diag("UnbalancedBrace", "expected '{' after '" + node.kind + "'",
                                        peek().span));
            return std::nullopt;
        }
        take();  // {
        while (true) {
            const Token& t = peek();
            if (t.kind == TokenKind::RBrace) {
                take();
                return node;
            }
            if (t.kind == TokenKind::EndOfFile) {
                diags_.push_back(error_diag("UnbalancedBrace",
                                            "unexpected end of file inside '" + node.kind + "'",
                                            t.span));
                return std::nullopt;
            }
            if (t.kind != TokenKind::Identifier) {
                diags_.push_back(error_diag("UnbalancedBrace",
                                            "expected parameter or node name", t.span));
                return std::nullopt;
            }
            if (peek(1).kind == TokenKind::LBrace) {
                auto child = parse_node();
                if (!child) return std::nullopt;
                node.children.push_back(std::move(*child));
                continue;
            }
            const Token& key = take();
            const Token& val = peek();
            ParamValue pv;
            switch (val.kind) {
                case TokenKind::String:
                    pv = {ParamValue::Kind::String, decode_string(val.lexeme)};
                    break;
                case TokenKind::Number:
                    pv = {ParamValue::Kind::Number, val.lexeme};
                    break;
                case TokenKind::Identifier:
                    pv = {ParamValue::Kind::Ident, val.lexeme};
                    break;
                default:
                    diags_.push_back(error_diag("UnbalancedBrace",
                                                "expected value after parameter '" + key.lexeme + "'",
                                                val.span));
                    return std::nullopt;
            }
            take();
            if (node.find_param(key.lexeme)) {
                diags_.push_back(error_diag("DuplicateParam",
                                            "duplicate parameter '" + key.lexeme + "' in '" +
                                                node.kind + "'",
                                            key.span));
                return std::nullopt;
            }
            node.params.emplace_back(key.lexeme, std::move(pv));
        }
    }

    const std::vector<Token>& tokens_;
    std::vector<Diagnostic>& diags_;
    size_t pos_ = 0;
};

void check_id_uniqueness(const RawNode& node, std::map<std::string, std::map<std::string, SourceSpan>>& seen,
                         std::vector<Diagnostic>& diags) {
    if (const ParamValue* id = node.find_param("id")) {
        auto& per_kind = seen[node.kind];
        auto [it, inserted] = per_kind.emplace(id->text, node.span);
        if (!inserted) {
            diags.push_back(error_diag("DuplicateId",
                                       "duplicate id " + id->text + " among '" + node.kind +
                                           "' nodes",
                                       node.span));
        }
    }
    for (const auto& child : node.children) check_id_uniqueness(child, seen, diags);
}

void print_node(const RawNode& node, int indent, std::ostringstream& os) {
    std::string pad(static_cast<size_t>(indent) * 2, ' ');
    os << pad << node.kind << " {\n";
    std::string inner(static_cast<size_t>(indent + 1) * 2, ' ');
    for (const auto& [k, v] : node.params) {
        os << inner << k << " ";
        switch (v.kind) {
            case ParamValue::Kind::String: os << encode_string(v.text); break;
            default: os << v.text; break;
        }
        os << "\n";
    }
    for (const auto& child : node.children) print_node(child, indent + 1, os);
    os << pad << "}\n";
}

}  // namespace

ParseResult parse_document(const std::vector<Token>& tokens) {
    ParseResult result;
    if (tokens.empty()) {
        result.diagnostics.push_back(error_diag("MissingRoot", "empty document"));
        return result;
    }
    Parser p(tokens, result.diagnostics);
    auto root = p.parse_root();
    if (!root) return result;
    std::map<std::string, std::map<std::string, SourceSpan>> seen;
    check_id_uniqueness(*root, seen, result.diagnostics);
    if (has_error(result.diagnostics)) return result;
    result.root = std::move(*root);
    return result;
}

ParseResult parse_text(const std::string& source) {
    ParseResult result;
    auto tokens = tokenize(source, result.diagnostics);
    if (has_error(result.diagnostics)) return result;
    return parse_document(tokens);
}

ParseResult parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ParseResult r;
        r.diagnostics.push_back(error_diag("FileNotFound", "cannot open " + path));
        return r;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

bool RawNode::structurally_equal(const RawNode& o) const {
    if (kind != o.kind || params != o.params || children.size() != o.children.size()) return false;
    for (size_t i = 0; i < children.size(); ++i)
        if (!children[i].structurally_equal(o.children[i])) return false;
    return true;
}

static void collect(const RawNode& node, const std::string& kind, std::vector<const RawNode*>& out) {
    if (node.kind == kind) out.push_back(&node);
    for (const auto& child : node.children) collect(child, kind, out);
}

std::vector<const RawNode*> find_all(const RawNode& root, const std::string& kind) {
    std::vector<const RawNode*> out;
    collect(root, kind, out);
    return out;
}

std::string print_document(const RawNode& root) {
    std::ostringstream os;
    print_node(root, 0, os);
    return os.str();
}

}  // namespace tickcheck::mdl
