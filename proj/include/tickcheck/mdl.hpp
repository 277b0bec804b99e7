#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tickcheck/diag.hpp"

namespace tickcheck::mdl {

enum class TokenKind { Identifier, String, Number, LBrace, RBrace, EndOfFile };

struct Token {
    TokenKind kind = TokenKind::EndOfFile;
    std::string lexeme;  // raw source text, escapes undecoded for strings
    SourceSpan span;
};

// scalar parameter value: quoted string, number, or bare identifier
struct ParamValue {
    enum class Kind { String, Number, Ident } kind = Kind::String;
    std::string text;  // decoded string content / number text / identifier

    bool operator==(const ParamValue&) const = default;
};

struct RawNode {
    std::string kind;  // Model, System, Block, Line, Stateflow, chart, state, transition, data, ...
    std::vector<std::pair<std::string, ParamValue>> params;  // source order
    std::vector<RawNode> children;
    SourceSpan span;

    const ParamValue* find_param(const std::string& name) const {
        for (const auto& [k, v] : params)
            if (k == name) return &v;
        return nullptr;
    }
    bool structurally_equal(const RawNode& o) const;
};

struct ParseResult {
    std::optional<RawNode> root;  // absent iff an error diagnostic exists
    std::vector<Diagnostic> diagnostics;
};

// Lexes the block-structured model text. Comments (# to end of line) and
// whitespace are skipped. Errors: UnterminatedString, IllegalCharacter.
std::vector<Token> tokenize(const std::string& source, std::vector<Diagnostic>& diags);

// document := "Model" block ; block := "{" (pair | node)* "}"
// pair := IDENT (STRING | NUMBER | IDENT) ; node := IDENT block
ParseResult parse_document(const std::vector<Token>& tokens);

// Convenience: tokenize + parse.
ParseResult parse_text(const std::string& source);
ParseResult parse_file(const std::string& path);

// Depth-first pre-order collection of descendant nodes of one kind.
std::vector<const RawNode*> find_all(const RawNode& root, const std::string& kind);

// Canonical rendering; parse(print(r)) is structurally equal to r.
std::string print_document(const RawNode& root);

}  // namespace tickcheck::mdl
