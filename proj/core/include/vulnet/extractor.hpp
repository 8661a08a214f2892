// extractor.hpp -- MiniLang source scanner feeding the facts model
//
// MiniLang is a deliberately small class-based language:
//   class <Ident> [: <Ident>] { <member>* }
//   fn <Ident>(<ident-list>) { <stmt>* }
// Call sites are `Class.fn(...)` (cross-class) or `self.fn(...)`; a self call
// whose target is only defined in a (transitive) parent resolves to the
// parent's function. `//` comments run to end of line. Decision tokens for
// cyclomatic complexity: if, while, for, case, &&, ||.
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "vulnet/facts.hpp"

namespace vulnet::minilang {

struct SourceUnit {
    std::string path;     // forward-slash relative path
    std::string content;
};

enum class TokenKind { Ident, Number, Punct };

struct Token {
    TokenKind kind;
    std::string text;
    int line = 0;
};

// Throws ValidationError on characters outside the language.
std::vector<Token> tokenize(const std::string& content, const std::string& path);

// 1 + number of decision tokens in the body.
long compute_cyclomatic(std::span<const Token> body);

struct UnresolvedCall {
    std::string file;
    int line = 0;
    std::string caller_fn;   // function id of the call site
    std::string target;      // "Class.fn" or "self.fn" as written
};

struct ExtractResult {
    CodeFacts facts;
    std::vector<UnresolvedCall> unresolved;  // reported, never silently dropped
    std::vector<std::string> warnings;       // e.g. unknown parent class
};

// Single-unit extraction; call targets are resolved against this unit alone.
ExtractResult parse_source(const SourceUnit& unit);

// Parses every file under root with the given extension (e.g. ".ml"),
// then resolves calls across files. Output is deterministic regardless of
// directory enumeration order. All per-file diagnostics are collected and
// reported together.
ExtractResult extract_tree(const std::filesystem::path& root, const std::string& extension);

}  // namespace vulnet::minilang
