#include "vulnet/extractor.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "vulnet/csv.hpp"
#include "vulnet/errors.hpp"
#include "vulnet/parallel.hpp"

namespace vulnet::minilang {

namespace {

bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

bool is_digit(char c) { return c >= '0' && c <= '9'; }

const char* kTwoCharPunct[] = {"&&", "||", "==", "!=", "<=", ">="};
const char kOneCharPunct[] = "{}().,:;+-*/%<>=!&|";

}  // namespace

std::vector<Token> tokenize(const std::string& content, const std::string& path) {
    std::vector<Token> tokens;
    std::vector<std::string> problems;
    int line = 1;
    std::size_t i = 0;
    const std::size_t n = content.size();

    while (i < n) {
        const char c = content[i];
        if (c == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && content[i + 1] == '/') {
            while (i < n && content[i] != '\n') ++i;
            continue;
        }
        if (is_ident_start(c)) {
            std::size_t j = i + 1;
            while (j < n && is_ident_char(content[j])) ++j;
            tokens.push_back({TokenKind::Ident, content.substr(i, j - i), line});
            i = j;
            continue;
        }
        if (is_digit(c)) {
            std::size_t j = i + 1;
            while (j < n && (is_digit(content[j]) || content[j] == '.')) ++j;
            tokens.push_back({TokenKind::Number, content.substr(i, j - i), line});
            i = j;
            continue;
        }
        bool matched = false;
        if (i + 1 < n) {
            for (const char* p : kTwoCharPunct) {
                if (c == p[0] && content[i + 1] == p[1]) {
                    tokens.push_back({TokenKind::Punct, p, line});
                    i += 2;
                    matched = true;
                    break;
                }
            }
        }
        if (matched) continue;
        if (std::string_view(kOneCharPunct).find(c) != std::string_view::npos) {
            tokens.push_back({TokenKind::Punct, std::string(1, c), line});
            ++i;
            continue;
        }
        problems.push_back(path + ":" + std::to_string(line) + ": unexpected character '" +
                           std::string(1, c) + "'");
        ++i;
    }

    if (!problems.empty()) throw ValidationError("syntax errors in " + path, problems);
    return tokens;
}

long compute_cyclomatic(std::span<const Token> body) {
    long decisions = 0;
    for (const auto& t : body) {
        if (t.kind == TokenKind::Ident) {
            if (t.text == "if" || t.text == "while" || t.text == "for" || t.text == "case")
                ++decisions;
        } else if (t.kind == TokenKind::Punct) {
            if (t.text == "&&" || t.text == "||") ++decisions;
        }
    }
    return 1 + decisions;
}

namespace {

struct CallSite {
    std::string qualifier;  // class name or "self"
    std::string name;
    int line = 0;
};

struct ParsedFunction {
    std::string name;
    int decl_line = 0;
    int end_line = 0;
    long cyclomatic = 1;
    std::vector<CallSite> calls;
};

struct ParsedClass {
    std::string name;
    std::string parent;  // empty when the declaration has no parent clause
    int decl_line = 0;
    int end_line = 0;
    std::vector<ParsedFunction> functions;
};

struct ParsedUnit {
    std::string path;
    std::vector<ParsedClass> classes;
    std::vector<int> token_lines;  // sorted distinct lines that carry tokens
};

// Recursive-descent parser over the token list. Throws on the first
// structural error; the caller aggregates errors across files.
class Parser {
public:
    Parser(std::string path, std::vector<Token> tokens)
        : path_(std::move(path)), tokens_(std::move(tokens)) {}

    ParsedUnit parse() {
        ParsedUnit unit;
        unit.path = path_;
        while (!at_end()) unit.classes.push_back(parse_class());
        std::set<int> lines;
        for (const auto& t : tokens_) lines.insert(t.line);
        unit.token_lines.assign(lines.begin(), lines.end());
        return unit;
    }

private:
    [[noreturn]] void fail(const std::string& message, int line) const {
        throw ValidationError(path_ + ":" + std::to_string(line) + ": " + message);
    }

    bool at_end() const { return pos_ >= tokens_.size(); }

    const Token& peek() const {
        if (at_end()) fail("unexpected end of file", last_line());
        return tokens_[pos_];
    }

    int last_line() const { return tokens_.empty() ? 1 : tokens_.back().line; }

    const Token& advance() {
        const Token& t = peek();
        ++pos_;
        return t;
    }

    bool check_punct(const char* text) const {
        return !at_end() && tokens_[pos_].kind == TokenKind::Punct && tokens_[pos_].text == text;
    }

    const Token& expect_punct(const char* text) {
        const Token& t = peek();
        if (t.kind != TokenKind::Punct || t.text != text)
            fail("expected '" + std::string(text) + "', got '" + t.text + "'", t.line);
        ++pos_;
        return t;
    }

    const Token& expect_ident() {
        const Token& t = peek();
        if (t.kind != TokenKind::Ident)
            fail("expected identifier, got '" + t.text + "'", t.line);
        ++pos_;
        return t;
    }

    const Token& expect_keyword(const char* word) {
        const Token& t = peek();
        if (t.kind != TokenKind::Ident || t.text != word)
            fail("expected '" + std::string(word) + "', got '" + t.text + "'", t.line);
        ++pos_;
        return t;
    }

    ParsedClass parse_class() {
        ParsedClass cls;
        cls.decl_line = expect_keyword("class").line;
        cls.name = expect_ident().text;
        if (check_punct(":")) {
            ++pos_;
            cls.parent = expect_ident().text;
        }
        expect_punct("{");
        while (!check_punct("}")) {
            const Token& t = peek();
            if (t.kind == TokenKind::Ident && t.text == "fn") {
                cls.functions.push_back(parse_function());
            } else {
                fail("expected 'fn' or '}' in class body, got '" + t.text + "'", t.line);
            }
        }
        cls.end_line = expect_punct("}").line;
        return cls;
    }

    ParsedFunction parse_function() {
        ParsedFunction fn;
        fn.decl_line = expect_keyword("fn").line;
        fn.name = expect_ident().text;
        expect_punct("(");
        if (!check_punct(")")) {
            expect_ident();
            while (check_punct(",")) {
                ++pos_;
                expect_ident();
            }
        }
        expect_punct(")");
        expect_punct("{");

        // Body runs to the matching brace; statements are free-form token
        // sequences, scanned for decision tokens and call sites.
        const std::size_t body_begin = pos_;
        int depth = 1;
        while (depth > 0) {
            const Token& t = advance();
            if (t.kind == TokenKind::Punct) {
                if (t.text == "{") ++depth;
                else if (t.text == "}") --depth;
            }
        }
        const std::size_t body_end = pos_ - 1;  // exclusive of the closing brace
        fn.end_line = tokens_[body_end].line;

        const std::span<const Token> body(tokens_.data() + body_begin, body_end - body_begin);
        fn.cyclomatic = compute_cyclomatic(body);
        for (std::size_t i = 0; i + 3 < body.size(); ++i) {
            if (body[i].kind == TokenKind::Ident && body[i + 1].kind == TokenKind::Punct &&
                body[i + 1].text == "." && body[i + 2].kind == TokenKind::Ident &&
                body[i + 3].kind == TokenKind::Punct && body[i + 3].text == "(") {
                fn.calls.push_back({body[i].text, body[i + 2].text, body[i].line});
            }
        }
        return fn;
    }

    std::string path_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

long count_token_lines(const std::vector<int>& lines, int first, int last) {
    const auto lo = std::lower_bound(lines.begin(), lines.end(), first);
    const auto hi = std::upper_bound(lines.begin(), lines.end(), last);
    return static_cast<long>(hi - lo);
}

std::string class_key(const std::string& path, const std::string& name) {
    return path + "#" + name;
}

// Resolves call sites across the parsed units and assembles the fact set.
ExtractResult resolve_units(const std::vector<ParsedUnit>& units) {
    std::vector<std::string> problems;

    // Class names are global; a duplicate is an error naming both files.
    std::map<std::string, const ParsedUnit*> class_unit;
    std::map<std::string, const ParsedClass*> class_by_name;
    for (const auto& unit : units) {
        for (const auto& cls : unit.classes) {
            const auto it = class_unit.find(cls.name);
            if (it != class_unit.end()) {
                problems.push_back("duplicate class '" + cls.name + "' in " + unit.path +
                                   " and " + it->second->path);
                continue;
            }
            class_unit[cls.name] = &unit;
            class_by_name[cls.name] = &cls;
        }
    }

    std::map<std::string, std::set<std::string>> fn_names;  // class name -> fn names
    for (const auto& unit : units) {
        for (const auto& cls : unit.classes) {
            if (class_by_name[cls.name] != &cls) continue;  // duplicate, already reported
            auto& names = fn_names[cls.name];
            for (const auto& fn : cls.functions) {
                if (!names.insert(fn.name).second)
                    problems.push_back(unit.path + ":" + std::to_string(fn.decl_line) +
                                       ": duplicate function '" + fn.name + "' in class '" +
                                       cls.name + "'");
            }
        }
    }

    if (!problems.empty()) throw ValidationError("extraction failed", problems);

    ExtractResult result;

    for (const auto& unit : units) {
        for (const auto& cls : unit.classes) {
            if (!cls.parent.empty() && !class_by_name.count(cls.parent))
                result.warnings.push_back(unit.path + ":" + std::to_string(cls.decl_line) +
                                          ": unknown parent class '" + cls.parent +
                                          "' of '" + cls.name + "'");
        }
    }

    // Walks the parent chain looking for a function; cycle-safe.
    auto find_in_ancestors = [&](const std::string& cls_name,
                                 const std::string& fn_name) -> std::string {
        std::set<std::string> visited;
        std::string cur = cls_name;
        while (!cur.empty() && visited.insert(cur).second) {
            const auto it = class_by_name.find(cur);
            if (it == class_by_name.end()) break;
            if (cur != cls_name && fn_names[cur].count(fn_name)) return cur;
            cur = it->second->parent;
        }
        return {};
    };

    std::vector<ClassRecord> classes;
    std::vector<FunctionRecord> functions;
    std::set<std::pair<std::string, std::string>> dep_pairs;

    for (const auto& unit : units) {
        for (const auto& cls : unit.classes) {
            const std::string cid = class_key(unit.path, cls.name);
            classes.push_back({cid, cls.name, unit.path,
                               count_token_lines(unit.token_lines, cls.decl_line, cls.end_line)});
            for (const auto& fn : cls.functions) {
                functions.push_back(
                    {cid + "::" + fn.name, cid, fn.name,
                     count_token_lines(unit.token_lines, fn.decl_line, fn.end_line),
                     fn.cyclomatic});
            }
        }
    }

    auto function_id = [&](const std::string& cls_name, const std::string& fn_name) {
        const ParsedUnit* unit = class_unit[cls_name];
        return class_key(unit->path, cls_name) + "::" + fn_name;
    };

    for (const auto& unit : units) {
        for (const auto& cls : unit.classes) {
            for (const auto& fn : cls.functions) {
                const std::string caller = function_id(cls.name, fn.name);
                for (const auto& call : fn.calls) {
                    std::string target_class;
                    if (call.qualifier == "self") {
                        if (fn_names[cls.name].count(call.name)) {
                            target_class = cls.name;
                        } else {
                            target_class = find_in_ancestors(cls.name, call.name);
                        }
                    } else if (class_by_name.count(call.qualifier) &&
                               fn_names[call.qualifier].count(call.name)) {
                        target_class = call.qualifier;
                    }
                    if (target_class.empty()) {
                        result.unresolved.push_back({unit.path, call.line, caller,
                                                     call.qualifier + "." + call.name});
                        continue;
                    }
                    const std::string callee = function_id(target_class, call.name);
                    if (callee == caller) continue;  // recursion is not a dependency
                    dep_pairs.emplace(caller, callee);
                }
            }
        }
    }

    std::vector<DepRecord> deps;
    deps.reserve(dep_pairs.size());
    for (const auto& [from, to] : dep_pairs) deps.push_back({from, to});

    result.facts =
        CodeFacts::from_records(std::move(classes), std::move(functions), std::move(deps));
    return result;
}

ParsedUnit parse_unit(const SourceUnit& unit) {
    return Parser(unit.path, tokenize(unit.content, unit.path)).parse();
}

}  // namespace

ExtractResult parse_source(const SourceUnit& unit) {
    if (unit.path.empty()) throw ValidationError("source unit has an empty path");
    return resolve_units({parse_unit(unit)});
}

ExtractResult extract_tree(const std::filesystem::path& root, const std::string& extension) {
    std::error_code ec;
    if (!std::filesystem::is_directory(root, ec))
        throw IoError("not a directory: " + root.string());

    std::vector<std::string> rel_paths;
    for (auto it = std::filesystem::recursive_directory_iterator(root, ec);
         it != std::filesystem::recursive_directory_iterator(); ++it) {
        if (!it->is_regular_file()) continue;
        const std::string rel = std::filesystem::relative(it->path(), root).generic_string();
        if (rel.size() >= extension.size() &&
            rel.compare(rel.size() - extension.size(), extension.size(), extension) == 0)
            rel_paths.push_back(rel);
    }
    if (ec) throw IoError("cannot enumerate " + root.string() + ": " + ec.message());
    std::sort(rel_paths.begin(), rel_paths.end());

    std::vector<ParsedUnit> units(rel_paths.size());
    std::vector<std::string> errors(rel_paths.size());
    parallel_for(rel_paths.size(), [&](std::size_t i) {
        try {
            const std::string content = csv::read_text_file(root / rel_paths[i]);
            units[i] = parse_unit({rel_paths[i], content});
        } catch (const ValidationError& e) {
            errors[i] = e.what();
        }
    });

    std::vector<std::string> problems;
    for (const auto& e : errors)
        if (!e.empty()) problems.push_back(e);
    if (!problems.empty()) throw ValidationError("extraction failed", problems);

    return resolve_units(units);
}

}  // namespace vulnet::minilang
