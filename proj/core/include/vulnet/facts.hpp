// facts.hpp -- canonical code-facts model and JSONL interchange format
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace vulnet {

struct ClassRecord {
    std::string id;    // opaque; the extractor uses "<file>#<class>"
    std::string name;
    std::string file;
    long loc = 0;      // non-blank, non-comment-only lines; >= 1

    friend bool operator==(const ClassRecord&, const ClassRecord&) = default;
};

struct FunctionRecord {
    std::string id;    // opaque; the extractor uses "<file>#<class>::<fn>"
    std::string class_id;
    std::string name;
    long loc = 0;          // >= 1
    long cyclomatic = 1;   // >= 1

    friend bool operator==(const FunctionRecord&, const FunctionRecord&) = default;
};

struct DepRecord {
    std::string from_fn;
    std::string to_fn;

    friend bool operator==(const DepRecord&, const DepRecord&) = default;
};

// Immutable, canonically ordered fact set. Construction goes through
// from_records(), which sorts (classes by id, functions by id, deps by
// (from_fn, to_fn)) and checks referential integrity, so consumers can rely
// on the invariants and on deterministic serialization.
class CodeFacts {
public:
    CodeFacts() = default;

    static CodeFacts from_records(std::vector<ClassRecord> classes,
                                  std::vector<FunctionRecord> functions,
                                  std::vector<DepRecord> deps);

    const std::vector<ClassRecord>& classes() const { return classes_; }
    const std::vector<FunctionRecord>& functions() const { return functions_; }
    const std::vector<DepRecord>& deps() const { return deps_; }

    const ClassRecord* find_class(const std::string& id) const;
    const FunctionRecord* find_function(const std::string& id) const;

    friend bool operator==(const CodeFacts&, const CodeFacts&) = default;

private:
    std::vector<ClassRecord> classes_;
    std::vector<FunctionRecord> functions_;
    std::vector<DepRecord> deps_;
};

// JSONL, one record per line, discriminated by "kind":
//   {"kind":"class","id":...,"name":...,"file":...,"loc":N}
//   {"kind":"function","id":...,"class_id":...,"name":...,"loc":N,"cyclomatic":N}
//   {"kind":"dep","from_fn":...,"to_fn":...}
CodeFacts read_facts(std::istream& in, const std::string& source_name);
void write_facts(const CodeFacts& facts, std::ostream& out);

CodeFacts load_facts(const std::filesystem::path& path);
void save_facts(const CodeFacts& facts, const std::filesystem::path& path);

}  // namespace vulnet
