// vulnlabels.hpp -- vulnerability labels from advisory records.
//
// Dataflow: advisories -> bug ids -> patch diffs -> patched files ->
// classes -> per-class counts. For each advisory traversal, each of its
// bugs contributes +1 to every class its diffs touch, once per
// (bug, class) pair within that traversal; a bug shared by two advisories
// counts under each. A class is labeled vulnerable when its count is >= 1.

#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "vulnet/facts.hpp"

namespace vulnet {

struct AdvisoryRecord {
    std::string advisory_id;
    std::vector<std::string> bug_ids;  // non-empty

    bool operator==(const AdvisoryRecord&) const = default;
};

struct BugRecord {
    std::string bug_id;
    std::vector<std::string> diff_paths;  // references into a DiffStore; may be empty

    bool operator==(const BugRecord&) const = default;
};

// Source of patch text, keyed by reference name. get() throws IoError
// for an unknown reference.
class DiffStore {
public:
    virtual ~DiffStore() = default;
    virtual std::string get(const std::string& ref) const = 0;
};

// Reads <dir>/<ref> as the diff text.
class DirDiffStore : public DiffStore {
public:
    explicit DirDiffStore(std::filesystem::path dir);
    std::string get(const std::string& ref) const override;

private:
    std::filesystem::path dir_;
};

// In-memory store for tests.
class MemDiffStore : public DiffStore {
public:
    explicit MemDiffStore(std::map<std::string, std::string> diffs);
    std::string get(const std::string& ref) const override;

private:
    std::map<std::string, std::string> diffs_;
};

// Changed file paths of a unified diff: the new-side path of every file
// section (`+++` line following a `---` line), skipping /dev/null and
// stripping a/ b/ prefixes. Throws ValidationError naming source:line on
// a `---` header without its `+++` companion.
std::set<std::string> parse_unified_diff(const std::string& text, const std::string& source);

struct ResolvedClasses {
    std::set<std::string> class_ids;
    std::vector<std::string> warnings;  // one per path matching no class
};

// Classes whose source file is one of the changed paths.
ResolvedClasses resolve_classes(const std::set<std::string>& paths, const CodeFacts& facts);

struct VulnCountTable {
    std::map<std::string, long> counts;  // every class id of the facts, count >= 0

    bool operator==(const VulnCountTable&) const = default;
};

struct CountingResult {
    VulnCountTable table;
    std::vector<std::string> warnings;
};

// Runs the full traversal. Throws ValidationError naming the advisory
// chain on a dangling bug id or diff reference.
CountingResult count_vulnerabilities(const std::vector<AdvisoryRecord>& advisories,
                                     const std::vector<BugRecord>& bugs,
                                     const DiffStore& diffs, const CodeFacts& facts);

// Binarizes counts: label 1 iff count >= 1; every class gets a label.
std::map<std::string, int> to_labels(const VulnCountTable& table, const CodeFacts& facts);

// JSONL records: {"kind":"advisory","id":...,"bugs":[...]} and
// {"kind":"bug","id":...,"diffs":[...]}.
std::vector<AdvisoryRecord> load_advisories(const std::filesystem::path& path);
std::vector<BugRecord> load_bugs(const std::filesystem::path& path);

struct LabelRow {
    std::string class_id;
    long vuln_count = 0;
    int label = 0;  // 1 = vulnerable

    bool operator==(const LabelRow&) const = default;
};

// CSV: class_id,vuln_count,label with rows in canonical class-id order.
void save_labels(const std::vector<LabelRow>& rows, const std::filesystem::path& path);
std::vector<LabelRow> load_labels(const std::filesystem::path& path);

// The counts table joined with its labels, in canonical order.
std::vector<LabelRow> label_rows(const VulnCountTable& table, const CodeFacts& facts);

}  // namespace vulnet
