#include "vulnet/vulnlabels.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vulnet/csv.hpp"
#include "vulnet/errors.hpp"

namespace vulnet {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string strip_diff_prefix(const std::string& path) {
    if (path.rfind("a/", 0) == 0 || path.rfind("b/", 0) == 0) return path.substr(2);
    return path;
}

// The path part of a `---`/`+++` header line: text after the marker, cut
// at the first tab (timestamps follow a tab in some diff dialects).
std::string header_path(const std::string& line, std::size_t marker_len) {
    std::string path = line.substr(marker_len);
    const std::size_t tab = path.find('\t');
    if (tab != std::string::npos) path.resize(tab);
    return path;
}

}  // namespace

DirDiffStore::DirDiffStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::string DirDiffStore::get(const std::string& ref) const {
    return csv::read_text_file(dir_ / ref);
}

MemDiffStore::MemDiffStore(std::map<std::string, std::string> diffs)
    : diffs_(std::move(diffs)) {}

std::string MemDiffStore::get(const std::string& ref) const {
    const auto it = diffs_.find(ref);
    if (it == diffs_.end()) throw IoError("no diff named '" + ref + "'");
    return it->second;
}

std::set<std::string> parse_unified_diff(const std::string& text, const std::string& source) {
    std::set<std::string> paths;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("--- ", 0) != 0) continue;

        std::string next;
        if (!std::getline(in, next))
            throw ValidationError(source + ":" + std::to_string(lineno) +
                                  ": file header '--- ' not followed by a '+++ ' line");
        ++lineno;
        if (!next.empty() && next.back() == '\r') next.pop_back();
        if (next.rfind("+++ ", 0) != 0)
            throw ValidationError(source + ":" + std::to_string(lineno) +
                                  ": expected '+++ ' after '--- ', got '" + next + "'");

        const std::string new_side = header_path(next, 4);
        if (new_side == "/dev/null") continue;
        paths.insert(strip_diff_prefix(new_side));
    }
    return paths;
}

ResolvedClasses resolve_classes(const std::set<std::string>& paths, const CodeFacts& facts) {
    ResolvedClasses out;
    for (const auto& path : paths) {
        bool matched = false;
        for (const auto& cls : facts.classes()) {
            if (cls.file == path) {
                out.class_ids.insert(cls.id);
                matched = true;
            }
        }
        if (!matched) out.warnings.push_back("path '" + path + "' matches no class");
    }
    return out;
}

CountingResult count_vulnerabilities(const std::vector<AdvisoryRecord>& advisories,
                                     const std::vector<BugRecord>& bugs,
                                     const DiffStore& diffs, const CodeFacts& facts) {
    std::map<std::string, const BugRecord*> bug_index;
    std::vector<std::string> problems;
    for (const auto& bug : bugs) {
        if (!bug_index.emplace(bug.bug_id, &bug).second)
            problems.push_back("duplicate bug id '" + bug.bug_id + "'");
    }
    {
        std::set<std::string> seen;
        for (const auto& adv : advisories)
            if (!seen.insert(adv.advisory_id).second)
                problems.push_back("duplicate advisory id '" + adv.advisory_id + "'");
    }
    if (!problems.empty()) throw ValidationError("invalid advisory records", problems);

    CountingResult result;
    for (const auto& cls : facts.classes()) result.table.counts[cls.id] = 0;

    // A bug's touched-class set is the same under every advisory, so it is
    // resolved once; its resolution warnings are reported once as well.
    std::map<std::string, std::set<std::string>> bug_classes;

    for (const auto& adv : advisories) {
        for (const auto& bug_id : adv.bug_ids) {
            const auto bug_it = bug_index.find(bug_id);
            if (bug_it == bug_index.end())
                throw ValidationError("advisory '" + adv.advisory_id +
                                      "' references unknown bug '" + bug_id + "'");
            const BugRecord& bug = *bug_it->second;

            auto cached = bug_classes.find(bug_id);
            if (cached == bug_classes.end()) {
                std::set<std::string> touched;
                for (const auto& ref : bug.diff_paths) {
                    std::string text;
                    try {
                        text = diffs.get(ref);
                    } catch (const IoError& e) {
                        throw ValidationError("advisory '" + adv.advisory_id + "', bug '" +
                                              bug_id + "': cannot load diff '" + ref +
                                              "': " + e.what());
                    }
                    const std::set<std::string> paths = parse_unified_diff(text, ref);
                    ResolvedClasses resolved = resolve_classes(paths, facts);
                    touched.insert(resolved.class_ids.begin(), resolved.class_ids.end());
                    for (const auto& w : resolved.warnings)
                        result.warnings.push_back("bug '" + bug_id + "', diff '" + ref +
                                                  "': " + w);
                }
                cached = bug_classes.emplace(bug_id, std::move(touched)).first;
            }

            // One increment per (bug, class) within this advisory traversal.
            for (const auto& cls : cached->second) ++result.table.counts[cls];
        }
    }
    return result;
}

std::map<std::string, int> to_labels(const VulnCountTable& table, const CodeFacts& facts) {
    std::map<std::string, int> labels;
    for (const auto& cls : facts.classes()) {
        const auto it = table.counts.find(cls.id);
        const long count = it == table.counts.end() ? 0 : it->second;
        labels[cls.id] = count >= 1 ? 1 : 0;
    }
    return labels;
}

namespace {

// Shared JSONL reader: one object per line with the given kind, an "id"
// string, and a string array under list_key.
struct RawRecord {
    std::string id;
    std::vector<std::string> items;
};

std::vector<RawRecord> load_records(const std::filesystem::path& path, const std::string& kind,
                                    const std::string& list_key) {
    const std::vector<std::string> lines = csv::read_lines(path);
    std::vector<RawRecord> records;
    std::vector<std::string> problems;

    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(i + 1);
        ordered_json doc;
        try {
            doc = ordered_json::parse(lines[i]);
        } catch (const ordered_json::parse_error& e) {
            problems.push_back(where + ": " + e.what());
            continue;
        }
        if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string() ||
            doc["kind"] != kind) {
            problems.push_back(where + ": expected a record of kind '" + kind + "'");
            continue;
        }
        if (!doc.contains("id") || !doc["id"].is_string()) {
            problems.push_back(where + ": missing string field 'id'");
            continue;
        }
        if (!doc.contains(list_key) || !doc[list_key].is_array()) {
            problems.push_back(where + ": missing array field '" + list_key + "'");
            continue;
        }
        RawRecord rec;
        rec.id = doc["id"].get<std::string>();
        bool ok = true;
        for (const auto& item : doc[list_key]) {
            if (!item.is_string()) {
                problems.push_back(where + ": '" + list_key + "' entries must be strings");
                ok = false;
                break;
            }
            rec.items.push_back(item.get<std::string>());
        }
        if (ok) records.push_back(std::move(rec));
    }
    if (!problems.empty())
        throw ValidationError("invalid records in " + path.string(), problems);
    return records;
}

}  // namespace

std::vector<AdvisoryRecord> load_advisories(const std::filesystem::path& path) {
    std::vector<AdvisoryRecord> advisories;
    std::vector<std::string> problems;
    for (auto& rec : load_records(path, "advisory", "bugs")) {
        if (rec.items.empty()) {
            problems.push_back("advisory '" + rec.id + "' has no bugs");
            continue;
        }
        advisories.push_back({std::move(rec.id), std::move(rec.items)});
    }
    if (!problems.empty())
        throw ValidationError("invalid records in " + path.string(), problems);
    return advisories;
}

std::vector<BugRecord> load_bugs(const std::filesystem::path& path) {
    std::vector<BugRecord> bugs;
    for (auto& rec : load_records(path, "bug", "diffs"))
        bugs.push_back({std::move(rec.id), std::move(rec.items)});
    return bugs;
}

namespace {

const char* kLabelHeader = "class_id,vuln_count,label";

}  // namespace

void save_labels(const std::vector<LabelRow>& rows, const std::filesystem::path& path) {
    std::string out = kLabelHeader;
    out += '\n';
    for (const auto& r : rows) {
        out += r.class_id;
        out += ',' + std::to_string(r.vuln_count);
        out += ',' + std::to_string(r.label);
        out += '\n';
    }
    csv::write_text_file(path, out);
}

std::vector<LabelRow> load_labels(const std::filesystem::path& path) {
    const std::vector<std::string> lines = csv::read_lines(path);
    if (lines.empty() || lines[0] != kLabelHeader)
        throw ValidationError(path.string() + ": expected header '" + kLabelHeader + "'");

    std::vector<LabelRow> rows;
    std::vector<std::string> problems;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::vector<std::string> f = csv::split(lines[i]);
        const std::string where = path.string() + ":" + std::to_string(i + 1);
        if (f.size() != 3) {
            problems.push_back(where + ": expected 3 fields, got " + std::to_string(f.size()));
            continue;
        }
        try {
            LabelRow row;
            row.class_id = f[0];
            row.vuln_count = csv::parse_long(f[1], where);
            const long label = csv::parse_long(f[2], where);
            if (label != 0 && label != 1)
                throw ValidationError(where + ": label must be 0 or 1, got " + f[2]);
            if (row.vuln_count < 0)
                throw ValidationError(where + ": vuln_count must be non-negative");
            if ((label == 1) != (row.vuln_count >= 1))
                throw ValidationError(where + ": label disagrees with vuln_count");
            row.label = static_cast<int>(label);
            rows.push_back(std::move(row));
        } catch (const ValidationError& e) {
            problems.push_back(e.what());
        }
    }
    if (!problems.empty()) throw ValidationError("invalid label table", problems);
    return rows;
}

std::vector<LabelRow> label_rows(const VulnCountTable& table, const CodeFacts& facts) {
    const std::map<std::string, int> labels = to_labels(table, facts);
    std::vector<LabelRow> rows;
    rows.reserve(labels.size());
    for (const auto& cls : facts.classes()) {
        const auto it = table.counts.find(cls.id);
        const long count = it == table.counts.end() ? 0 : it->second;
        rows.push_back({cls.id, count, labels.at(cls.id)});
    }
    return rows;
}

}  // namespace vulnet
