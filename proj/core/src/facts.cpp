#include "vulnet/facts.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "vulnet/csv.hpp"
#include "vulnet/errors.hpp"

namespace vulnet {

using ordered_json = nlohmann::ordered_json;

CodeFacts CodeFacts::from_records(std::vector<ClassRecord> classes,
                                  std::vector<FunctionRecord> functions,
                                  std::vector<DepRecord> deps) {
    std::sort(classes.begin(), classes.end(),
              [](const ClassRecord& a, const ClassRecord& b) { return a.id < b.id; });
    std::sort(functions.begin(), functions.end(),
              [](const FunctionRecord& a, const FunctionRecord& b) { return a.id < b.id; });
    std::sort(deps.begin(), deps.end(), [](const DepRecord& a, const DepRecord& b) {
        return std::tie(a.from_fn, a.to_fn) < std::tie(b.from_fn, b.to_fn);
    });

    std::vector<std::string> problems;

    std::unordered_set<std::string> class_ids;
    for (const auto& c : classes) {
        if (!class_ids.insert(c.id).second)
            problems.push_back("duplicate class id '" + c.id + "'");
        if (c.loc < 1)
            problems.push_back("class '" + c.id + "': loc must be >= 1");
    }

    std::unordered_set<std::string> fn_ids;
    for (const auto& f : functions) {
        if (!fn_ids.insert(f.id).second)
            problems.push_back("duplicate function id '" + f.id + "'");
        if (!class_ids.count(f.class_id))
            problems.push_back("function '" + f.id + "': unknown class_id '" + f.class_id + "'");
        if (f.loc < 1)
            problems.push_back("function '" + f.id + "': loc must be >= 1");
        if (f.cyclomatic < 1)
            problems.push_back("function '" + f.id + "': cyclomatic must be >= 1");
    }

    std::set<std::pair<std::string, std::string>> seen_deps;
    for (const auto& d : deps) {
        if (!fn_ids.count(d.from_fn))
            problems.push_back("dep " + d.from_fn + " -> " + d.to_fn +
                               ": unknown from_fn '" + d.from_fn + "'");
        if (!fn_ids.count(d.to_fn))
            problems.push_back("dep " + d.from_fn + " -> " + d.to_fn + ": unknown to_fn '" +
                               d.to_fn + "'");
        if (d.from_fn == d.to_fn)
            problems.push_back("dep " + d.from_fn + " -> " + d.to_fn +
                               ": from_fn and to_fn must differ");
        if (!seen_deps.emplace(d.from_fn, d.to_fn).second)
            problems.push_back("duplicate dep " + d.from_fn + " -> " + d.to_fn);
    }

    if (!problems.empty()) throw ValidationError("invalid code facts", problems);

    CodeFacts facts;
    facts.classes_ = std::move(classes);
    facts.functions_ = std::move(functions);
    facts.deps_ = std::move(deps);
    return facts;
}

const ClassRecord* CodeFacts::find_class(const std::string& id) const {
    const auto it = std::lower_bound(
        classes_.begin(), classes_.end(), id,
        [](const ClassRecord& c, const std::string& key) { return c.id < key; });
    if (it == classes_.end() || it->id != id) return nullptr;
    return &*it;
}

const FunctionRecord* CodeFacts::find_function(const std::string& id) const {
    const auto it = std::lower_bound(
        functions_.begin(), functions_.end(), id,
        [](const FunctionRecord& f, const std::string& key) { return f.id < key; });
    if (it == functions_.end() || it->id != id) return nullptr;
    return &*it;
}

namespace {

std::string require_string(const ordered_json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_string())
        throw ValidationError(where + ": missing or non-string field '" + key + "'");
    return j[key].get<std::string>();
}

long require_integer(const ordered_json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw ValidationError(where + ": missing or non-integer field '" + key + "'");
    return j[key].get<long>();
}

}  // namespace

CodeFacts read_facts(std::istream& in, const std::string& source_name) {
    std::vector<ClassRecord> classes;
    std::vector<FunctionRecord> functions;
    std::vector<DepRecord> deps;
    std::vector<std::string> problems;

    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = source_name + ":" + std::to_string(line_no);
        try {
            const auto j = ordered_json::parse(line);
            const std::string kind = require_string(j, "kind", where);
            if (kind == "class") {
                classes.push_back({require_string(j, "id", where),
                                   require_string(j, "name", where),
                                   require_string(j, "file", where),
                                   require_integer(j, "loc", where)});
            } else if (kind == "function") {
                functions.push_back({require_string(j, "id", where),
                                     require_string(j, "class_id", where),
                                     require_string(j, "name", where),
                                     require_integer(j, "loc", where),
                                     require_integer(j, "cyclomatic", where)});
            } else if (kind == "dep") {
                deps.push_back({require_string(j, "from_fn", where),
                                require_string(j, "to_fn", where)});
            } else {
                problems.push_back(where + ": unknown kind '" + kind + "'");
            }
        } catch (const ordered_json::parse_error&) {
            problems.push_back(where + ": malformed JSON line");
        } catch (const ValidationError& e) {
            problems.push_back(e.what());
        }
    }

    if (!problems.empty())
        throw ValidationError("invalid facts file " + source_name, problems);

    try {
        return CodeFacts::from_records(std::move(classes), std::move(functions),
                                       std::move(deps));
    } catch (const ValidationError& e) {
        throw ValidationError("invalid facts file " + source_name, e.diagnostics());
    }
}

void write_facts(const CodeFacts& facts, std::ostream& out) {
    for (const auto& c : facts.classes()) {
        ordered_json j;
        j["kind"] = "class";
        j["id"] = c.id;
        j["name"] = c.name;
        j["file"] = c.file;
        j["loc"] = c.loc;
        out << j.dump() << '\n';
    }
    for (const auto& f : facts.functions()) {
        ordered_json j;
        j["kind"] = "function";
        j["id"] = f.id;
        j["class_id"] = f.class_id;
        j["name"] = f.name;
        j["loc"] = f.loc;
        j["cyclomatic"] = f.cyclomatic;
        out << j.dump() << '\n';
    }
    for (const auto& d : facts.deps()) {
        ordered_json j;
        j["kind"] = "dep";
        j["from_fn"] = d.from_fn;
        j["to_fn"] = d.to_fn;
        out << j.dump() << '\n';
    }
}

CodeFacts load_facts(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open facts file: " + path.string());
    return read_facts(in, path.filename().string());
}

void save_facts(const CodeFacts& facts, const std::filesystem::path& path) {
    std::ostringstream out;
    write_facts(facts, out);
    csv::write_text_file(path, out.str());
}

}  // namespace vulnet
