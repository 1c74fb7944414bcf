#include "mcda/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "mcda/errors.hpp"

namespace mcda {

using nlohmann::json;

namespace {

struct Problems {
  std::vector<std::string> list;
  void add(const std::string& where, const std::string& what) {
    list.push_back(where.empty() ? what : where + ": " + what);
  }
  void merge(const std::string& where, const ValidationFailed& e) {
    for (const auto& p : e.problems()) add(where, p);
  }
  bool empty() const { return list.empty(); }
  [[noreturn]] void raise() { throw ValidationFailed(std::move(list)); }
};

std::string field(const std::string& loc, const std::string& key) { return loc.empty() ? key : loc + "." + key; }
std::string item(const std::string& loc, std::size_t k) { return loc + "[" + std::to_string(k) + "]"; }

std::optional<std::string> optional_string(const json& j, const std::string& key, const std::string& loc,
                                           Problems& problems) {
  if (!j.contains(key)) return std::nullopt;
  if (!j.at(key).is_string()) {
    problems.add(field(loc, key), "expected a string");
    return std::nullopt;
  }
  return j.at(key).get<std::string>();
}

void parse_spec(const json& j, const std::string& loc, CriteriaHierarchy::Spec& out, Problems& problems) {
  if (!j.is_object()) {
    problems.add(loc, "expected an object");
    return;
  }
  if (auto name = optional_string(j, "name", loc, problems)) out.name = *name;
  else if (!j.contains("name")) problems.add(loc, "missing \"name\"");
  if (auto unit = optional_string(j, "unit", loc, problems)) out.unit = *unit;
  if (auto dir = optional_string(j, "direction", loc, problems)) {
    try {
      out.direction = direction_from_string(*dir);
    } catch (const Error& e) {
      problems.add(field(loc, "direction"), e.what());
    }
  }
  if (!j.contains("children")) return;
  const auto& kids = j.at("children");
  if (!kids.is_array()) {
    problems.add(field(loc, "children"), "expected an array");
    return;
  }
  if (j.contains("direction")) problems.add(field(loc, "direction"), "only elementary criteria carry a direction");
  for (std::size_t k = 0; k < kids.size(); ++k) {
    out.children.emplace_back();
    parse_spec(kids[k], item(field(loc, "children"), k), out.children.back(), problems);
  }
}

CriteriaHierarchy hierarchy_located(const json& j, const std::string& loc, Problems& problems) {
  CriteriaHierarchy::Spec spec;
  const std::size_t before = problems.list.size();
  parse_spec(j, loc, spec, problems);
  if (problems.list.size() != before) return {};
  try {
    return CriteriaHierarchy::build(spec);
  } catch (const ValidationFailed& e) {
    problems.merge(loc, e);
  } catch (const Error& e) {
    problems.add(loc, e.what());
  }
  return {};
}

json spec_to_json(const CriteriaHierarchy::Spec& s) {
  json j;
  j["name"] = s.name;
  if (s.children.empty()) {
    j["direction"] = std::string(to_string(s.direction));
    if (!s.unit.empty()) j["unit"] = s.unit;
    return j;
  }
  j["children"] = json::array();
  for (const auto& c : s.children) j["children"].push_back(spec_to_json(c));
  return j;
}

// ---------------------------------------------------------------------------
// CSV

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        cur += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  for (auto& f : out) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string{} : f.substr(b, e - b + 1);
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::optional<double> parse_number(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || first == last) return std::nullopt;
  return v;
}

PerformanceTable table_located(std::istream& in, const CriteriaHierarchy& h, const std::string& loc,
                               Problems& problems) {
  const std::size_t before = problems.list.size();
  auto where = [&](std::size_t line) { return loc + (loc.empty() ? "" : " ") + "line " + std::to_string(line); };

  std::vector<std::string> leaf_names(h.elementary_count());
  std::vector<Direction> directions(h.elementary_count());
  for (const auto& n : h.nodes()) {
    if (!n.is_leaf()) continue;
    leaf_names[n.leaf->ordinal] = n.name;
    directions[n.leaf->ordinal] = n.direction;
  }

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r,") == std::string::npos) continue;
    header = split_csv_line(line);
    break;
  }
  if (header.empty()) {
    problems.add(loc, "performance table is empty");
    return {};
  }
  const std::size_t header_line = line_no;
  if (header[0] != "id") problems.add(where(header_line), "first column must be \"id\"");
  const bool has_name = header.size() > 1 && header[1] == "name";
  std::vector<std::ptrdiff_t> column_of(leaf_names.size(), -1);
  for (std::size_t c = has_name ? 2 : 1; c < header.size(); ++c) {
    const auto it = std::find(leaf_names.begin(), leaf_names.end(), header[c]);
    if (it == leaf_names.end()) {
      problems.add(where(header_line), "unknown criterion '" + header[c] + "'");
      continue;
    }
    auto& slot = column_of[static_cast<std::size_t>(it - leaf_names.begin())];
    if (slot >= 0) problems.add(where(header_line), "duplicate column '" + header[c] + "'");
    slot = static_cast<std::ptrdiff_t>(c);
  }
  for (std::size_t i = 0; i < leaf_names.size(); ++i) {
    if (column_of[i] < 0) problems.add(where(header_line), "missing column for criterion '" + leaf_names[i] + "'");
  }

  std::vector<Alternative> alts;
  std::vector<double> raw;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r,") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      problems.add(where(line_no),
                   "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
      continue;
    }
    alts.push_back({fields[0], has_name ? fields[1] : std::string{}});
    for (std::size_t i = 0; i < leaf_names.size(); ++i) {
      if (column_of[i] < 0) {
        raw.push_back(0.0);
        continue;
      }
      const auto& text = fields[static_cast<std::size_t>(column_of[i])];
      const auto v = parse_number(text);
      if (!v) problems.add(where(line_no), "column '" + leaf_names[i] + "': not a number '" + text + "'");
      raw.push_back(v.value_or(0.0));
    }
  }
  if (problems.list.size() != before) return {};
  try {
    return PerformanceTable::from_raw(std::move(alts), leaf_names, directions, std::move(raw));
  } catch (const ValidationFailed& e) {
    problems.merge(loc, e);
  }
  return {};
}

PerformanceTable inline_table(const json& j, const CriteriaHierarchy& h, const std::string& loc,
                              Problems& problems) {
  // Rebuilt as CSV text so both sources share one validation path.
  if (!j.is_object() || !j.contains("criteria") || !j.contains("alternatives") || !j.contains("values")) {
    problems.add(loc, "inline table needs \"criteria\", \"alternatives\" and \"values\"");
    return {};
  }
  const auto& crit = j.at("criteria");
  const auto& alts = j.at("alternatives");
  const auto& vals = j.at("values");
  if (!crit.is_array() || !alts.is_array() || !vals.is_array() || alts.size() != vals.size()) {
    problems.add(loc, "\"alternatives\" and \"values\" must be arrays of equal length");
    return {};
  }
  std::ostringstream csv;
  csv << "id,name";
  for (const auto& c : crit) {
    if (!c.is_string()) {
      problems.add(field(loc, "criteria"), "expected strings");
      return {};
    }
    csv << "," << csv_field(c.get<std::string>());
  }
  csv << "\n";
  for (std::size_t a = 0; a < alts.size(); ++a) {
    const auto& alt = alts[a];
    std::string id;
    std::string name;
    if (alt.is_string()) {
      id = alt.get<std::string>();
    } else if (alt.is_object() && alt.contains("id") && alt.at("id").is_string()) {
      id = alt.at("id").get<std::string>();
      if (alt.contains("name") && alt.at("name").is_string()) name = alt.at("name").get<std::string>();
    } else {
      problems.add(item(field(loc, "alternatives"), a), "expected an id or {\"id\", \"name\"}");
      return {};
    }
    csv << csv_field(id) << "," << csv_field(name);
    const auto& row = vals[a];
    if (!row.is_array()) {
      problems.add(item(field(loc, "values"), a), "expected an array");
      return {};
    }
    for (const auto& v : row) {
      if (!v.is_number()) {
        problems.add(item(field(loc, "values"), a), "expected numbers");
        return {};
      }
      csv << "," << format_number(v.get<double>());
    }
    csv << "\n";
  }
  std::istringstream in(csv.str());
  // Line numbers of the rebuilt text are meaningless here; report rows instead.
  Problems local;
  auto table = table_located(in, h, "", local);
  for (auto& p : local.list) {
    if (p.rfind("line ", 0) == 0) {
      const auto colon = p.find(':');
      const auto n = std::stoul(p.substr(5, colon - 5));
      p = (n == 1 ? field(loc, "criteria") : item(field(loc, "values"), n - 2)) + p.substr(colon);
    } else {
      p = loc + ": " + p;
    }
    problems.list.push_back(p);
  }
  return table;
}

bool chains(StatementKind k) { return k == StatementKind::alt_strict || k == StatementKind::crit_more_important; }

std::optional<PreferenceStatement> statement_located(const json& rec, const CriteriaHierarchy& h,
                                                     const std::string& loc, Problems& problems,
                                                     bool allow_chain) {
  if (!rec.is_object()) {
    problems.add(loc, "expected an object");
    return std::nullopt;
  }
  const std::size_t before = problems.list.size();
  PreferenceStatement st;
  if (auto kind = optional_string(rec, "kind", loc, problems)) {
    try {
      st.kind = statement_kind_from_string(*kind);
    } catch (const Error& e) {
      problems.add(field(loc, "kind"), e.what());
    }
  } else if (!rec.contains("kind")) {
    problems.add(loc, "missing \"kind\"");
  }
  if (auto scope = optional_string(rec, "scope", loc, problems)) {
    try {
      st.scope = h.resolve(*scope);
    } catch (const Error& e) {
      problems.add(field(loc, "scope"), e.what());
    }
  }
  if (rec.contains("level")) {
    if (rec.at("level").is_number_integer() && rec.at("level").get<int>() >= 0) st.level = rec.at("level").get<int>();
    else problems.add(field(loc, "level"), "expected a nonnegative integer");
  }
  if (!rec.contains("subjects") || !rec.at("subjects").is_array()) {
    problems.add(field(loc, "subjects"), "expected an array of names");
  } else {
    for (const auto& s : rec.at("subjects")) {
      if (!s.is_string()) {
        problems.add(field(loc, "subjects"), "expected an array of names");
        break;
      }
      st.subjects.push_back(s.get<std::string>());
    }
  }
  if (auto sign = optional_string(rec, "sign", loc, problems)) {
    try {
      st.sign = interaction_sign_from_string(*sign);
    } catch (const Error& e) {
      problems.add(field(loc, "sign"), e.what());
    }
  }
  if (auto note = optional_string(rec, "note", loc, problems)) st.note = *note;
  if (problems.list.size() != before) return std::nullopt;
  if (!(allow_chain && chains(st.kind) && st.subjects.size() > 2) && st.subjects.size() != statement_arity(st.kind)) {
    problems.add(field(loc, "subjects"), std::string(to_string(st.kind)) + " takes " +
                                             std::to_string(statement_arity(st.kind)) + " subjects, got " +
                                             std::to_string(st.subjects.size()));
    return std::nullopt;
  }
  return st;
}

std::vector<PreferenceStatement> statements_located(const json& records, const CriteriaHierarchy& h,
                                                    const PerformanceTable* table, const std::string& loc,
                                                    Problems& problems, std::vector<std::size_t>* record_of) {
  std::vector<PreferenceStatement> out;
  if (!records.is_array()) {
    problems.add(loc, "expected an array");
    return out;
  }
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto where = item(loc, k);
    auto st = statement_located(records[k], h, where, problems, true);
    if (!st) continue;
    std::vector<PreferenceStatement> expanded;
    if (st->subjects.size() > 2 && chains(st->kind)) {
      for (std::size_t s = 0; s + 1 < st->subjects.size(); ++s) {
        PreferenceStatement one = *st;
        one.subjects = {st->subjects[s], st->subjects[s + 1]};
        expanded.push_back(std::move(one));
      }
    } else {
      expanded.push_back(std::move(*st));
    }
    for (auto& one : expanded) {
      if (is_alternative_statement(one.kind) && !table) {
        problems.add(where, "alternative statements need a performance table");
        break;
      }
      try {
        translate(one, h, table, "check");
      } catch (const ValidationFailed& e) {
        problems.merge(where, e);
        continue;
      } catch (const Error& e) {
        problems.add(where, e.what());
        continue;
      }
      out.push_back(std::move(one));
      if (record_of) record_of->push_back(k);
    }
  }
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
  return std::string(buf, res.ptr);
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  return out;
}

json counts_matrix(const std::vector<std::uint64_t>& counts, std::size_t n) {
  json m = json::array();
  for (std::size_t a = 0; a < n; ++a) {
    m.push_back(std::vector<std::uint64_t>(counts.begin() + static_cast<std::ptrdiff_t>(a * n),
                                           counts.begin() + static_cast<std::ptrdiff_t>((a + 1) * n)));
  }
  return m;
}

json frequency_matrix(const std::vector<double>& v, std::size_t n) {
  json m = json::array();
  for (std::size_t a = 0; a < n; ++a) {
    m.push_back(std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(a * n),
                                    v.begin() + static_cast<std::ptrdiff_t>((a + 1) * n)));
  }
  return m;
}

std::vector<std::uint64_t> read_counts(const json& m, std::size_t n, const std::string& what) {
  if (!m.is_array() || m.size() != n) throw InvalidArgument(what + ": expected " + std::to_string(n) + " rows");
  std::vector<std::uint64_t> out;
  out.reserve(n * n);
  for (const auto& row : m) {
    if (!row.is_array() || row.size() != n) throw InvalidArgument(what + ": ragged matrix");
    for (const auto& v : row) out.push_back(v.get<std::uint64_t>());
  }
  return out;
}

std::string criterion_label(const std::vector<std::string>& criteria, std::size_t k) {
  const std::size_t n = criteria.size();
  if (k < n) return "m(" + criteria[k] + ")";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (MobiusCapacity2Add::pair_index(n, i, j) == k) return "m(" + criteria[i] + "," + criteria[j] + ")";
    }
  }
  return "m(?)";
}

}  // namespace

// ---------------------------------------------------------------------------

CriteriaHierarchy hierarchy_from_json(const json& node) {
  Problems problems;
  auto h = hierarchy_located(node, "hierarchy", problems);
  if (!problems.empty()) problems.raise();
  return h;
}

json hierarchy_to_json(const CriteriaHierarchy& h) { return spec_to_json(h.spec()); }

PerformanceTable read_table_csv(std::istream& in, const CriteriaHierarchy& h) {
  Problems problems;
  auto t = table_located(in, h, "", problems);
  if (!problems.empty()) problems.raise();
  return t;
}

PerformanceTable read_table_csv(const std::filesystem::path& path, const CriteriaHierarchy& h) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  Problems problems;
  auto t = table_located(in, h, path.filename().string(), problems);
  if (!problems.empty()) problems.raise();
  return t;
}

void write_table_csv(std::ostream& out, const PerformanceTable& table) {
  out << "id,name";
  for (const auto& c : table.criteria()) out << "," << csv_field(c);
  out << "\n";
  for (std::size_t a = 0; a < table.alternative_count(); ++a) {
    out << csv_field(table.alternatives()[a].id) << "," << csv_field(table.alternatives()[a].name);
    for (double v : table.raw_row(a)) out << "," << format_number(v);
    out << "\n";
  }
}

PreferenceStatement statement_from_json(const json& record, const CriteriaHierarchy& h) {
  Problems problems;
  auto st = statement_located(record, h, "statement", problems, false);
  if (!problems.empty()) problems.raise();
  return *st;
}

std::vector<PreferenceStatement> statements_from_json(const json& records, const CriteriaHierarchy& h,
                                                      const PerformanceTable* table,
                                                      std::vector<std::size_t>* record_of) {
  Problems problems;
  auto out = statements_located(records, h, table, "statements", problems, record_of);
  if (!problems.empty()) problems.raise();
  return out;
}

json statement_to_json(const PreferenceStatement& st) {
  json j;
  j["kind"] = std::string(to_string(st.kind));
  j["scope"] = st.scope.str();
  if (!is_alternative_statement(st.kind)) j["level"] = st.level;
  j["subjects"] = st.subjects;
  if (st.kind == StatementKind::crit_interaction_compare) j["sign"] = std::string(to_string(st.sign));
  if (!st.note.empty()) j["note"] = st.note;
  return j;
}

Problem problem_from_json(const json& doc, const std::filesystem::path& base_dir) {
  Problems problems;
  Problem p;
  if (!doc.is_object()) {
    problems.add("", "problem document must be a JSON object");
    problems.raise();
  }
  if (!doc.contains("schema_version")) {
    problems.add("schema_version", "missing");
  } else if (!doc.at("schema_version").is_number_integer() || doc.at("schema_version").get<int>() != kSchemaVersion) {
    problems.add("schema_version", "unsupported version " + doc.at("schema_version").dump());
  }
  if (auto name = optional_string(doc, "name", "", problems)) p.name = *name;
  if (auto d = optional_string(doc, "description", "", problems)) p.description = *d;
  if (doc.contains("synthetic")) {
    if (doc.at("synthetic").is_boolean()) p.synthetic = doc.at("synthetic").get<bool>();
    else problems.add("synthetic", "expected true or false");
  }
  for (const auto& [key, value] : doc.items()) {
    static const std::set<std::string> known{"schema_version", "name", "description", "synthetic",
                                             "hierarchy",      "table", "statements"};
    if (!known.count(key)) problems.add(key, "unknown field");
  }

  if (!doc.contains("hierarchy")) {
    problems.add("hierarchy", "missing");
    problems.raise();
  }
  const std::size_t before = problems.list.size();
  p.hierarchy = hierarchy_located(doc.at("hierarchy"), "hierarchy", problems);
  if (problems.list.size() != before) problems.raise();

  bool have_table = false;
  if (!doc.contains("table")) {
    problems.add("table", "missing");
  } else if (doc.at("table").is_string()) {
    const auto path = base_dir / doc.at("table").get<std::string>();
    std::ifstream in(path);
    if (!in) {
      problems.add("table", "cannot read " + path.string());
    } else {
      const std::size_t b = problems.list.size();
      p.table = table_located(in, p.hierarchy, "table " + doc.at("table").get<std::string>(), problems);
      have_table = problems.list.size() == b;
    }
  } else {
    const std::size_t b = problems.list.size();
    p.table = inline_table(doc.at("table"), p.hierarchy, "table", problems);
    have_table = problems.list.size() == b;
  }

  if (doc.contains("statements")) {
    p.statements = statements_located(doc.at("statements"), p.hierarchy, have_table ? &p.table : nullptr,
                                      "statements", problems, &p.statement_records);
    if (doc.at("statements").is_array()) p.record_count = doc.at("statements").size();
  }
  if (!problems.empty()) problems.raise();
  return p;
}

Problem load_problem(const std::filesystem::path& document) {
  std::ifstream in(document);
  if (!in) throw InvalidArgument("cannot read " + document.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationFailed({document.filename().string() + ": " + e.what()});
  }
  return problem_from_json(doc, document.parent_path());
}

json problem_to_json(const Problem& p) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  if (!p.name.empty()) doc["name"] = p.name;
  if (!p.description.empty()) doc["description"] = p.description;
  if (p.synthetic) doc["synthetic"] = true;
  doc["hierarchy"] = hierarchy_to_json(p.hierarchy);
  json table;
  table["criteria"] = p.table.criteria();
  table["alternatives"] = json::array();
  table["values"] = json::array();
  for (std::size_t a = 0; a < p.table.alternative_count(); ++a) {
    const auto& alt = p.table.alternatives()[a];
    table["alternatives"].push_back(json{{"id", alt.id}, {"name", alt.name}});
    const auto row = p.table.raw_row(a);
    table["values"].push_back(std::vector<double>(row.begin(), row.end()));
  }
  doc["table"] = table;
  doc["statements"] = json::array();
  for (std::size_t s = 0; s < p.statements.size(); ++s) {
    json rec = statement_to_json(p.statements[s]);
    // Consecutive statements from one record are written back as a chain.
    while (s + 1 < p.statements.size() && s + 1 < p.statement_records.size() &&
           p.statement_records[s + 1] == p.statement_records[s]) {
      ++s;
      rec["subjects"].push_back(p.statements[s].subjects.back());
    }
    doc["statements"].push_back(rec);
  }
  return doc;
}

// ---------------------------------------------------------------------------

json sampler_to_json(const SamplerConfig& cfg) {
  json j;
  j["sample_count"] = cfg.sample_count;
  j["burn_in"] = cfg.burn_in;
  j["thinning"] = cfg.thinning;
  j["seed"] = cfg.seed;
  j["epsilon_mode"] = cfg.epsilon_mode.kind == EpsilonMode::Kind::fixed ? "fixed" : "fraction";
  j["epsilon_value"] = cfg.epsilon_mode.value;
  return j;
}

SamplerConfig sampler_from_json(const json& j) {
  SamplerConfig cfg;
  try {
    if (j.contains("sample_count")) cfg.sample_count = j.at("sample_count").get<std::size_t>();
    if (j.contains("burn_in")) cfg.burn_in = j.at("burn_in").get<std::size_t>();
    if (j.contains("thinning")) cfg.thinning = j.at("thinning").get<std::size_t>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("epsilon_mode")) {
      const auto mode = j.at("epsilon_mode").get<std::string>();
      if (mode == "fixed") cfg.epsilon_mode.kind = EpsilonMode::Kind::fixed;
      else if (mode == "fraction") cfg.epsilon_mode.kind = EpsilonMode::Kind::fraction_of_eps_star;
      else throw InvalidArgument("epsilon_mode must be \"fixed\" or \"fraction\"");
    }
    if (j.contains("epsilon_value")) cfg.epsilon_mode.value = j.at("epsilon_value").get<double>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("sampler settings: ") + e.what());
  }
  cfg.check();
  return cfg;
}

json results_to_json(const SmaaResult& result, const Problem& problem, const SamplerConfig& cfg) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "smaa-results";
  j["sampler"] = sampler_to_json(cfg);
  j["sample_count"] = result.sample_count;
  j["epsilon"] = result.epsilon;
  j["alternatives"] = json::array();
  for (const auto& a : problem.table.alternatives()) j["alternatives"].push_back(a.id);
  j["criteria"] = problem.table.criteria();
  const auto& coeffs = result.barycenter.coefficients();
  j["barycenter"] = std::vector<double>(coeffs.begin(), coeffs.end());
  j["nodes"] = json::array();
  for (const auto& n : result.nodes) {
    json node;
    node["node"] = n.node.str();
    node["name"] = problem.hierarchy.contains(n.node) ? problem.hierarchy.node(n.node).name : std::string{};
    node["samples"] = n.samples;
    node["rank_counts"] = counts_matrix(n.rank_counts, n.alternatives);
    node["win_counts"] = counts_matrix(n.win_counts, n.alternatives);
    node["rai"] = frequency_matrix(n.rai_matrix(), n.alternatives);
    node["pwi"] = frequency_matrix(n.pwi_matrix(), n.alternatives);
    node["down_cum"] = frequency_matrix(n.down_cum_matrix(), n.alternatives);
    node["up_cum"] = frequency_matrix(n.up_cum_matrix(), n.alternatives);
    j["nodes"].push_back(node);
  }
  return j;
}

SmaaResult results_from_json(const json& j) {
  SmaaResult r;
  try {
    if (j.at("schema_version").get<int>() != kSchemaVersion) throw InvalidArgument("unsupported results version");
    const std::size_t alts = j.at("alternatives").size();
    r.sample_count = j.at("sample_count").get<std::size_t>();
    r.epsilon = j.at("epsilon").get<double>();
    const std::size_t n = j.at("criteria").size();
    r.barycenter = MobiusCapacity2Add::from_coefficients(n, j.at("barycenter").get<std::vector<double>>());
    for (const auto& node : j.at("nodes")) {
      NodeIndices idx;
      idx.node = NodeId::parse(node.at("node").get<std::string>());
      idx.alternatives = alts;
      idx.samples = node.at("samples").get<std::size_t>();
      idx.rank_counts = read_counts(node.at("rank_counts"), alts, "rank_counts");
      idx.win_counts = read_counts(node.at("win_counts"), alts, "win_counts");
      r.nodes.push_back(std::move(idx));
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("results document: ") + e.what());
  }
  return r;
}

// ---------------------------------------------------------------------------

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<RaiSummaryRow> rai_summary(const NodeIndices& idx) {
  const std::size_t n = idx.alternatives;
  std::vector<RaiSummaryRow> rows;
  std::vector<std::uint64_t> lead_count(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<std::size_t> ranks;
    for (std::size_t s = 1; s <= n; ++s) {
      if (idx.rank_counts[a * n + s - 1] > 0) ranks.push_back(s);
    }
    RaiSummaryRow row;
    row.alternative = a;
    if (ranks.empty()) {
      rows.push_back(row);
      continue;
    }
    row.best = {ranks.front(), idx.rai(a, ranks.front())};
    row.worst = {ranks.back(), idx.rai(a, ranks.back())};
    std::stable_sort(ranks.begin(), ranks.end(), [&](std::size_t x, std::size_t y) {
      return idx.rank_counts[a * n + x - 1] > idx.rank_counts[a * n + y - 1];
    });
    for (std::size_t k = 0; k < std::min<std::size_t>(3, ranks.size()); ++k) {
      row.top.emplace_back(ranks[k], idx.rai(a, ranks[k]));
    }
    lead_count[a] = idx.rank_counts[a * n + ranks.front() - 1];
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [&](const RaiSummaryRow& x, const RaiSummaryRow& y) {
    const std::size_t rx = x.top.empty() ? n + 1 : x.top.front().first;
    const std::size_t ry = y.top.empty() ? n + 1 : y.top.front().first;
    if (rx != ry) return rx < ry;
    return lead_count[x.alternative] > lead_count[y.alternative];
  });
  return rows;
}

void write_rai_csv(std::ostream& out, const NodeIndices& idx, const PerformanceTable& table) {
  out << "alternative";
  for (std::size_t s = 1; s <= idx.alternatives; ++s) out << ",rank_" << s;
  out << "\n";
  for (std::size_t a = 0; a < idx.alternatives; ++a) {
    out << csv_field(table.alternatives()[a].id);
    for (std::size_t s = 1; s <= idx.alternatives; ++s) out << "," << format_number(idx.rai(a, s));
    out << "\n";
  }
}

void write_pwi_csv(std::ostream& out, const NodeIndices& idx, const PerformanceTable& table) {
  out << "alternative";
  for (const auto& alt : table.alternatives()) out << "," << csv_field(alt.id);
  out << "\n";
  for (std::size_t a = 0; a < idx.alternatives; ++a) {
    out << csv_field(table.alternatives()[a].id);
    for (std::size_t b = 0; b < idx.alternatives; ++b) out << "," << format_number(idx.pwi(a, b));
    out << "\n";
  }
}

void write_cumulative_csv(std::ostream& out, const NodeIndices& idx, const PerformanceTable& table, bool downward) {
  out << "alternative";
  for (std::size_t s = 1; s <= idx.alternatives; ++s) out << ",rank_" << s;
  out << "\n";
  for (std::size_t a = 0; a < idx.alternatives; ++a) {
    out << csv_field(table.alternatives()[a].id);
    for (std::size_t s = 1; s <= idx.alternatives; ++s) {
      out << "," << format_number(downward ? idx.down_cum(a, s) : idx.up_cum(a, s));
    }
    out << "\n";
  }
}

void write_summary_csv(std::ostream& out, const NodeIndices& idx, const PerformanceTable& table) {
  out << "alternative,name,high_1,high_1_pct,high_2,high_2_pct,high_3,high_3_pct,best,best_pct,worst,worst_pct\n";
  for (const auto& row : rai_summary(idx)) {
    const auto& alt = table.alternatives()[row.alternative];
    out << csv_field(alt.id) << "," << csv_field(alt.name);
    for (std::size_t k = 0; k < 3; ++k) {
      if (k < row.top.size()) out << "," << row.top[k].first << "," << fixed(100.0 * row.top[k].second, 2);
      else out << ",,";
    }
    out << "," << row.best.first << "," << fixed(100.0 * row.best.second, 2);
    out << "," << row.worst.first << "," << fixed(100.0 * row.worst.second, 2) << "\n";
  }
}

void write_ranking_csv(std::ostream& out, const NodeRanking& ranking, const PerformanceTable& table) {
  std::vector<std::size_t> order(ranking.ranks.size());
  for (std::size_t a = 0; a < order.size(); ++a) order[a] = a;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return ranking.ranks[x] < ranking.ranks[y]; });
  out << "rank,alternative,name,value\n";
  for (std::size_t a : order) {
    const auto& alt = table.alternatives()[a];
    out << ranking.ranks[a] << "," << csv_field(alt.id) << "," << csv_field(alt.name) << ","
        << format_number(ranking.values[a]) << "\n";
  }
}

void write_barycenter_csv(std::ostream& out, const MobiusCapacity2Add& m, const std::vector<std::string>& criteria) {
  if (criteria.size() != m.criteria_count()) throw InvalidArgument("one name per criterion is required");
  const auto& c = m.coefficients();
  constexpr std::size_t kBlock = 11;
  for (std::size_t start = 0; start < c.size(); start += kBlock) {
    const std::size_t end = std::min(c.size(), start + kBlock);
    for (std::size_t k = start; k < end; ++k) out << (k == start ? "" : ",") << csv_field(criterion_label(criteria, k));
    out << "\n";
    for (std::size_t k = start; k < end; ++k) out << (k == start ? "" : ",") << format_number(c[k]);
    out << "\n";
  }
}

void write_nap_csv(std::ostream& out, const NapRelation& nap, const PerformanceTable& table) {
  out << "alternative";
  for (const auto& alt : table.alternatives()) out << "," << csv_field(alt.id);
  out << "\n";
  for (std::size_t a = 0; a < nap.size; ++a) {
    out << csv_field(table.alternatives()[a].id);
    for (std::size_t b = 0; b < nap.size; ++b) {
      out << "," << (a == b ? "=" : nap.necessary(a, b) ? "N" : nap.possible(a, b) ? "P" : "-");
    }
    out << "\n";
  }
}

std::string node_stem(const NodeId& node) {
  auto s = node.str();
  std::replace(s.begin(), s.end(), '.', '_');
  return s;
}

std::vector<std::filesystem::path> export_results(const std::filesystem::path& dir, const SmaaResult& result,
                                                  const Problem& problem, const SamplerConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, auto&& body) {
    const auto path = dir / name;
    auto out = open_out(path);
    body(out);
    out.flush();
    if (!out) throw Error("cannot write " + path.string());
    written.push_back(path);
  };

  emit("results.json", [&](std::ostream& o) { o << results_to_json(result, problem, cfg).dump(2) << "\n"; });
  std::vector<NodeId> ids;
  for (const auto& n : result.nodes) ids.push_back(n.node);
  const auto rankings = barycenter_ranking(result.barycenter, problem.hierarchy, problem.table, ids);
  for (std::size_t k = 0; k < result.nodes.size(); ++k) {
    const auto& n = result.nodes[k];
    const auto stem = node_stem(n.node);
    emit("rai_" + stem + ".csv", [&](std::ostream& o) { write_rai_csv(o, n, problem.table); });
    emit("pwi_" + stem + ".csv", [&](std::ostream& o) { write_pwi_csv(o, n, problem.table); });
    emit("down_cum_" + stem + ".csv", [&](std::ostream& o) { write_cumulative_csv(o, n, problem.table, true); });
    emit("up_cum_" + stem + ".csv", [&](std::ostream& o) { write_cumulative_csv(o, n, problem.table, false); });
    emit("summary_" + stem + ".csv", [&](std::ostream& o) { write_summary_csv(o, n, problem.table); });
    emit("ranking_" + stem + ".csv", [&](std::ostream& o) { write_ranking_csv(o, rankings[k], problem.table); });
  }
  emit("barycenter.csv", [&](std::ostream& o) { write_barycenter_csv(o, result.barycenter, problem.table.criteria()); });
  return written;
}

}  // namespace mcda
