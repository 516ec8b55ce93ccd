#include "entrotree/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace entrotree {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Splits one CSV record; double quotes group fields and "" escapes a quote.
std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(trim(current));
  return fields;
}

bool blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc{} ? end : buf);
}

// Same tuples and label order under a schema differing only in names/roles.
Dataset with_schema(const Dataset& d, Schema schema) {
  Dataset out(std::move(schema));
  for (std::size_t a = 0; a < d.attribute_count(); ++a) {
    if (d.attribute(a).kind == AttributeKind::nominal) {
      for (const auto& l : d.labels(a)) out.intern(a, l);
    }
  }
  for (std::size_t r = 0; r < d.size(); ++r) out.append(d.row(r), d.count(r));
  return out;
}

}  // namespace

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string value_key(std::string_view value) {
  std::string key;
  key.reserve(value.size());
  for (unsigned char c : value) {
    if (!std::isspace(c)) key.push_back(static_cast<char>(std::tolower(c)));
  }
  return key;
}

bool names_equal(std::string_view a, std::string_view b) {
  return a.size() == b.size() && lower(a) == lower(b);
}

std::optional<double> parse_number(std::string_view field) {
  std::string cleaned;
  std::string t = trim(field);
  std::string_view s = t;
  if (!s.empty() && s.front() == '$') s.remove_prefix(1);
  for (char c : s) {
    if (c == ',' || c == ' ') continue;
    cleaned.push_back(c);
  }
  if (cleaned.empty()) return std::nullopt;
  double v = 0;
  auto [ptr, ec] = std::from_chars(cleaned.data(), cleaned.data() + cleaned.size(), v);
  if (ec != std::errc{} || ptr != cleaned.data() + cleaned.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

Schema parse_schema(std::istream& in) {
  Schema schema;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (blank(line)) continue;
    std::vector<std::string> parts;
    std::stringstream ss(line);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(trim(part));
    if (parts.size() < 2 || parts.size() > 3 || parts[0].empty()) {
      throw Error("schema line " + std::to_string(line_no) +
                  ": expected name:kind[:class]");
    }
    AttributeDescriptor a;
    a.name = parts[0];
    auto kind = lower(parts[1]);
    if (kind == "nominal") {
      a.kind = AttributeKind::nominal;
    } else if (kind == "numeric") {
      a.kind = AttributeKind::numeric;
    } else {
      throw Error("schema line " + std::to_string(line_no) + ": unknown kind '" +
                  parts[1] + "'");
    }
    if (parts.size() == 3) {
      if (lower(parts[2]) != "class") {
        throw Error("schema line " + std::to_string(line_no) + ": unknown role '" +
                    parts[2] + "'");
      }
      a.role = AttributeRole::class_label;
    }
    schema.push_back(std::move(a));
  }
  validate_schema(schema);
  return schema;
}

Schema load_schema_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open schema file '" + path.string() + "'");
  return parse_schema(in);
}

void validate_schema(const Schema& schema, bool require_class) {
  std::size_t classes = 0;
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (schema[i].role == AttributeRole::class_label) ++classes;
    for (std::size_t j = 0; j < i; ++j) {
      if (names_equal(schema[i].name, schema[j].name)) {
        throw Error("duplicate attribute name '" + schema[i].name + "'");
      }
    }
  }
  if (classes > 1) throw Error("schema declares more than one class attribute");
  if (require_class && classes == 0) throw Error("schema declares no class attribute");
}

// ---------------------------------------------------------------------------

ClassDistribution::ClassDistribution(std::vector<std::string> labels)
    : labels_(std::move(labels)), counts_(labels_.size(), 0) {}

ClassDistribution::ClassDistribution(std::vector<std::string> labels,
                                     std::vector<std::uint64_t> counts)
    : labels_(std::move(labels)), counts_(std::move(counts)) {
  if (labels_.size() != counts_.size()) {
    throw Error("class distribution: label/count size mismatch");
  }
}

std::uint64_t ClassDistribution::count(std::string_view label) const {
  auto key = value_key(label);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (value_key(labels_[i]) == key) return counts_[i];
  }
  return 0;
}

std::uint64_t ClassDistribution::total() const {
  std::uint64_t t = 0;
  for (auto c : counts_) t += c;
  return t;
}

std::size_t ClassDistribution::majority_index() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < counts_.size(); ++i) {
    if (counts_[i] > counts_[best]) best = i;
  }
  return best;
}

double ClassDistribution::majority_fraction() const {
  auto t = total();
  return t == 0 ? 0.0 : static_cast<double>(counts_[majority_index()]) / static_cast<double>(t);
}

std::size_t ClassDistribution::positive_classes() const {
  return static_cast<std::size_t>(
      std::count_if(counts_.begin(), counts_.end(), [](auto c) { return c > 0; }));
}

ClassDistribution& ClassDistribution::operator+=(const ClassDistribution& other) {
  if (labels_.empty()) {
    *this = other;
    return *this;
  }
  if (other.labels_.size() != labels_.size()) {
    throw Error("class distribution: incompatible label sets");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  return *this;
}

std::string ClassDistribution::to_string() const {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] == 0) continue;
    if (!first) out += ", ";
    out += labels_[i] + ":" + std::to_string(counts_[i]);
    first = false;
  }
  return out + "}";
}

// ---------------------------------------------------------------------------

Dataset::Dataset(Schema schema) : schema_(std::move(schema)), columns_(schema_.size()) {
  validate_schema(schema_, false);
}

std::uint64_t Dataset::total_count() const {
  std::uint64_t t = 0;
  for (auto c : counts_) t += c;
  return t;
}

std::optional<std::size_t> Dataset::find_attribute(std::string_view name) const {
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    if (names_equal(schema_[i].name, name)) return i;
  }
  return std::nullopt;
}

std::size_t Dataset::attribute_index(std::string_view name) const {
  if (auto i = find_attribute(name)) return *i;
  throw Error("unknown attribute '" + std::string(name) + "'");
}

std::optional<std::size_t> Dataset::class_index() const {
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    if (schema_[i].role == AttributeRole::class_label) return i;
  }
  return std::nullopt;
}

std::size_t Dataset::require_class() const {
  if (auto c = class_index()) return *c;
  throw Error("no class attribute designated");
}

std::optional<std::uint32_t> Dataset::find_code(std::size_t attr,
                                                std::string_view value) const {
  const auto& idx = columns_[attr].index;
  auto it = idx.find(value_key(value));
  if (it == idx.end()) return std::nullopt;
  return it->second;
}

Value Dataset::value(std::size_t row, std::size_t attr) const {
  if (schema_[attr].kind == AttributeKind::numeric) return number(row, attr);
  return label(row, attr);
}

std::vector<Value> Dataset::row(std::size_t r) const {
  std::vector<Value> out;
  out.reserve(schema_.size());
  for (std::size_t a = 0; a < schema_.size(); ++a) out.push_back(value(r, a));
  return out;
}

std::uint32_t Dataset::intern_code(std::size_t attr, std::string_view label) {
  auto& col = columns_[attr];
  auto key = value_key(label);
  auto [it, inserted] = col.index.try_emplace(key, static_cast<std::uint32_t>(col.labels.size()));
  if (inserted) col.labels.push_back(trim(label));
  return it->second;
}

void Dataset::intern(std::size_t attr, std::string_view label) {
  if (schema_[attr].kind != AttributeKind::nominal) {
    throw Error("cannot intern a label for numeric attribute '" + schema_[attr].name + "'");
  }
  intern_code(attr, label);
}

void Dataset::append(const std::vector<Value>& values, std::uint64_t count) {
  if (values.size() != schema_.size()) {
    throw Error("tuple has " + std::to_string(values.size()) + " values, schema has " +
                std::to_string(schema_.size()));
  }
  if (count == 0) throw Error("tuple count must be at least 1");
  for (std::size_t a = 0; a < schema_.size(); ++a) {
    bool numeric = schema_[a].kind == AttributeKind::numeric;
    if (numeric != std::holds_alternative<double>(values[a])) {
      throw Error("value type mismatch for attribute '" + schema_[a].name + "'");
    }
  }
  for (std::size_t a = 0; a < schema_.size(); ++a) {
    auto& col = columns_[a];
    if (schema_[a].kind == AttributeKind::numeric) {
      col.numbers.push_back(std::get<double>(values[a]));
    } else {
      col.codes.push_back(intern_code(a, std::get<std::string>(values[a])));
    }
  }
  counts_.push_back(count);
}

bool Dataset::operator==(const Dataset& other) const {
  if (schema_ != other.schema_ || counts_ != other.counts_) return false;
  for (std::size_t r = 0; r < size(); ++r) {
    for (std::size_t a = 0; a < schema_.size(); ++a) {
      if (schema_[a].kind == AttributeKind::numeric) {
        if (number(r, a) != other.number(r, a)) return false;
      } else if (value_key(label(r, a)) != value_key(other.label(r, a))) {
        return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

Dataset load_dataset(std::istream& csv, const Schema& schema,
                     std::optional<std::string> count_column) {
  validate_schema(schema);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(csv, line)) {
    ++line_no;
    if (!blank(line)) {
      header = split_csv(line);
      break;
    }
  }
  if (header.empty()) throw Error("zero-row input: missing header");

  std::size_t expected = schema.size() + (count_column ? 1 : 0);
  if (header.size() != expected) {
    throw Error("line " + std::to_string(line_no) + ": header has " +
                std::to_string(header.size()) + " columns, schema expects " +
                std::to_string(expected));
  }
  // Column position of each schema attribute.
  std::vector<std::size_t> position(schema.size(), header.size());
  std::optional<std::size_t> count_pos;
  for (std::size_t h = 0; h < header.size(); ++h) {
    if (count_column && names_equal(header[h], *count_column)) {
      count_pos = h;
      continue;
    }
    bool matched = false;
    for (std::size_t a = 0; a < schema.size(); ++a) {
      if (names_equal(header[h], schema[a].name)) {
        if (position[a] != header.size()) {
          throw Error("duplicate attribute name '" + header[h] + "' in header");
        }
        position[a] = h;
        matched = true;
      }
    }
    if (!matched) throw Error("header column '" + header[h] + "' is not in the schema");
  }
  if (count_column && !count_pos) throw Error("count column '" + *count_column + "' missing");

  Dataset d(schema);
  std::vector<Value> values(schema.size());
  while (std::getline(csv, line)) {
    ++line_no;
    if (blank(line)) continue;
    auto fields = split_csv(line);
    if (fields.size() != header.size()) {
      throw Error("line " + std::to_string(line_no) + ": row has " +
                  std::to_string(fields.size()) + " fields, expected " +
                  std::to_string(header.size()));
    }
    for (std::size_t a = 0; a < schema.size(); ++a) {
      const auto& field = fields[position[a]];
      if (schema[a].kind == AttributeKind::numeric) {
        auto v = parse_number(field);
        if (!v) {
          throw Error("line " + std::to_string(line_no) + ": attribute '" + schema[a].name +
                      "': cannot parse '" + field + "' as a number");
        }
        values[a] = *v;
      } else {
        values[a] = field;
      }
    }
    std::uint64_t count = 1;
    if (count_pos) {
      auto c = parse_number(fields[*count_pos]);
      if (!c || *c < 1 || *c != std::floor(*c)) {
        throw Error("line " + std::to_string(line_no) + ": invalid count '" +
                    fields[*count_pos] + "'");
      }
      count = static_cast<std::uint64_t>(*c);
    }
    d.append(values, count);
  }
  if (d.empty()) throw Error("zero-row input: no data rows");
  return d;
}

Dataset load_dataset_file(const std::filesystem::path& csv_path,
                          const std::filesystem::path& schema_path) {
  auto schema = load_schema_file(schema_path);
  std::ifstream in(csv_path);
  if (!in) throw Error("cannot open data file '" + csv_path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();

  // A header one column wider than the schema whose extra column is "count"
  // carries tuple weights.
  std::optional<std::string> count_column;
  std::stringstream peek(text);
  std::string line;
  while (std::getline(peek, line)) {
    if (blank(line)) continue;
    auto header = split_csv(line);
    if (header.size() == schema.size() + 1 &&
        std::any_of(header.begin(), header.end(),
                    [](const auto& h) { return names_equal(h, "count"); })) {
      count_column = "count";
    }
    break;
  }
  std::stringstream data(text);
  return load_dataset(data, schema, count_column);
}

void write_dataset(std::ostream& out, const Dataset& d, std::string_view count_column) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  for (std::size_t a = 0; a < d.attribute_count(); ++a) {
    out << quote(d.attribute(a).name) << ",";
  }
  out << count_column << "\n";
  for (std::size_t r = 0; r < d.size(); ++r) {
    for (std::size_t a = 0; a < d.attribute_count(); ++a) {
      if (d.attribute(a).kind == AttributeKind::numeric) {
        out << format_number(d.number(r, a));
      } else {
        out << quote(d.label(r, a));
      }
      out << ",";
    }
    out << d.count(r) << "\n";
  }
}

Dataset merge_identical_tuples(const Dataset& d, std::span<const std::size_t> sum_attrs) {
  auto is_sum = [&](std::size_t a) {
    return std::find(sum_attrs.begin(), sum_attrs.end(), a) != sum_attrs.end();
  };
  Schema schema = d.schema();
  for (auto a : sum_attrs) {
    if (a >= schema.size() || schema[a].kind != AttributeKind::numeric) {
      throw Error("only numeric attributes can be summed");
    }
  }

  struct Group {
    std::vector<Value> values;
    std::uint64_t count = 0;
  };
  std::vector<Group> groups;
  std::map<std::vector<std::string>, std::size_t> lookup;

  for (std::size_t r = 0; r < d.size(); ++r) {
    std::vector<std::string> key;
    for (std::size_t a = 0; a < schema.size(); ++a) {
      if (is_sum(a)) continue;
      key.push_back(schema[a].kind == AttributeKind::numeric ? format_number(d.number(r, a))
                                                             : value_key(d.label(r, a)));
    }
    auto [it, inserted] = lookup.try_emplace(std::move(key), groups.size());
    if (inserted) {
      Group g;
      g.values = d.row(r);
      for (std::size_t a = 0; a < schema.size(); ++a) {
        if (is_sum(a)) g.values[a] = 0.0;
      }
      groups.push_back(std::move(g));
    }
    auto& g = groups[it->second];
    g.count += d.count(r);
    for (std::size_t a = 0; a < schema.size(); ++a) {
      if (!is_sum(a)) continue;
      double weight = schema[a].holds_totals ? 1.0 : static_cast<double>(d.count(r));
      std::get<double>(g.values[a]) += d.number(r, a) * weight;
    }
  }

  for (auto a : sum_attrs) schema[a].holds_totals = true;
  Dataset out(schema);
  for (std::size_t a = 0; a < schema.size(); ++a) {
    if (schema[a].kind == AttributeKind::nominal) {
      for (const auto& l : d.labels(a)) out.intern(a, l);
    }
  }
  for (const auto& g : groups) out.append(g.values, g.count);
  return out;
}

ClassDistribution class_distribution(const Dataset& d) {
  return class_distribution(d, all_rows(d));
}

ClassDistribution class_distribution(const Dataset& d, std::span<const std::size_t> rows) {
  auto c = d.require_class();
  if (d.attribute(c).kind != AttributeKind::nominal) {
    throw Error("class attribute '" + d.attribute(c).name + "' must be nominal");
  }
  ClassDistribution dist(d.labels(c));
  for (auto r : rows) dist.add(d.code(r, c), d.count(r));
  return dist;
}

Dataset project(const Dataset& d, std::span<const std::size_t> attrs) {
  Schema schema;
  for (auto a : attrs) schema.push_back(d.attribute(a));
  Dataset out(schema);
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    if (schema[i].kind == AttributeKind::nominal) {
      for (const auto& l : d.labels(attrs[i])) out.intern(i, l);
    }
  }
  std::vector<Value> values(attrs.size());
  for (std::size_t r = 0; r < d.size(); ++r) {
    for (std::size_t i = 0; i < attrs.size(); ++i) values[i] = d.value(r, attrs[i]);
    out.append(values, d.count(r));
  }
  return out;
}

Dataset with_class(const Dataset& d, std::string_view name) {
  auto target = d.attribute_index(name);
  if (d.attribute(target).kind != AttributeKind::nominal) {
    throw Error("class attribute '" + d.attribute(target).name + "' must be nominal");
  }
  Schema schema = d.schema();
  for (std::size_t a = 0; a < schema.size(); ++a) {
    schema[a].role = a == target ? AttributeRole::class_label : AttributeRole::regular;
  }
  return with_schema(d, std::move(schema));
}

Dataset rename_attribute(const Dataset& d, std::string_view from, std::string_view to) {
  auto idx = d.attribute_index(from);
  Schema schema = d.schema();
  schema[idx].name = std::string(to);
  return with_schema(d, std::move(schema));
}

std::vector<std::size_t> all_rows(const Dataset& d) {
  std::vector<std::size_t> rows(d.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return rows;
}

}  // namespace entrotree
