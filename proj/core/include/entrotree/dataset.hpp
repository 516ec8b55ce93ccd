#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace entrotree {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class AttributeKind { nominal, numeric };
enum class AttributeRole { regular, class_label };

struct AttributeDescriptor {
  std::string name;
  AttributeKind kind = AttributeKind::nominal;
  AttributeRole role = AttributeRole::regular;
  // Numeric columns that already hold per-group totals (set by sum aggregation).
  bool holds_totals = false;

  bool operator==(const AttributeDescriptor&) const = default;
};

using Schema = std::vector<AttributeDescriptor>;

// Matching key for nominal values: lowercase, all whitespace removed.
std::string value_key(std::string_view value);
bool names_equal(std::string_view a, std::string_view b);
std::string trim(std::string_view s);

// Parses "name:kind[:class]" lines. Blank lines and '#' comments are skipped.
Schema parse_schema(std::istream& in);
Schema load_schema_file(const std::filesystem::path& path);

// Parses a numeric field, accepting "$ 30000" and "$120,000" style input.
std::optional<double> parse_number(std::string_view field);

// Per-class counts, indexed by the class attribute's label order.
class ClassDistribution {
 public:
  ClassDistribution() = default;
  explicit ClassDistribution(std::vector<std::string> labels);
  ClassDistribution(std::vector<std::string> labels,
                    std::vector<std::uint64_t> counts);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t count(std::size_t label_index) const { return counts_[label_index]; }
  std::uint64_t count(std::string_view label) const;
  std::uint64_t total() const;
  bool empty() const { return total() == 0; }

  // Index of the most frequent label; ties go to the earlier label.
  std::size_t majority_index() const;
  const std::string& majority_label() const { return labels_[majority_index()]; }
  double majority_fraction() const;
  std::size_t positive_classes() const;

  void add(std::size_t label_index, std::uint64_t n) { counts_[label_index] += n; }
  ClassDistribution& operator+=(const ClassDistribution& other);

  // "{Low:3, High:2}" listing positive entries in label order.
  std::string to_string() const;

  bool operator==(const ClassDistribution&) const = default;

 private:
  std::vector<std::string> labels_;
  std::vector<std::uint64_t> counts_;
};

using Value = std::variant<std::string, double>;

// Columnar, count-weighted training relation. Nominal values are interned per
// attribute in first-seen order; lookups use value_key().
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(Schema schema);

  const Schema& schema() const { return schema_; }
  std::size_t attribute_count() const { return schema_.size(); }
  const AttributeDescriptor& attribute(std::size_t i) const { return schema_[i]; }
  std::size_t size() const { return counts_.size(); }
  bool empty() const { return counts_.empty(); }

  std::uint64_t count(std::size_t row) const { return counts_[row]; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t total_count() const;

  std::optional<std::size_t> find_attribute(std::string_view name) const;
  std::size_t attribute_index(std::string_view name) const;
  std::optional<std::size_t> class_index() const;
  std::size_t require_class() const;

  std::uint32_t code(std::size_t row, std::size_t attr) const {
    return columns_[attr].codes[row];
  }
  double number(std::size_t row, std::size_t attr) const {
    return columns_[attr].numbers[row];
  }
  const std::string& label(std::size_t row, std::size_t attr) const {
    return columns_[attr].labels[columns_[attr].codes[row]];
  }
  // Every label interned for a nominal attribute, in first-seen order.
  const std::vector<std::string>& labels(std::size_t attr) const {
    return columns_[attr].labels;
  }
  std::optional<std::uint32_t> find_code(std::size_t attr, std::string_view value) const;
  Value value(std::size_t row, std::size_t attr) const;
  std::vector<Value> row(std::size_t row) const;

  // Appends one tuple; nominal cells must be strings and numeric cells doubles.
  void append(const std::vector<Value>& values, std::uint64_t count = 1);
  // Registers a label without adding a tuple (fixes label order up front).
  void intern(std::size_t attr, std::string_view label);

  bool operator==(const Dataset& other) const;

 private:
  struct Column {
    std::vector<std::uint32_t> codes;
    std::vector<double> numbers;
    std::vector<std::string> labels;
    std::unordered_map<std::string, std::uint32_t> index;
  };

  std::uint32_t intern_code(std::size_t attr, std::string_view label);

  Schema schema_;
  std::vector<Column> columns_;
  std::vector<std::uint64_t> counts_;
};

void validate_schema(const Schema& schema, bool require_class = true);

// CSV with a header row whose column names match the schema (any order).
// A schema attribute of kind "count" is not supported; use load_dataset with
// count_column to read generalized tables.
Dataset load_dataset(std::istream& csv, const Schema& schema,
                     std::optional<std::string> count_column = std::nullopt);
Dataset load_dataset_file(const std::filesystem::path& csv_path,
                          const std::filesystem::path& schema_path);

void write_dataset(std::ostream& out, const Dataset& d,
                   std::string_view count_column = "count");

// Collapses tuples equal on every attribute except those in sum_attrs, which
// are summed per group. Counts are summed; first-seen order is kept.
Dataset merge_identical_tuples(const Dataset& d,
                               std::span<const std::size_t> sum_attrs = {});

ClassDistribution class_distribution(const Dataset& d);
ClassDistribution class_distribution(const Dataset& d, std::span<const std::size_t> rows);

// Copy of d keeping only the listed attributes, in the given order.
Dataset project(const Dataset& d, std::span<const std::size_t> attrs);
// Copy of d with `name` as the class attribute (any previous class becomes regular).
Dataset with_class(const Dataset& d, std::string_view name);
Dataset rename_attribute(const Dataset& d, std::string_view from, std::string_view to);

std::vector<std::size_t> all_rows(const Dataset& d);

}  // namespace entrotree
