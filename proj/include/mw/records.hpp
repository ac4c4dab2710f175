#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mw::io {

// Line-oriented record files:
//   # comment
//   record <type>
//     key = value
//   end
// Keys may repeat within a record; order is preserved.
struct Record {
  std::string type;
  long line = 0;  // line of the "record" keyword, for error messages
  std::vector<std::pair<std::string, std::string>> fields;

  bool has(const std::string& key) const;
  // exactly one occurrence required
  const std::string& get(const std::string& key) const;
  std::optional<std::string> get_opt(const std::string& key) const;
  std::vector<std::string> get_all(const std::string& key) const;
  long get_int(const std::string& key) const;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<Record> parse_records(const std::string& text,
                                  const std::string& filename = "<string>");
std::vector<Record> load_records(const std::string& path);

// Stable content fingerprint of a file (64-bit FNV-1a, hex).
std::string file_fingerprint(const std::string& path);

// Directory holding the record files: MW_DATA_DIR env var if set,
// otherwise the compiled-in default.
std::string data_dir();
std::string data_file(const std::string& name);

}  // namespace mw::io
