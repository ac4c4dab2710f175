#include "mw/records.hpp"

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mw::io {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& file, long line, const std::string& msg) {
  std::ostringstream os;
  os << file << ":" << line << ": " << msg;
  throw ParseError(os.str());
}

}  // namespace

bool Record::has(const std::string& key) const {
  for (const auto& [k, v] : fields)
    if (k == key) return true;
  return false;
}

const std::string& Record::get(const std::string& key) const {
  const std::string* found = nullptr;
  for (const auto& [k, v] : fields) {
    if (k != key) continue;
    if (found) throw ParseError("record '" + type + "': duplicate key '" + key + "'");
    found = &v;
  }
  if (!found) throw ParseError("record '" + type + "': missing key '" + key + "'");
  return *found;
}

std::optional<std::string> Record::get_opt(const std::string& key) const {
  for (const auto& [k, v] : fields)
    if (k == key) return v;
  return std::nullopt;
}

std::vector<std::string> Record::get_all(const std::string& key) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : fields)
    if (k == key) out.push_back(v);
  return out;
}

long Record::get_int(const std::string& key) const {
  const std::string& v = get(key);
  size_t pos = 0;
  long n = 0;
  try {
    n = std::stol(v, &pos);
  } catch (const std::exception&) {
    throw ParseError("record '" + type + "': key '" + key + "' is not an integer: " + v);
  }
  if (pos != v.size())
    throw ParseError("record '" + type + "': key '" + key + "' is not an integer: " + v);
  return n;
}

std::vector<Record> parse_records(const std::string& text, const std::string& filename) {
  std::vector<Record> out;
  std::istringstream in(text);
  std::string raw;
  long lineno = 0;
  bool open = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("record", 0) == 0 && (line.size() == 6 || line[6] == ' ' || line[6] == '\t')) {
      if (open) fail(filename, lineno, "'record' inside an open record (missing 'end')");
      std::string type = trim(line.substr(6));
      if (type.empty()) fail(filename, lineno, "'record' without a type");
      out.push_back(Record{type, lineno, {}});
      open = true;
      continue;
    }
    if (line == "end") {
      if (!open) fail(filename, lineno, "'end' without an open record");
      open = false;
      continue;
    }
    size_t eq = line.find('=');
    if (!open || eq == std::string::npos)
      fail(filename, lineno, "expected 'record <type>', 'key = value', or 'end'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) fail(filename, lineno, "empty key");
    out.back().fields.emplace_back(key, val);
  }
  if (open) fail(filename, lineno, "unterminated record at end of file");
  return out;
}

std::vector<Record> load_records(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_records(ss.str(), path);
}

std::string file_fingerprint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open " + path);
  uint64_t h = 1469598103934665603ull;
  char c;
  while (f.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

std::string data_dir() {
  if (const char* env = std::getenv("MW_DATA_DIR"); env && *env) return env;
#ifdef MW_DEFAULT_DATA_DIR
  return MW_DEFAULT_DATA_DIR;
#else
  return "data";
#endif
}

std::string data_file(const std::string& name) { return data_dir() + "/" + name; }

}  // namespace mw::io
