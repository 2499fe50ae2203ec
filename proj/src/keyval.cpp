#include "varidepth/keyval.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "varidepth/error.hpp"

namespace varidepth {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

} // namespace

void KeyValueDoc::set(const std::string& key, const std::string& value) {
  for (auto& e : entries_)
    if (e.first == key) {
      e.second = value;
      return;
    }
  entries_.emplace_back(key, value);
}

void KeyValueDoc::set(const std::string& key, double value) { set(key, format_double(value)); }

void KeyValueDoc::set(const std::string& key, int64_t value) { set(key, std::to_string(value)); }

void KeyValueDoc::add(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
}

bool KeyValueDoc::has(const std::string& key) const {
  for (const auto& e : entries_)
    if (e.first == key) return true;
  return false;
}

const std::string& KeyValueDoc::get(const std::string& key) const {
  for (const auto& e : entries_)
    if (e.first == key) return e.second;
  throw FormatError("missing key: " + key);
}

std::string KeyValueDoc::get_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? get(key) : fallback;
}

std::vector<std::string> KeyValueDoc::get_all(const std::string& key) const {
  std::vector<std::string> out;
  for (const auto& e : entries_)
    if (e.first == key) out.push_back(e.second);
  return out;
}

double KeyValueDoc::get_double(const std::string& key) const {
  const std::string& s = get(key);
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (trim(s.substr(pos)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw FormatError("key '" + key + "' is not a number: " + s);
}

int64_t KeyValueDoc::get_int(const std::string& key) const {
  const std::string& s = get(key);
  try {
    size_t pos = 0;
    int64_t v = std::stoll(s, &pos);
    if (trim(s.substr(pos)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw FormatError("key '" + key + "' is not an integer: " + s);
}

double KeyValueDoc::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int64_t KeyValueDoc::get_int_or(const std::string& key, int64_t fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::string KeyValueDoc::serialize() const {
  std::ostringstream os;
  for (const auto& e : entries_) os << e.first << " = " << e.second << "\n";
  return os.str();
}

KeyValueDoc KeyValueDoc::parse(const std::string& text) {
  KeyValueDoc doc;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw FormatError("line " + std::to_string(line_no) + " has no '='");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw FormatError("line " + std::to_string(line_no) + " has an empty key");
    doc.add(key, trim(line.substr(eq + 1)));
  }
  return doc;
}

KeyValueDoc KeyValueDoc::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse(os.str());
}

void KeyValueDoc::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open for writing: " + path);
  out << serialize();
  if (!out) throw FormatError("write failed: " + path);
}

std::vector<double> parse_numbers(const std::string& value) {
  std::vector<double> out;
  std::istringstream is(value);
  std::string tok;
  while (is >> tok) {
    try {
      size_t pos = 0;
      double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw FormatError("not a number: " + tok);
    }
  }
  return out;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

} // namespace varidepth
