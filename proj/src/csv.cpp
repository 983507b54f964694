#include "lcf/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace lcf {

std::vector<std::string> split_csv_row(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool in_quotes = false;
  std::size_t i = 0;

  while (i < line.size()) {
    char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          i += 2;
          continue;
        }
        in_quotes = false;
        ++i;
        if (i < line.size() && line[i] != ',') {
          throw std::runtime_error("unexpected character after closing quote");
        }
        continue;
      }
      current.push_back(c);
      ++i;
    } else {
      if (c == '"' && current.empty()) {
        in_quotes = true;
        ++i;
      } else if (c == ',') {
        fields.push_back(std::move(current));
        current.clear();
        ++i;
      } else {
        current.push_back(c);
        ++i;
      }
    }
  }
  if (in_quotes) {
    throw std::runtime_error("unterminated quoted field");
  }
  fields.push_back(std::move(current));
  return fields;
}

std::string csv_escape(std::string_view field) {
  bool needs_quotes = field.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

std::string format_compact(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  // shortest representation that parses back to the same double
  for (int prec = 1; prec < 17; ++prec) {
    char probe[64];
    std::snprintf(probe, sizeof(probe), "%.*g", prec, value);
    if (std::strtod(probe, nullptr) == value) {
      return probe;
    }
  }
  return buf;
}

std::string_view trim(std::string_view s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && (s[begin] == ' ' || s[begin] == '\t' || s[begin] == '\r' || s[begin] == '\n')) {
    ++begin;
  }
  while (end > begin && (s[end - 1] == ' ' || s[end - 1] == '\t' || s[end - 1] == '\r' || s[end - 1] == '\n')) {
    --end;
  }
  return s.substr(begin, end - begin);
}

}  // namespace lcf
