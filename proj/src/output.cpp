#include "shellqft/output.hpp"
#include "shellqft/config.hpp"
#include "shellqft/errors.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace shellqft {

namespace {
std::string cell_text(const Cell &c) {
  if (const auto *d = std::get_if<double>(&c))
    return format_double(*d);
  const auto &s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"')
      q += '"';
    q += ch;
  }
  return q + '"';
}

// split one CSV line, honouring double-quoted fields
std::vector<std::pair<std::string, bool>> split_csv(const std::string &line) {
  std::vector<std::pair<std::string, bool>> out;
  std::string cur;
  bool quoted = false, in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (in_quotes) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        in_quotes = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      in_quotes = quoted = true;
    } else if (ch == ',') {
      out.push_back({cur, quoted});
      cur.clear();
      quoted = false;
    } else {
      cur += ch;
    }
  }
  out.push_back({cur, quoted});
  return out;
}
} // namespace

std::string to_csv(const Table &t) {
  std::ostringstream out;
  for (const auto &h : t.header)
    out << "# " << h << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto &row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << cell_text(row[i]);
    out << '\n';
  }
  return out.str();
}

std::string to_json(const Table &t) {
  nlohmann::ordered_json j;
  j["header"] = t.header;
  j["columns"] = t.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto &row : t.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto &c : row) {
      if (const auto *d = std::get_if<double>(&c)) {
        if (std::isfinite(*d))
          r.push_back(*d);
        else
          r.push_back(format_double(*d));
      } else {
        r.push_back(std::get<std::string>(c));
      }
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(1) + "\n";
}

Table parse_csv(const std::string &text) {
  Table t;
  std::stringstream ss(text);
  std::string line;
  bool have_columns = false;
  while (std::getline(ss, line)) {
    if (line.rfind("# ", 0) == 0) {
      t.header.push_back(line.substr(2));
      continue;
    }
    if (line.empty())
      continue;
    if (!have_columns) {
      for (const auto &[p, q] : split_csv(line))
        t.columns.push_back(p);
      have_columns = true;
      continue;
    }
    std::vector<Cell> row;
    for (const auto &[p, quoted] : split_csv(line)) {
      char *end = nullptr;
      const double v = std::strtod(p.c_str(), &end);
      if (!quoted && !p.empty() && end == p.c_str() + p.size())
        row.emplace_back(v);
      else
        row.emplace_back(p);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_text(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw ConfigError("--out", "cannot write '" + path + "'");
  out << text;
  if (!out)
    throw ConfigError("--out", "write failed for '" + path + "'");
}

} // namespace shellqft
