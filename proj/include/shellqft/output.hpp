#pragma once

#include <string>
#include <variant>
#include <vector>

namespace shellqft {

using Cell = std::variant<double, std::string>;

struct Table {
  //! `#` header lines without the leading "# "
  std::vector<std::string> header;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

//! CSV: header lines prefixed "# ", a column line, then one line per row.
//! Doubles are printed with 17 significant digits.
std::string to_csv(const Table &t);
//! {"header": [...], "columns": [...], "rows": [[...], ...]}
std::string to_json(const Table &t);
//! Parse what to_csv wrote; numeric-looking cells become doubles.
Table parse_csv(const std::string &text);

//! Write to `path`, or to stdout when path is empty or "-".
void write_text(const std::string &path, const std::string &text);

} // namespace shellqft
