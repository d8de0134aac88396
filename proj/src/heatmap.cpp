#include "aglab/heatmap.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <sstream>

#include "aglab/dataset.hpp"
#include "aglab/io_util.hpp"

namespace aglab::analysis {

void export_heatmap_csv(const num::Matrix& m, const std::string& name,
                        const std::filesystem::path& path) {
  std::string out;
  out += "# matrix: " + name + "\n";
  out += "# rows: incoming weights per receiving unit; cols: outgoing weights per sending unit\n";
  out += "# shape: " + std::to_string(m.rows()) + "," + std::to_string(m.cols()) + "\n";
  char buf[32];
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      // shortest round-trip representation
      std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
      out += buf;
    }
    out += '\n';
  }
  aglab::write_file_atomic(path, out);
}

num::Matrix read_heatmap_csv(const std::filesystem::path& path) {
  const std::string content = aglab::read_file(path);
  std::vector<std::vector<double>> rows;
  std::istringstream is(content);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (start <= line.size()) {
      auto comma = line.find(',', start);
      const std::string cell =
          line.substr(start, comma == std::string::npos ? comma : comma - start);
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw task::ParseError(path.string(), lineno, "bad cell '" + cell + "'");
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw task::ParseError(path.string(), lineno, "ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return {};
  num::Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  return m;
}

}  // namespace aglab::analysis
