#include "splinets/io.hpp"

#include <charconv>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "splinets/error.hpp"

namespace splinets {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string archive_to_string(const Archive& archive) {
  const SplineFamily fam = archive.family.as_symmetric();
  json j;
  j["knots"] = std::vector<double>(fam.knots().values().begin(), fam.knots().values().end());
  j["order"] = fam.order();
  j["type"] = std::string(to_string(fam.type()));
  j["epsilon"] = fam.epsilon();
  json splines = json::array();
  for (const Spline& s : fam.members()) {
    json supp = json::array();
    json der = json::array();
    for (int r = 0; r < s.supp.size(); ++r) {
      supp.push_back({s.supp[r].lo, s.supp[r].hi});
      json block = json::array();
      for (int i = 0; i < s.der[r].rows(); ++i) {
        json row = json::array();
        for (int c = 0; c < s.der[r].cols(); ++c) row.push_back(s.der[r](i, c));
        block.push_back(std::move(row));
      }
      der.push_back(std::move(block));
    }
    splines.push_back({{"supp", std::move(supp)}, {"der", std::move(der)}});
  }
  j["splines"] = std::move(splines);
  if (archive.net) j["net"] = archive.net->levels;
  if (!archive.metadata.empty()) j["metadata"] = archive.metadata;
  return j.dump(1) + "\n";
}

Archive archive_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("archive is not valid JSON: ") + e.what());
  }
  try {
    KnotSet knots(j.at("knots").get<std::vector<double>>());
    const int k = j.at("order").get<int>();
    const BasisType type = basis_type_from_string(j.at("type").get<std::string>());
    const double eps = j.contains("epsilon") ? j.at("epsilon").get<double>() : kDefaultEpsilon;
    SplineFamily fam(std::move(knots), k, Convention::symmetric, type, eps);
    for (const json& s : j.at("splines")) {
      std::vector<Component> comps;
      for (const json& c : s.at("supp")) comps.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
      Spline sp{SupportSet(std::move(comps)), {}};
      for (const json& block : s.at("der")) {
        const int rows = static_cast<int>(block.size());
        const int cols = rows ? static_cast<int>(block.at(0).size()) : 0;
        Matrix b(rows, cols);
        for (int i = 0; i < rows; ++i) {
          if (static_cast<int>(block.at(i).size()) != cols) throw StructureError("ragged derivative block");
          for (int c = 0; c < cols; ++c) b(i, c) = block.at(i).at(c).get<double>();
        }
        sp.der.push_back(std::move(b));
      }
      fam.add(std::move(sp));
    }
    Archive out{std::move(fam), std::nullopt, {}};
    if (j.contains("net")) {
      DyadicNet net;
      net.levels = j.at("net").get<std::vector<std::vector<std::vector<int>>>>();
      const DyadicNet expected = net_layout(out.family.knots().internal(), out.family.order());
      net.complete = expected.levels == net.levels && expected.complete;
      out.net = std::move(net);
    }
    if (j.contains("metadata")) out.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
    return out;
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed archive: ") + e.what());
  }
}

void write_archive(const std::filesystem::path& path, const Archive& archive) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << archive_to_string(archive);
}

Archive read_archive(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return archive_from_string(buf.str());
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  for (auto& s : out) {
    const auto a = s.find_first_not_of(" \t\"");
    const auto b = s.find_last_not_of(" \t\"");
    s = a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  }
  return out;
}

bool parse_number(const std::string& s, double& v) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  return ec == std::errc() && ptr == last && first != last;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  CsvTable table;
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    std::vector<double> row(cells.size());
    bool numeric = true;
    for (std::size_t c = 0; c < cells.size(); ++c) numeric &= parse_number(cells[c], row[c]);
    if (!numeric) {
      if (first) {
        table.header = cells;
        first = false;
        continue;
      }
      throw DomainError("non-numeric CSV cell in " + path.string());
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size()) throw DomainError("ragged CSV rows in " + path.string());
    rows.push_back(std::move(row));
  }
  const int cols = rows.empty() ? 0 : static_cast<int>(rows.front().size());
  table.values.resize(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < cols; ++c) table.values(static_cast<Eigen::Index>(r), c) = rows[r][c];
  return table;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header, const Matrix& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  if (!header.empty()) out << '\n';
  for (int r = 0; r < values.rows(); ++r) {
    for (int c = 0; c < values.cols(); ++c) out << (c ? "," : "") << format_double(values(r, c));
    out << '\n';
  }
}

FunctionalData functional_data_from_csv(const CsvTable& table) {
  if (table.values.cols() < 2) throw DomainError("functional data needs an argument column and a sample column");
  FunctionalData data;
  data.args.resize(table.values.rows());
  for (int r = 0; r < table.values.rows(); ++r) data.args[r] = table.values(r, 0);
  data.values = table.values.rightCols(table.values.cols() - 1);
  return data;
}

}  // namespace splinets
