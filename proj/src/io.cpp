#include "repsim/io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace repsim::io {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool is_blank(const std::string& line) { return line.find_first_not_of(" \t") == std::string::npos; }

// Picks "r_max=<R>" and "mode=<m>" tokens out of a comment line.
void scan_scale_comment(const std::string& line, std::optional<RatingScale>& scale, const std::string& source,
                        std::size_t line_no) {
  std::istringstream tokens(line.substr(1));
  std::string token;
  std::optional<int> r_max;
  std::optional<ScaleMode> mode;
  while (tokens >> token) {
    if (token.rfind("r_max=", 0) == 0) {
      const auto value = token.substr(6);
      int parsed = 0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
      if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw FormatError(source, line_no, "bad r_max in scale header: '" + value + "'");
      }
      r_max = parsed;
    } else if (token.rfind("mode=", 0) == 0) {
      try {
        mode = parse_scale_mode(token.substr(5));
      } catch (const std::invalid_argument& e) {
        throw FormatError(source, line_no, e.what());
      }
    }
  }
  if (r_max || mode) {
    RatingScale s = scale.value_or(RatingScale{});
    if (r_max) s.r_max = *r_max;
    if (mode) s.mode = *mode;
    scale = s;
  }
}

std::string optional_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; }

}  // namespace

Index SymbolTable::intern(const std::string& name) {
  const auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  const auto idx = static_cast<Index>(names_.size());
  names_.push_back(name);
  index_.emplace(name, idx);
  return idx;
}

std::optional<Index> SymbolTable::find(const std::string& name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SymbolTable SymbolTable::numbered(std::size_t n) {
  SymbolTable table;
  for (std::size_t k = 0; k < n; ++k) table.intern(std::to_string(k));
  return table;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::optional<double> parse_double(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const char* begin = text.data();
  if (*begin == '+') ++begin;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

void write_ratings(std::ostream& os, const RatingDataset& dataset, const SymbolTable& users,
                   const SymbolTable& objects) {
  os << "# scale r_max=" << dataset.scale().r_max << " mode=" << to_string(dataset.scale().mode) << '\n';
  os << "# user_id\tobject_id\trating\n";
  for (const auto& r : dataset.triples()) {
    os << users.name(r.user) << '\t' << objects.name(r.object) << '\t' << format_double(r.value) << '\n';
  }
}

RatingsFile read_ratings(std::istream& is, const std::string& source, SymbolTable& users, SymbolTable& objects,
                         bool closed) {
  RatingsFile out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    strip_cr(line);
    if (is_blank(line)) continue;
    if (line.front() == '#') {
      scan_scale_comment(line, out.scale, source, line_no);
      continue;
    }
    const auto fields = split(line, '\t');
    if (fields.size() != 3) {
      throw FormatError(source, line_no, "expected 3 tab-separated fields, found " + std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) throw FormatError(source, line_no, "empty id");
    const auto value = parse_double(fields[2]);
    if (!value) throw FormatError(source, line_no, "rating is not a number: '" + fields[2] + "'");

    Index u = 0, o = 0;
    if (closed) {
      const auto fu = users.find(fields[0]);
      const auto fo = objects.find(fields[1]);
      if (!fu) throw FormatError(source, line_no, "user '" + fields[0] + "' is not in the ground truth");
      if (!fo) throw FormatError(source, line_no, "object '" + fields[1] + "' is not in the ground truth");
      u = *fu;
      o = *fo;
    } else {
      u = users.intern(fields[0]);
      o = objects.intern(fields[1]);
    }
    out.triples.push_back({u, o, *value});
  }
  if (is.bad()) throw FormatError(source, line_no, "read error");
  return out;
}

void write_values(std::ostream& os, const std::string& id_column, const std::string& column,
                  const std::vector<double>& values, const SymbolTable& ids) {
  os << "# " << id_column << '\t' << column << '\n';
  for (std::size_t k = 0; k < values.size(); ++k) {
    os << ids.name(static_cast<Index>(k)) << '\t' << format_double(values[k]) << '\n';
  }
}

std::vector<std::pair<std::string, double>> read_values(std::istream& is, const std::string& source) {
  std::vector<std::pair<std::string, double>> out;
  std::unordered_map<std::string, std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    strip_cr(line);
    if (is_blank(line) || line.front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 2) {
      throw FormatError(source, line_no, "expected 2 tab-separated fields, found " + std::to_string(fields.size()));
    }
    const auto value = parse_double(fields[1]);
    if (!value) throw FormatError(source, line_no, "value is not a number: '" + fields[1] + "'");
    if (!seen.emplace(fields[0], line_no).second) throw FormatError(source, line_no, "duplicate id '" + fields[0] + "'");
    out.emplace_back(fields[0], *value);
  }
  return out;
}

const std::vector<std::string>& sweep_csv_columns() {
  static const std::vector<std::string> columns{
      "sweep_variable", "value",         "mode",           "algorithm",   "delta_q",
      "delta_q_norm",   "tau_users",     "auc_objects",    "auc_users",   "se_delta_q",
      "se_delta_q_norm", "se_tau_users", "se_auc_objects", "se_auc_users", "n_runs",
      "n_nonconverged"};
  return columns;
}

void write_sweep_header(std::ostream& os) {
  const auto& cols = sweep_csv_columns();
  for (std::size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << cols[k];
  os << '\n';
}

void write_sweep_rows(std::ostream& os, const std::vector<SweepRow>& rows) {
  for (const auto& row : rows) {
    const auto& m = row.cell.mean;
    const auto& se = row.cell.standard_error;
    os << row.sweep_variable << ',' << format_double(row.value) << ',' << to_string(row.mode) << ','
       << row.algorithm << ',' << format_double(m.delta_q) << ',' << format_double(m.delta_q_normalized) << ','
       << optional_field(m.kendall_tau_users) << ',' << format_double(m.auc_objects) << ','
       << optional_field(m.auc_users) << ',' << format_double(se.delta_q) << ','
       << format_double(se.delta_q_normalized) << ',' << optional_field(se.kendall_tau_users) << ','
       << format_double(se.auc_objects) << ',' << optional_field(se.auc_users) << ',' << row.cell.runs << ','
       << row.cell.nonconverged << '\n';
  }
}

std::vector<SweepRow> read_sweep_csv(std::istream& is, const std::string& source) {
  const auto& cols = sweep_csv_columns();
  std::vector<SweepRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (!header_seen) {
      if (f != cols) throw FormatError(source, line_no, "unexpected sweep CSV header");
      header_seen = true;
      continue;
    }
    if (f.size() != cols.size()) {
      throw FormatError(source, line_no, "expected " + std::to_string(cols.size()) + " fields");
    }
    auto num = [&](std::size_t k) {
      const auto v = parse_double(f[k]);
      if (!v) throw FormatError(source, line_no, "column " + cols[k] + " is not a number: '" + f[k] + "'");
      return *v;
    };
    auto opt = [&](std::size_t k) -> std::optional<double> {
      if (f[k].empty()) return std::nullopt;
      return num(k);
    };
    auto count = [&](std::size_t k) {
      int v = 0;
      const auto [ptr, ec] = std::from_chars(f[k].data(), f[k].data() + f[k].size(), v);
      if (ec != std::errc{} || ptr != f[k].data() + f[k].size()) {
        throw FormatError(source, line_no, "column " + cols[k] + " is not an integer");
      }
      return v;
    };

    SweepRow row;
    row.sweep_variable = f[0];
    row.value = num(1);
    try {
      row.mode = parse_scale_mode(f[2]);
    } catch (const std::invalid_argument& e) {
      throw FormatError(source, line_no, e.what());
    }
    row.algorithm = f[3];
    auto& m = row.cell.mean;
    auto& se = row.cell.standard_error;
    m.delta_q = num(4);
    m.delta_q_normalized = num(5);
    m.kendall_tau_users = opt(6);
    m.auc_objects = num(7);
    m.auc_users = opt(8);
    se.delta_q = num(9);
    se.delta_q_normalized = num(10);
    se.kendall_tau_users = opt(11);
    se.auc_objects = num(12);
    se.auc_users = opt(13);
    row.cell.runs = count(14);
    row.cell.nonconverged = count(15);
    rows.push_back(std::move(row));
  }
  if (!header_seen) throw FormatError(source, line_no, "missing sweep CSV header");
  return rows;
}

}  // namespace repsim::io
