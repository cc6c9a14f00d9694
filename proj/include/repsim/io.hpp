#pragma once

// Plain-text file formats.
//
//   ratings      user_id <TAB> object_id <TAB> rating, one triple per line
//   ground truth object_id <TAB> Q   /   user_id <TAB> sigma
//   sweep CSV    fixed column order, header row, empty field = absent metric
//
// Lines starting with '#' are comments. The ratings writer records the scale
// in a leading "# scale r_max=<R> mode=<continuous|discrete>" comment that the
// reader picks up. Reals are printed in shortest round-trip form.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "repsim/dataset.hpp"
#include "repsim/experiments.hpp"

namespace repsim::io {

class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& source, std::size_t line, const std::string& message)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Maps external string ids to dense indices in first-seen order.
class SymbolTable {
 public:
  Index intern(const std::string& name);
  std::optional<Index> find(const std::string& name) const;
  const std::string& name(Index index) const { return names_[index]; }
  std::size_t size() const { return names_.size(); }

  /// Table whose ids are "0", "1", ..., n-1.
  static SymbolTable numbered(std::size_t n);

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Index> index_;
};

std::string format_double(double value);
/// Whole-string parse; std::nullopt on trailing garbage or empty input.
std::optional<double> parse_double(const std::string& text);

struct RatingsFile {
  std::vector<Rating> triples;
  std::optional<RatingScale> scale;  // from the header comment, if present
};

void write_ratings(std::ostream& os, const RatingDataset& dataset, const SymbolTable& users,
                   const SymbolTable& objects);
/// Unknown ids are interned unless `closed` is set, in which case they are an
/// error (used when ground truth fixed the id universe first).
RatingsFile read_ratings(std::istream& is, const std::string& source, SymbolTable& users, SymbolTable& objects,
                         bool closed = false);

/// One "id <TAB> value" line per entry; `column` names the value in the header.
void write_values(std::ostream& os, const std::string& id_column, const std::string& column,
                  const std::vector<double>& values, const SymbolTable& ids);
std::vector<std::pair<std::string, double>> read_values(std::istream& is, const std::string& source);

const std::vector<std::string>& sweep_csv_columns();
void write_sweep_header(std::ostream& os);
void write_sweep_rows(std::ostream& os, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(std::istream& is, const std::string& source);

}  // namespace repsim::io
