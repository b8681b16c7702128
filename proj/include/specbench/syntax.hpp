#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "specbench/formula.hpp"

namespace specbench {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(std::size_t position, std::string expected, std::string_view text);

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

class UnknownProposition : public std::runtime_error {
 public:
  explicit UnknownProposition(std::string name);

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

struct ParseOptions {
  /// Closed alphabet; every atom must belong to it. Empty optional = open.
  std::optional<std::set<Proposition>> alphabet;
  /// `X` is an internal operator and rejected unless enabled.
  bool allow_next = false;
};

/// Grammar (loosest to tightest): `->` (right), `|`, `&`, `U` (right),
/// prefix `! F G X`. And/Or chains are built right-nested.
Formula parse(std::string_view text, const ParseOptions& options = {});

/// Fully parenthesized canonical text. Chains of the same associative
/// operator share one pair of parentheses: `(a & b & c)`.
std::string format(Formula f);

/// Re-associates And/Or chains to right-nested form.
Formula normalize(Formula f);

/// One record of a spec file: `<id> TAB <formula> [TAB extra columns...]`.
struct SpecLine {
  std::string id;
  Formula formula;
  std::vector<std::string> extra;
};

/// Reads a spec file; blank lines and lines starting with `#` are skipped.
/// Errors are rethrown with the line number prepended.
std::vector<SpecLine> read_spec_file(std::istream& in, const ParseOptions& options = {});
void write_spec_line(std::ostream& out, const SpecLine& line);

}  // namespace specbench
