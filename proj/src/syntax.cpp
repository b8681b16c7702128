#include "specbench/syntax.hpp"

#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>

namespace specbench {

SyntaxError::SyntaxError(std::size_t position, std::string expected, std::string_view text)
    : std::runtime_error("syntax error at position " + std::to_string(position) + ": expected " +
                         expected + " in '" + std::string(text) + "'"),
      position_(position),
      expected_(std::move(expected)) {}

UnknownProposition::UnknownProposition(std::string name)
    : std::runtime_error("unknown proposition '" + name + "'"), name_(std::move(name)) {}

namespace {

enum class Tok { End, LParen, RParen, Not, And, Or, Implies, Until, Eventually, Always, Next, True, False, Ident };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
    std::size_t start = i_;
    if (i_ >= text_.size()) return {Tok::End, start, ""};
    char c = text_[i_];
    switch (c) {
      case '(': ++i_; return {Tok::LParen, start, "("};
      case ')': ++i_; return {Tok::RParen, start, ")"};
      case '!': ++i_; return {Tok::Not, start, "!"};
      case '&': ++i_; return {Tok::And, start, "&"};
      case '|': ++i_; return {Tok::Or, start, "|"};
      case 'U': ++i_; return {Tok::Until, start, "U"};
      case 'F': ++i_; return {Tok::Eventually, start, "F"};
      case 'G': ++i_; return {Tok::Always, start, "G"};
      case 'X': ++i_; return {Tok::Next, start, "X"};
      case '-':
        if (i_ + 1 < text_.size() && text_[i_ + 1] == '>') {
          i_ += 2;
          return {Tok::Implies, start, "->"};
        }
        throw SyntaxError(start, "'->'", text_);
      default:
        break;
    }
    if (c >= 'a' && c <= 'z') {
      while (i_ < text_.size()) {
        char d = text_[i_];
        if ((d >= 'a' && d <= 'z') || (d >= '0' && d <= '9') || d == '_') {
          ++i_;
        } else {
          break;
        }
      }
      std::string word(text_.substr(start, i_ - start));
      if (word == "true") return {Tok::True, start, word};
      if (word == "false") return {Tok::False, start, word};
      return {Tok::Ident, start, word};
    }
    throw SyntaxError(start, "a token", text_);
  }

 private:
  std::string_view text_;
  std::size_t i_ = 0;
};

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& options)
      : text_(text), lexer_(text), options_(options) {
    advance();
  }

  Formula parse_all() {
    Formula f = implication();
    if (cur_.kind != Tok::End) throw SyntaxError(cur_.pos, "end of input", text_);
    return f;
  }

 private:
  void advance() { cur_ = lexer_.next(); }

  Formula implication() {
    Formula lhs = disjunction();
    if (cur_.kind == Tok::Implies) {
      advance();
      return make_implies(lhs, implication());
    }
    return lhs;
  }

  Formula disjunction() {
    Formula lhs = conjunction();
    if (cur_.kind == Tok::Or) {
      advance();
      return make_or(lhs, disjunction());
    }
    return lhs;
  }

  Formula conjunction() {
    Formula lhs = until();
    if (cur_.kind == Tok::And) {
      advance();
      return make_and(lhs, conjunction());
    }
    return lhs;
  }

  Formula until() {
    Formula lhs = unary();
    if (cur_.kind == Tok::Until) {
      advance();
      return make_until(lhs, until());
    }
    return lhs;
  }

  Formula unary() {
    switch (cur_.kind) {
      case Tok::Not:
        advance();
        return make_not(unary());
      case Tok::Eventually:
        advance();
        return make_eventually(unary());
      case Tok::Always:
        advance();
        return make_always(unary());
      case Tok::Next:
        if (!options_.allow_next) throw SyntaxError(cur_.pos, "an operator other than X", text_);
        advance();
        return make_next(unary());
      default:
        return primary();
    }
  }

  Formula primary() {
    Token t = cur_;
    switch (t.kind) {
      case Tok::True:
        advance();
        return Formula::tt();
      case Tok::False:
        advance();
        return Formula::ff();
      case Tok::Ident: {
        if (options_.alphabet && !options_.alphabet->contains(Proposition(t.text))) {
          throw UnknownProposition(t.text);
        }
        advance();
        return Formula::atom(t.text);
      }
      case Tok::LParen: {
        advance();
        Formula inner = implication();
        if (cur_.kind != Tok::RParen) throw SyntaxError(cur_.pos, "')'", text_);
        advance();
        return inner;
      }
      default:
        throw SyntaxError(t.pos, "a proposition, constant, unary operator or '('", text_);
    }
  }

  std::string_view text_;
  Lexer lexer_;
  const ParseOptions& options_;
  Token cur_{Tok::End, 0, ""};
};

const char* binary_symbol(Op op) {
  switch (op) {
    case Op::And: return "&";
    case Op::Or: return "|";
    case Op::Until: return "U";
    case Op::Implies: return "->";
    default: return "?";
  }
}

const char* unary_symbol(Op op) {
  switch (op) {
    case Op::Not: return "!";
    case Op::Next: return "X";
    case Op::Eventually: return "F";
    case Op::Always: return "G";
    default: return "?";
  }
}

void flatten(Formula f, Op op, std::vector<Formula>& out) {
  if (f.op() == op) {
    flatten(f.lhs(), op, out);
    flatten(f.rhs(), op, out);
  } else {
    out.push_back(f);
  }
}

void format_into(Formula f, std::string& out) {
  switch (f.op()) {
    case Op::True: out += "true"; return;
    case Op::False: out += "false"; return;
    case Op::Atom: out += f.name(); return;
    case Op::Not:
    case Op::Next:
    case Op::Eventually:
    case Op::Always:
      out += '(';
      out += unary_symbol(f.op());
      out += ' ';
      format_into(f.lhs(), out);
      out += ')';
      return;
    case Op::And:
    case Op::Or: {
      std::vector<Formula> operands;
      flatten(f, f.op(), operands);
      out += '(';
      for (std::size_t i = 0; i < operands.size(); ++i) {
        if (i) {
          out += ' ';
          out += binary_symbol(f.op());
          out += ' ';
        }
        format_into(operands[i], out);
      }
      out += ')';
      return;
    }
    case Op::Until:
    case Op::Implies:
      out += '(';
      format_into(f.lhs(), out);
      out += ' ';
      out += binary_symbol(f.op());
      out += ' ';
      format_into(f.rhs(), out);
      out += ')';
      return;
  }
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

}  // namespace

Formula parse(std::string_view text, const ParseOptions& options) {
  return Parser(text, options).parse_all();
}

std::string format(Formula f) {
  std::string out;
  format_into(f, out);
  return out;
}

Formula normalize(Formula f) {
  switch (f.op()) {
    case Op::And:
    case Op::Or: {
      std::vector<Formula> operands;
      flatten(f, f.op(), operands);
      for (auto& g : operands) g = normalize(g);
      return f.op() == Op::And ? make_and(operands) : make_or(operands);
    }
    case Op::Not: return make_not(normalize(f.lhs()));
    case Op::Next: return make_next(normalize(f.lhs()));
    case Op::Eventually: return make_eventually(normalize(f.lhs()));
    case Op::Always: return make_always(normalize(f.lhs()));
    case Op::Until: return make_until(normalize(f.lhs()), normalize(f.rhs()));
    case Op::Implies: return make_implies(normalize(f.lhs()), normalize(f.rhs()));
    default: return f;
  }
}

std::vector<SpecLine> read_spec_file(std::istream& in, const ParseOptions& options) {
  std::vector<SpecLine> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    auto cols = split_tabs(line);
    if (cols.size() < 2 || cols[0].empty()) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": expected '<id>\\t<formula>'");
    }
    try {
      SpecLine rec{cols[0], parse(cols[1], options), {cols.begin() + 2, cols.end()}};
      out.push_back(std::move(rec));
    } catch (const SyntaxError& e) {
      throw SyntaxError(e.position(), e.expected() + " (line " + std::to_string(lineno) + ")",
                        cols[1]);
    }
  }
  return out;
}

void write_spec_line(std::ostream& out, const SpecLine& line) {
  out << line.id << '\t' << format(line.formula);
  for (const auto& e : line.extra) out << '\t' << e;
  out << '\n';
}

}  // namespace specbench
