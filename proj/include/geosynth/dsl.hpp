#pragma once

// Construction language:
//
//   program   := statement (";" statement)* [";"]
//   statement := point+ "=" term ("," term)*
//   term      := primitive point*
//   point     := single capital letter
//
// Example: "A B C = triangle A B C; D = midpoint B C"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geosynth/error.hpp"

namespace geosynth::dsl {

enum class PrimitiveKind {
  Constructor,    // places every declared point of its statement
  Deterministic,  // places one point as a function of its inputs
  Locus,          // constrains one point to a line, ray or circle
};

/// Where the optional copy of the placed point may appear in a term's
/// argument list ("C = on_circle C A B" vs "C = on_circle A B").
enum class TargetSlot { None, Leading, Trailing };

struct PrimitiveInfo {
  std::string_view name;
  PrimitiveKind kind;
  std::size_t inputs;  // argument count excluding the optional target copy
  TargetSlot slot;
  int free_dof;        // continuous random degrees of freedom when used alone
};

inline constexpr std::array<PrimitiveInfo, 15> kPrimitives{{
    {"triangle", PrimitiveKind::Constructor, 3, TargetSlot::None, 6},
    {"r_triangle", PrimitiveKind::Constructor, 3, TargetSlot::None, 5},
    {"segment", PrimitiveKind::Constructor, 2, TargetSlot::None, 4},
    {"rectangle", PrimitiveKind::Constructor, 4, TargetSlot::None, 5},
    {"eq_triangle", PrimitiveKind::Deterministic, 2, TargetSlot::Leading, 0},
    {"midpoint", PrimitiveKind::Deterministic, 2, TargetSlot::Leading, 0},
    {"circle", PrimitiveKind::Deterministic, 3, TargetSlot::Leading, 0},
    {"intersection_ll", PrimitiveKind::Deterministic, 4, TargetSlot::Leading, 0},
    {"parallelogram", PrimitiveKind::Deterministic, 3, TargetSlot::Trailing, 0},
    {"foot", PrimitiveKind::Deterministic, 3, TargetSlot::Leading, 0},
    {"incenter", PrimitiveKind::Deterministic, 3, TargetSlot::Leading, 0},
    {"on_circle", PrimitiveKind::Locus, 2, TargetSlot::Leading, 1},
    {"on_line", PrimitiveKind::Locus, 2, TargetSlot::Leading, 1},
    {"angle_bisector", PrimitiveKind::Locus, 3, TargetSlot::Leading, 1},
    {"lc_tangent", PrimitiveKind::Locus, 2, TargetSlot::Leading, 1},
}};

inline const PrimitiveInfo* find_primitive(std::string_view name) {
  for (const auto& p : kPrimitives) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

struct Term {
  std::string primitive;
  std::vector<char> args;  // as written, including an optional target copy
  SourceLocation where;
  std::vector<SourceLocation> arg_where;

  const PrimitiveInfo& info() const { return *find_primitive(primitive); }

  /// Arguments with the optional target copy removed.
  std::vector<char> inputs() const {
    const auto& p = info();
    if (p.kind == PrimitiveKind::Constructor || args.size() == p.inputs) return args;
    if (p.slot == TargetSlot::Trailing) return {args.begin(), args.end() - 1};
    return {args.begin() + 1, args.end()};
  }

  friend bool operator==(const Term& a, const Term& b) {
    return a.primitive == b.primitive && a.args == b.args;
  }
};

struct Statement {
  std::vector<char> declared;
  std::vector<Term> terms;
  SourceLocation where;

  friend bool operator==(const Statement& a, const Statement& b) {
    return a.declared == b.declared && a.terms == b.terms;
  }
};

struct Program {
  std::vector<Statement> statements;
  std::string source_text;

  /// Declared points in declaration order.
  std::vector<char> points() const {
    std::vector<char> out;
    for (const auto& s : statements) out.insert(out.end(), s.declared.begin(), s.declared.end());
    return out;
  }

  /// Structural equality; the source text is not compared.
  friend bool operator==(const Program& a, const Program& b) { return a.statements == b.statements; }
};

namespace detail {

enum class TokKind { Ident, Equals, Comma, Semicolon, End };

struct Token {
  TokKind kind;
  std::string text;
  SourceLocation where;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    const SourceLocation at{line_, col_};
    if (pos_ >= src_.size()) return {TokKind::End, "", at};
    const char c = src_[pos_];
    if (c == '=' || c == ',' || c == ';') {
      advance();
      const TokKind k = c == '=' ? TokKind::Equals : c == ',' ? TokKind::Comma : TokKind::Semicolon;
      return {k, std::string(1, c), at};
    }
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::string text;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        text += src_[pos_];
        advance();
      }
      return {TokKind::Ident, text, at};
    }
    throw Error(Errc::SyntaxError, "unexpected character '" + printable(c) + "'", at);
  }

 private:
  static std::string printable(char c) {
    const auto u = static_cast<unsigned char>(c);
    if (u >= 0x20 && u < 0x7f) return std::string(1, c);
    static constexpr char hex[] = "0123456789abcdef";
    return std::string("\\x") + hex[u >> 4] + hex[u & 15];
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

inline bool is_point_name(const std::string& s) {
  return s.size() == 1 && s[0] >= 'A' && s[0] <= 'Z';
}

inline std::string quoted(const Token& t) {
  return t.kind == TokKind::End ? std::string("end of input") : "'" + t.text + "'";
}

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { tok_ = lex_.next(); }

  Program run(std::string_view src) {
    Program program;
    program.source_text = std::string(src);
    while (tok_.kind != TokKind::End) {
      if (tok_.kind == TokKind::Semicolon) {
        shift();
        continue;
      }
      program.statements.push_back(statement());
      if (tok_.kind == TokKind::Semicolon) {
        shift();
      } else if (tok_.kind != TokKind::End) {
        throw Error(Errc::SyntaxError, "expected ';' before " + quoted(tok_), tok_.where);
      }
    }
    if (program.statements.empty()) {
      throw Error(Errc::SyntaxError, "empty program", tok_.where);
    }
    return program;
  }

 private:
  void shift() { tok_ = lex_.next(); }

  char point_name(const char* role) {
    if (tok_.kind != TokKind::Ident || !is_point_name(tok_.text)) {
      throw Error(Errc::SyntaxError,
                  std::string("expected ") + role + " (single capital letter), got " + quoted(tok_),
                  tok_.where);
    }
    const char c = tok_.text[0];
    shift();
    return c;
  }

  Statement statement() {
    Statement st;
    st.where = tok_.where;
    while (tok_.kind == TokKind::Ident) {
      st.declared.push_back(point_name("point name"));
    }
    if (st.declared.empty()) {
      throw Error(Errc::SyntaxError, "expected point name, got " + quoted(tok_), tok_.where);
    }
    if (tok_.kind != TokKind::Equals) {
      throw Error(Errc::SyntaxError, "expected '=' before " + quoted(tok_), tok_.where);
    }
    shift();
    st.terms.push_back(term());
    while (tok_.kind == TokKind::Comma) {
      shift();
      st.terms.push_back(term());
    }
    return st;
  }

  Term term() {
    Term t;
    t.where = tok_.where;
    if (tok_.kind != TokKind::Ident || is_point_name(tok_.text)) {
      throw Error(Errc::SyntaxError, "expected primitive name, got " + quoted(tok_), tok_.where);
    }
    t.primitive = tok_.text;
    if (!find_primitive(t.primitive)) {
      throw Error(Errc::UnknownPrimitive, "unknown primitive '" + t.primitive + "'", tok_.where);
    }
    shift();
    while (tok_.kind == TokKind::Ident) {
      t.arg_where.push_back(tok_.where);
      t.args.push_back(point_name("point argument"));
    }
    return t;
  }

  Lexer lex_;
  Token tok_;
};

inline bool contains(const std::vector<char>& v, char c) {
  return std::find(v.begin(), v.end(), c) != v.end();
}

/// Semantic checks: arity, declarations, dependency order.
inline void validate(const Program& program) {
  std::vector<char> known;
  for (const auto& st : program.statements) {
    for (char p : st.declared) {
      if (contains(known, p) ||
          std::count(st.declared.begin(), st.declared.end(), p) > 1) {
        throw Error(Errc::DuplicateDeclaration, std::string("point ") + p + " declared twice",
                    st.where);
      }
    }
    const bool conjunction = st.terms.size() > 1;
    for (const auto& term : st.terms) {
      const auto& info = term.info();
      auto arg_at = [&](std::size_t i) {
        return i < term.arg_where.size() ? term.arg_where[i] : term.where;
      };
      for (std::size_t i = 0; i < term.args.size(); ++i) {
        if (!contains(known, term.args[i]) && !contains(st.declared, term.args[i])) {
          throw Error(Errc::UndeclaredPoint,
                      std::string("point ") + term.args[i] + " is not declared", arg_at(i));
        }
      }
      if (info.kind == PrimitiveKind::Constructor) {
        if (conjunction) {
          throw Error(Errc::SyntaxError,
                      "'" + term.primitive + "' cannot be combined with other terms", term.where);
        }
        if (term.args != st.declared) {
          throw Error(Errc::SyntaxError,
                      "'" + term.primitive + "' must list exactly the declared points",
                      term.where);
        }
        if (term.args.size() != info.inputs) {
          throw Error(Errc::SyntaxError,
                      "'" + term.primitive + "' expects " + std::to_string(info.inputs) +
                          " points",
                      term.where);
        }
        continue;
      }
      if (st.declared.size() != 1) {
        throw Error(Errc::SyntaxError, "'" + term.primitive + "' places exactly one point",
                    st.where);
      }
      const char target = st.declared.front();
      const bool with_target = term.args.size() == info.inputs + 1;
      if (term.args.size() != info.inputs && !with_target) {
        throw Error(Errc::SyntaxError,
                    "'" + term.primitive + "' expects " + std::to_string(info.inputs) +
                        " arguments",
                    term.where);
      }
      if (with_target) {
        const std::size_t slot = info.slot == TargetSlot::Trailing ? term.args.size() - 1 : 0;
        if (term.args[slot] != target) {
          throw Error(Errc::SyntaxError,
                      std::string("extra argument of '") + term.primitive +
                          "' must be the placed point " + target,
                      arg_at(slot));
        }
      }
      for (char in : term.inputs()) {
        if (in == target) {
          throw Error(Errc::UndeclaredPoint,
                      std::string("point ") + target + " used before it is placed", term.where);
        }
      }
      if (conjunction && info.kind != PrimitiveKind::Locus) {
        throw Error(Errc::SyntaxError,
                    "'" + term.primitive + "' cannot be combined with other terms", term.where);
      }
    }
    if (conjunction && st.terms.size() != 2) {
      throw Error(Errc::SyntaxError, "a conjunction must have exactly two terms", st.where);
    }
    known.insert(known.end(), st.declared.begin(), st.declared.end());
  }
}

}  // namespace detail

/// Parses and validates a construction program. Throws geosynth::Error with
/// a 1-based source location on any failure.
inline Program parse_program(std::string_view source) {
  detail::Parser parser(source);
  Program program = parser.run(source);
  detail::validate(program);
  return program;
}

inline std::string format_statement(const Statement& st) {
  std::string out;
  for (char p : st.declared) {
    out += p;
    out += ' ';
  }
  out += '=';
  for (std::size_t i = 0; i < st.terms.size(); ++i) {
    out += i == 0 ? " " : ", ";
    out += st.terms[i].primitive;
    for (char a : st.terms[i].args) {
      out += ' ';
      out += a;
    }
  }
  return out;
}

/// Canonical rendering: single spaces, "; " between statements, ", " between
/// conjoined terms.
inline std::string format_program(const Program& program) {
  std::string out;
  for (std::size_t i = 0; i < program.statements.size(); ++i) {
    if (i) out += "; ";
    out += format_statement(program.statements[i]);
  }
  return out;
}

/// Continuous random degrees of freedom consumed by a layout of the program.
/// A conjunction of two loci is fully determined up to a root choice.
inline int free_point_count(const Program& program) {
  int total = 0;
  for (const auto& st : program.statements) {
    if (st.terms.size() == 1) total += st.terms.front().info().free_dof;
  }
  return total;
}

}  // namespace geosynth::dsl
