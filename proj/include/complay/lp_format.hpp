#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "complay/milp.hpp"

namespace complay {

namespace detail {

inline std::string lp_number(double v) {
  if (std::floor(v) == v && std::abs(v) < 0x1p53) {
    return std::to_string(static_cast<long long>(v));
  }
  return format_real(v);
}

inline void lp_write_terms(std::ostream& out, const MilpModel& model,
                           const std::vector<std::pair<int, double>>& terms, double constant) {
  bool first = true;
  for (const auto& [id, coeff] : terms) {
    if (coeff == 0.0) continue;
    double mag = std::abs(coeff);
    if (first) {
      if (coeff < 0.0) out << "- ";
      first = false;
    } else {
      out << (coeff < 0.0 ? " - " : " + ");
    }
    if (mag != 1.0) out << lp_number(mag) << ' ';
    out << model.vars[static_cast<size_t>(id)].name;
  }
  if (constant != 0.0) {
    if (first)
      out << lp_number(constant);
    else
      out << (constant < 0.0 ? " - " : " + ") << lp_number(std::abs(constant));
    first = false;
  }
  if (first) out << '0';
}

}  // namespace detail

// Textual LP export. Sections Minimize / Subject To / Bounds / Binary
// (plus General when integer variables exist) / End are always present;
// rows keep declaration order, every non-binary variable gets a Bounds line.
inline void write_lp(const MilpModel& model, std::ostream& out) {
  out << "Minimize\n obj: ";
  detail::lp_write_terms(out, model, model.objective.terms, model.objective.offset);
  out << "\nSubject To\n";
  for (const auto& row : model.rows) {
    out << ' ' << row.name << ": ";
    detail::lp_write_terms(out, model, row.terms, 0.0);
    out << (row.sense == Sense::LE ? " <= " : row.sense == Sense::GE ? " >= " : " = ");
    out << detail::lp_number(row.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const auto& v : model.vars) {
    if (v.kind == VarKind::Binary) continue;
    const bool lo_inf = v.lower == -std::numeric_limits<double>::infinity();
    const bool hi_inf = v.upper == std::numeric_limits<double>::infinity();
    out << ' ';
    if (lo_inf && hi_inf)
      out << v.name << " free";
    else if (hi_inf)
      out << v.name << " >= " << detail::lp_number(v.lower);
    else if (lo_inf)
      out << v.name << " <= " << detail::lp_number(v.upper);
    else
      out << detail::lp_number(v.lower) << " <= " << v.name << " <= "
          << detail::lp_number(v.upper);
    out << '\n';
  }
  out << "Binary\n";
  int on_line = 0;
  for (const auto& v : model.vars) {
    if (v.kind != VarKind::Binary) continue;
    out << ' ' << v.name;
    if (++on_line == 8) {
      out << '\n';
      on_line = 0;
    }
  }
  if (on_line != 0) out << '\n';
  out << "End\n";
}

inline std::string write_lp(const MilpModel& model) {
  std::ostringstream out;
  write_lp(model, out);
  return out.str();
}

namespace detail {

struct LpToken {
  enum class Kind { Name, Number, Sign, Sense, Colon, End };
  Kind kind = Kind::End;
  std::string text;
  double number = 0.0;
  Sense sense = Sense::LE;
};

class LpLexer {
 public:
  explicit LpLexer(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      auto cut = line.find('\\');  // LP comments run to end of line
      if (cut != std::string::npos) line.resize(cut);
      text_ += line;
      text_ += '\n';
    }
  }

  LpToken peek() {
    if (!has_peek_) {
      peeked_ = scan();
      has_peek_ = true;
    }
    return peeked_;
  }

  LpToken next() {
    if (has_peek_) {
      has_peek_ = false;
      return peeked_;
    }
    return scan();
  }

 private:
  LpToken scan() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ >= text_.size()) return {};
    char c = text_[pos_];
    if (c == ':') {
      ++pos_;
      return {LpToken::Kind::Colon, ":", 0.0, Sense::LE};
    }
    if (c == '<' || c == '>' || c == '=') {
      size_t start = pos_++;
      if (pos_ < text_.size() && text_[pos_] == '=') ++pos_;
      Sense s = c == '<' ? Sense::LE : c == '>' ? Sense::GE : Sense::EQ;
      return {LpToken::Kind::Sense, text_.substr(start, pos_ - start), 0.0, s};
    }
    if (c == '+' || c == '-' || std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t start = pos_++;
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(d)) || d == '.' || d == 'e' || d == 'E' ||
            ((d == '+' || d == '-') && (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E')))
          ++pos_;
        else
          break;
      }
      std::string tok = text_.substr(start, pos_ - start);
      if (tok == "+" || tok == "-")
        return {LpToken::Kind::Sign, tok, tok == "-" ? -1.0 : 1.0, Sense::LE};
      double value = 0.0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
      if (ec != std::errc{} || p != tok.data() + tok.size())
        throw Error("LP parse: bad number '" + tok + "'");
      return {LpToken::Kind::Number, tok, value, Sense::LE};
    }
    size_t start = pos_;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == ':' || d == '<' || d == '>' ||
          d == '=' || d == '+' || d == '-')
        break;
      ++pos_;
    }
    return {LpToken::Kind::Name, text_.substr(start, pos_ - start), 0.0, Sense::LE};
  }

  std::string text_;
  size_t pos_ = 0;
  LpToken peeked_;
  bool has_peek_ = false;
};

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace detail

// Reads back the subset of the LP format emitted by write_lp (plus the usual
// section spellings). Variables are created on first mention with default
// bounds [0, inf); Bounds and Binary sections then adjust them.
inline MilpModel parse_lp(std::istream& in) {
  using detail::LpToken;
  detail::LpLexer lex(in);
  MilpModel model;
  std::map<std::string, int> index;

  auto var_id = [&](const std::string& name) {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    int id = model.add_continuous(name, 0.0, std::numeric_limits<double>::infinity());
    index.emplace(name, id);
    return id;
  };

  enum class Section { None, Objective, Rows, Bounds, Binary, General, Done };
  Section section = Section::None;

  auto match_section = [&](const LpToken& tok) -> Section {
    if (tok.kind != LpToken::Kind::Name) return Section::None;
    std::string w = detail::lower(tok.text);
    if (w == "minimize" || w == "minimise" || w == "min") return Section::Objective;
    if (w == "subject" || w == "such") {
      LpToken ahead = lex.peek();
      if (ahead.kind == LpToken::Kind::Name &&
          (detail::lower(ahead.text) == "to" || detail::lower(ahead.text) == "that")) {
        lex.next();
        return Section::Rows;
      }
      return Section::None;
    }
    if (w == "st" || w == "s.t.") return Section::Rows;
    if (w == "bounds" || w == "bound") return Section::Bounds;
    if (w == "binary" || w == "binaries" || w == "bin") return Section::Binary;
    if (w == "general" || w == "generals" || w == "gen") return Section::General;
    if (w == "end") return Section::Done;
    return Section::None;
  };

  // expression accumulator for the objective / constraint sections
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;
  double sign = 1.0;
  bool have_coeff = false;
  double coeff = 1.0;
  std::string row_label;

  auto settle_dangling_number = [&] {
    if (have_coeff) {
      constant += sign * coeff;
      have_coeff = false;
      sign = 1.0;
    }
  };
  auto reset_expression = [&] {
    terms.clear();
    constant = 0.0;
    sign = 1.0;
    have_coeff = false;
    row_label.clear();
  };
  auto finish_objective = [&] {
    settle_dangling_number();
    model.objective.terms = terms;
    model.objective.offset = constant;
    reset_expression();
  };

  for (;;) {
    LpToken tok = lex.next();
    if (tok.kind == LpToken::Kind::End) break;

    // Section keywords win over names; the writer's variable names never
    // collide with them.
    Section next_section = match_section(tok);
    if (next_section != Section::None) {
      if (section == Section::Objective) finish_objective();
      section = next_section;
      if (section == Section::Done) break;
      continue;
    }

    switch (section) {
      case Section::Objective:
      case Section::Rows: {
        if (tok.kind == LpToken::Kind::Name) {
          if (terms.empty() && constant == 0.0 && !have_coeff && sign == 1.0 &&
              row_label.empty() && lex.peek().kind == LpToken::Kind::Colon) {
            lex.next();
            row_label = tok.text;
            break;
          }
          double c = sign * (have_coeff ? coeff : 1.0);
          have_coeff = false;
          sign = 1.0;
          terms.emplace_back(var_id(tok.text), c);
          break;
        }
        if (tok.kind == LpToken::Kind::Sign) {
          settle_dangling_number();
          sign *= tok.number;
          break;
        }
        if (tok.kind == LpToken::Kind::Number) {
          settle_dangling_number();
          coeff = tok.number;
          have_coeff = true;
          break;
        }
        if (tok.kind == LpToken::Kind::Sense) {
          if (section == Section::Objective) throw Error("LP parse: relation inside objective");
          double rhs_sign = 1.0;
          LpToken rhs = lex.next();
          if (rhs.kind == LpToken::Kind::Sign) {
            rhs_sign = rhs.number;
            rhs = lex.next();
          }
          if (rhs.kind != LpToken::Kind::Number)
            throw Error("LP parse: expected numeric right-hand side");
          settle_dangling_number();
          model.add_row(row_label.empty() ? "c" + std::to_string(model.rows.size())
                                          : row_label,
                        terms, tok.sense, rhs_sign * rhs.number - constant);
          reset_expression();
          break;
        }
        throw Error("LP parse: unexpected token '" + tok.text + "'");
      }
      case Section::Bounds: {
        auto read_signed_number = [&](LpToken first) {
          double s = 1.0;
          if (first.kind == LpToken::Kind::Sign) {
            s = first.number;
            first = lex.next();
          }
          if (first.kind != LpToken::Kind::Number) throw Error("LP parse: bad bound value");
          return s * first.number;
        };
        if (tok.kind == LpToken::Kind::Number || tok.kind == LpToken::Kind::Sign) {
          double lo = read_signed_number(tok);
          LpToken s1 = lex.next();
          LpToken name = lex.next();
          LpToken s2 = lex.next();
          double hi = read_signed_number(lex.next());
          if (s1.kind != LpToken::Kind::Sense || name.kind != LpToken::Kind::Name ||
              s2.kind != LpToken::Kind::Sense)
            throw Error("LP parse: malformed two-sided bound");
          int id = var_id(name.text);
          model.vars[static_cast<size_t>(id)].lower = lo;
          model.vars[static_cast<size_t>(id)].upper = hi;
        } else if (tok.kind == LpToken::Kind::Name) {
          int id = var_id(tok.text);
          LpToken nxt = lex.next();
          if (nxt.kind == LpToken::Kind::Name && detail::lower(nxt.text) == "free") {
            model.vars[static_cast<size_t>(id)].lower = -std::numeric_limits<double>::infinity();
            model.vars[static_cast<size_t>(id)].upper = std::numeric_limits<double>::infinity();
          } else if (nxt.kind == LpToken::Kind::Sense) {
            double v = read_signed_number(lex.next());
            auto& var = model.vars[static_cast<size_t>(id)];
            if (nxt.sense == Sense::LE)
              var.upper = v;
            else if (nxt.sense == Sense::GE)
              var.lower = v;
            else
              var.lower = var.upper = v;
          } else {
            throw Error("LP parse: malformed bound line");
          }
        } else {
          throw Error("LP parse: malformed Bounds section");
        }
        break;
      }
      case Section::Binary: {
        if (tok.kind != LpToken::Kind::Name) throw Error("LP parse: expected variable name");
        int id = var_id(tok.text);
        model.vars[static_cast<size_t>(id)].kind = VarKind::Binary;
        model.vars[static_cast<size_t>(id)].lower = 0.0;
        model.vars[static_cast<size_t>(id)].upper = 1.0;
        break;
      }
      case Section::General: {
        if (tok.kind != LpToken::Kind::Name) throw Error("LP parse: expected variable name");
        var_id(tok.text);  // integrality beyond binary not modelled further
        break;
      }
      case Section::None:
      case Section::Done:
        throw Error("LP parse: content before Minimize section");
    }
  }
  if (section == Section::Objective) finish_objective();
  model.check_well_formed();
  return model;
}

inline MilpModel parse_lp(const std::string& text) {
  std::istringstream in(text);
  return parse_lp(in);
}

namespace detail {

inline std::map<std::string, double> named_terms(const MilpModel& m,
                                                 const std::vector<std::pair<int, double>>& terms) {
  std::map<std::string, double> out;
  for (const auto& [id, c] : terms) out[m.vars[static_cast<size_t>(id)].name] += c;
  for (auto it = out.begin(); it != out.end();)
    it = it->second == 0.0 ? out.erase(it) : std::next(it);
  return out;
}

}  // namespace detail

// Name-keyed structural equality: same variables (kind and bounds), same
// constraint sequence, same objective. Variable declaration order is allowed
// to differ, which is exactly what a write/parse round trip produces.
inline bool models_equivalent(const MilpModel& a, const MilpModel& b) {
  if (a.vars.size() != b.vars.size() || a.rows.size() != b.rows.size()) return false;
  std::map<std::string, const MilpVariable*> bv;
  for (const auto& v : b.vars) bv[v.name] = &v;
  if (bv.size() != b.vars.size()) return false;
  for (const auto& v : a.vars) {
    auto it = bv.find(v.name);
    if (it == bv.end()) return false;
    const MilpVariable& w = *it->second;
    if (v.kind != w.kind || v.lower != w.lower || v.upper != w.upper) return false;
  }
  for (size_t i = 0; i < a.rows.size(); ++i) {
    const auto& ra = a.rows[i];
    const auto& rb = b.rows[i];
    if (ra.name != rb.name || ra.sense != rb.sense || ra.rhs != rb.rhs) return false;
    if (detail::named_terms(a, ra.terms) != detail::named_terms(b, rb.terms)) return false;
  }
  if (a.objective.offset != b.objective.offset) return false;
  return detail::named_terms(a, a.objective.terms) == detail::named_terms(b, b.objective.terms);
}

}  // namespace complay
