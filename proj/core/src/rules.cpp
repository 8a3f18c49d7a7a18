#include "anvil/rules.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "anvil/error.hpp"

namespace anvil {

namespace {

std::string format_factor(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  std::string out(buf, end);
  if (out.find_first_of(".e") == std::string::npos) out += ".0";
  return out;
}

}  // namespace

std::string RuleSide::str() const {
  switch (kind) {
    case Kind::kHead: return "head";
    case Kind::kPath: return path.str() + "[]";
    case Kind::kToken: return "'" + token + "'";
    case Kind::kWildcard: return "?";
  }
  return "?";
}

std::string MatchRule::comparison() const {
  if (is_mopping_up()) return lhs.str() + " ?";
  return lhs.str() + " = " + rhs.str();
}

std::string MatchRule::str() const {
  return comparison() + " " + format_factor(t_factor) + " => " +
         (is_done() ? std::string("Done") : continuation) + " " + format_factor(d_factor) + ";";
}

RuleSet::RuleSet(std::vector<RuleGroup> groups) : groups_(std::move(groups)) {
  if (groups_.empty()) throw Error(ErrorCode::kRuleSetInvalid, "rule set has no groups");
  std::set<std::string> names;
  for (const auto& g : groups_) {
    if (g.rules.empty()) throw Error(ErrorCode::kRuleSetInvalid, "group '" + g.name + "' is empty");
    if (!names.insert(g.name).second) {
      throw Error(ErrorCode::kRuleSetInvalid, "duplicate group '" + g.name + "'");
    }
  }
  for (const auto& g : groups_) {
    for (const auto& r : g.rules) {
      if (!r.is_done() && !names.count(r.continuation)) {
        throw Error(ErrorCode::kRuleSetInvalid, "unknown continuation '" + r.continuation + "'");
      }
    }
  }
}

std::optional<std::size_t> RuleSet::find(std::string_view name) const {
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    if (groups_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t RuleSet::rule_count() const {
  std::size_t n = 0;
  for (const auto& g : groups_) n += g.rules.size();
  return n;
}

// ---------------------------------------------------------------------------
// Match-rule reader

namespace {

enum class Lex { kIdent, kNumber, kQuoted, kLBrace, kRBrace, kLBracket, kRBracket, kColon,
                 kEquals, kArrow, kQuestion, kSemicolon, kBang, kLess, kEnd };

struct Lexeme {
  Lex kind = Lex::kEnd;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Lexeme> run() {
    std::vector<Lexeme> out;
    while (true) {
      skip_blank();
      Lexeme lx;
      lx.line = line_;
      lx.column = column_;
      if (pos_ >= text_.size()) {
        out.push_back(lx);
        return out;
      }
      const char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t end = pos_;
        while (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) ||
                                      text_[end] == '_')) {
          ++end;
        }
        lx.kind = Lex::kIdent;
        lx.text = std::string(text_.substr(pos_, end - pos_));
        advance(end - pos_);
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-') {
        std::size_t end = pos_ + 1;
        while (end < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[end])) ||
                                      text_[end] == '.')) {
          ++end;
        }
        lx.kind = Lex::kNumber;
        lx.text = std::string(text_.substr(pos_, end - pos_));
        advance(end - pos_);
      } else if (c == '\'') {
        const auto close = text_.find('\'', pos_ + 1);
        const auto eol = text_.find('\n', pos_ + 1);
        if (close == std::string_view::npos || (eol != std::string_view::npos && eol < close)) {
          throw SyntaxError(ErrorCode::kSyntaxError, line_, column_, "unterminated quoted word");
        }
        lx.kind = Lex::kQuoted;
        lx.text = std::string(text_.substr(pos_ + 1, close - pos_ - 1));
        advance(close + 1 - pos_);
      } else if (c == '=' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
        lx.kind = Lex::kArrow;
        lx.text = "=>";
        advance(2);
      } else {
        switch (c) {
          case '{': lx.kind = Lex::kLBrace; break;
          case '}': lx.kind = Lex::kRBrace; break;
          case '[': lx.kind = Lex::kLBracket; break;
          case ']': lx.kind = Lex::kRBracket; break;
          case ':': lx.kind = Lex::kColon; break;
          case '=': lx.kind = Lex::kEquals; break;
          case '?': lx.kind = Lex::kQuestion; break;
          case ';': lx.kind = Lex::kSemicolon; break;
          case '!': lx.kind = Lex::kBang; break;
          case '<': lx.kind = Lex::kLess; break;
          default:
            throw SyntaxError(ErrorCode::kSyntaxError, line_, column_,
                              std::string("unexpected character '") + c + "'");
        }
        lx.text = std::string(1, c);
        advance(1);
      }
      out.push_back(std::move(lx));
    }
  }

 private:
  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (text_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
      ++pos_;
    }
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance(1);
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

class RuleParser {
 public:
  explicit RuleParser(std::string_view text) : lexemes_(Lexer(text).run()) {}

  RuleSet run() {
    std::vector<RuleGroup> groups;
    std::vector<std::pair<std::string, const Lexeme*>> continuations;
    std::set<std::string> names;
    while (peek().kind != Lex::kEnd) {
      const Lexeme& name = expect(Lex::kIdent, "group name");
      if (name.text == "Done") fail(name, "'Done' cannot name a group");
      if (!names.insert(name.text).second) fail(name, "duplicate group '" + name.text + "'");
      expect(Lex::kLBrace, "'{'");
      RuleGroup group{name.text, {}};
      while (peek().kind != Lex::kRBrace) {
        if (peek().kind == Lex::kEnd) fail(peek(), "missing '}' for group '" + name.text + "'");
        const Lexeme* cont = nullptr;
        group.rules.push_back(rule(cont));
        if (cont) continuations.emplace_back(cont->text, cont);
      }
      expect(Lex::kRBrace, "'}'");
      if (group.rules.empty()) fail(name, "group '" + name.text + "' has no rules");
      groups.push_back(std::move(group));
    }
    if (groups.empty()) fail(peek(), "no rule groups");
    for (const auto& [target, where] : continuations) {
      if (!names.count(target)) {
        throw SyntaxError(ErrorCode::kUnknownContinuation, where->line, where->column,
                          "unknown continuation '" + target + "'");
      }
    }
    return RuleSet(std::move(groups));
  }

 private:
  const Lexeme& peek(std::size_t ahead = 0) const {
    return lexemes_[std::min(pos_ + ahead, lexemes_.size() - 1)];
  }
  const Lexeme& next() {
    const Lexeme& lx = peek();
    if (pos_ < lexemes_.size() - 1) ++pos_;
    return lx;
  }

  [[noreturn]] void fail(const Lexeme& at, const std::string& message,
                         ErrorCode code = ErrorCode::kSyntaxError) const {
    throw SyntaxError(code, at.line, at.column, message);
  }

  const Lexeme& expect(Lex kind, const std::string& what) {
    const Lexeme& lx = peek();
    if (lx.kind == Lex::kBang || lx.kind == Lex::kLess) unsupported(lx);
    if (lx.kind != kind) {
      fail(lx, "expected " + what + ", found " +
                   (lx.kind == Lex::kEnd ? std::string("end of input") : "'" + lx.text + "'"));
    }
    return next();
  }

  [[noreturn]] void unsupported(const Lexeme& at) const {
    fail(at,
         at.kind == Lex::kBang ? "negated tests are not supported"
                               : "word-order sensitive rules are not supported",
         ErrorCode::kUnsupportedRuleVariant);
  }

  MatchRule rule(const Lexeme*& continuation) {
    MatchRule r;
    r.line = peek().line;
    const Lexeme& lhs_at = peek();
    r.lhs = side();
    if (peek().kind == Lex::kQuestion) {
      next();
      r.rhs = RuleSide::wildcard();
      if (r.lhs.kind == RuleSide::Kind::kToken) {
        fail(lhs_at, "a mopping-up rule needs a head or path on the left");
      }
    } else {
      expect(Lex::kEquals, "'=' or '?'");
      const Lexeme& rhs_at = peek();
      if (rhs_at.kind == Lex::kQuestion) fail(rhs_at, "'?' may only follow the left-hand side");
      r.rhs = side();
      if (r.lhs.kind == RuleSide::Kind::kToken && r.rhs.kind == RuleSide::Kind::kToken) {
        fail(rhs_at, "a token rule needs a head or path on one side");
      }
    }
    if (peek().kind == Lex::kLess) unsupported(peek());
    r.t_factor = factor();
    expect(Lex::kArrow, "'=>'");
    const Lexeme& cont = expect(Lex::kIdent, "continuation");
    if (cont.text != "Done") {
      r.continuation = cont.text;
      continuation = &cont;
    }
    r.d_factor = factor();
    expect(Lex::kSemicolon, "';'");
    return r;
  }

  RuleSide side() {
    const Lexeme& lx = peek();
    if (lx.kind == Lex::kBang) unsupported(lx);
    if (lx.kind == Lex::kQuoted) {
      next();
      if (lx.text.empty()) fail(lx, "empty quoted word");
      for (char c : lx.text) {
        if (std::isspace(static_cast<unsigned char>(c)) ||
            std::isupper(static_cast<unsigned char>(c))) {
          fail(lx, "quoted words must be single lowercase words");
        }
      }
      return RuleSide::of_token(lx.text);
    }
    if (lx.kind != Lex::kIdent) {
      if (lx.kind == Lex::kQuestion) fail(lx, "'?' may only appear on the right-hand side");
      fail(lx, "expected head, a path or a quoted word");
    }
    if (lx.text == "head" && peek(1).kind != Lex::kColon && peek(1).kind != Lex::kLBracket) {
      next();
      return RuleSide::head();
    }
    std::vector<Var> names;
    while (true) {
      const Lexeme& part = expect(Lex::kIdent, "variable name");
      const auto var = parse_var(part.text);
      if (!var) fail(part, "unknown variable '" + part.text + "'", ErrorCode::kUnknownVariable);
      names.push_back(*var);
      if (peek().kind != Lex::kColon) break;
      next();
    }
    expect(Lex::kLBracket, "'['");
    expect(Lex::kRBracket, "']'");
    if (peek().kind == Lex::kLess) unsupported(peek());
    return RuleSide::of_path(Path(std::move(names)));
  }

  double factor() {
    const Lexeme& lx = peek();
    if (lx.kind != Lex::kNumber) expect(Lex::kNumber, "a factor");
    next();
    double value = 0.0;
    const char* first = lx.text.data();
    const char* last = first + lx.text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) fail(lx, "malformed factor '" + lx.text + "'");
    if (value < 0.0 || value > 1.0) {
      fail(lx, "factor " + lx.text + " outside [0, 1]", ErrorCode::kFactorOutOfRange);
    }
    return value;
  }

  std::vector<Lexeme> lexemes_;
  std::size_t pos_ = 0;
};

}  // namespace

RuleSet parse_rules(std::string_view text) { return RuleParser(text).run(); }

std::string render_rules(const RuleSet& rules) {
  std::string out;
  for (const auto& g : rules.groups()) {
    if (!out.empty()) out += "\n";
    out += g.name + "\n{\n";
    for (const auto& r : g.rules) out += " " + r.str() + "\n";
    out += "}\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Context rules

namespace {

std::string render_pos_list(const std::vector<PartOfSpeech>& list) {
  if (list.empty()) return "*";
  std::string out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i != 0) out += "|";
    out += pos_name(list[i]);
  }
  return out;
}

std::vector<PartOfSpeech> pos_list(std::string_view field, std::size_t line) {
  std::vector<PartOfSpeech> out;
  if (field == "*") return out;
  std::size_t start = 0;
  while (start <= field.size()) {
    auto bar = field.find('|', start);
    if (bar == std::string_view::npos) bar = field.size();
    const auto name = field.substr(start, bar - start);
    const auto pos = parse_pos(name);
    if (!pos) {
      throw SyntaxError(ErrorCode::kSyntaxError, line, 0,
                        "unknown part of speech '" + std::string(name) + "'");
    }
    out.push_back(*pos);
    start = bar + 1;
  }
  return out;
}

}  // namespace

std::string ContextRule::str() const {
  std::string var = "*";
  if (matched_is_head) var = "head";
  if (matched_var) var = std::string(var_name(*matched_var));
  return render_pos_list(matched_pos) + " " + var + " " + path.str() + " " +
         render_pos_list(context_pos) + " " +
         (category ? std::string(category_name(*category)) : std::string("*"));
}

std::vector<ContextRule> parse_context_rules(std::string_view text) {
  std::vector<ContextRule> rules;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string line(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    for (std::string_view marker : {"#", "//"}) {
      const auto at = line.find(marker);
      if (at != std::string::npos) line.erase(at);
    }
    std::istringstream fields_in(line);
    std::vector<std::string> fields;
    for (std::string f; fields_in >> f;) fields.push_back(f);
    if (fields.empty()) continue;
    if (fields.size() != 5) {
      throw SyntaxError(ErrorCode::kBadFieldCount, line_no, 0,
                        "expected 5 fields <rt rv rp ru rC>, found " +
                            std::to_string(fields.size()));
    }
    ContextRule rule;
    rule.line = line_no;
    rule.matched_pos = pos_list(fields[0], line_no);
    if (fields[1] == "head") {
      rule.matched_is_head = true;
    } else if (fields[1] != "*") {
      rule.matched_var = parse_var(fields[1]);
      if (!rule.matched_var) {
        throw SyntaxError(ErrorCode::kUnknownVariable, line_no, 0,
                          "unknown variable '" + fields[1] + "'");
      }
    }
    if (fields[2] == "*") {
      throw SyntaxError(ErrorCode::kSyntaxError, line_no, 0, "the path field cannot be '*'");
    }
    try {
      rule.path = Path::parse(fields[2]);
    } catch (const SyntaxError&) {
      throw;
    } catch (const Error& e) {
      throw SyntaxError(e.code(), line_no, 0, e.what());
    }
    rule.context_pos = pos_list(fields[3], line_no);
    if (fields[4] != "*") {
      rule.category = parse_category(fields[4]);
      if (!rule.category) {
        throw SyntaxError(ErrorCode::kSyntaxError, line_no, 0,
                          "unknown phrase category '" + fields[4] + "'");
      }
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::string render_context_rules(const std::vector<ContextRule>& rules) {
  std::string out;
  for (const auto& r : rules) out += r.str() + "\n";
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace anvil
