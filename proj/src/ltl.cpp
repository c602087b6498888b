#include "taxgames/ltl.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <unordered_map>

namespace taxgames {

Vocabulary::Vocabulary(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() > kMaxVariables) {
    throw std::invalid_argument("vocabulary exceeds " + std::to_string(kMaxVariables) + " variables");
  }
  for (std::size_t i = 0; i < names_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (names_[i] == names_[j]) throw std::invalid_argument("duplicate variable '" + names_[i] + "'");
    }
  }
}

std::optional<int> Vocabulary::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

LabelSet Vocabulary::all() const {
  return names_.size() == 64 ? ~LabelSet{0} : (LabelSet{1} << names_.size()) - 1;
}

std::string Vocabulary::format(LabelSet labels) const {
  std::string out;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (labels & (LabelSet{1} << i)) {
      if (!out.empty()) out += ' ';
      out += names_[i];
    }
  }
  return out;
}

namespace ltl {

Formula Formula::top() {
  static const Formula t(std::make_shared<const Node>(Node{Op::True, -1, {}, {}}));
  return t;
}

Formula Formula::var(int index, std::string name) {
  if (index < 0 || static_cast<std::size_t>(index) >= kMaxVariables) {
    throw std::invalid_argument("variable index out of range");
  }
  return Formula(std::make_shared<const Node>(Node{Op::Var, index, std::move(name), {}}));
}

Formula Formula::negate(Formula f) {
  return Formula(std::make_shared<const Node>(Node{Op::Not, -1, {}, {std::move(f)}}));
}

Formula Formula::disjoin(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{Op::Or, -1, {}, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::next(Formula f) {
  return Formula(std::make_shared<const Node>(Node{Op::Next, -1, {}, {std::move(f)}}));
}

Formula Formula::until(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{Op::Until, -1, {}, {std::move(lhs), std::move(rhs)}}));
}

std::size_t Formula::size() const {
  std::size_t n = 1;
  for (const auto& c : node_->children) n += c.size();
  return n;
}

std::string Formula::to_string() const {
  switch (op()) {
    case Op::True: return "true";
    case Op::Var: return var_name();
    case Op::Not: return "!" + child().to_string();
    case Op::Or: return "(" + lhs().to_string() + " | " + rhs().to_string() + ")";
    case Op::Next: return "X " + child().to_string();
    case Op::Until: return "(" + lhs().to_string() + " U " + rhs().to_string() + ")";
  }
  return {};
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  if (a.op() == Op::Var) return a.var_index() == b.var_index();
  const auto& ca = a.node_->children;
  const auto& cb = b.node_->children;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (!(ca[i] == cb[i])) return false;
  }
  return true;
}

Formula bottom() { return Formula::negate(Formula::top()); }

Formula conjoin(Formula lhs, Formula rhs) {
  return Formula::negate(Formula::disjoin(Formula::negate(std::move(lhs)), Formula::negate(std::move(rhs))));
}

Formula implies(Formula lhs, Formula rhs) {
  return Formula::disjoin(Formula::negate(std::move(lhs)), std::move(rhs));
}

Formula iff(Formula lhs, Formula rhs) { return conjoin(implies(lhs, rhs), implies(rhs, lhs)); }

Formula eventually(Formula f) { return Formula::until(Formula::top(), std::move(f)); }

Formula always(Formula f) { return Formula::negate(eventually(Formula::negate(std::move(f)))); }

namespace {

enum class Tok { Ident, LParen, RParen, Not, And, Or, Implies, Iff, Diamond, Box, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto starts = [&](std::string_view lit) { return s.substr(i, lit.size()) == lit; };
  while (i < s.size()) {
    char c = s[i];
    std::size_t col = i + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), col});
      i = j;
    } else if (starts("<->")) {
      out.push_back({Tok::Iff, "<->", col});
      i += 3;
    } else if (starts("->")) {
      out.push_back({Tok::Implies, "->", col});
      i += 2;
    } else if (starts("<>")) {
      out.push_back({Tok::Diamond, "<>", col});
      i += 2;
    } else if (starts("[]")) {
      out.push_back({Tok::Box, "[]", col});
      i += 2;
    } else if (starts("&&") || starts("||")) {
      out.push_back({c == '&' ? Tok::And : Tok::Or, std::string(s.substr(i, 2)), col});
      i += 2;
    } else if (c == '&' || c == '|' || c == '!' || c == '(' || c == ')') {
      Tok k = c == '&' ? Tok::And : c == '|' ? Tok::Or : c == '!' ? Tok::Not : c == '(' ? Tok::LParen : Tok::RParen;
      out.push_back({k, std::string(1, c), col});
      ++i;
    } else {
      throw ParseError("unexpected character '" + std::string(1, c) + "' at column " + std::to_string(col), col);
    }
  }
  out.push_back({Tok::End, "", s.size() + 1});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const Vocabulary& vocabulary)
      : tokens_(std::move(tokens)), vocabulary_(vocabulary) {}

  Formula parse_all() {
    Formula f = parse_iff();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool is_keyword(const char* word) const { return peek().kind == Tok::Ident && peek().text == word; }
  Token take() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    throw ParseError(what + " at column " + std::to_string(t.column), t.column);
  }

  Formula parse_iff() {
    Formula f = parse_implies();
    while (peek().kind == Tok::Iff) {
      take();
      f = iff(f, parse_implies());
    }
    return f;
  }

  Formula parse_implies() {
    Formula f = parse_or();
    if (peek().kind == Tok::Implies) {
      take();
      return implies(f, parse_implies());
    }
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (peek().kind == Tok::Or) {
      take();
      f = Formula::disjoin(f, parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_until();
    while (peek().kind == Tok::And) {
      take();
      f = conjoin(f, parse_until());
    }
    return f;
  }

  Formula parse_until() {
    Formula f = parse_unary();
    if (is_keyword("U")) {
      take();
      return Formula::until(f, parse_until());
    }
    return f;
  }

  Formula parse_unary() {
    if (peek().kind == Tok::Not) {
      take();
      return Formula::negate(parse_unary());
    }
    if (peek().kind == Tok::Diamond || is_keyword("F")) {
      take();
      return eventually(parse_unary());
    }
    if (peek().kind == Tok::Box || is_keyword("G")) {
      take();
      return always(parse_unary());
    }
    if (is_keyword("X")) {
      take();
      return Formula::next(parse_unary());
    }
    return parse_atom();
  }

  Formula parse_atom() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      take();
      Formula f = parse_iff();
      if (peek().kind != Tok::RParen) fail("expected ')'");
      take();
      return f;
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "true") {
        take();
        return Formula::top();
      }
      if (t.text == "false") {
        take();
        return bottom();
      }
      if (t.text == "U" || t.text == "X" || t.text == "F" || t.text == "G") fail("operator '" + t.text + "' needs an operand");
      auto index = vocabulary_.index_of(t.text);
      if (!index) throw UnknownVariable(t.text, t.column);
      take();
      return Formula::var(*index, t.text);
    }
    if (t.kind == Tok::End) fail("unexpected end of formula");
    fail("unexpected '" + t.text + "'");
  }

  std::vector<Token> tokens_;
  const Vocabulary& vocabulary_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse(std::string_view text, const Vocabulary& vocabulary) {
  return Parser(tokenize(text), vocabulary).parse_all();
}

std::vector<bool> eval_positions(const Formula& f, const LassoWord& word) {
  if (word.cycle.empty()) throw std::invalid_argument("lasso word needs a non-empty cycle");
  const std::size_t n = word.length();
  const std::size_t loop = word.prefix.size();
  std::unordered_map<const void*, std::vector<bool>> memo;

  std::function<const std::vector<bool>&(const Formula&)> eval = [&](const Formula& g) -> const std::vector<bool>& {
    if (auto it = memo.find(g.id()); it != memo.end()) return it->second;
    std::vector<bool> v(n, false);
    switch (g.op()) {
      case Op::True:
        v.assign(n, true);
        break;
      case Op::Var: {
        const LabelSet bit = LabelSet{1} << g.var_index();
        for (std::size_t i = 0; i < n; ++i) v[i] = (word.at(i) & bit) != 0;
        break;
      }
      case Op::Not: {
        const auto& a = eval(g.child());
        for (std::size_t i = 0; i < n; ++i) v[i] = !a[i];
        break;
      }
      case Op::Or: {
        const auto& a = eval(g.lhs());
        const auto& b = eval(g.rhs());
        for (std::size_t i = 0; i < n; ++i) v[i] = a[i] || b[i];
        break;
      }
      case Op::Next: {
        const auto& a = eval(g.child());
        for (std::size_t i = 0; i < n; ++i) v[i] = a[word.successor(i)];
        break;
      }
      case Op::Until: {
        const auto& a = eval(g.lhs());
        const auto& b = eval(g.rhs());
        // Least fixpoint on the cycle: a cycle position satisfies the until iff
        // walking forward hits b before a position violating a.
        for (std::size_t i = loop; i < n; ++i) v[i] = b[i];
        bool changed = true;
        while (changed) {
          changed = false;
          for (std::size_t k = n; k-- > loop;) {
            if (!v[k] && a[k] && v[word.successor(k)]) {
              v[k] = true;
              changed = true;
            }
          }
        }
        for (std::size_t k = loop; k-- > 0;) v[k] = b[k] || (a[k] && v[k + 1]);
        break;
      }
    }
    return memo.emplace(g.id(), std::move(v)).first->second;
  };
  return eval(f);
}

bool eval_on_lasso(const Formula& f, const LassoWord& word) { return eval_positions(f, word)[0]; }

std::vector<int> variables(const Formula& f) {
  std::vector<int> out;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.op() == Op::Var) {
      out.push_back(g.var_index());
      return;
    }
    if (g.op() == Op::True) return;
    walk(g.lhs());
    if (g.op() == Op::Or || g.op() == Op::Until) walk(g.rhs());
  };
  walk(f);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace ltl
}  // namespace taxgames
