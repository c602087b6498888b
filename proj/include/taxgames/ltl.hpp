#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace taxgames {

/// Set of propositional variables, one bit per vocabulary index.
using LabelSet = std::uint64_t;

inline constexpr std::size_t kMaxVariables = 64;

/// Ordered set of variable names; index i corresponds to bit i of a LabelSet.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> names);

  std::optional<int> index_of(std::string_view name) const;
  const std::string& name(int index) const { return names_.at(static_cast<std::size_t>(index)); }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  LabelSet all() const;

  /// Space-separated names of the set bits, in vocabulary order.
  std::string format(LabelSet labels) const;

  bool operator==(const Vocabulary&) const = default;

 private:
  std::vector<std::string> names_;
};

namespace ltl {

enum class Op { True, Var, Not, Or, Next, Until };

/// Immutable LTL formula over the core constructors. Derived operators are
/// expanded when built, so every Formula is already desugared.
class Formula {
 public:
  static Formula top();
  static Formula var(int index, std::string name);
  static Formula negate(Formula f);
  static Formula disjoin(Formula lhs, Formula rhs);
  static Formula next(Formula f);
  static Formula until(Formula lhs, Formula rhs);

  Op op() const { return node_->op; }
  int var_index() const { return node_->var; }
  const std::string& var_name() const { return node_->name; }
  const Formula& child() const { return node_->children[0]; }
  const Formula& lhs() const { return node_->children[0]; }
  const Formula& rhs() const { return node_->children[1]; }

  /// Number of AST nodes, counting shared subtrees once per occurrence.
  std::size_t size() const;

  /// Identity of the underlying node; shared subtrees compare equal.
  const void* id() const { return node_.get(); }

  /// Re-parseable rendering over the core operators only.
  std::string to_string() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node {
    Op op;
    int var = -1;
    std::string name;
    std::vector<Formula> children;
  };
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Formula bottom();
Formula conjoin(Formula lhs, Formula rhs);
Formula implies(Formula lhs, Formula rhs);
Formula iff(Formula lhs, Formula rhs);
Formula eventually(Formula f);
Formula always(Formula f);

/// Syntax error carrying the 1-based column of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t column)
      : std::runtime_error(message), column_(column) {}
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

/// A variable not present in the vocabulary.
class UnknownVariable : public ParseError {
 public:
  UnknownVariable(const std::string& variable, std::size_t column)
      : ParseError("unknown variable '" + variable + "' at column " + std::to_string(column), column),
        variable_(variable) {}
  const std::string& variable() const { return variable_; }

 private:
  std::string variable_;
};

/// Grammar (loosest binding first):
///   iff   := imp ("<->" imp)*
///   imp   := or ("->" imp)?
///   or    := and (("|" | "||") and)*
///   and   := until (("&" | "&&") until)*
///   until := unary ("U" until)?
///   unary := ("!" | "X" | "F" | "G" | "<>" | "[]") unary | atom
///   atom  := "true" | "false" | variable | "(" iff ")"
Formula parse(std::string_view text, const Vocabulary& vocabulary);

/// Ultimately periodic word prefix . cycle^omega over label sets.
struct LassoWord {
  std::vector<LabelSet> prefix;
  std::vector<LabelSet> cycle;

  std::size_t length() const { return prefix.size() + cycle.size(); }
  /// Successor position in the folded representation.
  std::size_t successor(std::size_t position) const {
    return position + 1 < length() ? position + 1 : prefix.size();
  }
  LabelSet at(std::size_t position) const {
    return position < prefix.size() ? prefix[position] : cycle[position - prefix.size()];
  }
};

/// Exact satisfaction of f at position 0 of the word. Until is resolved as a
/// least fixpoint over the folded positions.
bool eval_on_lasso(const Formula& f, const LassoWord& word);

/// Truth value of f at every folded position of the word.
std::vector<bool> eval_positions(const Formula& f, const LassoWord& word);

/// Vocabulary indices of the variables occurring in f, ascending.
std::vector<int> variables(const Formula& f);

}  // namespace ltl
}  // namespace taxgames
