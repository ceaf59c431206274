#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ua/error.hpp"

namespace ua {

inline std::size_t hash_combine(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

struct OpSym {
  std::string name;
  int arity = 0;

  bool operator==(const OpSym&) const = default;
};

inline bool valid_op_name(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

// A finite set of operation symbols with arities. Nullary symbols are
// constants. Signatures are immutable; operations are addressed by index.
class Signature {
public:
  Signature() = default;

  explicit Signature(std::vector<OpSym> ops) : ops_(std::move(ops)) {
    for (int i = 0; i < static_cast<int>(ops_.size()); ++i) {
      const OpSym& op = ops_[i];
      if (!valid_op_name(op.name))
        throw InvalidArgument("invalid operation name '" + op.name + "'");
      if (op.arity < 0)
        throw InvalidArgument("negative arity for operation '" + op.name + "'");
      if (!index_.emplace(op.name, i).second)
        throw InvalidArgument("duplicate operation name '" + op.name + "'");
    }
  }

  int op_count() const { return static_cast<int>(ops_.size()); }
  const OpSym& op(int i) const { return ops_.at(static_cast<std::size_t>(i)); }
  const std::string& name(int i) const { return op(i).name; }
  int arity(int i) const { return op(i).arity; }
  const std::vector<OpSym>& ops() const { return ops_; }

  std::optional<int> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  int require(std::string_view name) const {
    auto i = find(name);
    if (!i) throw InvalidArgument("unknown operation '" + std::string(name) + "'");
    return *i;
  }

  bool operator==(const Signature& other) const { return ops_ == other.ops_; }

private:
  std::vector<OpSym> ops_;
  std::unordered_map<std::string, int> index_;
};

using SignaturePtr = std::shared_ptr<const Signature>;

inline bool same_signature(const SignaturePtr& a, const SignaturePtr& b) {
  return a == b || (a && b && *a == *b);
}

// A term over positional variables $0, $1, ... and the operations of some
// signature. Terms are immutable trees with shared subtrees; every node
// caches a structural hash so that deduplication and equality are cheap.
class Term {
public:
  Term() : Term(var(0)) {}

  static Term var(int index) {
    if (index < 0) throw InvalidArgument("negative variable index");
    std::size_t h = hash_combine(0x517cc1b727220a95ULL, static_cast<std::size_t>(index));
    return Term(std::make_shared<const Node>(Node{true, index, {}, h}));
  }

  static Term app(int op, std::vector<Term> args) {
    if (op < 0) throw InvalidArgument("negative operation index");
    std::size_t h = hash_combine(0x2545f4914f6cdd1dULL, static_cast<std::size_t>(op));
    for (const Term& a : args) h = hash_combine(h, a.hash());
    return Term(std::make_shared<const Node>(Node{false, op, std::move(args), h}));
  }

  bool is_var() const { return node_->leaf; }
  int var_index() const {
    if (!is_var()) throw InvalidArgument("term is not a variable");
    return node_->head;
  }
  int op() const {
    if (is_var()) throw InvalidArgument("term is not an application");
    return node_->head;
  }
  std::span<const Term> args() const { return node_->args; }
  std::size_t hash() const { return node_->hash; }

  bool operator==(const Term& other) const {
    if (node_ == other.node_) return true;
    if (node_->hash != other.node_->hash) return false;
    if (node_->leaf != other.node_->leaf || node_->head != other.node_->head) return false;
    if (node_->args.size() != other.node_->args.size()) return false;
    for (std::size_t i = 0; i < node_->args.size(); ++i)
      if (!(node_->args[i] == other.node_->args[i])) return false;
    return true;
  }
  bool operator!=(const Term& other) const { return !(*this == other); }

  // Largest variable index plus one; 0 for closed terms.
  int min_width() const {
    if (is_var()) return var_index() + 1;
    int w = 0;
    for (const Term& a : args()) w = std::max(w, a.min_width());
    return w;
  }

  int node_count() const {
    int n = 1;
    for (const Term& a : args()) n += a.node_count();
    return n;
  }

private:
  struct Node {
    bool leaf;
    int head;
    std::vector<Term> args;
    std::size_t hash;
  };

  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

// Builds an application and checks the argument count against `sig`.
inline Term make_app(const Signature& sig, int op, std::vector<Term> args) {
  if (op < 0 || op >= sig.op_count()) throw InvalidArgument("operation index out of range");
  if (static_cast<int>(args.size()) != sig.arity(op))
    throw InvalidArgument("operation '" + sig.name(op) + "' expects " +
                          std::to_string(sig.arity(op)) + " arguments, got " +
                          std::to_string(args.size()));
  return Term::app(op, std::move(args));
}

// Checks that `t` is well formed over `sig` and (if width >= 0) that all
// variable indices lie below `width`.
inline void check_term(const Term& t, const Signature& sig, int width = -1) {
  if (t.is_var()) {
    if (width >= 0 && t.var_index() >= width)
      throw InvalidArgument("variable $" + std::to_string(t.var_index()) +
                            " exceeds declared width " + std::to_string(width));
    return;
  }
  if (t.op() >= sig.op_count())
    throw InvalidArgument("operation index out of range for signature");
  if (static_cast<int>(t.args().size()) != sig.arity(t.op()))
    throw InvalidArgument("arity mismatch for operation '" + sig.name(t.op()) + "'");
  for (const Term& a : t.args()) check_term(a, sig, width);
}

// An equation lhs = rhs quantified over `width` variables.
struct Identity {
  Term lhs;
  Term rhs;
  int width = 0;

  Identity(Term l, Term r, int w) : lhs(std::move(l)), rhs(std::move(r)), width(w) {
    if (lhs.min_width() > width || rhs.min_width() > width)
      throw InvalidArgument("identity uses variables beyond its declared width");
  }
};

namespace detail {

struct SexprToken {
  enum Kind { LParen, RParen, Var, Name, End } kind;
  std::string text;
  std::size_t offset;
};

class SexprLexer {
public:
  explicit SexprLexer(std::string_view text) : text_(text) {}

  SexprToken next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ >= text_.size()) return {SexprToken::End, "", pos_};
    std::size_t start = pos_;
    char c = text_[pos_];
    if (c == '(') { ++pos_; return {SexprToken::LParen, "(", start}; }
    if (c == ')') { ++pos_; return {SexprToken::RParen, ")", start}; }
    if (c == '$') {
      ++pos_;
      std::size_t digits = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ == digits) throw ParseError("expected digits after '$'", start);
      return {SexprToken::Var, std::string(text_.substr(digits, pos_ - digits)), start};
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      return {SexprToken::Name, std::string(text_.substr(start, pos_ - start)), start};
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start);
  }

private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

inline Term parse_sexpr(SexprLexer& lex, const SexprToken& tok, const Signature& sig) {
  switch (tok.kind) {
    case SexprToken::Var: {
      if (tok.text.size() > 9)
        throw ParseError("variable index too large", tok.offset);
      return Term::var(std::stoi(tok.text));
    }
    case SexprToken::Name: {
      auto op = sig.find(tok.text);
      if (!op) throw ParseError("unknown operation '" + tok.text + "'", tok.offset);
      if (sig.arity(*op) != 0)
        throw ParseError("operation '" + tok.text + "' of arity " +
                             std::to_string(sig.arity(*op)) + " used as a constant",
                         tok.offset);
      return Term::app(*op, {});
    }
    case SexprToken::LParen: {
      SexprToken head = lex.next();
      if (head.kind != SexprToken::Name)
        throw ParseError("expected operation name after '('", head.offset);
      auto op = sig.find(head.text);
      if (!op) throw ParseError("unknown operation '" + head.text + "'", head.offset);
      std::vector<Term> args;
      for (;;) {
        SexprToken t = lex.next();
        if (t.kind == SexprToken::RParen) break;
        if (t.kind == SexprToken::End)
          throw ParseError("unbalanced '(': missing ')'", t.offset);
        args.push_back(parse_sexpr(lex, t, sig));
      }
      if (static_cast<int>(args.size()) != sig.arity(*op))
        throw ParseError("operation '" + head.text + "' expects " +
                             std::to_string(sig.arity(*op)) + " arguments, got " +
                             std::to_string(args.size()),
                         head.offset);
      return Term::app(*op, std::move(args));
    }
    default:
      throw ParseError("expected a term", tok.offset);
  }
}

}  // namespace detail

// Parses an s-expression term: variables are `$0`, `$1`, ..., applications
// are `(opname arg...)`, constants may be written `opname` or `(opname)`.
inline Term parse_term(std::string_view text, const Signature& sig) {
  detail::SexprLexer lex(text);
  detail::SexprToken first = lex.next();
  if (first.kind == detail::SexprToken::End) throw ParseError("empty input", first.offset);
  Term t = detail::parse_sexpr(lex, first, sig);
  detail::SexprToken rest = lex.next();
  if (rest.kind != detail::SexprToken::End)
    throw ParseError("trailing input after term", rest.offset);
  return t;
}

inline void render_term(const Term& t, const Signature& sig, std::string& out) {
  if (t.is_var()) {
    out += '$';
    out += std::to_string(t.var_index());
    return;
  }
  if (t.args().empty()) {
    out += sig.name(t.op());
    return;
  }
  out += '(';
  out += sig.name(t.op());
  for (const Term& a : t.args()) {
    out += ' ';
    render_term(a, sig, out);
  }
  out += ')';
}

inline std::string render_term(const Term& t, const Signature& sig) {
  std::string out;
  render_term(t, sig, out);
  return out;
}

// Simultaneous substitution: variable $i is replaced by args[i].
inline Term substitute(const Term& t, std::span<const Term> args) {
  if (t.is_var()) {
    if (t.var_index() >= static_cast<int>(args.size()))
      throw InvalidArgument("substitution index $" + std::to_string(t.var_index()) +
                            " out of range (" + std::to_string(args.size()) + " arguments)");
    return args[static_cast<std::size_t>(t.var_index())];
  }
  std::vector<Term> sub;
  sub.reserve(t.args().size());
  for (const Term& a : t.args()) sub.push_back(substitute(a, args));
  return Term::app(t.op(), std::move(sub));
}

inline Term substitute(const Term& t, std::initializer_list<Term> args) {
  return substitute(t, std::span<const Term>(args.begin(), args.size()));
}

}  // namespace ua
