#include "ratelab/counterfunction.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <vector>

#include "ratelab/errors.hpp"

namespace ratelab {

struct Counterfunction::Node {
  enum class Kind { constant, affine, power, max } kind;
  Nat a = 0;
  Nat c = 0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Counterfunction::Node;

Nat sat_pow(Nat base, Nat exp) {
  Nat out = 1;
  for (Nat i = 0; i < exp; ++i) {
    out = sat_mul(out, base);
    if (saturated(out) || out == 0) break;
  }
  return out;
}

Nat eval(const Node& n, Nat x) {
  switch (n.kind) {
    case Node::Kind::constant:
      return n.c;
    case Node::Kind::affine:
      return sat_add(sat_mul(n.a, x), n.c);
    case Node::Kind::power:
      return sat_add(sat_pow(x, n.a), n.c);
    case Node::Kind::max:
      return std::max(eval(*n.lhs, x), eval(*n.rhs, x));
  }
  return 0;
}

std::string show(const Node& n) {
  switch (n.kind) {
    case Node::Kind::constant:
      return "const " + std::to_string(n.c);
    case Node::Kind::affine:
      return "affine " + std::to_string(n.a) + " " + std::to_string(n.c);
    case Node::Kind::power:
      return "pow " + std::to_string(n.a) + " " + std::to_string(n.c);
    case Node::Kind::max:
      return "max " + show(*n.lhs) + " " + show(*n.rhs);
  }
  return {};
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {
    std::istringstream in{std::string(text)};
    for (std::string tok; in >> tok;) tokens_.push_back(tok);
  }

  std::shared_ptr<const Node> parse() {
    auto root = expr();
    if (pos_ != tokens_.size()) fail("trailing tokens");
    return root;
  }

 private:
  std::shared_ptr<const Node> expr() {
    const std::string head = next("a counterfunction keyword");
    auto node = std::make_shared<Node>();
    if (head == "const") {
      node->kind = Node::Kind::constant;
      node->c = number();
    } else if (head == "affine") {
      node->kind = Node::Kind::affine;
      node->a = number();
      node->c = number();
    } else if (head == "pow") {
      node->kind = Node::Kind::power;
      node->a = number();
      node->c = number();
    } else if (head == "max") {
      node->kind = Node::Kind::max;
      node->lhs = expr();
      node->rhs = expr();
    } else {
      fail("unknown keyword '" + head + "'");
    }
    return node;
  }

  Nat number() {
    const std::string tok = next("a nonnegative integer");
    Nat v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
      fail("expected a nonnegative integer, got '" + tok + "'");
    }
    return v;
  }

  std::string next(const std::string& what) {
    if (pos_ >= tokens_.size()) fail("expected " + what);
    return tokens_[pos_++];
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("counterfunction '" + std::string(text_) + "': " + msg);
  }

  std::string_view text_;
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Counterfunction Counterfunction::parse(std::string_view text) {
  return Counterfunction(Parser(text).parse());
}

Counterfunction Counterfunction::constant(Nat k) {
  return Counterfunction(std::make_shared<Node>(Node{Node::Kind::constant, 0, k, {}, {}}));
}

Counterfunction Counterfunction::affine(Nat a, Nat c) {
  return Counterfunction(std::make_shared<Node>(Node{Node::Kind::affine, a, c, {}, {}}));
}

Counterfunction Counterfunction::power(Nat p, Nat c) {
  return Counterfunction(std::make_shared<Node>(Node{Node::Kind::power, p, c, {}, {}}));
}

Counterfunction Counterfunction::max(Counterfunction a, Counterfunction b) {
  return Counterfunction(
      std::make_shared<Node>(Node{Node::Kind::max, 0, 0, std::move(a.root_), std::move(b.root_)}));
}

Nat Counterfunction::operator()(Nat n) const { return eval(*root_, n); }

std::string Counterfunction::str() const { return show(*root_); }

NatFn Counterfunction::fn() const {
  return [root = root_](Nat n) { return eval(*root, n); };
}

}  // namespace ratelab
