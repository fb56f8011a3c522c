#include "ulab/expr.hpp"

#include "ulab/errors.hpp"

#include <nlohmann/json.hpp>

#include <cctype>

namespace ulab {

struct Expr::Node {
  Kind kind;
  std::vector<Expr> kids;
  std::vector<std::int64_t> h;
  Rational q;
  std::optional<std::size_t> rank;
};

namespace {

std::optional<std::size_t> merge_rank(std::optional<std::size_t> x, std::optional<std::size_t> y) {
  if (!x) return y;
  if (!y) return x;
  if (*x != *y)
    throw ConfigError("shift arity mismatch: " + std::to_string(*x) + " vs " + std::to_string(*y));
  return x;
}

}  // namespace

Expr Expr::constant() { return Expr(std::make_shared<const Node>(Node{Kind::Const, {}, {}, {}, {}})); }
Expr Expr::one() { return Expr(std::make_shared<const Node>(Node{Kind::One, {}, {}, {}, {}})); }

Expr Expr::sum(Expr left, Expr right) {
  auto r = merge_rank(left.ambient_rank(), right.ambient_rank());
  return Expr(std::make_shared<const Node>(Node{Kind::Sum, {left, right}, {}, {}, r}));
}

Expr Expr::product(Expr left, Expr right) {
  auto r = merge_rank(left.ambient_rank(), right.ambient_rank());
  return Expr(std::make_shared<const Node>(Node{Kind::Product, {left, right}, {}, {}, r}));
}

Expr Expr::shift(std::vector<std::int64_t> h, Expr body) {
  auto r = merge_rank(h.size(), body.ambient_rank());
  return Expr(std::make_shared<const Node>(Node{Kind::Shift, {body}, std::move(h), {}, r}));
}

Expr Expr::scale(Rational q, Expr body) {
  auto r = body.ambient_rank();
  return Expr(std::make_shared<const Node>(Node{Kind::Scale, {body}, {}, std::move(q), r}));
}

Expr::Kind Expr::kind() const noexcept { return node_->kind; }

const Expr& Expr::left() const {
  if (kind() != Kind::Sum && kind() != Kind::Product) throw ConfigError("expression has no left operand");
  return node_->kids[0];
}

const Expr& Expr::right() const {
  if (kind() != Kind::Sum && kind() != Kind::Product) throw ConfigError("expression has no right operand");
  return node_->kids[1];
}

const Expr& Expr::body() const {
  if (kind() != Kind::Shift && kind() != Kind::Scale) throw ConfigError("expression has no body");
  return node_->kids[0];
}

const std::vector<std::int64_t>& Expr::shift_element() const {
  if (kind() != Kind::Shift) throw ConfigError("expression is not a shift");
  return node_->h;
}

const Rational& Expr::scalar() const {
  if (kind() != Kind::Scale) throw ConfigError("expression is not a scaling");
  return node_->q;
}

std::optional<std::size_t> Expr::ambient_rank() const noexcept { return node_->rank; }

std::size_t Expr::node_count() const {
  switch (kind()) {
    case Kind::Const:
    case Kind::One: return 1;
    case Kind::Sum:
    case Kind::Product: return 1 + left().node_count() + right().node_count();
    case Kind::Shift:
    case Kind::Scale: return 1 + body().node_count();
  }
  return 1;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expr::Kind::Const:
    case Expr::Kind::One: return true;
    case Expr::Kind::Sum:
    case Expr::Kind::Product: return a.left() == b.left() && a.right() == b.right();
    case Expr::Kind::Shift: return a.shift_element() == b.shift_element() && a.body() == b.body();
    case Expr::Kind::Scale: return a.scalar() == b.scalar() && a.body() == b.body();
  }
  return false;
}

namespace {

class Parser {
 public:
  Parser(const std::string& text, std::optional<std::size_t> rank) : s_(text), rank_(rank) {}

  Expr parse_all() {
    Expr e = parse();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string integer_text() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ < s_.size() && s_[pos_] == '-') ++pos_;
    const std::size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == digits) {
      pos_ = start;
      fail("expected integer");
    }
    return s_.substr(start, pos_ - start);
  }

  Expr parse() {
    const char c = peek();
    if (c == 'c') {
      ++pos_;
      return Expr::constant();
    }
    if (c == '(') {
      const std::size_t at = pos_;
      ++pos_;
      Expr lhs = parse();
      const char op = peek();
      if (op != '+' && op != '*') fail("expected '+' or '*'");
      ++pos_;
      Expr rhs = parse();
      expect(')');
      try {
        return op == '+' ? Expr::sum(lhs, rhs) : Expr::product(lhs, rhs);
      } catch (const ConfigError& e) {
        throw ParseError(e.what(), at);
      }
    }
    if (c == 'T') {
      const std::size_t at = pos_;
      ++pos_;
      expect('[');
      std::vector<std::int64_t> h;
      for (;;) {
        const std::string t = integer_text();
        try {
          h.push_back(std::stoll(t));
        } catch (const std::exception&) {
          fail("shift coordinate out of range");
        }
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        expect(']');
        break;
      }
      if (rank_ && h.size() != *rank_)
        throw ParseError("shift arity " + std::to_string(h.size()) + " does not match ambient rank " +
                             std::to_string(*rank_),
                         at);
      Expr body = parse();
      try {
        return Expr::shift(std::move(h), body);
      } catch (const ConfigError& e) {
        throw ParseError(e.what(), at);
      }
    }
    if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t at = pos_;
      const std::string num = integer_text();
      if (peek() != '/') {
        if (num == "1") return Expr::one();
        pos_ = at;
        fail("expected '/' in rational scalar");
      }
      ++pos_;
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '-') fail("denominator must be positive");
      const std::string den = integer_text();
      Rational q;
      try {
        q = parse_rational(num + "/" + den);
      } catch (const ConfigError& e) {
        throw ParseError(e.what(), at);
      }
      return Expr::scale(std::move(q), parse());
    }
    if (c == '\0') fail("unexpected end of input");
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& s_;
  std::optional<std::size_t> rank_;
  std::size_t pos_ = 0;
};

void format_into(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case Expr::Kind::Const: out += 'c'; return;
    case Expr::Kind::One: out += '1'; return;
    case Expr::Kind::Sum:
    case Expr::Kind::Product:
      out += '(';
      format_into(e.left(), out);
      out += e.kind() == Expr::Kind::Sum ? " + " : " * ";
      format_into(e.right(), out);
      out += ')';
      return;
    case Expr::Kind::Shift: {
      out += "T[";
      const auto& h = e.shift_element();
      for (std::size_t i = 0; i < h.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(h[i]);
      }
      out += "] ";
      format_into(e.body(), out);
      return;
    }
    case Expr::Kind::Scale:
      out += format_rational(e.scalar());
      out += ' ';
      format_into(e.body(), out);
      return;
  }
}

nlohmann::ordered_json to_json_value(const Expr& e) {
  nlohmann::ordered_json j;
  switch (e.kind()) {
    case Expr::Kind::Const: j["op"] = "const"; break;
    case Expr::Kind::One: j["op"] = "one"; break;
    case Expr::Kind::Sum:
    case Expr::Kind::Product:
      j["op"] = e.kind() == Expr::Kind::Sum ? "sum" : "product";
      j["left"] = to_json_value(e.left());
      j["right"] = to_json_value(e.right());
      break;
    case Expr::Kind::Shift:
      j["op"] = "shift";
      j["h"] = e.shift_element();
      j["body"] = to_json_value(e.body());
      break;
    case Expr::Kind::Scale:
      j["op"] = "scale";
      j["q"] = format_rational(e.scalar());
      j["body"] = to_json_value(e.body());
      break;
  }
  return j;
}

Expr from_json_value(const nlohmann::json& j) {
  const auto op = j.at("op").get<std::string>();
  if (op == "const") return Expr::constant();
  if (op == "one") return Expr::one();
  if (op == "sum") return Expr::sum(from_json_value(j.at("left")), from_json_value(j.at("right")));
  if (op == "product") return Expr::product(from_json_value(j.at("left")), from_json_value(j.at("right")));
  if (op == "shift") return Expr::shift(j.at("h").get<std::vector<std::int64_t>>(), from_json_value(j.at("body")));
  if (op == "scale") return Expr::scale(parse_rational(j.at("q").get<std::string>()), from_json_value(j.at("body")));
  throw ConfigError("unknown expression op '" + op + "'");
}

template <class T>
BasicTable<T> evaluate_node(const Expr& e, const BasicTable<T>& f, const QuotientMap& q) {
  switch (e.kind()) {
    case Expr::Kind::Const: return f;
    case Expr::Kind::One:
      return BasicTable<T>(typename BasicTable<T>::Unchecked{}, f.group(), std::vector<T>(f.size(), T(1)), T(1));
    case Expr::Kind::Sum: return pointwise_sum(evaluate_node(e.left(), f, q), evaluate_node(e.right(), f, q));
    case Expr::Kind::Product:
      return pointwise_product(evaluate_node(e.left(), f, q), evaluate_node(e.right(), f, q));
    case Expr::Kind::Shift: return shift(evaluate_node(e.body(), f, q), quotient_apply(q, e.shift_element()));
    case Expr::Kind::Scale: return pointwise_scale(evaluate_node(e.body(), f, q), e.scalar());
  }
  throw ConsistencyError("unreachable expression kind");
}

}  // namespace

Expr parse_expr(const std::string& text, std::optional<std::size_t> ambient_rank) {
  return Parser(text, ambient_rank).parse_all();
}

std::string format_expr(const Expr& e) {
  std::string out;
  format_into(e, out);
  return out;
}

std::string expr_to_json(const Expr& e) { return to_json_value(e).dump(); }

Expr expr_from_json(const std::string& text) {
  try {
    return from_json_value(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed expression JSON: ") + e.what());
  }
}

Rational sup_bound(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Const:
    case Expr::Kind::One: return Rational(1);
    case Expr::Kind::Sum: return sup_bound(e.left()) + sup_bound(e.right());
    case Expr::Kind::Product: return sup_bound(e.left()) * sup_bound(e.right());
    case Expr::Kind::Shift: return sup_bound(e.body());
    case Expr::Kind::Scale: return abs(e.scalar()) * sup_bound(e.body());
  }
  return Rational(1);
}

template <class T>
BasicTable<T> evaluate(const Expr& e, const BasicTable<T>& f, const QuotientMap& q) {
  if (f.bound() > T(1)) throw ConfigError("expression evaluation needs a function bounded by 1");
  if (!(f.group() == q.target()))
    throw ConfigError("function group " + f.group().literal() + " is not the quotient target " +
                      q.target().literal());
  if (auto r = e.ambient_rank(); r && *r != q.source().rank())
    throw ConfigError("expression shifts have arity " + std::to_string(*r) + ", ambient group " +
                      q.source().literal() + " has rank " + std::to_string(q.source().rank()));
  return evaluate_node(e, f, q);
}

template BasicTable<double> evaluate(const Expr&, const BasicTable<double>&, const QuotientMap&);
template BasicTable<Rational> evaluate(const Expr&, const BasicTable<Rational>&, const QuotientMap&);

Expr random_expr(CounterRng& rng, int max_depth, std::size_t ambient_rank, std::int64_t shift_range) {
  if (max_depth <= 0 || rng.below(4) == 0) return rng.below(3) == 0 ? Expr::one() : Expr::constant();
  switch (rng.below(4)) {
    case 0: {
      Expr l = random_expr(rng, max_depth - 1, ambient_rank, shift_range);
      return Expr::sum(l, random_expr(rng, max_depth - 1, ambient_rank, shift_range));
    }
    case 1: {
      Expr l = random_expr(rng, max_depth - 1, ambient_rank, shift_range);
      return Expr::product(l, random_expr(rng, max_depth - 1, ambient_rank, shift_range));
    }
    case 2: {
      std::vector<std::int64_t> h(ambient_rank);
      for (auto& x : h) x = static_cast<std::int64_t>(rng.below(2 * shift_range + 1)) - shift_range;
      return Expr::shift(std::move(h), random_expr(rng, max_depth - 1, ambient_rank, shift_range));
    }
    default: {
      const auto p = static_cast<long long>(rng.below(7)) - 3;
      const auto d = static_cast<long long>(rng.below(4)) + 1;
      return Expr::scale(Rational(p, d), random_expr(rng, max_depth - 1, ambient_rank, shift_range));
    }
  }
}

}  // namespace ulab
