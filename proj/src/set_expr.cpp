#include <cctype>
#include <charconv>

#include "momtail/errors.hpp"
#include "momtail/filters.hpp"

namespace momtail {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  StructuredSet parse() {
    StructuredSet out = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw InputError("set expression, offset " + std::to_string(pos_) + ": " + why);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(std::string_view tok) {
    skip();
    if (s_.substr(pos_, tok.size()) != tok) return false;
    // Keywords must not run into an identifier.
    if (std::isalpha(static_cast<unsigned char>(tok.front())) && pos_ + tok.size() < s_.size() &&
        std::isalnum(static_cast<unsigned char>(s_[pos_ + tok.size()])))
      return false;
    pos_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }

  std::uint64_t integer() {
    skip();
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc()) fail("expected a nonnegative integer");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return v;
  }

  StructuredSet expr() {
    StructuredSet acc = term();
    for (;;) {
      if (eat("∪") || eat("|"))
        acc = acc | term();
      else if (eat("∖") || eat("\\"))
        acc = acc - term();
      else
        return acc;
    }
  }

  StructuredSet term() {
    StructuredSet acc = factor();
    while (eat("∩") || eat("&")) acc = acc & factor();
    return acc;
  }

  StructuredSet factor() {
    if (eat("(")) {
      StructuredSet inner = expr();
      expect(")");
      return inner;
    }
    if (eat("{")) {
      std::vector<std::uint64_t> elems;
      if (!eat("}")) {
        do elems.push_back(integer());
        while (eat(","));
        expect("}");
      }
      return StructuredSet::finite(std::move(elems));
    }
    if (eat("ap")) {
      std::uint64_t a = integer();
      return StructuredSet::progression(a, integer());
    }
    if (eat("geom")) {
      std::uint64_t c = integer();
      return StructuredSet::geometric(c, integer());
    }
    if (eat("from")) return StructuredSet::from(integer());
    if (eat("complement")) {
      expect("(");
      StructuredSet inner = expr();
      expect(")");
      return inner.complement();
    }
    if (eat("N")) return StructuredSet::naturals();
    if (eat("empty")) return StructuredSet::empty();
    fail("expected a set");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

StructuredSet parse_set_expression(std::string_view text) { return Parser(text).parse(); }

}  // namespace momtail
