#include "kmchev/wordlang.hpp"
#include "kmchev/errors.hpp"
#include "kmchev/rootsys.hpp"

namespace kmchev {

namespace {

struct Parser {
  const Gcm& A;
  const std::string& text;
  size_t pos = 0;

  [[noreturn]] void err(const std::string& expected) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < pos && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(ErrorCode::SyntaxError, "line " + std::to_string(line) + ", column " +
                                     std::to_string(col) + ": expected " + expected);
  }

  void skip_ws() {
    while (pos < text.size() && isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) err(std::string("'") + c + "'");
  }

  Int integer() {
    skip_ws();
    size_t start = pos;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
    size_t digits = pos;
    while (pos < text.size() && isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == digits) err("an integer");
    return Int(text.substr(start, pos - start), 10);
  }

  Rat rational() {
    Int num = integer();
    skip_ws();
    if (pos < text.size() && text[pos] == '/') {
      ++pos;
      skip_ws();
      size_t digits = pos;
      while (pos < text.size() && isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos == digits) err("a positive denominator");
      Int den(text.substr(digits, pos - digits), 10);
      if (den == 0) fail(ErrorCode::ZeroDenominator, "zero denominator in word expression");
      return make_rat(num, den);
    }
    return Rat(num);
  }

  int index() {
    Int v = integer();
    if (v < 1 || v > static_cast<long>(A.rank())) err("a simple-root index in range");
    return static_cast<int>(v.get_si()) - 1;
  }

  Letter letter() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && isalpha(static_cast<unsigned char>(text[pos]))) ++pos;
    std::string name = text.substr(start, pos - start);
    if (name == "x") {
      expect('(');
      skip_ws();
      Sgn s = Sgn::Plus;
      if (pos < text.size() && text[pos] == '-') {
        s = Sgn::Minus;
        ++pos;
      } else if (pos < text.size() && text[pos] == '+') {
        ++pos;
      }
      Int v = integer();
      if (v < 1 || v > static_cast<long>(A.rank())) err("a simple-root index in range");
      int i = static_cast<int>(v.get_si()) - 1;
      expect(',');
      Rat t = rational();
      expect(')');
      return chi(i, s, t);
    }
    if (name == "xr") {
      expect('(');
      expect('[');
      RootCoords coords;
      coords.push_back(integer());
      while (eat(',')) coords.push_back(integer());
      expect(']');
      expect(',');
      Rat t = rational();
      expect(')');
      if (coords.size() != A.rank()) err("root coordinates of matching rank");
      Sgn s = Sgn::Plus;
      if (all_nonpos(coords) && height(coords) != 0) {
        s = Sgn::Minus;
        for (Int& c : coords) c = -c;
      } else if (!all_nonneg(coords) || height(coords) == 0) {
        fail(ErrorCode::NotARealRoot, "root coordinates must be uniformly signed and nonzero");
      }
      Int h = height(coords);
      auto roots = real_roots_up_to_height(A, static_cast<long>(h.get_si()));
      for (const RealRoot& r : roots)
        if (r.coords == coords) return chi_real_letter(r, s, t);
      fail(ErrorCode::NotARealRoot, "coordinates do not name a real root");
    }
    if (name == "h") {
      expect('(');
      int i = index();
      expect(',');
      Rat t = rational();
      expect(')');
      return torus_letter(i, t);
    }
    if (name == "w") {
      expect('(');
      int i = index();
      Rat t(1);
      if (eat(',')) t = rational();
      expect(')');
      return wtilde_letter(i, t);
    }
    pos = start;
    err("a letter (x, xr, h or w)");
  }
};

std::string rat_arg(const Rat& t) { return rat_str(t); }

} // namespace

Word parse_word(const Gcm& A, const std::string& text) {
  Parser p{A, text};
  p.skip_ws();
  Word w;
  if (p.pos == text.size()) return w;
  w.push_back(p.letter());
  while (true) {
    p.skip_ws();
    if (p.pos == text.size()) break;
    p.expect('*');
    w.push_back(p.letter());
  }
  return w;
}

std::string print_letter(const Letter& l) {
  switch (l.kind) {
    case Letter::Kind::ChiSimple: {
      std::string idx = std::to_string(l.i + 1);
      if (l.sign == Sgn::Minus) idx = "-" + idx;
      return "x(" + idx + "," + rat_arg(l.t) + ")";
    }
    case Letter::Kind::ChiReal: {
      std::string out = "xr([";
      for (size_t j = 0; j < l.root.size(); ++j) {
        if (j) out += ",";
        Int c = l.sign == Sgn::Minus ? Int(-l.root[j]) : l.root[j];
        out += c.get_str();
      }
      return out + "]," + rat_arg(l.t) + ")";
    }
    case Letter::Kind::Torus:
      return "h(" + std::to_string(l.i + 1) + "," + rat_arg(l.t) + ")";
    case Letter::Kind::WTilde:
      if (l.t == 1) return "w(" + std::to_string(l.i + 1) + ")";
      return "w(" + std::to_string(l.i + 1) + "," + rat_arg(l.t) + ")";
  }
  return "?";
}

std::string print_word(const Word& w) {
  std::string out;
  for (size_t j = 0; j < w.size(); ++j) {
    if (j) out += "*";
    out += print_letter(w[j]);
  }
  return out;
}

} // namespace kmchev
