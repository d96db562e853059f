#include "gainterm/analytic.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <utility>

namespace gainterm {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num3(const Vec3& v) {
  return num(v.x) + "," + num(v.y) + "," + num(v.z);
}

class Gaussian final : public AnalyticFn {
 public:
  Gaussian(const Vec3& c, double w, double a) : c_(c), w_(w), a_(a) {
    if (!(w > 0.0)) throw std::invalid_argument("gaussian: width must be positive");
  }
  std::complex<double> eval(const Vec3& v) const override {
    return a_ * std::exp(-norm2(v - c_) / (2.0 * w_ * w_));
  }
  bool flatten(std::vector<GaussComponent>& out) const override {
    out.push_back({{a_, 0.0}, c_, w_, {}});
    return true;
  }
  std::string str() const override {
    return "gaussian(c=" + num3(c_) + ";w=" + num(w_) + ";a=" + num(a_) + ")";
  }

 private:
  Vec3 c_;
  double w_, a_;
};

class Bump final : public AnalyticFn {
 public:
  Bump(const Vec3& c, double r) : c_(c), r_(r) {
    if (!(r > 0.0)) throw std::invalid_argument("bump: radius must be positive");
  }
  std::complex<double> eval(const Vec3& v) const override {
    double t = norm2(v - c_) / (r_ * r_);
    if (t >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - t));
  }
  bool flatten(std::vector<GaussComponent>&) const override { return false; }
  std::string str() const override {
    return "bump(c=" + num3(c_) + ";r=" + num(r_) + ")";
  }

 private:
  Vec3 c_;
  double r_;
};

class Constant final : public AnalyticFn {
 public:
  explicit Constant(double a) : a_(a) {}
  std::complex<double> eval(const Vec3&) const override { return a_; }
  bool flatten(std::vector<GaussComponent>&) const override { return false; }
  std::string str() const override { return "constant(a=" + num(a_) + ")"; }

 private:
  double a_;
};

class Modulated final : public AnalyticFn {
 public:
  Modulated(AnalyticFnPtr inner, const Vec3& k) : inner_(std::move(inner)), k_(k) {}
  std::complex<double> eval(const Vec3& v) const override {
    return inner_->eval(v) * std::polar(1.0, dot(k_, v));
  }
  bool flatten(std::vector<GaussComponent>& out) const override {
    std::size_t first = out.size();
    if (!inner_->flatten(out)) return false;
    for (std::size_t i = first; i < out.size(); ++i) out[i].wavevec += k_;
    return true;
  }
  std::string str() const override {
    return "modulate(" + num3(k_) + "; " + inner_->str() + ")";
  }

 private:
  AnalyticFnPtr inner_;
  Vec3 k_;
};

class Dilated final : public AnalyticFn {
 public:
  Dilated(AnalyticFnPtr inner, double lam) : inner_(std::move(inner)), lam_(lam) {
    if (lam == 0.0) throw std::invalid_argument("dilate: lambda must be nonzero");
  }
  std::complex<double> eval(const Vec3& v) const override {
    return inner_->eval(v * lam_);
  }
  bool flatten(std::vector<GaussComponent>& out) const override {
    std::size_t first = out.size();
    if (!inner_->flatten(out)) return false;
    for (std::size_t i = first; i < out.size(); ++i) {
      out[i].center = out[i].center / lam_;
      out[i].width /= std::fabs(lam_);
      out[i].wavevec = out[i].wavevec * lam_;
    }
    return true;
  }
  std::string str() const override {
    return "dilate(" + num(lam_) + "; " + inner_->str() + ")";
  }

 private:
  AnalyticFnPtr inner_;
  double lam_;
};

class Translated final : public AnalyticFn {
 public:
  Translated(AnalyticFnPtr inner, const Vec3& m) : inner_(std::move(inner)), m_(m) {}
  std::complex<double> eval(const Vec3& v) const override {
    return inner_->eval(v + m_);
  }
  bool flatten(std::vector<GaussComponent>& out) const override {
    std::size_t first = out.size();
    if (!inner_->flatten(out)) return false;
    for (std::size_t i = first; i < out.size(); ++i) {
      out[i].amp *= std::polar(1.0, dot(out[i].wavevec, m_));
      out[i].center -= m_;
    }
    return true;
  }
  std::string str() const override {
    return "translate(" + num3(m_) + "; " + inner_->str() + ")";
  }

 private:
  AnalyticFnPtr inner_;
  Vec3 m_;
};

class Sum final : public AnalyticFn {
 public:
  explicit Sum(std::vector<AnalyticFnPtr> terms) : terms_(std::move(terms)) {}
  std::complex<double> eval(const Vec3& v) const override {
    std::complex<double> acc{};
    for (const auto& t : terms_) acc += t->eval(v);
    return acc;
  }
  bool flatten(std::vector<GaussComponent>& out) const override {
    for (const auto& t : terms_)
      if (!t->flatten(out)) return false;
    return true;
  }
  std::string str() const override {
    if (terms_.empty()) return "constant(a=0)";
    std::string s = terms_[0]->str();
    for (std::size_t i = 1; i < terms_.size(); ++i) s += "+" + terms_[i]->str();
    return s;
  }

 private:
  std::vector<AnalyticFnPtr> terms_;
};

}  // namespace

AnalyticFnPtr make_gaussian(const Vec3& c, double w, double a) {
  return std::make_shared<Gaussian>(c, w, a);
}
AnalyticFnPtr make_bump(const Vec3& c, double r) {
  return std::make_shared<Bump>(c, r);
}
AnalyticFnPtr make_constant(double a) { return std::make_shared<Constant>(a); }
AnalyticFnPtr make_modulated(AnalyticFnPtr inner, const Vec3& k) {
  return std::make_shared<Modulated>(std::move(inner), k);
}
AnalyticFnPtr make_dilated(AnalyticFnPtr inner, double lam) {
  return std::make_shared<Dilated>(std::move(inner), lam);
}
AnalyticFnPtr make_translated(AnalyticFnPtr inner, const Vec3& m) {
  return std::make_shared<Translated>(std::move(inner), m);
}
AnalyticFnPtr make_sum(std::vector<AnalyticFnPtr> terms) {
  return std::make_shared<Sum>(std::move(terms));
}
AnalyticFnPtr make_zero() { return make_constant(0.0); }

double mixture_envelope(const std::vector<GaussComponent>& comps, double r) {
  double acc = 0.0;
  for (const auto& c : comps) {
    double d = std::max(r - norm(c.center), 0.0);
    acc += std::abs(c.amp) * std::exp(-d * d / (2.0 * c.width * c.width));
  }
  return acc;
}

// ---- parser -------------------------------------------------------------

namespace {

struct Parser {
  std::string_view s;
  std::size_t pos{0};

  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("parse_analytic: " + what + " at offset " +
                                std::to_string(pos) + " in '" + std::string(s) + "'");
  }
  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool peek(char c) {
    skip();
    return pos < s.size() && s[pos] == c;
  }
  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos;
  }
  double number() {
    skip();
    std::size_t i = pos;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) ||
                            s[i] == '.' || s[i] == 'e' || s[i] == 'E' ||
                            ((s[i] == '+' || s[i] == '-') &&
                             (s[i - 1] == 'e' || s[i - 1] == 'E'))))
      ++i;
    if (i == pos) fail("expected number");
    double v = std::stod(std::string(s.substr(pos, i - pos)));
    pos = i;
    return v;
  }
  Vec3 triple() {
    double a = number();
    expect(',');
    double b = number();
    expect(',');
    double c = number();
    return {a, b, c};
  }
  std::string ident() {
    skip();
    std::size_t i = pos;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
      ++i;
    if (i == pos) fail("expected identifier");
    std::string id(s.substr(pos, i - pos));
    pos = i;
    return id;
  }

  AnalyticFnPtr expr() {
    std::vector<AnalyticFnPtr> terms;
    terms.push_back(term());
    while (peek('+')) {
      ++pos;
      terms.push_back(term());
    }
    return terms.size() == 1 ? terms[0] : make_sum(std::move(terms));
  }

  AnalyticFnPtr term() {
    std::string name = ident();
    expect('(');
    AnalyticFnPtr out;
    if (name == "gaussian") {
      Vec3 c{};
      double w = 1.0, a = 1.0;
      keyargs([&](const std::string& k) {
        if (k == "c") c = triple();
        else if (k == "w") w = number();
        else if (k == "a") a = number();
        else fail("unknown gaussian key '" + k + "'");
      });
      out = make_gaussian(c, w, a);
    } else if (name == "bump") {
      Vec3 c{};
      double r = 1.0;
      keyargs([&](const std::string& k) {
        if (k == "c") c = triple();
        else if (k == "r") r = number();
        else fail("unknown bump key '" + k + "'");
      });
      out = make_bump(c, r);
    } else if (name == "constant") {
      double a = 1.0;
      keyargs([&](const std::string& k) {
        if (k == "a") a = number();
        else fail("unknown constant key '" + k + "'");
      });
      out = make_constant(a);
    } else if (name == "modulate") {
      Vec3 k = triple();
      expect(';');
      out = make_modulated(expr(), k);
    } else if (name == "dilate") {
      double lam = number();
      expect(';');
      out = make_dilated(expr(), lam);
    } else if (name == "translate") {
      Vec3 m = triple();
      expect(';');
      out = make_translated(expr(), m);
    } else {
      fail("unknown function '" + name + "'");
    }
    expect(')');
    return out;
  }

  // key=value list separated by ';', possibly empty
  void keyargs(const std::function<void(const std::string&)>& on_key) {
    skip();
    if (peek(')')) return;
    while (true) {
      std::string k = ident();
      expect('=');
      on_key(k);
      if (peek(';')) {
        ++pos;
        continue;
      }
      break;
    }
  }
};

}  // namespace

AnalyticFnPtr parse_analytic(std::string_view text) {
  Parser p{text};
  AnalyticFnPtr f = p.expr();
  p.skip();
  if (p.pos != p.s.size()) p.fail("trailing input");
  return f;
}

}  // namespace gainterm
