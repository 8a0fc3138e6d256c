#include <cctype>
#include <sstream>

#include "perm_node.hpp"
#include "symkit/perm.hpp"

namespace symkit {

namespace {

std::string rule_text(const Permutation& p) {
  std::string s = "rule:" + p.rule_name();
  for (const auto& [k, v] : p.rule_params()) s += ";" + k + "=" + v;
  return s;
}

std::string cycles_text(const Permutation& p) {
  std::string s = "cycles:";
  for (const auto& c : p.cycle_list()) {
    s += "(";
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? " " : "") + std::to_string(c[i]);
    s += ")";
  }
  return s;
}

// Text of p; when as_factor is set an inversion may be written as a ^-1 suffix.
std::string text(const Permutation& p, bool as_factor) {
  switch (p.form()) {
    case Permutation::Form::FiniteSupport:
      return cycles_text(p);
    case Permutation::Form::Rule: {
      std::string s = rule_text(p);
      if (!p.inverted()) return s;
      return as_factor ? s + "^-1" : "word:[" + s + "^-1]";
    }
    case Permutation::Form::Word: {
      std::string s = "word:[";
      auto fs = p.factors();
      for (std::size_t i = 0; i < fs.size(); ++i) s += (i ? "," : "") + text(fs[i], true);
      return s + "]";
    }
    case Permutation::Form::Limit: {
      std::string s = "limit:" + node_of(p).label;
      return p.inverted() ? s + "^-1" : s;
    }
  }
  return "";
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Permutation parse_all() {
    Permutation p = perm();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return p;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::Parse, why + " at position " + std::to_string(pos_) + " in '" + s_ + "'");
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(const std::string& tok) {
    skip_ws();
    if (s_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(const std::string& tok) {
    if (!eat(tok)) fail("expected '" + tok + "'");
  }
  Point number() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a point");
    return std::stoll(s_.substr(start, pos_ - start));
  }
  std::string token() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-' ||
            s_[pos_] == '_' || s_[pos_] == '.'))
      ++pos_;
    if (start == pos_) fail("expected a name");
    return s_.substr(start, pos_ - start);
  }

  Permutation perm() {
    if (eat("cycles:")) {
      std::vector<std::vector<Point>> cs;
      while (eat("(")) {
        std::vector<Point> c;
        while (!eat(")")) c.push_back(number());
        if (c.size() > 1) cs.push_back(c);
      }
      try {
        return Permutation::cycles(cs);
      } catch (const Error& e) {
        fail(e.what());
      }
    }
    if (eat("rule:")) {
      std::string name = token();
      std::map<std::string, std::string> params;
      while (eat(";")) {
        std::string k = token();
        expect("=");
        params[k] = token();
      }
      return Permutation::builtin(name, params);
    }
    if (eat("word:")) {
      expect("[");
      std::vector<Permutation> fs;
      skip_ws();
      if (!eat("]")) {
        do {
          Permutation f = perm();
          if (eat("^-1")) f = f.inverse();
          fs.push_back(f);
        } while (eat(","));
        expect("]");
      }
      return Permutation::word(fs);
    }
    fail("expected cycles:, rule: or word:");
  }
};

}  // namespace

std::string Permutation::to_string() const { return text(*this, false); }

nlohmann::json Permutation::to_json() const {
  nlohmann::json j;
  switch (form()) {
    case Form::FiniteSupport:
      j["form"] = "cycles";
      j["cycles"] = cycle_list();
      break;
    case Form::Rule:
      j["form"] = "rule";
      j["rule"] = rule_name();
      j["params"] = rule_params();
      j["inverse"] = inverted();
      break;
    case Form::Word: {
      j["form"] = "word";
      j["factors"] = nlohmann::json::array();
      for (const auto& f : factors()) j["factors"].push_back(f.to_json());
      break;
    }
    case Form::Limit:
      j["form"] = "limit";
      j["label"] = node_of(*this).label;
      j["inverse"] = inverted();
      break;
  }
  return j;
}

Permutation parse_permutation(const std::string& text) { return Parser(text).parse_all(); }

Permutation permutation_from_json(const nlohmann::json& j) {
  try {
    std::string form = j.at("form");
    if (form == "cycles")
      return Permutation::cycles(j.at("cycles").get<std::vector<std::vector<Point>>>());
    if (form == "rule") {
      auto params = j.value("params", std::map<std::string, std::string>{});
      auto p = Permutation::builtin(j.at("rule").get<std::string>(), params);
      return j.value("inverse", false) ? p.inverse() : p;
    }
    if (form == "word") {
      std::vector<Permutation> fs;
      for (const auto& f : j.at("factors")) fs.push_back(permutation_from_json(f));
      return Permutation::word(fs);
    }
    throw Error(ErrorKind::Parse, "unsupported form '" + form + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
}

}  // namespace symkit
