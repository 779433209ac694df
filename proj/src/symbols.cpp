#include "jpe/symbols.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace jpe {

namespace {

void extremes(const std::vector<cplx>& s, double& mx, double& mn) {
  mx = 0.0;
  mn = std::numeric_limits<double>::infinity();
  for (cplx z : s) {
    mx = std::max(mx, std::abs(z));
    mn = std::min(mn, std::abs(z));
  }
}

std::vector<cplx> dedup(std::vector<cplx> s) {
  std::vector<cplx> out;
  for (cplx z : s) {
    bool seen = false;
    for (cplx q : out)
      if (q.real() == z.real() && q.imag() == z.imag()) {
        seen = true;
        break;
      }
    if (!seen) out.push_back(z);
  }
  return out;
}

}  // namespace

SymbolTriple::SymbolTriple(std::vector<cplx> u, std::vector<cplx> v,
                           std::vector<cplx> w)
    : u_(dedup(std::move(u))), v_(dedup(std::move(v))), w_(dedup(std::move(w))) {
  if (u_.empty() || v_.empty() || w_.empty())
    throw std::invalid_argument("SymbolTriple: alphabets must be non-empty");
  extremes(u_, u_max_, u_min_);
  extremes(w_, w_max_, w_min_);
  double dummy;
  extremes(v_, v_max_, dummy);
}

SymbolTriple SymbolTriple::shifted(cplx lambda) const {
  std::vector<cplx> v2 = v_;
  for (cplx& z : v2) z -= lambda;
  return SymbolTriple(u_, std::move(v2), w_);
}

std::string SymbolTriple::to_string() const {
  auto one = [](const std::vector<cplx>& s) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) os << ", ";
      os << s[i].real();
      if (s[i].imag() != 0) os << (s[i].imag() > 0 ? "+" : "") << s[i].imag() << "i";
    }
    os << "]";
    return os.str();
  };
  return "U = " + one(u_) + "; V = " + one(v_) + "; W = " + one(w_);
}

namespace {

// Parses one complex literal: "2", "-1.5", "i", "-i", "3i", "2+3i", "1e-3-2i".
cplx parse_complex(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(),
                         [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw std::invalid_argument("empty complex literal");

  // Split at the last +/- that is not part of an exponent and not leading.
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto num = [](std::string t) -> double {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    double sign = 1.0;
    // from_chars rejects an explicit leading plus.
    if (t[0] == '+') t.erase(0, 1);
    else if (t[0] == '-') { sign = -1.0; t.erase(0, 1); }
    double val = 0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), val);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
      throw std::invalid_argument("bad number: " + t);
    return sign * val;
  };

  bool has_i = s.back() == 'i' || s.back() == 'I';
  if (!has_i) {
    if (split != std::string::npos)
      throw std::invalid_argument("bad complex literal: " + s);
    return {num(s), 0.0};
  }
  s.pop_back();
  if (split == std::string::npos) return {0.0, num(s)};
  return {num(s.substr(0, split)), num(s.substr(split))};
}

std::vector<cplx> parse_list(const std::string& body) {
  std::vector<cplx> out;
  std::string item;
  for (char c : body + ",") {
    if (c == ',') {
      bool blank = item.find_first_not_of(" \t") == std::string::npos;
      if (!blank) out.push_back(parse_complex(item));
      item.clear();
    } else {
      item += c;
    }
  }
  return out;
}

}  // namespace

SymbolTriple parse_triple(const std::string& text) {
  std::string t = text;
  std::size_t first = t.find_first_not_of(" \t\r\n");
  if (first == std::string::npos)
    throw std::invalid_argument("empty triple description");

  if (t[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(t);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(std::string("triple JSON: ") + e.what());
    }
    auto get = [&](const char* key) {
      if (!j.contains(key))
        throw std::invalid_argument(std::string("triple JSON missing ") + key);
      std::vector<cplx> out;
      for (const auto& pair : j.at(key)) {
        if (pair.is_number()) {
          out.emplace_back(pair.get<double>(), 0.0);
        } else {
          if (!pair.is_array() || pair.size() != 2)
            throw std::invalid_argument("triple JSON entries must be [re, im]");
          out.emplace_back(pair[0].get<double>(), pair[1].get<double>());
        }
      }
      return out;
    };
    return SymbolTriple(get("U"), get("V"), get("W"));
  }

  std::vector<cplx> sets[3];
  bool seen[3] = {false, false, false};
  std::string part;
  for (char c : t + ";") {
    if (c == ';') {
      if (part.find_first_not_of(" \t\r\n") == std::string::npos) {
        part.clear();
        continue;
      }
      std::size_t eq = part.find('=');
      std::size_t lb = part.find('[');
      std::size_t rb = part.rfind(']');
      if (eq == std::string::npos || lb == std::string::npos ||
          rb == std::string::npos || rb < lb)
        throw std::invalid_argument("triple syntax: expected NAME = [..]");
      std::string name = part.substr(0, eq);
      name.erase(std::remove_if(name.begin(), name.end(),
                                [](unsigned char ch) { return std::isspace(ch); }),
                 name.end());
      int idx = name == "U" ? 0 : name == "V" ? 1 : name == "W" ? 2 : -1;
      if (idx < 0) throw std::invalid_argument("unknown alphabet " + name);
      sets[idx] = parse_list(part.substr(lb + 1, rb - lb - 1));
      seen[idx] = true;
      part.clear();
    } else {
      part += c;
    }
  }
  if (!seen[0] || !seen[1] || !seen[2])
    throw std::invalid_argument("triple must define U, V and W");
  return SymbolTriple(sets[0], sets[1], sets[2]);
}

FiniteJacobi FiniteJacobi::zero(int n) {
  FiniteJacobi J;
  J.n = n;
  J.sub.assign(n > 0 ? n - 1 : 0, 0.0);
  J.main.assign(n, 0.0);
  J.super.assign(n > 0 ? n - 1 : 0, 0.0);
  return J;
}

cplx DiagonalStream::pick(const std::vector<cplx>& set, std::int64_t i,
                          int lane) const {
  if (set.size() == 1) return set[0];
  std::uint64_t key = static_cast<std::uint64_t>(i + origin_);
  std::uint64_t h = hash_combine(seed_, hash_combine(key, 0x5175ULL + lane));
  return set[bounded(h, set.size())];
}

FiniteJacobi sample_finite(const SymbolTriple& triple, int n,
                           std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_finite: n must be positive");
  return window(DiagonalStream(triple, seed), 1, n);
}

FiniteJacobi window(const DiagonalStream& stream, std::int64_t lo,
                    std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("window: lo > hi");
  int n = static_cast<int>(hi - lo + 1);
  FiniteJacobi J = FiniteJacobi::zero(n);
  for (int k = 0; k < n; ++k) J.main[k] = stream.v(lo + k);
  // The coupling between rows i and i-1 is u_i; between i and i+1 it is w_i.
  for (int k = 0; k + 1 < n; ++k) {
    J.sub[k] = stream.u(lo + k + 1);
    J.super[k] = stream.w(lo + k);
  }
  return J;
}

FiniteJacobi shift_lambda(const FiniteJacobi& J, cplx lambda) {
  FiniteJacobi out = J;
  for (cplx& v : out.main) v -= lambda;
  return out;
}

FiniteJacobi reflect(const FiniteJacobi& J) {
  FiniteJacobi out = J;
  std::reverse(out.sub.begin(), out.sub.end());
  std::reverse(out.main.begin(), out.main.end());
  std::reverse(out.super.begin(), out.super.end());
  return out;
}

}  // namespace jpe
