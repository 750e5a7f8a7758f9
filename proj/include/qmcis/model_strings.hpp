#pragma once

#include <charconv>
#include <cstddef>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qmcis/dirichlet.hpp"
#include "qmcis/integrands.hpp"

// Text forms used on the command line and in reports:
//   dirichlet:d=2,alpha=2,2,2   uniform:d=2
//   monomial:gamma=1,1          constant:d=2,c=0.5
//   lebesgue                    dirichlet:2,2,2   (box measures; d = #alpha - 1)

namespace qmcis {

using ModelChoice = std::variant<DirichletModel, UniformDensity>;
using IntegrandChoice = std::variant<MonomialIntegrand, ConstantIntegrand>;

namespace detail {

inline double parse_double(std::string_view s) {
  std::string tmp(s);
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tmp, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + tmp + "'");
  }
  if (pos != tmp.size()) throw std::invalid_argument("not a number: '" + tmp + "'");
  return v;
}

inline std::vector<double> parse_double_list(std::string_view s) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = s.find(',', start);
    const auto tok = s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (tok.empty()) throw std::invalid_argument("empty list element in '" + std::string(s) + "'");
    out.push_back(parse_double(tok));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

/// Splits "key=v1,v2,key2=w" into {key: "v1,v2", key2: "w"}: a comma-separated
/// token without '=' continues the previous key's list.
inline std::map<std::string, std::string> parse_keyed(std::string_view body) {
  std::map<std::string, std::string> out;
  std::string current;
  std::size_t start = 0;
  while (start < body.size()) {
    std::size_t comma = body.find(',', start);
    if (comma == std::string_view::npos) comma = body.size();
    const auto tok = body.substr(start, comma - start);
    const auto eq = tok.find('=');
    if (eq != std::string_view::npos) {
      current = std::string(tok.substr(0, eq));
      if (out.count(current)) throw std::invalid_argument("duplicate key '" + current + "'");
      out[current] = std::string(tok.substr(eq + 1));
    } else {
      if (current.empty()) throw std::invalid_argument("value without key in '" + std::string(body) + "'");
      out[current] += "," + std::string(tok);
    }
    start = comma + 1;
  }
  return out;
}

inline std::string join(std::span<const double> v) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

inline std::size_t parse_dim(const std::string& s) {
  const double d = parse_double(s);
  if (d < 1 || d != static_cast<double>(static_cast<std::size_t>(d)))
    throw std::invalid_argument("dimension must be a positive integer");
  return static_cast<std::size_t>(d);
}

}  // namespace detail

inline ModelChoice parse_model(std::string_view text) {
  const auto colon = text.find(':');
  const auto kind = text.substr(0, colon);
  const auto body = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  auto kv = detail::parse_keyed(body);
  if (kind == "dirichlet") {
    if (!kv.count("alpha")) throw std::invalid_argument("dirichlet model needs alpha=...");
    DirichletModel m(detail::parse_double_list(kv["alpha"]));
    if (kv.count("d") && detail::parse_dim(kv["d"]) != m.dim())
      throw std::invalid_argument("dirichlet model: alpha must have d+1 entries");
    return m;
  }
  if (kind == "uniform") {
    if (!kv.count("d")) throw std::invalid_argument("uniform model needs d=...");
    return UniformDensity{detail::parse_dim(kv["d"])};
  }
  throw std::invalid_argument("unknown model '" + std::string(kind) + "'");
}

inline IntegrandChoice parse_integrand(std::string_view text) {
  const auto colon = text.find(':');
  const auto kind = text.substr(0, colon);
  const auto body = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  auto kv = detail::parse_keyed(body);
  if (kind == "monomial") {
    if (!kv.count("gamma")) throw std::invalid_argument("monomial integrand needs gamma=...");
    return MonomialIntegrand(detail::parse_double_list(kv["gamma"]));
  }
  if (kind == "constant") {
    if (!kv.count("d")) throw std::invalid_argument("constant integrand needs d=...");
    return ConstantIntegrand{detail::parse_dim(kv["d"]), kv.count("c") ? detail::parse_double(kv["c"]) : 1.0};
  }
  throw std::invalid_argument("unknown integrand '" + std::string(kind) + "'");
}

/// Box measure for the discrepancy command: "lebesgue" or a Dirichlet model
/// in either the full or the short "dirichlet:a1,...,a_{d+1}" form.
inline std::variant<std::monostate, DirichletModel> parse_measure(std::string_view text) {
  if (text == "lebesgue") return std::monostate{};
  if (text.starts_with("dirichlet:")) {
    const auto body = text.substr(10);
    if (body.find('=') == std::string_view::npos) return DirichletModel(detail::parse_double_list(body));
    return std::get<DirichletModel>(parse_model(text));
  }
  throw std::invalid_argument("unknown measure '" + std::string(text) + "'");
}

inline std::string to_string(const DirichletModel& m) {
  return "dirichlet:d=" + std::to_string(m.dim()) + ",alpha=" + detail::join(m.alpha());
}
inline std::string to_string(const UniformDensity& m) { return "uniform:d=" + std::to_string(m.d); }
inline std::string to_string(const MonomialIntegrand& f) { return "monomial:gamma=" + detail::join(f.gamma()); }
inline std::string to_string(const ConstantIntegrand& f) {
  std::vector<double> c{f.c};
  return "constant:d=" + std::to_string(f.d) + ",c=" + detail::join(c);
}

inline std::size_t dim_of(const ModelChoice& m) {
  return std::visit([](const auto& x) { return x.dim(); }, m);
}
inline std::size_t dim_of(const IntegrandChoice& f) {
  return std::visit([](const auto& x) { return x.dim(); }, f);
}

}  // namespace qmcis
