#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qmcis/dirichlet.hpp"

namespace qmcis {

/// f(x) = 2^-d prod x_i^gamma_i, with gamma_i > 0.
class MonomialIntegrand {
 public:
  explicit MonomialIntegrand(std::vector<double> gamma) : gamma_(std::move(gamma)) {
    if (gamma_.empty()) throw std::invalid_argument("MonomialIntegrand: gamma must be non-empty");
    if (gamma_.size() > 16) throw std::invalid_argument("MonomialIntegrand: dimension must be <= 16");
    for (double g : gamma_)
      if (!std::isfinite(g) || g <= 0.0) throw std::invalid_argument("MonomialIntegrand: gamma entries must be > 0");
  }

  static MonomialIntegrand ones(std::size_t d) { return MonomialIntegrand(std::vector<double>(d, 1.0)); }

  std::size_t dim() const noexcept { return gamma_.size(); }
  std::span<const double> gamma() const noexcept { return gamma_; }

  double operator()(std::span<const double> x) const {
    double r = std::ldexp(1.0, -static_cast<int>(gamma_.size()));
    for (std::size_t i = 0; i < gamma_.size(); ++i) r *= gamma_[i] == 1.0 ? x[i] : std::pow(x[i], gamma_[i]);
    return r;
  }

  friend bool operator==(const MonomialIntegrand&, const MonomialIntegrand&) = default;

 private:
  std::vector<double> gamma_;
};

/// ||f||_{H1} for the monomial. For every subset v the anchored mixed partial
/// integrates to 2^-d prod_{i in v} [x^gamma_i]_0^1 = 2^-d, so the 2^d terms
/// sum to exactly 1.
inline double h1_norm_monomial(const MonomialIntegrand& f) {
  const std::size_t d = f.dim();
  const double term = std::ldexp(1.0, -static_cast<int>(d));
  double total = 0.0;
  for (std::uint32_t mask = 0; mask <= Subset::full(d).mask; ++mask) {
    double t = term;
    for (std::size_t i = 0; i < d; ++i)
      if ((mask >> i) & 1u) t *= std::pow(1.0, f.gamma()[i]) - std::pow(0.0, f.gamma()[i]);
    total += t;
  }
  return total;
}

/// ||f||_{H~1}: the H1 norm without the v = {} term |f(1)| = 2^-d.
inline double h1_seminorm_monomial(const MonomialIntegrand& f) {
  return h1_norm_monomial(f) - std::ldexp(1.0, -static_cast<int>(f.dim()));
}

/// f(x) = c. Every derivative vanishes, so ||f||_{H1} = |c| and the seminorm is 0.
struct ConstantIntegrand {
  std::size_t d = 1;
  double c = 1.0;

  std::size_t dim() const noexcept { return d; }
  double operator()(std::span<const double>) const noexcept { return c; }
};

/// u = 1 on [0,1]^d: pi is Lebesgue measure.
struct UniformDensity {
  std::size_t d = 1;

  std::size_t dim() const noexcept { return d; }
  double operator()(std::span<const double>) const noexcept { return 1.0; }
};

/// E_pi[f] for the Dirichlet model:
///   2^-d prod Gamma(alpha_i + gamma_i) / prod Gamma(alpha_i)
///        * Gamma(sum alpha) / Gamma(alpha_{d+1} + sum (alpha_i + gamma_i)).
inline double monomial_expectation(const DirichletModel& model, const MonomialIntegrand& f) {
  const std::size_t d = model.dim();
  if (f.dim() != d) throw std::invalid_argument("monomial_expectation: dimension mismatch");
  double log_s = 0.0;
  double alpha_sum = 0.0;
  double gamma_sum = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    log_s += std::lgamma(model.alpha(i) + f.gamma()[i]) - std::lgamma(model.alpha(i));
    alpha_sum += model.alpha(i);
    gamma_sum += f.gamma()[i];
  }
  alpha_sum += model.alpha(d);
  log_s += std::lgamma(alpha_sum) - std::lgamma(alpha_sum + gamma_sum);
  return std::ldexp(std::exp(log_s), -static_cast<int>(d));
}

/// E[f] under the uniform density: 2^-d prod 1/(gamma_i + 1).
inline double monomial_expectation(const UniformDensity& model, const MonomialIntegrand& f) {
  if (f.dim() != model.d) throw std::invalid_argument("monomial_expectation: dimension mismatch");
  double r = std::ldexp(1.0, -static_cast<int>(f.dim()));
  for (double g : f.gamma()) r /= g + 1.0;
  return r;
}

}  // namespace qmcis
