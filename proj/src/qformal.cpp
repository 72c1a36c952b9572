#include "thetaver/qformal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace thetaver::qf {

namespace {
constexpr double kPi = std::numbers::pi;
const std::complex<double> kI{0.0, 1.0};
}  // namespace

int var_count(int g) { return g * (g + 1) / 2; }

int var_index(int g, int j, int k) {
  if (j > k) std::swap(j, k);
  // row j contributes g - j entries before; offset k - j within the row
  int idx = 0;
  for (int r = 0; r < j; ++r) idx += g - r;
  return idx + (k - j);
}

std::pair<int, int> var_pair(int g, int idx) {
  for (int j = 0; j < g; ++j)
    for (int k = j; k < g; ++k)
      if (var_index(g, j, k) == idx) return {j, k};
  throw std::out_of_range("var_pair: index out of range");
}

FormalSeries::FormalSeries(int genus, int pi_weight, int order_bound)
    : genus_(genus), pi_weight_(pi_weight), order_bound_(order_bound) {
  if (genus < 1) throw std::invalid_argument("FormalSeries: genus >= 1 required");
  if (order_bound < 0) throw std::invalid_argument("FormalSeries: order >= 0 required");
}

int FormalSeries::trace_weight(int g, const Expo& e) {
  int w = 0;
  for (int j = 0; j < g; ++j) w += e[static_cast<std::size_t>(var_index(g, j, j))];
  return w;
}

void FormalSeries::add_term(const Expo& e, const GaussRat& c) {
  if (static_cast<int>(e.size()) != var_count(genus_))
    throw std::invalid_argument("add_term: exponent vector size mismatch");
  if (c.is_zero()) return;
  if (trace_weight(genus_, e) > order_bound_) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

GaussRat FormalSeries::coefficient(const Expo& e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? GaussRat() : it->second;
}

FormalSeries FormalSeries::operator+(const FormalSeries& o) const {
  if (genus_ != o.genus_) throw std::logic_error("series addition: genus mismatch");
  if (!is_zero() && !o.is_zero() && pi_weight_ != o.pi_weight_)
    throw std::logic_error("series addition: pi grading mismatch");
  const int pw = is_zero() ? o.pi_weight_ : pi_weight_;
  FormalSeries out(genus_, pw, std::min(order_bound_, o.order_bound_));
  for (const auto& [e, c] : terms_) out.add_term(e, c);
  for (const auto& [e, c] : o.terms_) out.add_term(e, c);
  return out;
}

FormalSeries FormalSeries::operator-() const {
  FormalSeries out(genus_, pi_weight_, order_bound_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

FormalSeries FormalSeries::operator-(const FormalSeries& o) const { return *this + (-o); }

FormalSeries FormalSeries::operator*(const FormalSeries& o) const {
  if (genus_ != o.genus_) throw std::logic_error("series product: genus mismatch");
  FormalSeries out(genus_, pi_weight_ + o.pi_weight_, std::min(order_bound_, o.order_bound_));
  const int n = var_count(genus_);
  Expo e(static_cast<std::size_t>(n));
  for (const auto& [ea, ca] : terms_) {
    const int wa = trace_weight(genus_, ea);
    if (wa > out.order_bound_) continue;
    for (const auto& [eb, cb] : o.terms_) {
      if (wa + trace_weight(genus_, eb) > out.order_bound_) continue;
      for (int i = 0; i < n; ++i)
        e[static_cast<std::size_t>(i)] = ea[static_cast<std::size_t>(i)] + eb[static_cast<std::size_t>(i)];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

FormalSeries FormalSeries::scaled(const GaussRat& c) const {
  FormalSeries out(genus_, pi_weight_, order_bound_);
  if (c.is_zero()) return out;
  for (const auto& [e, v] : terms_) out.terms_.emplace(e, v * c);
  return out;
}

FormalSeries FormalSeries::with_pi_shift(int dt) const {
  FormalSeries out = *this;
  out.pi_weight_ += dt;
  return out;
}

FormalSeries FormalSeries::scaled_exact(const ExactConstant& c) const {
  return scaled(GaussRat(c.r) * GaussRat::i_pow(c.s)).with_pi_shift(c.t);
}

FormalSeries FormalSeries::tau_derivative(int j, int k) const {
  const int idx = var_index(genus_, j, k);
  FormalSeries out(genus_, pi_weight_ + 1, order_bound_);
  for (const auto& [e, c] : terms_) {
    const int ex = e[static_cast<std::size_t>(idx)];
    if (ex == 0) continue;
    // d/dtau_{jk} multiplies the term by pi i (stored exponent / 4)
    out.add_term(e, c * GaussRat(Rational(0), Rational(ex, 4)));
  }
  return out;
}

FormalSeries FormalSeries::heat_entry(int j, int k) const {
  FormalSeries d = tau_derivative(j, k);
  if (j != k) d = d.scaled(GaussRat(Rational(1, 2)));
  return d;
}

std::complex<double> FormalSeries::evaluate(const PeriodMatrix& tau) const {
  if (tau.genus() != genus_) throw std::invalid_argument("evaluate: genus mismatch");
  std::complex<double> total{0.0, 0.0};
  for (const auto& [e, c] : terms_) {
    std::complex<double> arg{0.0, 0.0};
    for (int idx = 0; idx < var_count(genus_); ++idx) {
      const auto [j, k] = var_pair(genus_, idx);
      arg += tau.tau()(j, k) * (static_cast<double>(e[static_cast<std::size_t>(idx)]) / 4.0);
    }
    total += c.to_complex() * std::exp(kPi * kI * arg);
  }
  return total * std::pow(kPi, pi_weight_);
}

namespace {

// Shared enumeration: all m with sum (2m_j + eps_j)^2 <= order for theta,
// or 2 * sum (...)^2 <= order for the doubled-argument second order theta.
// The callback receives the integer vector u_j = 2 m_j + eps_j.
template <typename F>
void enumerate_lattice(const HalfChar& eps, int order, bool doubled, F&& emit) {
  const int g = eps.genus();
  const int budget = doubled ? order / 2 : order;
  if (budget < 0) return;
  const int L = static_cast<int>(std::sqrt(static_cast<double>(budget))) + 1;
  std::vector<int> m(static_cast<std::size_t>(g));
  std::vector<int> lo(static_cast<std::size_t>(g)), hi(static_cast<std::size_t>(g));
  for (int j = 0; j < g; ++j) {
    lo[static_cast<std::size_t>(j)] = (-L - eps[j]) / 2 - 1;
    hi[static_cast<std::size_t>(j)] = (L - eps[j]) / 2 + 1;
    m[static_cast<std::size_t>(j)] = lo[static_cast<std::size_t>(j)];
  }
  std::vector<int> u(static_cast<std::size_t>(g));
  for (;;) {
    int w = 0;
    for (int j = 0; j < g; ++j) {
      u[static_cast<std::size_t>(j)] = 2 * m[static_cast<std::size_t>(j)] + eps[j];
      w += u[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(j)];
    }
    if (w <= budget) emit(u);
    int j = g - 1;
    for (; j >= 0; --j) {
      if (m[static_cast<std::size_t>(j)] < hi[static_cast<std::size_t>(j)]) {
        ++m[static_cast<std::size_t>(j)];
        break;
      }
      m[static_cast<std::size_t>(j)] = lo[static_cast<std::size_t>(j)];
    }
    if (j < 0) break;
  }
}

Expo exponents_from_u(int g, const std::vector<int>& u, bool doubled) {
  Expo e(static_cast<std::size_t>(var_count(g)));
  const int diag_mult = doubled ? 2 : 1;
  for (int j = 0; j < g; ++j)
    for (int k = j; k < g; ++k) {
      const int base = (j == k) ? u[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(j)]
                                : 2 * u[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(k)];
      e[static_cast<std::size_t>(var_index(g, j, k))] = diag_mult * base;
    }
  return e;
}

}  // namespace

FormalSeries theta_series(const HalfChar& eps, const HalfChar& delta, int order) {
  const int g = eps.genus();
  if (delta.genus() != g) throw std::invalid_argument("theta_series: genus mismatch");
  FormalSeries out(g, 0, order);
  enumerate_lattice(eps, order, /*doubled=*/false, [&](const std::vector<int>& u) {
    long phase = 0;
    for (int j = 0; j < g; ++j) phase += static_cast<long>(u[static_cast<std::size_t>(j)]) * delta[j];
    out.add_term(exponents_from_u(g, u, false), GaussRat::i_pow(phase));
  });
  return out;
}

FormalSeries theta2_series(const HalfChar& eps, int order) {
  const int g = eps.genus();
  FormalSeries out(g, 0, order);
  enumerate_lattice(eps, order, /*doubled=*/true, [&](const std::vector<int>& u) {
    out.add_term(exponents_from_u(g, u, true), GaussRat(Rational(1)));
  });
  return out;
}

FormalSeries theta_grad_series(const HalfChar& eps, const HalfChar& delta, int i, int order) {
  const int g = eps.genus();
  FormalSeries out(g, 1, order);
  enumerate_lattice(eps, order, false, [&](const std::vector<int>& u) {
    long phase = 0;
    for (int j = 0; j < g; ++j) phase += static_cast<long>(u[static_cast<std::size_t>(j)]) * delta[j];
    // 2 pi i p_i = pi * (i u_i)
    const GaussRat c = GaussRat::i_pow(phase) * GaussRat(Rational(0), Rational(u[static_cast<std::size_t>(i)]));
    out.add_term(exponents_from_u(g, u, false), c);
  });
  return out;
}

FormalSeries theta_hess_series(const HalfChar& eps, const HalfChar& delta, int i, int j,
                               int order) {
  const int g = eps.genus();
  FormalSeries out(g, 2, order);
  enumerate_lattice(eps, order, false, [&](const std::vector<int>& u) {
    long phase = 0;
    for (int k = 0; k < g; ++k) phase += static_cast<long>(u[static_cast<std::size_t>(k)]) * delta[k];
    // -4 pi^2 p_i p_j = pi^2 * (-u_i u_j)
    const GaussRat c = GaussRat::i_pow(phase) *
                       GaussRat(Rational(-u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(j)]));
    out.add_term(exponents_from_u(g, u, false), c);
  });
  return out;
}

FormalSeries theta2_grad_series(const HalfChar& eps, int i, int order) {
  const int g = eps.genus();
  FormalSeries out(g, 1, order);
  enumerate_lattice(eps, order, true, [&](const std::vector<int>& u) {
    // 4 pi i p_i = pi * (2 i u_i)
    out.add_term(exponents_from_u(g, u, true),
                 GaussRat(Rational(0), Rational(2 * u[static_cast<std::size_t>(i)])));
  });
  return out;
}

FormalSeries theta2_hess_series(const HalfChar& eps, int i, int j, int order) {
  const int g = eps.genus();
  FormalSeries out(g, 2, order);
  enumerate_lattice(eps, order, true, [&](const std::vector<int>& u) {
    // -16 pi^2 p_i p_j = pi^2 * (-4 u_i u_j)
    out.add_term(exponents_from_u(g, u, true),
                 GaussRat(Rational(-4 * u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(j)])));
  });
  return out;
}

FormalSeries det(const std::vector<std::vector<FormalSeries>>& m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw std::invalid_argument("det: square matrix required");
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  FormalSeries total;
  bool first = true;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<FormalSeries>> sub;
    sub.reserve(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<FormalSeries> row;
      row.reserve(n - 1);
      for (std::size_t j = 0; j < n; ++j)
        if (j != c) row.push_back(m[i][j]);
      sub.push_back(std::move(row));
    }
    FormalSeries term = m[0][c] * det(sub);
    if (c % 2 == 1) term = -term;
    if (first) {
      total = std::move(term);
      first = false;
    } else {
      total = total + term;
    }
  }
  return total;
}

FormalSeries jacobian_det_series(const std::vector<Characteristic>& chars, int order) {
  if (chars.empty()) throw std::invalid_argument("jacobian_det_series: empty");
  const int g = chars[0].genus();
  if (static_cast<int>(chars.size()) != g)
    throw std::invalid_argument("jacobian_det_series: need g characteristics");
  std::vector<std::vector<FormalSeries>> m(static_cast<std::size_t>(g));
  for (int i = 0; i < g; ++i) {
    m[static_cast<std::size_t>(i)].reserve(static_cast<std::size_t>(g));
    for (int k = 0; k < g; ++k)
      m[static_cast<std::size_t>(i)].push_back(
          theta_grad_series(chars[static_cast<std::size_t>(k)].eps,
                            chars[static_cast<std::size_t>(k)].delta, i, order));
  }
  return det(m).with_pi_shift(-g);
}

std::vector<std::pair<Expo, GaussRat>> sorted_terms(const FormalSeries& s) {
  std::vector<std::pair<Expo, GaussRat>> out(s.terms().begin(), s.terms().end());
  const int g = s.genus();
  std::sort(out.begin(), out.end(), [g](const auto& a, const auto& b) {
    const int wa = FormalSeries::trace_weight(g, a.first);
    const int wb = FormalSeries::trace_weight(g, b.first);
    if (wa != wb) return wa < wb;
    return a.first < b.first;
  });
  return out;
}

CompareResult compare(const FormalSeries& a, const FormalSeries& b) {
  CompareResult out;
  out.lhs_terms = a.term_count();
  out.rhs_terms = b.term_count();
  out.compared_order = std::min(a.order_bound(), b.order_bound());
  if (a.genus() != b.genus()) throw std::invalid_argument("compare: genus mismatch");
  if (!a.is_zero() && !b.is_zero() && a.pi_weight() != b.pi_weight()) {
    out.equal = false;
    out.pi_weight_mismatch = true;
    out.note = "pi weights " + std::to_string(a.pi_weight()) + " vs " + std::to_string(b.pi_weight());
    return out;
  }
  const int g = a.genus();
  std::vector<Expo> keys;
  for (const auto& [e, c] : a.terms())
    if (FormalSeries::trace_weight(g, e) <= out.compared_order) keys.push_back(e);
  for (const auto& [e, c] : b.terms())
    if (FormalSeries::trace_weight(g, e) <= out.compared_order) keys.push_back(e);
  std::sort(keys.begin(), keys.end(), [g](const Expo& x, const Expo& y) {
    const int wx = FormalSeries::trace_weight(g, x);
    const int wy = FormalSeries::trace_weight(g, y);
    if (wx != wy) return wx < wy;
    return x < y;
  });
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  for (const auto& e : keys) {
    const GaussRat ca = a.coefficient(e);
    const GaussRat cb = b.coefficient(e);
    if (ca != cb) {
      out.equal = false;
      out.first_mismatch = e;
      out.lhs_coeff = ca;
      out.rhs_coeff = cb;
      return out;
    }
  }
  return out;
}

namespace {

FormalSeries formal_detB(const HalfChar& eps, const HalfChar& delta, int order) {
  const int g = eps.genus();
  const FormalSeries te = theta2_series(eps, order);
  const FormalSeries td = theta2_series(delta, order);
  std::vector<std::vector<FormalSeries>> B(static_cast<std::size_t>(g));
  for (int j = 0; j < g; ++j) {
    B[static_cast<std::size_t>(j)].reserve(static_cast<std::size_t>(g));
    for (int k = 0; k < g; ++k)
      B[static_cast<std::size_t>(j)].push_back(td * te.heat_entry(j, k) - te * td.heat_entry(j, k));
  }
  return det(B);
}

FormalSeries formal_subset_sum(const HalfChar& v, const HalfChar& delta, int order) {
  const int g = v.genus();
  std::vector<HalfChar> alphas;
  for (const auto& a : all_half_chars(g))
    if (v.dot(a) == 1) alphas.push_back(a);
  const int n = static_cast<int>(alphas.size());
  FormalSeries total(g, 0, order);
  if (n < g) return total;
  std::vector<int> idx(static_cast<std::size_t>(g));
  for (int i = 0; i < g; ++i) idx[static_cast<std::size_t>(i)] = i;
  bool first = true;
  for (;;) {
    HalfChar asum = HalfChar::zero(g);
    std::vector<Characteristic> chars;
    for (int c = 0; c < g; ++c) {
      const auto& a = alphas[static_cast<std::size_t>(idx[static_cast<std::size_t>(c)])];
      asum = asum + a;
      chars.emplace_back(v, a);
    }
    const FormalSeries D = jacobian_det_series(chars, order);
    FormalSeries sq = D * D;
    if (delta.dot(asum)) sq = -sq;
    if (first) {
      total = std::move(sq);
      first = false;
    } else {
      total = total + sq;
    }
    int k = g - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == n - g + k) --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (int j = k + 1; j < g; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return total;
}

ExactConstant require_constant(const Catalog& catalog, const std::string& id, int genus) {
  const auto c = catalog.find(id, genus);
  if (!c)
    throw ConstantNotRational("no exact constant in the catalog for " + id + " at genus " +
                              std::to_string(genus));
  return *c;
}

}  // namespace

FormalCheckResult formal_identity_check(const std::string& id, int genus, int order,
                                        const Catalog& catalog) {
  FormalCheckResult out;
  out.identity_id = id;
  out.genus = genus;
  out.order = order;
  out.pass = true;

  auto push = [&](CompareResult cr, const std::string& what) {
    if (!cr.equal) {
      out.pass = false;
      if (out.detail.empty()) {
        out.detail = what + ": ";
        if (cr.pi_weight_mismatch) {
          out.detail += cr.note;
        } else if (cr.first_mismatch) {
          out.detail += "first mismatch at exps [";
          for (std::size_t i = 0; i < cr.first_mismatch->size(); ++i) {
            if (i) out.detail += ",";
            out.detail += std::to_string((*cr.first_mismatch)[i]);
          }
          out.detail += "] lhs=" + cr.lhs_coeff.str() + " rhs=" + cr.rhs_coeff.str();
        }
      }
    }
    out.comparisons.push_back(std::move(cr));
  };

  if (id == "jac0") {
    if (genus != 1) throw std::invalid_argument("jac0 is a genus 1 identity");
    const HalfChar one = HalfChar::from_string("1"), zero = HalfChar::from_string("0");
    const FormalSeries lhs = theta_grad_series(one, one, 0, order);
    const FormalSeries rhs = (theta_series(zero, zero, order) * theta_series(one, zero, order) *
                              theta_series(zero, one, order))
                                 .scaled(GaussRat(Rational(-1)))
                                 .with_pi_shift(1);
    push(compare(lhs, rhs), "jac0");
  } else if (id == "jac1") {
    if (genus != 2) throw std::invalid_argument("formal jac1 implemented for genus 2");
    const FormalSeries D = jacobian_det_series({Characteristic::from_string("10|10"),
                                                Characteristic::from_string("10|11")},
                                               order);
    FormalSeries prod = theta_series(HalfChar::from_string("11"), HalfChar::from_string("00"), order);
    prod = prod * theta_series(HalfChar::from_string("11"), HalfChar::from_string("11"), order);
    prod = prod * theta_series(HalfChar::from_string("01"), HalfChar::from_string("00"), order);
    prod = prod * theta_series(HalfChar::from_string("01"), HalfChar::from_string("10"), order);
    push(compare(D * D, prod * prod), "jac1 squared");
  } else if (id == "tT" || id == "tT2") {
    const auto chars = all_half_chars(genus);
    for (const auto& a : chars)
      for (const auto& b : chars) {
        if (id == "tT") {
          const HalfChar& alpha = a;
          const HalfChar& eps = b;
          const FormalSeries lhs = theta2_series(alpha, order) * theta2_series(alpha + eps, order);
          FormalSeries rhs(genus, 0, order);
          bool first = true;
          for (const auto& sigma : chars) {
            const FormalSeries t = theta_series(eps, sigma, order);
            FormalSeries sq = t * t;
            if (alpha.dot(sigma)) sq = -sq;
            if (first) {
              rhs = std::move(sq);
              first = false;
            } else {
              rhs = rhs + sq;
            }
          }
          rhs = rhs.scaled(GaussRat(Rational(1, 1 << genus)));
          push(compare(lhs, rhs), "tT alpha=" + alpha.str() + " eps=" + eps.str());
        } else {
          const HalfChar& eps = a;
          const HalfChar& delta = b;
          FormalSeries lhs(genus, 0, order);
          bool first = true;
          for (const auto& alpha : chars) {
            FormalSeries t = theta2_series(alpha, order) * theta2_series(alpha + eps, order);
            if (alpha.dot(delta)) t = -t;
            if (first) {
              lhs = std::move(t);
              first = false;
            } else {
              lhs = lhs + t;
            }
          }
          const FormalSeries t = theta_series(eps, delta, order);
          push(compare(lhs, t * t), "tT2 eps=" + eps.str() + " delta=" + delta.str());
        }
      }
  } else if (id == "Eq") {
    const ExactConstant c = require_constant(catalog, "Eq", genus);
    std::vector<std::pair<HalfChar, HalfChar>> pairs;
    if (genus == 1) {
      pairs = {{HalfChar::from_string("0"), HalfChar::from_string("1")},
               {HalfChar::from_string("1"), HalfChar::from_string("0")}};
    } else if (genus == 2) {
      pairs = {{HalfChar::from_string("00"), HalfChar::from_string("10")},
               {HalfChar::from_string("00"), HalfChar::from_string("01")},
               {HalfChar::from_string("00"), HalfChar::from_string("11")}};
    } else {
      throw std::invalid_argument("formal Eq implemented for genus 1 and 2");
    }
    for (const auto& [eps, delta] : pairs) {
      const FormalSeries lhs = formal_detB(eps, delta, order).scaled_exact(c);
      const FormalSeries rhs = formal_subset_sum(eps + delta, delta, order);
      push(compare(lhs, rhs), "Eq eps=" + eps.str() + " delta=" + delta.str());
    }
  } else if (id == "cor") {
    if (genus != 2) throw std::invalid_argument("formal cor implemented for genus 2");
    const auto chars = all_half_chars(genus);
    for (const auto& ch : odd_characteristics(genus)) {
      const HalfChar& eps = ch.eps;
      const HalfChar& delta = ch.delta;
      std::vector<std::vector<FormalSeries>> A(static_cast<std::size_t>(genus));
      for (int i = 0; i < genus; ++i)
        for (int j = 0; j < genus; ++j) {
          FormalSeries entry(genus, 2, order);
          bool first = true;
          for (const auto& a : chars) {
            FormalSeries t = theta2_hess_series(a, i, j, order) * theta2_series(eps + a, order) -
                             theta2_hess_series(eps + a, i, j, order) * theta2_series(a, order);
            if (a.dot(delta)) t = -t;
            if (first) {
              entry = std::move(t);
              first = false;
            } else {
              entry = entry + t;
            }
          }
          A[static_cast<std::size_t>(i)].push_back(std::move(entry));
        }
      const FormalSeries d = det(A);
      FormalSeries zero(genus, d.pi_weight(), order);
      push(compare(d, zero), "cor eps=" + eps.str() + " delta=" + delta.str());
    }
  } else if (id == "gen2") {
    if (genus != 2) throw std::invalid_argument("gen2 is a genus 2 identity");
    const ExactConstant c = require_constant(catalog, "gen2", 2);
    const FormalSeries b0 =
        formal_detB(HalfChar::from_string("00"), HalfChar::from_string("10"), order);
    const FormalSeries b1 =
        formal_detB(HalfChar::from_string("01"), HalfChar::from_string("11"), order);
    FormalSeries zero(genus, b0.pi_weight(), order);
    push(compare(b0 + b1, zero), "gen2 four-term");
    const FormalSeries D = jacobian_det_series({Characteristic::from_string("10|10"),
                                                Characteristic::from_string("10|11")},
                                               order);
    push(compare(b0, (D * D).scaled_exact(c)), "gen2 main");
    FormalSeries prod = theta_series(HalfChar::from_string("11"), HalfChar::from_string("00"), order);
    prod = prod * theta_series(HalfChar::from_string("11"), HalfChar::from_string("11"), order);
    prod = prod * theta_series(HalfChar::from_string("01"), HalfChar::from_string("00"), order);
    prod = prod * theta_series(HalfChar::from_string("01"), HalfChar::from_string("10"), order);
    push(compare(b0, (prod * prod).scaled_exact(c)), "gen2 via squared product");
  } else if (id == "secondgen") {
    if (genus != 1) throw std::invalid_argument("formal secondgen implemented for genus 1");
    const ExactConstant c = require_constant(catalog, "secondgen", 1);
    const HalfChar zero = HalfChar::from_string("0"), one = HalfChar::from_string("1");
    const FormalSeries t0 = theta2_series(zero, order), t1 = theta2_series(one, order);
    const FormalSeries detM = t0 * t1.tau_derivative(0, 0) - t1 * t0.tau_derivative(0, 0);
    const FormalSeries grad = theta_grad_series(one, one, 0, order);
    // delta_1 = eps_0 + eps_1 = 1; the only odd-making beta is 1 and the sign
    // is (-1)^{eps_1 . beta}.
    const FormalSeries csq = (grad * grad).scaled(GaussRat(Rational(2)));
    push(compare(detM.scaled_exact(c), -csq), "secondgen genus 1, eps0 = 0");
    push(compare((-detM).scaled_exact(c), csq), "secondgen genus 1, eps0 = 1");
  } else {
    throw std::invalid_argument("formal_identity_check: unknown identity " + id);
  }
  return out;
}

}  // namespace thetaver::qf
