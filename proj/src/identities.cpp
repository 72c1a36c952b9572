#include "thetaver/identities.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include <Eigen/SVD>

#include "thetaver/sampling.hpp"

namespace thetaver {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

// Identity checks need evaluation error well below the assertion tolerance.
EvalConfig tighten(const EvalConfig& cfg, double tol) {
  EvalConfig t = cfg;
  t.tol = std::min({cfg.tol, tol * 1e-3, 1e-12});
  return t;
}

IdentityReport make_report(std::string id, int genus, Complex lhs, Complex rhs, double tol,
                           const PeriodMatrix* tau, std::string note = "") {
  IdentityReport r;
  r.identity_id = std::move(id);
  r.genus = genus;
  r.lhs = lhs;
  r.rhs = rhs;
  r.residual = std::abs(lhs - rhs);
  r.scale = std::max(std::abs(lhs), std::abs(rhs));
  r.tol = tol;
  r.pass = r.residual <= tol * std::max(r.scale, 1.0);
  r.note = std::move(note);
  if (tau) r.tau = tau->tau();
  return r;
}

IdentityReport entrywise_report(std::string id, int genus, const Eigen::MatrixXcd& L,
                                const Eigen::MatrixXcd& R, double tol, const PeriodMatrix* tau,
                                std::string note = "") {
  IdentityReport r;
  r.identity_id = std::move(id);
  r.genus = genus;
  double worst = 0.0, scale = 0.0;
  int wi = 0, wj = 0;
  for (int i = 0; i < L.rows(); ++i)
    for (int j = 0; j < L.cols(); ++j) {
      const double d = std::abs(L(i, j) - R(i, j));
      scale = std::max({scale, std::abs(L(i, j)), std::abs(R(i, j))});
      if (d > worst) {
        worst = d;
        wi = i;
        wj = j;
      }
    }
  r.lhs = L(wi, wj);
  r.rhs = R(wi, wj);
  r.residual = worst;
  r.scale = scale;
  r.tol = tol;
  r.pass = worst <= tol * std::max(scale, 1.0);
  r.note = std::move(note);
  if (tau) r.tau = tau->tau();
  return r;
}

std::vector<HalfChar> odd_making_alphas(const HalfChar& v) {
  std::vector<HalfChar> out;
  for (const auto& a : all_half_chars(v.genus()))
    if (v.dot(a) == 1) out.push_back(a);
  return out;
}

// det(Theta[delta] D Theta[eps] - Theta[eps] D Theta[delta]), the
// Theta[delta]^{2g} det(D(Theta[eps]/Theta[delta])) side, plus entry scale.
struct DetBSide {
  Complex det{};
  double entry_scale = 0.0;
};

DetBSide det_B_side(const ThetaData& te, const ThetaData& td) {
  const Eigen::MatrixXcd B = td.jet.value * te.heat - te.jet.value * td.heat;
  DetBSide out;
  out.det = B.determinant();
  out.entry_scale = B.cwiseAbs().maxCoeff();
  return out;
}

// Signed sum over g-subsets of the odd-making alphas of squared jacobian
// determinants for [eps+delta, alpha].
Complex jacobian_subset_sum(const HalfChar& v, const HalfChar& delta, const PeriodMatrix& tau,
                            const EvalConfig& ecfg) {
  const int g = tau.genus();
  const auto alphas = odd_making_alphas(v);
  std::vector<Eigen::VectorXcd> grads;
  grads.reserve(alphas.size());
  for (const auto& a : alphas) grads.push_back(theta_jet(v, a, tau, ecfg).grad);
  const int n = static_cast<int>(alphas.size());
  Complex total{0.0, 0.0};
  if (n < g) return total;
  std::vector<int> idx(static_cast<std::size_t>(g));
  std::iota(idx.begin(), idx.end(), 0);
  const double pig = std::pow(kPi, -g);
  for (;;) {
    HalfChar asum = HalfChar::zero(v.genus());
    Eigen::MatrixXcd m(g, g);
    for (int c = 0; c < g; ++c) {
      asum = asum + alphas[static_cast<std::size_t>(idx[static_cast<std::size_t>(c)])];
      m.col(c) = grads[static_cast<std::size_t>(idx[static_cast<std::size_t>(c)])];
    }
    const double sign = delta.dot(asum) ? -1.0 : 1.0;
    const Complex D = pig * m.determinant();
    total += sign * D * D;
    int k = g - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == n - g + k) --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (int j = k + 1; j < g; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return total;
}

}  // namespace

Complex jacobian_determinant(const std::vector<Characteristic>& chars, const PeriodMatrix& tau,
                             const EvalConfig& cfg) {
  const int g = tau.genus();
  if (static_cast<int>(chars.size()) != g)
    throw std::invalid_argument("jacobian_determinant: need exactly g characteristics");
  Eigen::MatrixXcd m(g, g);
  for (int c = 0; c < g; ++c) {
    const auto& ch = chars[static_cast<std::size_t>(c)];
    if (ch.genus() != g) throw std::invalid_argument("jacobian_determinant: genus mismatch");
    if (!is_odd(ch)) throw std::invalid_argument("jacobian_determinant: characteristics must be odd");
    m.col(c) = theta_jet(ch.eps, ch.delta, tau, cfg).grad;
  }
  return std::pow(kPi, -g) * m.determinant();
}

IdentityReport check_jacobi_classical(const FundamentalSystem& system, const PeriodMatrix& tau,
                                      const EvalConfig& cfg, double tol) {
  const int g = tau.genus();
  if (static_cast<int>(system.size()) != 2 * g + 2)
    throw std::invalid_argument("check_jacobi_classical: need 2g+2 characteristics");
  for (int i = 0; i < g; ++i)
    if (!is_odd(system[static_cast<std::size_t>(i)]))
      throw std::invalid_argument("check_jacobi_classical: first g characteristics must be odd");
  for (int i = g; i < 2 * g + 2; ++i)
    if (!is_even(system[static_cast<std::size_t>(i)]))
      throw std::invalid_argument("check_jacobi_classical: trailing characteristics must be even");
  const EvalConfig ecfg = tighten(cfg, tol);
  const Complex D = jacobian_determinant(
      std::vector<Characteristic>(system.begin(), system.begin() + g), tau, ecfg);
  Complex prod{1.0, 0.0};
  for (int i = g; i < 2 * g + 2; ++i) {
    const auto& ch = system[static_cast<std::size_t>(i)];
    prod *= theta_jet(ch.eps, ch.delta, tau, ecfg).value;
  }
  std::string note;
  if (std::abs(prod) > 1e-12) {
    const Complex sgn = D / prod;
    note = "unsquared sign ratio re=" + std::to_string(sgn.real()) +
           " im=" + std::to_string(sgn.imag());
  }
  return make_report("jac1", g, D * D, prod * prod, tol, &tau, note);
}

IdentityReport riemann_addition_residual(const HalfChar& alpha, const HalfChar& eps,
                                         const PeriodMatrix& tau, const Eigen::VectorXcd& z,
                                         const EvalConfig& cfg, double tol) {
  const int g = tau.genus();
  const EvalConfig ecfg = tighten(cfg, tol);
  const Eigen::VectorXcd z0 = Eigen::VectorXcd::Zero(g);
  const Complex lhs = theta2_value(alpha, tau, z, ecfg) * theta2_value(alpha + eps, tau, z0, ecfg);
  Complex rhs{0.0, 0.0};
  for (const auto& sigma : all_half_chars(g)) {
    const Complex t = theta_value(eps, sigma, tau, z, ecfg);
    const double sign = alpha.dot(sigma) ? -1.0 : 1.0;
    rhs += sign * t * t;
  }
  rhs *= std::pow(2.0, -g);
  return make_report("tT", g, lhs, rhs, tol, &tau,
                     "alpha=" + alpha.str() + " eps=" + eps.str());
}

IdentityReport riemann_addition_signed_residual(const HalfChar& eps, const HalfChar& delta,
                                                const PeriodMatrix& tau,
                                                const Eigen::VectorXcd& z, const EvalConfig& cfg,
                                                double tol) {
  const int g = tau.genus();
  const EvalConfig ecfg = tighten(cfg, tol);
  const Eigen::VectorXcd z0 = Eigen::VectorXcd::Zero(g);
  Complex lhs{0.0, 0.0};
  for (const auto& alpha : all_half_chars(g)) {
    const double sign = alpha.dot(delta) ? -1.0 : 1.0;
    lhs += sign * theta2_value(alpha, tau, z, ecfg) * theta2_value(alpha + eps, tau, z0, ecfg);
  }
  const Complex t = theta_value(eps, delta, tau, z, ecfg);
  return make_report("tT2", g, lhs, t * t, tol, &tau,
                     "eps=" + eps.str() + " delta=" + delta.str());
}

GradMatrixC matrix_C(const Characteristic& ch, const PeriodMatrix& tau, const EvalConfig& cfg) {
  if (!is_odd(ch)) throw std::invalid_argument("matrix_C: characteristic must be odd");
  const Eigen::VectorXcd grad = theta_jet(ch.eps, ch.delta, tau, cfg).grad;
  GradMatrixC out;
  out.ch = ch;
  out.mat = 2.0 * grad * grad.transpose();
  return out;
}

HessMatrixA matrix_A(const HalfChar& eps, const HalfChar& delta, const PeriodMatrix& tau,
                     const EvalConfig& cfg) {
  const ThetaJet je = theta2_jet(eps, tau, cfg);
  const ThetaJet jd = theta2_jet(delta, tau, cfg);
  HessMatrixA out;
  out.eps = eps;
  out.delta = delta;
  out.mat = jd.hess * je.value - je.hess * jd.value;
  return out;
}

LemmaACReports lemma_AC_residual(const HalfChar& eps, const HalfChar& delta,
                                 const PeriodMatrix& tau, const EvalConfig& cfg, double tol) {
  const int g = tau.genus();
  const EvalConfig ecfg = tighten(cfg, tol);
  const Characteristic ch(eps, delta);

  // One second-order jet per alpha serves every A in both sums.
  std::map<unsigned, ThetaJet> theta2;
  for (const auto& a : all_half_chars(g)) theta2[a.index()] = theta2_jet(a, tau, ecfg);
  auto a_matrix = [&](const HalfChar& e2, const HalfChar& d2) {
    const ThetaJet& je = theta2.at(e2.index());
    const ThetaJet& jd = theta2.at(d2.index());
    return Eigen::MatrixXcd(jd.hess * je.value - je.hess * jd.value);
  };

  const Eigen::MatrixXcd C =
      is_odd(ch) ? matrix_C(ch, tau, ecfg).mat : Eigen::MatrixXcd::Zero(g, g).eval();
  Eigen::MatrixXcd rhs3 = Eigen::MatrixXcd::Zero(g, g);
  for (const auto& a : all_half_chars(g)) {
    const double sign = a.dot(delta) ? -1.0 : 1.0;
    rhs3 += sign * a_matrix(eps + a, a);
  }
  rhs3 *= 0.5;

  // Lemma 4 with the supplied delta in the alpha role.
  const Eigen::MatrixXcd A = a_matrix(eps + delta, delta);
  Eigen::MatrixXcd rhs4 = Eigen::MatrixXcd::Zero(g, g);
  for (const auto& b : all_half_chars(g)) {
    if (Characteristic cb(eps, b); is_odd(cb)) {
      const double sign = delta.dot(b) ? -1.0 : 1.0;
      rhs4 += sign * matrix_C(cb, tau, ecfg).mat;
    }
  }
  rhs4 *= std::pow(2.0, 1 - g);

  LemmaACReports out;
  out.lemma3 = entrywise_report("lemmaAC:3", g, C, rhs3, tol, &tau,
                                "eps=" + eps.str() + " delta=" + delta.str());
  out.lemma4 = entrywise_report("lemmaAC:4", g, A, rhs4, tol, &tau,
                                "eps=" + eps.str() + " alpha=" + delta.str());
  return out;
}

RatioResult first_generalization(const HalfChar& eps, const HalfChar& delta,
                                 const PeriodMatrix& tau, const EvalConfig& cfg,
                                 std::optional<Complex> c, double tol) {
  if (eps == delta) throw std::invalid_argument("first_generalization: eps != delta required");
  const int g = tau.genus();
  const EvalConfig ecfg = tighten(cfg, tol);
  const ThetaData te = theta2_full(eps, tau, ecfg);
  const ThetaData td = theta2_full(delta, tau, ecfg);
  const DetBSide lhs = det_B_side(te, td);
  const Complex rhs = jacobian_subset_sum(eps + delta, delta, tau, ecfg);

  RatioResult out;
  out.lhs = lhs.det;
  out.rhs = rhs;
  const double s = std::max(std::abs(lhs.det), std::abs(rhs));
  if (!c) {
    if (s < 1e-13 || std::abs(lhs.det) < 1e-8 * s)
      throw DegenerateSample("first_generalization: near a zero, resample tau");
    out.ratio = rhs / lhs.det;
  } else {
    out.ratio = std::abs(lhs.det) > 0 ? rhs / lhs.det : Complex{0, 0};
    out.report = make_report("Eq", g, *c * lhs.det, rhs, tol, &tau,
                             "eps=" + eps.str() + " delta=" + delta.str());
  }
  return out;
}

RatioResult second_generalization(const std::vector<HalfChar>& eps_list, const PeriodMatrix& tau,
                                  const EvalConfig& cfg, std::optional<Complex> c, double tol) {
  const int g = tau.genus();
  const int n_vars = g * (g + 1) / 2;
  if (static_cast<int>(eps_list.size()) != n_vars + 1)
    throw std::invalid_argument("second_generalization: need g(g+1)/2 + 1 characteristics");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (eps_list[i].genus() != g)
      throw std::invalid_argument("second_generalization: genus mismatch");
    for (std::size_t j = i + 1; j < eps_list.size(); ++j)
      if (eps_list[i] == eps_list[j])
        throw std::invalid_argument("second_generalization: characteristics must be distinct");
  }
  const EvalConfig ecfg = tighten(cfg, tol);

  std::vector<ThetaData> data;
  data.reserve(eps_list.size());
  for (const auto& e : eps_list) data.push_back(theta2_full(e, tau, ecfg));

  Eigen::MatrixXcd M(n_vars + 1, n_vars + 1);
  for (int k = 0; k <= n_vars; ++k) {
    M(0, k) = data[static_cast<std::size_t>(k)].jet.value;
    int row = 1;
    for (int i = 0; i < g; ++i)
      for (int j = i; j < g; ++j, ++row) M(row, k) = data[static_cast<std::size_t>(k)].dtau(i, j);
  }
  const Complex theta0 = data[0].jet.value;
  const Complex lhs = std::pow(theta0, n_vars - 1) * M.determinant();

  // Flattened C vectors per delta_k = eps0 + eps_k and odd-making beta.
  std::vector<std::vector<HalfChar>> betas(static_cast<std::size_t>(n_vars));
  std::vector<std::vector<Eigen::VectorXcd>> cvecs(static_cast<std::size_t>(n_vars));
  for (int k = 1; k <= n_vars; ++k) {
    const HalfChar dk = eps_list[0] + eps_list[static_cast<std::size_t>(k)];
    for (const auto& b : odd_making_alphas(dk)) {
      const Eigen::VectorXcd grad = theta_jet(dk, b, tau, ecfg).grad;
      Eigen::VectorXcd flat(n_vars);
      int r = 0;
      for (int i = 0; i < g; ++i)
        for (int j = i; j < g; ++j, ++r) flat(r) = 2.0 * grad(i) * grad(j);
      betas[static_cast<std::size_t>(k - 1)].push_back(b);
      cvecs[static_cast<std::size_t>(k - 1)].push_back(flat);
    }
  }

  Complex rhs{0.0, 0.0};
  std::vector<int> pick(static_cast<std::size_t>(n_vars), 0);
  for (;;) {
    int sign_exp = 0;
    Eigen::MatrixXcd W(n_vars, n_vars);
    for (int k = 0; k < n_vars; ++k) {
      const auto& b = betas[static_cast<std::size_t>(k)][static_cast<std::size_t>(pick[static_cast<std::size_t>(k)])];
      sign_exp += eps_list[static_cast<std::size_t>(k + 1)].dot(b);
      W.col(k) = cvecs[static_cast<std::size_t>(k)][static_cast<std::size_t>(pick[static_cast<std::size_t>(k)])];
    }
    rhs += (sign_exp % 2 ? -1.0 : 1.0) * W.determinant();
    int k = n_vars - 1;
    for (; k >= 0; --k) {
      if (pick[static_cast<std::size_t>(k)] + 1 <
          static_cast<int>(betas[static_cast<std::size_t>(k)].size())) {
        ++pick[static_cast<std::size_t>(k)];
        break;
      }
      pick[static_cast<std::size_t>(k)] = 0;
    }
    if (k < 0) break;
  }

  RatioResult out;
  out.lhs = lhs;
  out.rhs = rhs;
  const double s = std::max(std::abs(lhs), std::abs(rhs));
  if (!c) {
    if (s < 1e-13 || std::abs(lhs) < 1e-8 * s)
      throw DegenerateSample("second_generalization: near a zero, resample tau");
    out.ratio = rhs / lhs;
  } else {
    out.ratio = std::abs(lhs) > 0 ? rhs / lhs : Complex{0, 0};
    std::string note = "eps0=" + eps_list[0].str();
    out.report = make_report("secondgen", g, *c * lhs, rhs, tol, &tau, note);
  }
  return out;
}

IdentityReport cor_vanishing(const HalfChar& eps, const HalfChar& delta, const PeriodMatrix& tau,
                             const EvalConfig& cfg, double tol) {
  const int g = tau.genus();
  if (g < 2) throw std::invalid_argument("cor_vanishing: g >= 2 required");
  const EvalConfig ecfg = tighten(cfg, tol);
  std::map<unsigned, ThetaJet> theta2;
  for (const auto& a : all_half_chars(g)) theta2[a.index()] = theta2_jet(a, tau, ecfg);
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(g, g);
  for (const auto& a : all_half_chars(g)) {
    const ThetaJet& je = theta2.at((eps + a).index());
    const ThetaJet& jd = theta2.at(a.index());
    const double sign = a.dot(delta) ? -1.0 : 1.0;
    sum += sign * (jd.hess * je.value - je.hess * jd.value);
  }
  const Complex d = sum.determinant();
  const double entry_scale = sum.cwiseAbs().maxCoeff();

  IdentityReport r;
  r.identity_id = "cor";
  r.genus = g;
  r.lhs = d;
  r.rhs = Complex{0.0, 0.0};
  r.residual = std::abs(d);
  r.scale = entry_scale;
  r.tol = tol;
  r.pass = r.residual <= tol * std::pow(std::max(entry_scale, 1.0), g);
  r.note = "pass bound tol*scale^g; eps=" + eps.str() + " delta=" + delta.str();
  r.tau = tau.tau();
  return r;
}

std::vector<IdentityReport> genus2_relations(const PeriodMatrix& tau, const EvalConfig& cfg,
                                             const Catalog& catalog, double tol) {
  if (tau.genus() != 2) throw std::invalid_argument("genus2_relations: g = 2 required");
  const EvalConfig ecfg = tighten(cfg, tol);
  const auto c_gen2 = catalog.find("gen2", 2);
  if (!c_gen2) throw std::invalid_argument("genus2_relations: no frozen constant for gen2");
  const Complex c = c_gen2->to_complex();

  const HalfChar h00 = HalfChar::from_string("00"), h01 = HalfChar::from_string("01"),
                 h10 = HalfChar::from_string("10"), h11 = HalfChar::from_string("11");
  const ThetaData t00 = theta2_full(h00, tau, ecfg), t10 = theta2_full(h10, tau, ecfg),
                  t01 = theta2_full(h01, tau, ecfg), t11 = theta2_full(h11, tau, ecfg);

  std::vector<IdentityReport> out;

  // Main relation: Theta[10]^4 det D(Theta[00]/Theta[10]) = c D([10,10],[10,11])^2.
  const DetBSide b0 = det_B_side(t00, t10);
  const Complex D = jacobian_determinant({Characteristic::from_string("10|10"),
                                          Characteristic::from_string("10|11")},
                                         tau, ecfg);
  out.push_back(make_report("gen2:main", 2, b0.det, c * D * D, tol, &tau,
                            "constant " + c_gen2->str()));

  // Four-term relation: det B(00,10) + det B(01,11) = 0, off-diagonal
  // derivative entries halved.
  const DetBSide b1 = det_B_side(t01, t11);
  {
    IdentityReport r = make_report("gen2:four-term", 2, b0.det + b1.det, Complex{0.0, 0.0}, tol,
                                   &tau, "scale from the two determinants");
    r.scale = std::max(std::abs(b0.det), std::abs(b1.det));
    r.pass = r.residual <= tol * std::max(r.scale, 1.0);
    out.push_back(r);
  }

  // Three equivalent forms of the right-hand side.
  const std::vector<Characteristic> evens = {
      Characteristic::from_string("11|00"), Characteristic::from_string("11|11"),
      Characteristic::from_string("01|00"), Characteristic::from_string("01|10")};
  Complex prod{1.0, 0.0};
  for (const auto& ch : evens) prod *= theta_jet(ch.eps, ch.delta, tau, ecfg).value;
  const Complex f_direct = b0.det;
  const Complex f_jac1 = c * prod * prod;

  std::map<unsigned, Complex> theta2v;
  for (const auto& a : all_half_chars(2))
    theta2v[a.index()] = theta2_jet(a, tau, ecfg).value;
  Complex prod_tT2{1.0, 0.0};
  for (const auto& ch : evens) {
    Complex sq{0.0, 0.0};
    for (const auto& a : all_half_chars(2)) {
      const double sign = a.dot(ch.delta) ? -1.0 : 1.0;
      sq += sign * theta2v.at(a.index()) * theta2v.at((a + ch.eps).index());
    }
    prod_tT2 *= sq;
  }
  const Complex f_tT2 = c * prod_tT2;

  out.push_back(make_report("gen2:forms-direct-vs-jac1", 2, f_direct, f_jac1, tol, &tau));
  out.push_back(make_report("gen2:forms-direct-vs-tT2", 2, f_direct, f_tT2, tol, &tau));
  out.push_back(make_report("gen2:forms-jac1-vs-tT2", 2, f_jac1, f_tT2, tol, &tau));
  return out;
}

Eigen::MatrixXcd symplectic_apply(const SymplecticElement& M, const PeriodMatrix& tau) {
  const Eigen::MatrixXcd A = M.A.cast<double>().cast<Complex>();
  const Eigen::MatrixXcd B = M.B.cast<double>().cast<Complex>();
  const Eigen::MatrixXcd C = M.C.cast<double>().cast<Complex>();
  const Eigen::MatrixXcd D = M.D.cast<double>().cast<Complex>();
  const Eigen::MatrixXcd CtD = C * tau.tau() + D;
  const Eigen::MatrixXcd result = (A * tau.tau() + B) * CtD.inverse();
  return 0.5 * (result + result.transpose().eval());
}

IdentityReport transformation_check(const SymplecticElement& M, const Characteristic& ch,
                                    const PeriodMatrix& tau, const EvalConfig& cfg, double tol,
                                    bool assert_eighth_root) {
  if (!M.is_symplectic())
    throw std::invalid_argument("transformation_check: M not symplectic");
  const int g = tau.genus();
  if (M.genus() != g || ch.genus() != g)
    throw std::invalid_argument("transformation_check: genus mismatch");
  EvalConfig ecfg = tighten(cfg, tol);
  // Im(M.tau) can be much flatter than Im(tau); allow the radius to grow.
  ecfg.max_radius = std::max(ecfg.max_radius, 800);

  const Eigen::MatrixXcd C = M.C.cast<double>().cast<Complex>();
  const Eigen::MatrixXcd D = M.D.cast<double>().cast<Complex>();
  const Eigen::MatrixXcd CtD = C * tau.tau() + D;
  const Complex jdet = CtD.determinant();
  const Complex sq = std::sqrt(jdet);  // principal branch; only |r| and r^8 asserted

  const PeriodMatrix tau2(symplectic_apply(M, tau));
  const Characteristic ch2 = act_on_characteristic(M, ch);

  Complex r;
  double vec_residual = 0.0;
  if (is_even(ch)) {
    const Complex v = theta_jet(ch2.eps, ch2.delta, tau2, ecfg).value;
    const Complex w = sq * theta_jet(ch.eps, ch.delta, tau, ecfg).value;
    r = v / w;
  } else {
    const Eigen::VectorXcd v1 = theta_jet(ch2.eps, ch2.delta, tau2, ecfg).grad;
    const Eigen::VectorXcd v2 = sq * (CtD * theta_jet(ch.eps, ch.delta, tau, ecfg).grad);
    Eigen::Index k = 0;
    v2.cwiseAbs().maxCoeff(&k);
    r = v1(k) / v2(k);
    vec_residual = (v1 - r * v2).norm() / std::max(v1.norm(), 1e-300);
  }
  const Complex r8 = std::pow(r, 8);
  double residual = std::abs(std::abs(r) - 1.0);
  if (assert_eighth_root) residual = std::max(residual, std::abs(r8 - Complex{1.0, 0.0}));
  residual = std::max(residual, vec_residual);

  IdentityReport rep;
  rep.identity_id = "transform";
  rep.genus = g;
  rep.lhs = r;
  rep.rhs = r8;
  rep.residual = residual;
  rep.scale = 1.0;
  rep.tol = tol;
  rep.pass = residual <= tol;
  rep.note = std::string(is_even(ch) ? "value ratio" : "gradient ratio") + " char=" + ch.str() +
             (assert_eighth_root ? "; r^8 asserted" : "");
  rep.tau = tau.tau();
  return rep;
}

IdentityReport jacobian_weight_check(const SymplecticElement& M,
                                     const std::vector<Characteristic>& odd_chars,
                                     const PeriodMatrix& tau, const EvalConfig& cfg, double tol) {
  const int g = tau.genus();
  EvalConfig ecfg = tighten(cfg, tol);
  ecfg.max_radius = std::max(ecfg.max_radius, 800);
  const Eigen::MatrixXcd C = M.C.cast<double>().cast<Complex>();
  const Eigen::MatrixXcd D = M.D.cast<double>().cast<Complex>();
  const Complex jdet = (C * tau.tau() + D).determinant();
  const PeriodMatrix tau2(symplectic_apply(M, tau));
  const double lhs = std::abs(jacobian_determinant(odd_chars, tau2, ecfg));
  const double rhs = std::pow(std::abs(jdet), 0.5 * g + 1.0) *
                     std::abs(jacobian_determinant(odd_chars, tau, ecfg));
  return make_report("transform:weight", g, Complex(lhs, 0.0), Complex(rhs, 0.0), tol, &tau,
                     "|D(M.tau)| vs |det(C tau + D)|^{g/2+1} |D(tau)|");
}

std::vector<SymplecticElement> sample_gamma48_elements(int g, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto random_upper = [&]() {
    IntMatrix B = IntMatrix::Zero(g, g);
    for (int i = 0; i < g; ++i)
      for (int j = i; j < g; ++j) {
        const std::int64_t k = static_cast<std::int64_t>(rng() % 3) - 1;  // in {-1,0,1}
        B(i, j) = B(j, i) = (i == j ? 8 : 4) * k;
      }
    return B;
  };
  // Lower blocks stay sparse (one entry) so Im(M.tau) keeps the truncation
  // radius reasonable.
  auto random_lower = [&]() {
    IntMatrix C = IntMatrix::Zero(g, g);
    const int i = static_cast<int>(rng() % static_cast<std::uint64_t>(g));
    const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(g));
    const std::int64_t sgn = (rng() % 2) ? 1 : -1;
    C(i, j) = C(j, i) = (i == j ? 8 : 4) * sgn;
    return C;
  };
  std::vector<SymplecticElement> out;
  while (static_cast<int>(out.size()) < count) {
    SymplecticElement M = SymplecticElement::translation(random_upper()) *
                          SymplecticElement::lower_translation(random_lower()) *
                          SymplecticElement::translation(random_upper());
    if (level_membership(M, 4) != LevelClass::Gamma_n_2n)
      throw std::logic_error("sample_gamma48_elements: generator product left Gamma(4,8)");
    out.push_back(std::move(M));
  }
  return out;
}

Eigen::MatrixXcd p_matrix(const PeriodMatrix& tau, const EvalConfig& cfg) {
  const int g = tau.genus();
  const int n_vars = g * (g + 1) / 2;
  const auto eps_all = all_half_chars(g);
  Eigen::MatrixXcd P(n_vars + 1, static_cast<int>(eps_all.size()));
  for (int c = 0; c < static_cast<int>(eps_all.size()); ++c) {
    const ThetaData d = theta2_full(eps_all[static_cast<std::size_t>(c)], tau, cfg);
    P(0, c) = d.jet.value;
    int row = 1;
    for (int i = 0; i < g; ++i)
      for (int j = i; j < g; ++j, ++row) P(row, c) = d.dtau(i, j);
  }
  return P;
}

ReducibilityProfile reducibility_profile(const PeriodMatrix& tau, int k, const EvalConfig& cfg) {
  const int g = tau.genus();
  if (k < 1 || k >= g) throw std::invalid_argument("reducibility_profile: need 1 <= k < g");
  ReducibilityProfile out;
  out.k = k;
  for (const auto& ch : odd_characteristics(g)) {
    const Eigen::VectorXcd grad = theta_jet(ch.eps, ch.delta, tau, cfg).grad;
    std::vector<std::uint8_t> e1(ch.eps.bits().begin(), ch.eps.bits().begin() + k);
    std::vector<std::uint8_t> d1(ch.delta.bits().begin(), ch.delta.bits().begin() + k);
    const bool head_even = is_even(Characteristic(HalfChar(e1), HalfChar(d1)));
    ReducibilityProfile::Entry entry;
    entry.ch = ch;
    entry.head_even = head_even;
    for (int i = 0; i < g; ++i) {
      const bool designated = head_even ? (i < k) : (i >= k);
      const double a = std::abs(grad(i));
      if (designated)
        entry.designated_max = std::max(entry.designated_max, a);
      else
        entry.other_max = std::max(entry.other_max, a);
    }
    out.entries.push_back(entry);
  }
  const Eigen::MatrixXcd P = p_matrix(tau, cfg);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(P);
  const auto& sv = svd.singularValues();
  out.singular_values.assign(sv.data(), sv.data() + sv.size());
  double des_max = 0.0;
  for (const auto& e : out.entries) des_max = std::max(des_max, e.designated_max);
  const double smax = out.singular_values.front();
  const double smin = out.singular_values.back();
  out.verdict = (des_max < 1e-8 && smin <= 1e-8 * smax) ? "consistent-with-reducible"
                                                        : "irreducible-at-this-basis";
  return out;
}

ConstantEstimate estimate_constant(const std::string& identity_id, int genus, int n_taus,
                                   std::uint64_t seed, const EvalConfig& cfg,
                                   double dispersion_tol) {
  if (n_taus < 3) throw std::invalid_argument("estimate_constant: need >= 3 tau samples");
  ConstantEstimate out;
  out.identity_id = identity_id;
  out.genus = genus;
  TauSampler sampler(seed, genus);

  auto sample_ratios = [&](const PeriodMatrix& tau) {
    std::vector<ConstantSample> got;
    if (identity_id == "Eq") {
      for (const auto& e : all_half_chars(genus))
        for (const auto& d : all_half_chars(genus)) {
          if (e == d) continue;
          const RatioResult r = first_generalization(e, d, tau, cfg, std::nullopt, 1e-9);
          // constant convention: c * LHS = RHS
          got.push_back({tau.tau(), r.ratio, "eps=" + e.str() + " delta=" + d.str()});
        }
    } else if (identity_id == "secondgen") {
      const auto chars = all_half_chars(genus);
      const int need = genus * (genus + 1) / 2 + 1;
      for (std::size_t lead = 0; lead < chars.size(); ++lead) {
        std::vector<HalfChar> list;
        list.push_back(chars[lead]);
        for (std::size_t i = 0; i < chars.size() && static_cast<int>(list.size()) < need; ++i)
          if (i != lead) list.push_back(chars[i]);
        if (static_cast<int>(list.size()) < need) continue;
        const RatioResult r = second_generalization(list, tau, cfg, std::nullopt, 1e-9);
        got.push_back({tau.tau(), r.ratio, "eps0=" + chars[lead].str()});
      }
    } else if (identity_id == "gen2") {
      if (genus != 2) throw std::invalid_argument("estimate_constant: gen2 needs genus 2");
      const EvalConfig ecfg = tighten(cfg, 1e-9);
      const ThetaData t00 = theta2_full(HalfChar::from_string("00"), tau, ecfg);
      const ThetaData t10 = theta2_full(HalfChar::from_string("10"), tau, ecfg);
      const DetBSide b = det_B_side(t00, t10);
      const Complex D = jacobian_determinant({Characteristic::from_string("10|10"),
                                              Characteristic::from_string("10|11")},
                                             tau, ecfg);
      const Complex rhs = D * D;
      const double s = std::max(std::abs(b.det), std::abs(rhs));
      if (s < 1e-13 || std::abs(rhs) < 1e-8 * s)
        throw DegenerateSample("gen2 ratio near a zero");
      got.push_back({tau.tau(), b.det / rhs, "gen2"});
    } else {
      throw std::invalid_argument("estimate_constant: no constant for identity " + identity_id);
    }
    return got;
  };

  for (int i = 0; i < n_taus; ++i) {
    for (int attempt = 0;; ++attempt) {
      const PeriodMatrix tau = sampler.next();
      try {
        auto got = sample_ratios(tau);
        for (auto& s : got) out.samples.push_back(std::move(s));
        break;
      } catch (const DegenerateSample&) {
        if (attempt >= 10) throw;
      }
    }
  }

  Complex mean{0.0, 0.0};
  for (const auto& s : out.samples) mean += s.ratio;
  mean /= static_cast<double>(out.samples.size());
  out.value = mean;
  double disp = 0.0;
  for (std::size_t i = 0; i < out.samples.size(); ++i)
    for (std::size_t j = i + 1; j < out.samples.size(); ++j)
      disp = std::max(disp, std::abs(out.samples[i].ratio - out.samples[j].ratio));
  const double m = std::abs(mean);
  if (m < 1e-300) throw DispersionTooHigh("estimate_constant: mean ratio is zero");
  out.dispersion = disp / m;
  if (out.dispersion > dispersion_tol)
    throw DispersionTooHigh("estimate_constant: dispersion " + std::to_string(out.dispersion) +
                            " exceeds tolerance");
  out.exact = detect_exact_constant(mean);
  return out;
}

}  // namespace thetaver
