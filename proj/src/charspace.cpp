#include "thetaver/charspace.hpp"

#include <algorithm>

namespace thetaver {

HalfChar::HalfChar(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw std::invalid_argument("HalfChar: genus must be >= 1");
  for (auto b : bits_)
    if (b > 1) throw std::invalid_argument("HalfChar: entries must be 0 or 1");
}

HalfChar HalfChar::zero(int g) { return HalfChar(std::vector<std::uint8_t>(g, 0)); }

HalfChar HalfChar::from_index(int g, unsigned idx) {
  std::vector<std::uint8_t> bits(g, 0);
  for (int i = 0; i < g; ++i) bits[i] = (idx >> (g - 1 - i)) & 1u;
  return HalfChar(std::move(bits));
}

HalfChar HalfChar::from_string(std::string_view s) {
  std::vector<std::uint8_t> bits;
  bits.reserve(s.size());
  for (char ch : s) {
    if (ch != '0' && ch != '1') throw std::invalid_argument("HalfChar: bad bit string");
    bits.push_back(ch == '1' ? 1 : 0);
  }
  return HalfChar(std::move(bits));
}

unsigned HalfChar::index() const {
  unsigned v = 0;
  for (auto b : bits_) v = (v << 1) | b;
  return v;
}

HalfChar HalfChar::operator+(const HalfChar& o) const {
  if (genus() != o.genus()) throw std::invalid_argument("HalfChar: genus mismatch");
  std::vector<std::uint8_t> bits(bits_.size());
  for (std::size_t i = 0; i < bits_.size(); ++i) bits[i] = bits_[i] ^ o.bits_[i];
  return HalfChar(std::move(bits));
}

int HalfChar::dot(const HalfChar& o) const {
  if (genus() != o.genus()) throw std::invalid_argument("HalfChar: genus mismatch");
  int s = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i) s += bits_[i] & o.bits_[i];
  return s & 1;
}

std::string HalfChar::str() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

bool operator<(const HalfChar& a, const HalfChar& b) {
  if (a.genus() != b.genus()) return a.genus() < b.genus();
  return a.index() < b.index();
}

Characteristic::Characteristic(HalfChar e, HalfChar d) : eps(std::move(e)), delta(std::move(d)) {
  if (eps.genus() != delta.genus())
    throw std::invalid_argument("Characteristic: eps/delta genus mismatch");
}

Characteristic Characteristic::from_string(std::string_view s) {
  auto bar = s.find('|');
  if (bar == std::string_view::npos)
    throw std::invalid_argument("Characteristic: expected \"eps|delta\"");
  return Characteristic(HalfChar::from_string(s.substr(0, bar)),
                        HalfChar::from_string(s.substr(bar + 1)));
}

unsigned Characteristic::index() const {
  return (eps.index() << genus()) | delta.index();
}

bool operator<(const Characteristic& a, const Characteristic& b) {
  if (a.genus() != b.genus()) return a.genus() < b.genus();
  return a.index() < b.index();
}

Parity parity(const Characteristic& c) {
  return c.eps.dot(c.delta) ? Parity::Odd : Parity::Even;
}

bool is_azygetic(const Characteristic& c1, const Characteristic& c2, const Characteristic& c3) {
  if (c1.genus() != c2.genus() || c1.genus() != c3.genus())
    throw std::invalid_argument("is_azygetic: genus mismatch");
  const HalfChar es = c1.eps + c2.eps + c3.eps;
  const HalfChar ds = c1.delta + c2.delta + c3.delta;
  const int e = c1.eps.dot(c1.delta) ^ c2.eps.dot(c2.delta) ^ c3.eps.dot(c3.delta) ^ es.dot(ds);
  return e == 1;
}

std::vector<HalfChar> all_half_chars(int g) {
  std::vector<HalfChar> out;
  out.reserve(1u << g);
  for (unsigned i = 0; i < (1u << g); ++i) out.push_back(HalfChar::from_index(g, i));
  return out;
}

std::vector<Characteristic> all_characteristics(int g) {
  std::vector<Characteristic> out;
  out.reserve(1u << (2 * g));
  for (unsigned e = 0; e < (1u << g); ++e)
    for (unsigned d = 0; d < (1u << g); ++d)
      out.emplace_back(HalfChar::from_index(g, e), HalfChar::from_index(g, d));
  return out;
}

std::vector<Characteristic> odd_characteristics(int g) {
  std::vector<Characteristic> out;
  for (const auto& c : all_characteristics(g))
    if (is_odd(c)) out.push_back(c);
  return out;
}

std::vector<Characteristic> even_characteristics(int g) {
  std::vector<Characteristic> out;
  for (const auto& c : all_characteristics(g))
    if (is_even(c)) out.push_back(c);
  return out;
}

bool is_special_fundamental_system(const FundamentalSystem& sys) {
  if (sys.empty()) return false;
  const int g = sys[0].genus();
  if (static_cast<int>(sys.size()) != 2 * g + 2) return false;
  for (int i = 0; i < g; ++i)
    if (!is_odd(sys[i])) return false;
  for (int i = g; i < 2 * g + 2; ++i)
    if (!is_even(sys[i])) return false;
  const int n = 2 * g + 2;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        if (!is_azygetic(sys[i], sys[j], sys[k])) return false;
  return true;
}

namespace {

// DFS over ordered tuples, pruning each new characteristic against all
// earlier pairs; the full triple recheck happens only at the leaves.
void dfs_systems(const std::vector<Characteristic>& odd, const std::vector<Characteristic>& even,
                 int g, FundamentalSystem& cur, std::vector<FundamentalSystem>& out,
                 std::size_t limit, std::size_t& count, bool collect) {
  const int n = 2 * g + 2;
  const int pos = static_cast<int>(cur.size());
  if (pos == n) {
    ++count;
    if (collect) {
      if (!is_special_fundamental_system(cur))
        throw std::logic_error("fundamental system search produced an invalid leaf");
      out.push_back(cur);
    }
    return;
  }
  const auto& pool = pos < g ? odd : even;
  for (const auto& cand : pool) {
    if (std::find(cur.begin(), cur.end(), cand) != cur.end()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < cur.size() && ok; ++i)
      for (std::size_t j = i + 1; j < cur.size() && ok; ++j)
        if (!is_azygetic(cur[i], cur[j], cand)) ok = false;
    if (!ok) continue;
    cur.push_back(cand);
    dfs_systems(odd, even, g, cur, out, limit, count, collect);
    cur.pop_back();
    if (limit && collect && out.size() >= limit) return;
  }
}

}  // namespace

std::vector<FundamentalSystem> find_special_fundamental_systems(int g, std::size_t limit) {
  if (g < 1 || g > 3) throw std::invalid_argument("fundamental system search supports 1 <= g <= 3");
  const auto odd = odd_characteristics(g);
  const auto even = even_characteristics(g);
  std::vector<FundamentalSystem> out;
  FundamentalSystem cur;
  std::size_t count = 0;
  dfs_systems(odd, even, g, cur, out, limit, count, /*collect=*/true);
  return out;
}

FundamentalSystemCount count_special_fundamental_systems(int g) {
  if (g < 1 || g > 2) throw std::invalid_argument("exhaustive system count supports g <= 2");
  const auto odd = odd_characteristics(g);
  const auto even = even_characteristics(g);
  std::vector<FundamentalSystem> out;
  FundamentalSystem cur;
  std::size_t count = 0;
  dfs_systems(odd, even, g, cur, out, 0, count, /*collect=*/false);
  std::size_t perms = 1;
  for (int i = 2; i <= g; ++i) perms *= static_cast<std::size_t>(i);
  for (int i = 2; i <= g + 2; ++i) perms *= static_cast<std::size_t>(i);
  return FundamentalSystemCount{count, count / perms};
}

SymplecticElement SymplecticElement::identity(int g) {
  SymplecticElement m;
  m.A = IntMatrix::Identity(g, g);
  m.B = IntMatrix::Zero(g, g);
  m.C = IntMatrix::Zero(g, g);
  m.D = IntMatrix::Identity(g, g);
  return m;
}

SymplecticElement SymplecticElement::J(int g) {
  SymplecticElement m;
  m.A = IntMatrix::Zero(g, g);
  m.B = -IntMatrix::Identity(g, g);
  m.C = IntMatrix::Identity(g, g);
  m.D = IntMatrix::Zero(g, g);
  return m;
}

SymplecticElement SymplecticElement::translation(const IntMatrix& Bsym) {
  if (Bsym != Bsym.transpose()) throw std::invalid_argument("translation: B must be symmetric");
  SymplecticElement m = identity(static_cast<int>(Bsym.rows()));
  m.B = Bsym;
  return m;
}

SymplecticElement SymplecticElement::lower_translation(const IntMatrix& Csym) {
  if (Csym != Csym.transpose())
    throw std::invalid_argument("lower_translation: C must be symmetric");
  SymplecticElement m = identity(static_cast<int>(Csym.rows()));
  m.C = Csym;
  return m;
}

SymplecticElement SymplecticElement::from_blocks(IntMatrix A, IntMatrix B, IntMatrix C,
                                                 IntMatrix D) {
  SymplecticElement m;
  m.A = std::move(A);
  m.B = std::move(B);
  m.C = std::move(C);
  m.D = std::move(D);
  return m;
}

SymplecticElement SymplecticElement::operator*(const SymplecticElement& o) const {
  SymplecticElement m;
  m.A = A * o.A + B * o.C;
  m.B = A * o.B + B * o.D;
  m.C = C * o.A + D * o.C;
  m.D = C * o.B + D * o.D;
  return m;
}

IntMatrix SymplecticElement::full() const {
  const int g = genus();
  IntMatrix m(2 * g, 2 * g);
  m.block(0, 0, g, g) = A;
  m.block(0, g, g, g) = B;
  m.block(g, 0, g, g) = C;
  m.block(g, g, g, g) = D;
  return m;
}

bool SymplecticElement::is_symplectic() const {
  const int g = genus();
  IntMatrix Jm(2 * g, 2 * g);
  Jm.setZero();
  Jm.block(0, g, g, g) = IntMatrix::Identity(g, g);
  Jm.block(g, 0, g, g) = -IntMatrix::Identity(g, g);
  const IntMatrix m = full();
  return m.transpose() * Jm * m == Jm;
}

Characteristic act_on_characteristic(const SymplecticElement& M, const Characteristic& c) {
  if (!M.is_symplectic()) throw std::invalid_argument("act_on_characteristic: M not symplectic");
  const int g = c.genus();
  if (M.genus() != g) throw std::invalid_argument("act_on_characteristic: genus mismatch");
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> e(g), d(g);
  for (int i = 0; i < g; ++i) {
    e(i) = c.eps[i];
    d(i) = c.delta[i];
  }
  const IntMatrix CtD = M.C * M.D.transpose();
  const IntMatrix AtB = M.A * M.B.transpose();
  const auto ne = (M.D * e - M.C * d + CtD.diagonal()).eval();
  const auto nd = (-M.B * e + M.A * d + AtB.diagonal()).eval();
  std::vector<std::uint8_t> eb(g), db(g);
  for (int i = 0; i < g; ++i) {
    eb[i] = static_cast<std::uint8_t>(((ne(i) % 2) + 2) % 2);
    db[i] = static_cast<std::uint8_t>(((nd(i) % 2) + 2) % 2);
  }
  return Characteristic(HalfChar(std::move(eb)), HalfChar(std::move(db)));
}

LevelClass level_membership(const SymplecticElement& M, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("level_membership: n must be >= 1");
  const int g = M.genus();
  auto zero_mod = [](const IntMatrix& m, std::int64_t k) {
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        if (((m(i, j) % k) + k) % k != 0) return false;
    return true;
  };
  const IntMatrix I = IntMatrix::Identity(g, g);
  const bool in_n = zero_mod(M.A - I, n) && zero_mod(M.D - I, n) && zero_mod(M.B, n) &&
                    zero_mod(M.C, n);
  if (!in_n) return LevelClass::Full;
  const IntMatrix AtB = M.A * M.B.transpose();
  const IntMatrix CtD = M.C * M.D.transpose();
  auto diag_zero_mod = [](const IntMatrix& m, std::int64_t k) {
    for (int i = 0; i < m.rows(); ++i)
      if (((m(i, i) % k) + k) % k != 0) return false;
    return true;
  };
  if (diag_zero_mod(AtB, 2 * n) && diag_zero_mod(CtD, 2 * n)) return LevelClass::Gamma_n_2n;
  return LevelClass::Gamma_n;
}

}  // namespace thetaver
