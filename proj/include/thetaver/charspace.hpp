#pragma once
// Combinatorics of theta characteristics: parity, azygetic triples,
// special fundamental systems, and the symplectic action mod 2.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace thetaver {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// A half characteristic: a vector over Z/2 of length g. Entries are read
// left-to-right, so from_string("10") has bit 1 in coordinate 0.
class HalfChar {
 public:
  HalfChar() = default;
  explicit HalfChar(std::vector<std::uint8_t> bits);
  static HalfChar zero(int g);
  static HalfChar from_index(int g, unsigned idx);  // big-endian bit layout
  static HalfChar from_string(std::string_view s);

  int genus() const { return static_cast<int>(bits_.size()); }
  std::uint8_t operator[](int i) const { return bits_[static_cast<std::size_t>(i)]; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  // Canonical index: bits read as a big-endian binary number ("10" -> 2).
  unsigned index() const;

  HalfChar operator+(const HalfChar& o) const;  // componentwise mod 2
  int dot(const HalfChar& o) const;             // scalar product mod 2, in {0,1}

  std::string str() const;

  friend bool operator==(const HalfChar& a, const HalfChar& b) { return a.bits_ == b.bits_; }
  friend bool operator!=(const HalfChar& a, const HalfChar& b) { return !(a == b); }
  friend bool operator<(const HalfChar& a, const HalfChar& b);

 private:
  std::vector<std::uint8_t> bits_;
};

struct Characteristic {
  HalfChar eps;
  HalfChar delta;

  Characteristic() = default;
  Characteristic(HalfChar e, HalfChar d);
  static Characteristic from_string(std::string_view s);  // "eps|delta", e.g. "10|11"

  int genus() const { return eps.genus(); }
  unsigned index() const;  // eps.index() * 2^g + delta.index(); delta varies fastest
  std::string str() const { return eps.str() + "|" + delta.str(); }

  friend bool operator==(const Characteristic& a, const Characteristic& b) {
    return a.eps == b.eps && a.delta == b.delta;
  }
  friend bool operator!=(const Characteristic& a, const Characteristic& b) { return !(a == b); }
  friend bool operator<(const Characteristic& a, const Characteristic& b);
};

enum class Parity { Even, Odd };

Parity parity(const Characteristic& c);
inline bool is_odd(const Characteristic& c) { return parity(c) == Parity::Odd; }
inline bool is_even(const Characteristic& c) { return parity(c) == Parity::Even; }

// Sign invariant of a triple: azygetic iff
// (-1)^{e1.d1 + e2.d2 + e3.d3 + (e1+e2+e3).(d1+d2+d3)} = -1.
bool is_azygetic(const Characteristic& c1, const Characteristic& c2, const Characteristic& c3);
inline bool is_syzygetic(const Characteristic& c1, const Characteristic& c2,
                         const Characteristic& c3) {
  return !is_azygetic(c1, c2, c3);
}

// Canonical enumerations (delta varies fastest).
std::vector<HalfChar> all_half_chars(int g);
std::vector<Characteristic> all_characteristics(int g);
std::vector<Characteristic> odd_characteristics(int g);
std::vector<Characteristic> even_characteristics(int g);

// A special fundamental system: 2g+2 characteristics, the first g odd, the
// remaining g+2 even, every triple azygetic.
using FundamentalSystem = std::vector<Characteristic>;

bool is_special_fundamental_system(const FundamentalSystem& sys);

// Depth-first enumeration of ordered systems in lexicographic order, pruning
// on the azygetic condition as each characteristic is added; stops after
// `limit` systems (limit == 0 means no cap). Tractable for g <= 3.
std::vector<FundamentalSystem> find_special_fundamental_systems(int g, std::size_t limit);

struct FundamentalSystemCount {
  std::size_t ordered;    // ordered tuples (odd block first)
  std::size_t unordered;  // ordered / (g! * (g+2)!)
};
FundamentalSystemCount count_special_fundamental_systems(int g);  // exhaustive; g <= 2

// Integral symplectic 2g x 2g block matrix (A,B;C,D) with tM J M = J,
// J = (0,I;-I,0).
struct SymplecticElement {
  IntMatrix A, B, C, D;

  int genus() const { return static_cast<int>(A.rows()); }
  static SymplecticElement identity(int g);
  static SymplecticElement J(int g);
  // (I,B;0,I) with B symmetric, and (I,0;C,I) with C symmetric.
  static SymplecticElement translation(const IntMatrix& Bsym);
  static SymplecticElement lower_translation(const IntMatrix& Csym);
  static SymplecticElement from_blocks(IntMatrix A, IntMatrix B, IntMatrix C, IntMatrix D);

  SymplecticElement operator*(const SymplecticElement& o) const;
  bool is_symplectic() const;
  IntMatrix full() const;  // 2g x 2g
};

// (eps,delta) -> (D eps - C delta + diag(C tD), -B eps + A delta + diag(A tB)) mod 2.
// Throws std::invalid_argument if M is not symplectic.
Characteristic act_on_characteristic(const SymplecticElement& M, const Characteristic& c);

enum class LevelClass { Full, Gamma_n, Gamma_n_2n };

// Classifies M against Gamma_g(n) and Gamma_g(n,2n).
LevelClass level_membership(const SymplecticElement& M, std::int64_t n);

}  // namespace thetaver
