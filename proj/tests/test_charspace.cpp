#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "thetaver/charspace.hpp"

using namespace thetaver;

TEST_CASE("parity examples and census") {
  CHECK(parity(Characteristic::from_string("1|1")) == Parity::Odd);
  CHECK(parity(Characteristic::from_string("00|00")) == Parity::Even);
  CHECK(even_characteristics(2).size() == 10);
  CHECK(odd_characteristics(2).size() == 6);
  for (int g = 1; g <= 4; ++g) {
    const std::size_t even = even_characteristics(g).size();
    const std::size_t odd = odd_characteristics(g).size();
    CHECK(even == (std::size_t{1} << (g - 1)) * ((std::size_t{1} << g) + 1));
    CHECK(odd == (std::size_t{1} << (g - 1)) * ((std::size_t{1} << g) - 1));
  }
}

TEST_CASE("half characteristic basics") {
  const HalfChar h = HalfChar::from_string("10");
  CHECK(h.index() == 2);
  CHECK(h.str() == "10");
  CHECK((h + h) == HalfChar::zero(2));
  CHECK(HalfChar::from_index(2, 3).str() == "11");
  CHECK(Characteristic::from_string("10|11").str() == "10|11");
  CHECK_THROWS_AS(HalfChar::from_string("102"), std::invalid_argument);
}

// Independent sign oracle: plain integer arithmetic on the raw bits.
static bool azygetic_oracle(const Characteristic& a, const Characteristic& b,
                            const Characteristic& c) {
  const int g = a.genus();
  long e = 0;
  for (int i = 0; i < g; ++i) {
    e += a.eps[i] * a.delta[i] + b.eps[i] * b.delta[i] + c.eps[i] * c.delta[i];
    e += (a.eps[i] + b.eps[i] + c.eps[i]) * (a.delta[i] + b.delta[i] + c.delta[i]);
  }
  return e % 2 == 1;
}

TEST_CASE("azygetic triples") {
  const auto c1 = Characteristic::from_string("0|0");
  const auto c2 = Characteristic::from_string("0|1");
  const auto c3 = Characteristic::from_string("1|0");
  CHECK(is_azygetic(c1, c2, c3));
  CHECK_FALSE(is_syzygetic(c1, c2, c3));

  for (const auto& c : all_characteristics(2)) CHECK_FALSE(is_azygetic(c, c, c));

  std::mt19937_64 rng(11);
  const auto chars = all_characteristics(2);
  for (int rep = 0; rep < 200; ++rep) {
    const auto& a = chars[rng() % chars.size()];
    const auto& b = chars[rng() % chars.size()];
    const auto& c = chars[rng() % chars.size()];
    const bool expect = azygetic_oracle(a, b, c);
    CHECK(is_azygetic(a, b, c) == expect);
    // permutation invariance
    CHECK(is_azygetic(b, c, a) == expect);
    CHECK(is_azygetic(c, a, b) == expect);
    CHECK(is_azygetic(b, a, c) == expect);
  }
}

TEST_CASE("special fundamental systems, genus 1") {
  const auto systems = find_special_fundamental_systems(1, 0);
  CHECK(systems.size() == 6);  // 3! orderings of the even block
  const FundamentalSystem expected = {
      Characteristic::from_string("1|1"), Characteristic::from_string("0|0"),
      Characteristic::from_string("1|0"), Characteristic::from_string("0|1")};
  bool found = false;
  for (const auto& sys : systems) {
    CHECK(is_special_fundamental_system(sys));
    if (sys == expected) found = true;
  }
  CHECK(found);
  const auto counts = count_special_fundamental_systems(1);
  CHECK(counts.ordered == 6);
  CHECK(counts.unordered == 1);
}

TEST_CASE("special fundamental systems, genus 2") {
  const auto counts = count_special_fundamental_systems(2);
  // frozen regression values from the exhaustive search
  CHECK(counts.ordered == 720);
  CHECK(counts.unordered == 15);
  CHECK(counts.ordered % (2 * 24) == 0);  // g! (g+2)! orderings per unordered system

  const auto some = find_special_fundamental_systems(2, 5);
  REQUIRE(some.size() == 5);
  for (const auto& sys : some) CHECK(is_special_fundamental_system(sys));

  // the genus 2 system used for the main relation
  const FundamentalSystem paper_system = {
      Characteristic::from_string("10|10"), Characteristic::from_string("10|11"),
      Characteristic::from_string("11|00"), Characteristic::from_string("11|11"),
      Characteristic::from_string("01|00"), Characteristic::from_string("01|10")};
  CHECK(is_special_fundamental_system(paper_system));
}

TEST_CASE("symplectic elements and action") {
  const int g = 2;
  const auto I = SymplecticElement::identity(g);
  CHECK(I.is_symplectic());
  const auto J = SymplecticElement::J(g);
  CHECK(J.is_symplectic());
  IntMatrix B(2, 2);
  B << 1, 2, 2, -1;
  const auto T = SymplecticElement::translation(B);
  CHECK(T.is_symplectic());
  CHECK((J * T * J).is_symplectic());

  for (const auto& c : all_characteristics(g)) CHECK(act_on_characteristic(I, c) == c);

  // bijectivity and parity preservation for sampled elements
  std::mt19937_64 rng(5);
  std::vector<SymplecticElement> samples = {J, T, J * T, T * J * T, J * T * J};
  for (const auto& M : samples) {
    std::set<unsigned> image;
    int even_count = 0;
    for (const auto& c : all_characteristics(g)) {
      const auto d = act_on_characteristic(M, c);
      image.insert(d.index());
      if (is_even(c)) even_count += is_even(d) ? 1 : 0;
    }
    CHECK(image.size() == 16);
    CHECK(even_count == 10);
  }

  // the induced permutations compose
  for (int rep = 0; rep < 5; ++rep) {
    IntMatrix B1(2, 2), B2(2, 2);
    const auto r = [&rng]() { return static_cast<std::int64_t>(rng() % 5) - 2; };
    const auto s1 = r(), s2 = r(), s3 = r(), s4 = r();
    B1 << s1, s2, s2, r();
    B2 << s3, s4, s4, r();
    const SymplecticElement M1 = SymplecticElement::translation(B1) * J;
    const SymplecticElement M2 = J * SymplecticElement::translation(B2);
    for (const auto& c : all_characteristics(g))
      CHECK(act_on_characteristic(M1 * M2, c) ==
            act_on_characteristic(M1, act_on_characteristic(M2, c)));
  }

  // reject non-symplectic input
  SymplecticElement bad = SymplecticElement::identity(g);
  bad.D = 2 * IntMatrix::Identity(g, g);
  CHECK_FALSE(bad.is_symplectic());
  CHECK_THROWS_AS(act_on_characteristic(bad, all_characteristics(g)[0]), std::invalid_argument);
}

TEST_CASE("level subgroup membership") {
  const int g = 1;
  const auto I = SymplecticElement::identity(g);
  for (std::int64_t n : {1, 2, 3, 4, 8}) CHECK(level_membership(I, n) == LevelClass::Gamma_n_2n);

  IntMatrix B1(1, 1);
  B1 << 4;  // diag(A tB) = 4 = 0 mod 4 at n = 2
  CHECK(level_membership(SymplecticElement::translation(B1), 2) == LevelClass::Gamma_n_2n);

  IntMatrix B2(1, 1);
  B2 << 1;  // odd diagonal entry: in Gamma(1) but not Gamma(1,2)
  CHECK(level_membership(SymplecticElement::translation(B2), 1) == LevelClass::Gamma_n);

  CHECK(level_membership(SymplecticElement::J(g), 2) == LevelClass::Full);

  // Gamma(2n) is contained in Gamma(n) on sampled elements
  IntMatrix B3(1, 1);
  B3 << 8;
  const auto M = SymplecticElement::translation(B3);
  CHECK(level_membership(M, 8) != LevelClass::Full);
  CHECK(level_membership(M, 4) != LevelClass::Full);
  CHECK(level_membership(M, 2) != LevelClass::Full);

  // genus 2 element of Gamma(4,8) built from translations
  IntMatrix B4(2, 2);
  B4 << 8, 4, 4, 8;
  CHECK(level_membership(SymplecticElement::translation(B4), 4) == LevelClass::Gamma_n_2n);
  IntMatrix B5(2, 2);
  B5 << 4, 4, 4, 8;  // diagonal entry 4 not divisible by 8
  CHECK(level_membership(SymplecticElement::translation(B5), 4) == LevelClass::Gamma_n);
}
