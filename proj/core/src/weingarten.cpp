#include "purity/weingarten.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "purity/errors.hpp"

namespace purity {

BipartitionDims::BipartitionDims(int na, int nb) : na_(na), nb_(nb) {
  if (na < 1 || nb < 1) throw ValidationError("subsystem dimensions must be >= 1");
  if (na > nb) {
    throw ValidationError("bipartition requires N_A <= N_B (got N_A=" + std::to_string(na) +
                          ", N_B=" + std::to_string(nb) + ")");
  }
}

}  // namespace purity

namespace purity::wg {

namespace {

Integer factorial(int n) {
  Integer f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void require_purity_range(const BipartitionDims& dims, const Rational& x, const char* what) {
  if (x < Rational(1, dims.n()) || x > 1) {
    throw ValidationError(std::string(what) + " must lie in [1/N, 1] = [1/" + std::to_string(dims.n()) +
                          ", 1] (got " + to_string(x) + ")");
  }
}

Rational square(int v) { return Rational(v) * v; }

// Floating-point purities carry representation error (1/6 is not a double),
// so the range check is relaxed by 1e-12 and the value clamped.
double clamp_purity(const BipartitionDims& dims, double x) {
  const double lo = 1.0 / dims.n();
  if (!(x >= lo - 1e-12 && x <= 1.0 + 1e-12)) {
    throw ValidationError("global purity x must lie in [1/N, 1] = [1/" + std::to_string(dims.n()) + ", 1] (got " +
                          to_decimal(x) + ")");
  }
  return std::clamp(x, lo, 1.0);
}

}  // namespace

Rational weingarten_coefficient(const sym::Partition& sigma_class, int n_dim) {
  if (n_dim < 1) throw ValidationError("unitary dimension must be >= 1");
  const int n = sigma_class.weight();
  if (n < 1) throw ValidationError("Weingarten class must be a partition of n >= 1");
  const Integer n_fact = factorial(n);
  Rational total = 0;
  for (const auto& young : sym::all_partitions(n)) {
    const std::int64_t chi = sym::character(young, sigma_class);
    if (chi == 0) continue;
    const Integer schur = sym::schur_dimension(young, n_dim);
    if (schur == 0) {
      throw DegenerateDimensionError("Weingarten coefficient C" + sigma_class.to_string() + " has a pole at N=" +
                                     std::to_string(n_dim) + ": U(N) irrep " + young.to_string() +
                                     " vanishes (need N >= " + std::to_string(young.length()) + ")");
    }
    const Integer dim = sym::sn_dimension(young);
    total += Rational(dim * dim * chi, n_fact * n_fact * schur);
  }
  return total;
}

WeingartenTable WeingartenTable::build(int n, int n_dim) {
  WeingartenTable table;
  table.n = n;
  table.n_dim = n_dim;
  for (const auto& cls : sym::all_partitions(n)) table.coeffs.emplace(cls, weingarten_coefficient(cls, n_dim));
  return table;
}

const Rational& WeingartenTable::at(const sym::Partition& cls) const {
  const auto it = coeffs.find(cls);
  if (it == coeffs.end()) throw ValidationError("no Weingarten coefficient for class " + cls.to_string());
  return it->second;
}

Rational closed_form_coefficient(const sym::Partition& sigma_class, int n_dim) {
  const Rational n = n_dim;
  const auto& parts = sigma_class.parts();
  const std::vector<int> p(parts.begin(), parts.end());
  if (sigma_class.weight() == 2) {
    if (n_dim <= 1) throw DegenerateDimensionError("S_2 coefficients have a pole at N = 1");
    if (p == std::vector<int>{1, 1}) return 1 / ((n - 1) * (n + 1));
    return -1 / ((n - 1) * n * (n + 1));
  }
  if (sigma_class.weight() != 4) throw ValidationError("closed-form coefficients exist for S_2 and S_4 only");
  if (n_dim <= 3) {
    throw DegenerateDimensionError("S_4 coefficients have a pole at N=" + std::to_string(n_dim) + " (need N >= 4)");
  }
  const Rational full = (n - 3) * (n - 2) * (n - 1) * n * n * (n + 1) * (n + 2) * (n + 3);
  if (p == std::vector<int>{1, 1, 1, 1}) return (n * n * n * n - 8 * n * n + 6) / full;
  if (p == std::vector<int>{2, 1, 1}) return -1 / ((n - 3) * (n - 1) * n * (n + 1) * (n + 3));
  if (p == std::vector<int>{2, 2}) return (n * n + 6) / full;
  if (p == std::vector<int>{3, 1}) return (2 * n * n - 3) / full;
  return -5 * n / full;
}

Integer f_count(const sym::Permutation& tau, const BipartitionDims& dims) {
  if (tau.degree() % 2 != 0 || tau.degree() == 0) {
    throw ValidationError("f_count requires a permutation of even degree 2k");
  }
  const auto s = sym::nearby_pair_swap(tau.degree() / 2);
  const int cycles_a = tau.cycle_count();
  const int cycles_b = sym::compose(tau, s).cycle_count();
  return ipow(dims.na(), static_cast<unsigned>(cycles_a)) * ipow(dims.nb(), static_cast<unsigned>(cycles_b));
}

// ---------------------------------------------------------------------------

Monomial make_monomial(const sym::Partition& cycle_type) {
  Monomial m;
  for (const int part : cycle_type.parts()) {
    if (part >= 2) m.push_back(part);
  }
  return m;
}

void PowerSumPolynomial::add(const Monomial& m, const Rational& coefficient) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] < 2) throw ValidationError("power-sum monomials store indices >= 2 only");
    if (i > 0 && m[i] > m[i - 1]) throw ValidationError("power-sum monomial indices must be non-increasing");
  }
  if (coefficient == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational PowerSumPolynomial::coefficient(const Monomial& m) const {
  const auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

int PowerSumPolynomial::max_index() const {
  int max_j = 1;
  for (const auto& [monomial, coefficient] : terms_) {
    if (!monomial.empty()) max_j = std::max(max_j, monomial.front());
  }
  return max_j;
}

PowerSumPolynomial PowerSumPolynomial::operator-(const PowerSumPolynomial& other) const {
  PowerSumPolynomial out = *this;
  for (const auto& [monomial, coefficient] : other.terms_) out.add(monomial, -coefficient);
  return out;
}

bool PowerSumPolynomial::operator==(const PowerSumPolynomial& other) const {
  return context_ == other.context_ && terms_ == other.terms_;
}

Rational PowerSumPolynomial::evaluate_pure() const {
  return evaluate<Rational>([](int) { return Rational(1); });
}

Rational PowerSumPolynomial::evaluate_maximally_mixed() const {
  const int n = context_.n();
  return evaluate<Rational>([n](int j) { return Rational(1, ipow(n, static_cast<unsigned>(j - 1))); });
}

double PowerSumPolynomial::evaluate(std::span<const double> spectrum) const {
  std::vector<double> p(static_cast<std::size_t>(max_index()) + 1, 0.0);
  for (std::size_t j = 2; j < p.size(); ++j) {
    for (const double lambda : spectrum) p[j] += std::pow(lambda, static_cast<double>(j));
  }
  return evaluate<double>([&p](int j) { return p[static_cast<std::size_t>(j)]; });
}

namespace {

nlohmann::json integer_to_json(const Integer& v) {
  if (v <= std::numeric_limits<std::int64_t>::max() && v >= std::numeric_limits<std::int64_t>::min()) {
    return v.convert_to<std::int64_t>();
  }
  return v.str();
}

Integer integer_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_string()) return Integer(j.get<std::string>());
  throw ValidationError("expected an integer (number or decimal string) in polynomial JSON");
}

}  // namespace

nlohmann::json PowerSumPolynomial::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [monomial, coefficient] : terms_) {
    terms.push_back({{"monomial", monomial},
                     {"num", integer_to_json(boost::multiprecision::numerator(coefficient))},
                     {"den", integer_to_json(boost::multiprecision::denominator(coefficient))}});
  }
  return {{"context", {{"NA", context_.na()}, {"NB", context_.nb()}}}, {"terms", terms}};
}

PowerSumPolynomial PowerSumPolynomial::from_json(const nlohmann::json& j) {
  try {
    PowerSumPolynomial out(BipartitionDims(j.at("context").at("NA").get<int>(), j.at("context").at("NB").get<int>()));
    for (const auto& term : j.at("terms")) {
      const Integer den = integer_from_json(term.at("den"));
      if (den == 0) throw ValidationError("zero denominator in polynomial JSON");
      out.add(term.at("monomial").get<Monomial>(), Rational(integer_from_json(term.at("num")), den));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed polynomial JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

Rational closed_m1(const BipartitionDims& dims, const Rational& x) {
  require_purity_range(dims, x, "global purity x");
  const int a = dims.na();
  const int b = dims.nb();
  const Rational denom = square(dims.n()) - 1;
  if (denom == 0) return 1;  // N = 1: the only state is pure and unentangled
  return Rational(a) * (square(b) - 1) / denom + x * b * (square(a) - 1) / denom;
}

namespace {

Rational second_moment_normalizer(const BipartitionDims& dims) {
  const Rational n2 = square(dims.n());
  const Rational denom = n2 * (n2 - 7) * (n2 - 7) - 36;
  if (denom == 0 || dims.n() <= 3) {
    throw DegenerateDimensionError("second-moment closed form has a pole at N=" + std::to_string(dims.n()) +
                                   " (requires N = N_A*N_B >= 4)");
  }
  return 1 / denom;
}

}  // namespace

PowerSumPolynomial closed_m2_polynomial(const BipartitionDims& dims) {
  const Rational c = second_moment_normalizer(dims);
  const Rational a = dims.na();
  const Rational b = dims.nb();
  const Rational a2 = a * a;
  const Rational b2 = b * b;
  const Rational a4 = a2 * a2;
  const Rational b4 = b2 * b2;

  PowerSumPolynomial poly(dims);
  poly.add({}, c * (b2 - 1) * (a4 * b2 * (b2 - 1) - 2 * a2 * (6 * b2 - 7) + 22));
  poly.add({2}, c * 2 * a * b * (a2 - 1) * (b2 - 1) * (a2 * b2 - 14));
  poly.add({2, 2}, c * (a2 - 1) * (b4 * a4 + b4 * a2 - 14 * a2 * b2 + 6 * b2 + 30));
  poly.add({3}, c * 40 * (a2 - 1) * (b2 - 1));
  poly.add({4}, c * (-10) * a * b * (a2 - 1) * (b2 - 1));
  return poly;
}

Rational closed_m2_spectrum(const BipartitionDims& dims, const Rational& p2, const Rational& p3, const Rational& p4) {
  const auto poly = closed_m2_polynomial(dims);
  return poly.evaluate<Rational>([&](int j) -> Rational {
    switch (j) {
      case 2: return p2;
      case 3: return p3;
      default: return p4;
    }
  });
}

Cumulant2Coefficients cumulant2_coefficients(const BipartitionDims& dims) {
  const Rational c = second_moment_normalizer(dims);
  const Rational a2 = square(dims.na());
  const Rational b2 = square(dims.nb());
  const Rational n = dims.n();
  const Rational n2 = n * n;
  const Rational n4 = n2 * n2;
  const Rational common = 2 * (a2 - 1) * (b2 - 1);
  const Rational denom = (n2 - 1) * (n2 - 1) * (n4 - 13 * n2 + 36);

  Cumulant2Coefficients k;
  k.constant = common * (n2 + 11) / denom;
  k.x = common * (-2 * n) * (n2 + 11) / denom;
  k.x2 = common * (n4 - 4 * n2 + 15) / denom;
  k.p3 = 40 * (a2 - 1) * (b2 - 1) * c;
  k.p4 = -10 * n * (a2 - 1) * (b2 - 1) * c;
  return k;
}

Rational cumulant2(const BipartitionDims& dims, const Rational& x, const Rational& avg_p3, const Rational& avg_p4) {
  require_purity_range(dims, x, "global purity x");
  const auto k = cumulant2_coefficients(dims);
  return k.constant + k.x * x + k.x2 * x * x + k.p3 * avg_p3 + k.p4 * avg_p4;
}

double cumulant2(const BipartitionDims& dims, double x, double avg_p3, double avg_p4) {
  x = clamp_purity(dims, x);
  const auto k = cumulant2_coefficients(dims);
  return to_double(k.constant) + to_double(k.x) * x + to_double(k.x2) * x * x + to_double(k.p3) * avg_p3 +
         to_double(k.p4) * avg_p4;
}

double m1_high_temperature(const BipartitionDims& dims, double x, double beta, double avg_p3, double avg_p4) {
  x = clamp_purity(dims, x);
  const Rational denom = square(dims.n()) - 1;
  const double m1 = denom == 0 ? 1.0
                               : to_double(Rational(dims.na()) * (square(dims.nb()) - 1) / denom) +
                                     x * to_double(Rational(dims.nb()) * (square(dims.na()) - 1) / denom);
  if (beta == 0.0) return m1;
  return m1 - beta * cumulant2(dims, x, avg_p3, avg_p4);
}

int exact_sqrt(int n) {
  if (n < 0) return -1;
  int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r * r == n ? r : -1;
}

double m1_balanced_asymptotic(int n_dim, double x) {
  const int root = exact_sqrt(n_dim);
  if (n_dim < 1 || root < 0) {
    throw ValidationError("balanced bipartition requires N to be a perfect square (got " + std::to_string(n_dim) + ")");
  }
  return root * (1.0 + x) / (n_dim + 1.0);
}

double beta_critical(int n_dim, double x) {
  if (x <= 0.0) return std::numeric_limits<double>::infinity();
  return std::pow(static_cast<double>(n_dim), 1.5) * (1.0 + x) / (2.0 * x * x);
}

}  // namespace purity::wg
