#include "bakry/jet.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace bakry {
namespace {

struct Product {
  int a, b, out;
};

// Monomial bookkeeping for one dimension, up to kMaxJetOrder.
struct MonomialTable {
  int dim = 0;
  std::array<int, kMaxJetOrder + 1> count{};          // #monomials with degree <= K
  std::array<int, kMaxJetOrder + 1> product_count{};  // #products with result degree <= K
  std::vector<std::array<int, 3>> exps;
  std::vector<int> degree;
  std::vector<double> alpha_factorial;
  std::vector<Product> products;
  std::array<std::vector<int>, 3> raise;  // index of alpha + e_i, or -1
  std::array<int, 125> lookup{};

  static int key(const std::array<int, 3>& e) { return e[0] + 5 * e[1] + 25 * e[2]; }

  explicit MonomialTable(int d) : dim(d) {
    lookup.fill(-1);
    for (int deg = 0; deg <= kMaxJetOrder; ++deg) {
      // Lexicographic (descending in the first exponent) within each degree.
      for (int e0 = deg; e0 >= 0; --e0) {
        for (int e1 = deg - e0; e1 >= 0; --e1) {
          const int e2 = deg - e0 - e1;
          if ((d < 2 && e1 != 0) || (d < 3 && e2 != 0)) continue;
          std::array<int, 3> e{e0, e1, e2};
          lookup[key(e)] = static_cast<int>(exps.size());
          exps.push_back(e);
          degree.push_back(deg);
          alpha_factorial.push_back(std::tgamma(e0 + 1.0) * std::tgamma(e1 + 1.0) * std::tgamma(e2 + 1.0));
        }
      }
      count[deg] = static_cast<int>(exps.size());
    }
    const int n = static_cast<int>(exps.size());
    for (int i = 0; i < 3; ++i) {
      raise[i].assign(n, -1);
      if (i >= d) continue;
      for (int a = 0; a < n; ++a) {
        auto e = exps[a];
        ++e[i];
        if (e[0] + e[1] + e[2] <= kMaxJetOrder) raise[i][a] = lookup[key(e)];
      }
    }
    for (int deg = 0; deg <= kMaxJetOrder; ++deg) {
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          if (degree[a] + degree[b] != deg) continue;
          std::array<int, 3> e{exps[a][0] + exps[b][0], exps[a][1] + exps[b][1], exps[a][2] + exps[b][2]};
          products.push_back({a, b, lookup[key(e)]});
        }
      }
      product_count[deg] = static_cast<int>(products.size());
    }
  }

  int index_of(std::initializer_list<int> idx) const {
    std::array<int, 3> e{};
    for (int i : idx) {
      if (i < 0 || i >= dim) throw std::out_of_range("jet derivative index out of range");
      ++e[i];
    }
    return lookup[key(e)];
  }
};

const MonomialTable& table(int dim) {
  static const MonomialTable t1(1), t2(2), t3(3);
  switch (dim) {
    case 1: return t1;
    case 2: return t2;
    case 3: return t3;
    default: throw std::invalid_argument("jet dimension must be 1, 2 or 3");
  }
}

void check_compatible(const Jet& a, const Jet& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("jet dimension mismatch");
}

}  // namespace

Jet Jet::constant(int dim, int order, double value) {
  if (order < 0 || order > kMaxJetOrder) throw std::invalid_argument("jet order out of range");
  (void)table(dim);
  Jet j;
  j.dim_ = dim;
  j.order_ = order;
  j.c_[0] = value;
  return j;
}

Jet Jet::variable(int dim, int order, int index, double value) {
  Jet j = constant(dim, order, value);
  if (index < 0 || index >= dim) throw std::out_of_range("jet variable index out of range");
  if (order >= 1) j.c_[table(dim).index_of({index})] = 1.0;
  return j;
}

int Jet::size() const noexcept { return table(dim_).count[order_]; }

double Jet::d(int i) const {
  assert(order_ >= 1);
  const auto& t = table(dim_);
  const int k = t.index_of({i});
  return t.alpha_factorial[k] * c_[k];
}

double Jet::d(int i, int j) const {
  assert(order_ >= 2);
  const auto& t = table(dim_);
  const int k = t.index_of({i, j});
  return t.alpha_factorial[k] * c_[k];
}

double Jet::d(int i, int j, int k) const {
  assert(order_ >= 3);
  const auto& t = table(dim_);
  const int m = t.index_of({i, j, k});
  return t.alpha_factorial[m] * c_[m];
}

double Jet::d(int i, int j, int k, int l) const {
  assert(order_ >= 4);
  const auto& t = table(dim_);
  const int m = t.index_of({i, j, k, l});
  return t.alpha_factorial[m] * c_[m];
}

Jet Jet::derivative(int i) const {
  if (order_ < 1) throw std::logic_error("cannot differentiate an order-0 jet");
  if (i < 0 || i >= dim_) throw std::out_of_range("jet derivative index out of range");
  const auto& t = table(dim_);
  Jet r = constant(dim_, order_ - 1, 0.0);
  const int n = t.count[order_ - 1];
  for (int a = 0; a < n; ++a) {
    const int up = t.raise[i][a];
    r.c_[a] = (t.exps[a][i] + 1) * c_[up];
  }
  return r;
}

Jet Jet::truncated(int order) const {
  Jet r = *this;
  if (order >= order_) return r;
  r.order_ = order;
  const auto& t = table(dim_);
  std::fill(r.c_.begin() + t.count[order], r.c_.end(), 0.0);
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  check_compatible(*this, o);
  if (o.order_ < order_) *this = truncated(o.order_);
  const int n = size();
  for (int a = 0; a < n; ++a) c_[a] += o.c_[a];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  check_compatible(*this, o);
  if (o.order_ < order_) *this = truncated(o.order_);
  const int n = size();
  for (int a = 0; a < n; ++a) c_[a] -= o.c_[a];
  return *this;
}

Jet& Jet::operator*=(const Jet& o) {
  *this = *this * o;
  return *this;
}

Jet& Jet::operator/=(const Jet& o) {
  *this = *this * reciprocal(o);
  return *this;
}

Jet& Jet::operator*=(double s) noexcept {
  const int n = size();
  for (int a = 0; a < n; ++a) c_[a] *= s;
  return *this;
}

Jet Jet::operator-() const noexcept {
  Jet r = *this;
  r *= -1.0;
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  check_compatible(a, b);
  const int order = std::min(a.order_, b.order_);
  const auto& t = table(a.dim_);
  Jet r = Jet::constant(a.dim_, order, 0.0);
  const int np = t.product_count[order];
  for (int p = 0; p < np; ++p) {
    const auto& pr = t.products[p];
    r.c_[pr.out] += a.c_[pr.a] * b.c_[pr.b];
  }
  return r;
}

Jet Jet::compose(std::span<const double> taylor) const {
  // Horner in delta = u - u0; the constant term of delta is zero, so
  // truncation at order_ is exact.
  Jet delta = *this;
  delta.c_[0] = 0.0;
  const int k_max = std::min<int>(order_, static_cast<int>(taylor.size()) - 1);
  Jet r = constant(dim_, order_, taylor[k_max]);
  for (int k = k_max - 1; k >= 0; --k) {
    r = r * delta;
    r.c_[0] += taylor[k];
  }
  return r;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
Jet operator+(Jet a, double s) { return a += s; }
Jet operator+(double s, Jet a) { return a += s; }
Jet operator-(Jet a, double s) { return a -= s; }
Jet operator-(double s, const Jet& a) {
  Jet r = -a;
  r += s;
  return r;
}
Jet operator*(Jet a, double s) { return a *= s; }
Jet operator*(double s, Jet a) { return a *= s; }
Jet operator/(Jet a, double s) { return a *= (1.0 / s); }

Jet reciprocal(const Jet& u) {
  const double t = u.value();
  std::array<double, kMaxJetOrder + 1> c{};
  double inv = 1.0 / t;
  double p = inv;
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    c[k] = (k % 2 == 0 ? 1.0 : -1.0) * p;
    p *= inv;
  }
  return u.compose(c);
}

Jet exp(const Jet& u) {
  const double e = std::exp(u.value());
  std::array<double, kMaxJetOrder + 1> c{};
  double fact = 1.0;
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    if (k > 0) fact *= k;
    c[k] = e / fact;
  }
  return u.compose(c);
}

Jet log(const Jet& u) {
  const double t = u.value();
  if (!(t > 0.0)) return Jet::constant(u.dim(), u.order(), std::nan(""));
  std::array<double, kMaxJetOrder + 1> c{};
  c[0] = std::log(t);
  double p = 1.0;
  for (int k = 1; k <= kMaxJetOrder; ++k) {
    p /= t;
    c[k] = (k % 2 == 1 ? 1.0 : -1.0) * p / k;
  }
  return u.compose(c);
}

Jet sin(const Jet& u) {
  const double s = std::sin(u.value()), co = std::cos(u.value());
  const std::array<double, kMaxJetOrder + 1> c{s, co, -s / 2.0, -co / 6.0, s / 24.0};
  return u.compose(c);
}

Jet cos(const Jet& u) {
  const double s = std::sin(u.value()), co = std::cos(u.value());
  const std::array<double, kMaxJetOrder + 1> c{co, -s, -co / 2.0, s / 6.0, co / 24.0};
  return u.compose(c);
}

Jet sqrt(const Jet& u) { return pow(u, 0.5); }

Jet pow(const Jet& u, double p) {
  const double rounded = std::nearbyint(p);
  if (rounded == p && std::abs(p) <= 64.0) {
    auto n = static_cast<long>(std::abs(rounded));
    Jet result = Jet::constant(u.dim(), u.order(), 1.0);
    Jet base = u;
    while (n > 0) {
      if (n & 1) result = result * base;
      n >>= 1;
      if (n > 0) base = base * base;
    }
    return p < 0 ? reciprocal(result) : result;
  }
  const double t = u.value();
  if (!(t > 0.0)) return Jet::constant(u.dim(), u.order(), std::nan(""));
  // Taylor coefficients binom(p, k) t^(p-k).
  std::array<double, kMaxJetOrder + 1> c{};
  double binom = 1.0;
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    if (k > 0) binom *= (p - (k - 1)) / k;
    c[k] = binom * std::pow(t, p - k);
  }
  return u.compose(c);
}

Jet3 Jet3::from(const Jet& j) {
  if (j.order() < 3) throw std::invalid_argument("Jet3 requires an order-3 jet");
  Jet3 r;
  r.dim = j.dim();
  r.value = j.value();
  for (int a = 0; a < r.dim; ++a) {
    r.grad[a] = j.d(a);
    for (int b = 0; b < r.dim; ++b) {
      r.hess[a][b] = j.d(a, b);
      for (int c = 0; c < r.dim; ++c) r.third[a][b][c] = j.d(a, b, c);
    }
  }
  return r;
}

Jet substitute(const Jet& outer, std::span<const Jet> inner) {
  if (static_cast<int>(inner.size()) != outer.dim()) throw std::invalid_argument("substitute needs one inner jet per variable");
  const int dim = inner[0].dim();
  int order = outer.order();
  for (const Jet& j : inner) {
    if (j.dim() != dim) throw std::invalid_argument("jet dimension mismatch");
    order = std::min(order, j.order());
  }
  // powers[a][k] = (inner_a - value)^k
  std::array<std::array<Jet, kMaxJetOrder + 1>, 3> powers;
  for (int a = 0; a < outer.dim(); ++a) {
    Jet delta = inner[a].truncated(order);
    delta -= delta.value();
    powers[a][0] = Jet::constant(dim, order, 1.0);
    for (int k = 1; k <= order; ++k) powers[a][k] = powers[a][k - 1] * delta;
  }
  const auto& t = table(outer.dim());
  Jet out = Jet::constant(dim, order, 0.0);
  const auto coeffs = outer.coefficients();
  for (int m = 0; m < t.count[order]; ++m) {
    if (coeffs[m] == 0.0) continue;
    const auto& e = t.exps[m];
    Jet term = powers[0][e[0]];
    if (outer.dim() > 1) term *= powers[1][e[1]];
    if (outer.dim() > 2) term *= powers[2][e[2]];
    term *= coeffs[m];
    out += term;
  }
  return out;
}

}  // namespace bakry
