#include "homog/sphere.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace homog {

namespace {

constexpr double kPi = std::numbers::pi;

void require_same_grid(const GridPtr& x, const GridPtr& y) {
  if (x.get() != y.get() && (x->nlat() != y->nlat() || x->nlon() != y->nlon())) {
    throw std::invalid_argument("fields live on different grids");
  }
}

// Legendre P_n and its derivative at x (three-term recurrence).
std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

// Fornberg weights for the first derivative at x0 over nodes xs.
std::vector<double> fornberg_first_derivative(double x0, std::span<const double> xs) {
  const int n = static_cast<int>(xs.size());
  std::vector<double> c(static_cast<std::size_t>(n) * 2, 0.0);  // c[i*2 + m]
  double c1 = 1.0;
  double c4 = xs[0] - x0;
  c[0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, 1);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int m = mn; m >= 1; --m) {
          c[i * 2 + m] = c1 * (m * c[(i - 1) * 2 + m - 1] - c5 * c[(i - 1) * 2 + m]) / c2;
        }
        c[i * 2] = -c1 * c5 * c[(i - 1) * 2] / c2;
      }
      for (int m = mn; m >= 1; --m) {
        c[j * 2 + m] = (c4 * c[j * 2 + m] - m * c[j * 2 + m - 1]) / c3;
      }
      c[j * 2] = c4 * c[j * 2] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i * 2 + 1];
  return w;
}

enum class Kind { Scalar, VectorComponent };

// Fourier coefficients along each latitude: C[m*nlat + j], S[m*nlat + j], m = 0..nlon/2.
void forward_dft(const SphereGrid& g, std::span<const double> v, std::vector<double>& C,
                 std::vector<double>& S) {
  const int nlat = g.nlat();
  const int nlon = g.nlon();
  const int half = nlon / 2;
  C.assign(static_cast<std::size_t>(half + 1) * nlat, 0.0);
  S.assign(C.size(), 0.0);
  const auto& ct = g.cos_table();
  const auto& st = g.sin_table();
  for (int j = 0; j < nlat; ++j) {
    const double* row = v.data() + g.index(j, 0);
    for (int m = 0; m <= half; ++m) {
      const double* cm = ct.data() + static_cast<std::size_t>(m) * nlon;
      const double* sm = st.data() + static_cast<std::size_t>(m) * nlon;
      double sc = 0.0;
      double ss = 0.0;
      for (int k = 0; k < nlon; ++k) {
        sc += row[k] * cm[k];
        ss += row[k] * sm[k];
      }
      C[static_cast<std::size_t>(m) * nlat + j] = sc;
      S[static_cast<std::size_t>(m) * nlat + j] = ss;
    }
  }
}

// Zeroes Fourier coefficients that are indistinguishable from DFT rounding.
void drop_rounding_modes(const SphereGrid& g, std::span<const double> v, std::vector<double>& C,
                         std::vector<double>& S) {
  const int nlat = g.nlat();
  const int half = g.nlon() / 2;
  for (int j = 0; j < nlat; ++j) {
    double row = 0.0;
    for (int k = 0; k < g.nlon(); ++k) row += std::abs(v[g.index(j, k)]);
    const double cut = 4e-15 * row;
    for (int m = 0; m <= half; ++m) {
      const std::size_t i = static_cast<std::size_t>(m) * nlat + j;
      if (std::abs(C[i]) < cut) C[i] = 0.0;
      if (std::abs(S[i]) < cut) S[i] = 0.0;
    }
  }
}

std::vector<double> inverse_dft(const SphereGrid& g, const std::vector<double>& C,
                                const std::vector<double>& S) {
  const int nlat = g.nlat();
  const int nlon = g.nlon();
  const int half = nlon / 2;
  const auto& ct = g.cos_table();
  const auto& st = g.sin_table();
  std::vector<double> out(g.size(), 0.0);
  for (int j = 0; j < nlat; ++j) {
    double* row = out.data() + g.index(j, 0);
    for (int m = 0; m <= half; ++m) {
      const double scale = (m == 0 || m == half) ? 1.0 / nlon : 2.0 / nlon;
      const double cm = C[static_cast<std::size_t>(m) * nlat + j] * scale;
      const double sm = S[static_cast<std::size_t>(m) * nlat + j] * scale;
      if (cm == 0.0 && sm == 0.0) continue;
      const double* cc = ct.data() + static_cast<std::size_t>(m) * nlon;
      const double* ss = st.data() + static_cast<std::size_t>(m) * nlon;
      for (int k = 0; k < nlon; ++k) row[k] += cm * cc[k] + sm * ss[k];
    }
  }
  return out;
}

// Relative energy in the top quarter of the Legendre spectrum of q(x_j).
double legendre_tail(const SphereGrid& g, const double* q) {
  const int n = g.nlat();
  const auto& P = g.legendre_table();
  const auto w = g.gauss_weights();
  const int start = n - std::max(1, n / 4);
  double total = 0.0;
  double tail = 0.0;
  for (int k = 0; k < n; ++k) {
    double ck = 0.0;
    for (int j = 0; j < n; ++j) ck += w[j] * q[j] * P[static_cast<std::size_t>(k) * n + j];
    ck *= (2.0 * k + 1.0) / 2.0;
    total += ck * ck;
    if (k >= start) tail += ck * ck;
  }
  return total > 0.0 ? std::sqrt(tail / total) : 0.0;
}

// d/dphi of one Fourier column. Smooth sphere functions are, mode by mode,
// either polynomials in cos(phi) or sin(phi) times such polynomials; the
// representation with the faster-decaying spectrum is used.
void diff_column(const SphereGrid& g, const double* col, double* out, bool prefer_even,
                 double floor) {
  const int n = g.nlat();
  const auto s = g.sin_phi();
  const auto c = g.cos_phi();
  const auto& D = g.x_diff_matrix();

  std::vector<double> q_odd(n);
  double amp = 0.0;
  for (int j = 0; j < n; ++j) {
    q_odd[j] = col[j] / s[j];
    amp = std::max(amp, std::abs(col[j]));
  }
  bool even = prefer_even;
  if (amp > floor) {
    const double te = legendre_tail(g, col);
    const double to = legendre_tail(g, q_odd.data());
    even = te <= to;
  }
  const double* q = even ? col : q_odd.data();
  for (int i = 0; i < n; ++i) {
    double dq = 0.0;
    const double* Di = D.data() + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) dq += Di[j] * q[j];
    out[i] = even ? -s[i] * dq : c[i] * q[i] - s[i] * s[i] * dq;
  }
}

std::vector<double> dphi_spectral(const SphereGrid& g, std::span<const double> v, Kind kind) {
  std::vector<double> C, S;
  forward_dft(g, v, C, S);
  drop_rounding_modes(g, v, C, S);
  const int n = g.nlat();
  const int half = g.nlon() / 2;
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  const double floor = 1e-14 * vmax;
  std::vector<double> dC(C.size()), dS(S.size());
  for (int m = 0; m <= half; ++m) {
    const bool m_even = (m % 2) == 0;
    const bool prefer_even = kind == Kind::Scalar ? m_even : !m_even;
    const std::size_t off = static_cast<std::size_t>(m) * n;
    diff_column(g, C.data() + off, dC.data() + off, prefer_even, floor * g.nlon());
    diff_column(g, S.data() + off, dS.data() + off, prefer_even, floor * g.nlon());
  }
  return inverse_dft(g, dC, dS);
}

std::vector<double> dtheta_spectral(const SphereGrid& g, std::span<const double> v) {
  std::vector<double> C, S;
  forward_dft(g, v, C, S);
  drop_rounding_modes(g, v, C, S);
  const int n = g.nlat();
  const int half = g.nlon() / 2;
  std::vector<double> dC(C.size(), 0.0), dS(S.size(), 0.0);
  for (int m = 1; m < half; ++m) {
    for (int j = 0; j < n; ++j) {
      const std::size_t i = static_cast<std::size_t>(m) * n + j;
      dC[i] = m * S[i];
      dS[i] = -m * C[i];
    }
  }
  return inverse_dft(g, dC, dS);
}

std::vector<double> dphi_fd4(const SphereGrid& g, std::span<const double> v) {
  const int n = g.nlat();
  const int nlon = g.nlon();
  const auto phi = g.phi_nodes();
  std::vector<double> out(g.size());
  for (int j = 0; j < n; ++j) {
    const int start = std::clamp(j - 2, 0, n - 5);
    const auto w = fornberg_first_derivative(phi[j], phi.subspan(start, 5));
    for (int k = 0; k < nlon; ++k) {
      double acc = 0.0;
      for (int i = 0; i < 5; ++i) acc += w[i] * v[g.index(start + i, k)];
      out[g.index(j, k)] = acc;
    }
  }
  return out;
}

std::vector<double> dtheta_fd4(const SphereGrid& g, std::span<const double> v) {
  const int nlon = g.nlon();
  const double h = 2.0 * kPi / nlon;
  std::vector<double> out(g.size());
  auto wrap = [nlon](int k) { return ((k % nlon) + nlon) % nlon; };
  for (int j = 0; j < g.nlat(); ++j) {
    for (int k = 0; k < nlon; ++k) {
      const double d = -v[g.index(j, wrap(k + 2))] + 8.0 * v[g.index(j, wrap(k + 1))] -
                       8.0 * v[g.index(j, wrap(k - 1))] + v[g.index(j, wrap(k - 2))];
      out[g.index(j, k)] = d / (12.0 * h);
    }
  }
  return out;
}

std::vector<double> dphi_impl(const SphereGrid& g, std::span<const double> v, Kind kind,
                              DerivativeScheme scheme) {
  return scheme == DerivativeScheme::Spectral ? dphi_spectral(g, v, kind) : dphi_fd4(g, v);
}

std::vector<double> dtheta_impl(const SphereGrid& g, std::span<const double> v,
                                DerivativeScheme scheme) {
  return scheme == DerivativeScheme::Spectral ? dtheta_spectral(g, v) : dtheta_fd4(g, v);
}

// Orthonormal associated Legendre functions p_lm(x_j), l = m..lmax, stored [(l - m) * nlat + j].
std::vector<double> normalized_legendre(const SphereGrid& g, int m, int lmax) {
  const int n = g.nlat();
  const auto x = g.cos_phi();
  const auto s = g.sin_phi();
  std::vector<double> p(static_cast<std::size_t>(lmax - m + 1) * n, 0.0);
  for (int j = 0; j < n; ++j) {
    double pmm = 1.0 / std::sqrt(4.0 * kPi);
    for (int k = 1; k <= m; ++k) pmm *= std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s[j];
    p[j] = pmm;
    if (lmax == m) continue;
    double prev2 = pmm;
    double prev1 = std::sqrt(2.0 * m + 3.0) * x[j] * pmm;
    p[static_cast<std::size_t>(1) * n + j] = prev1;
    for (int l = m + 2; l <= lmax; ++l) {
      const double ll = static_cast<double>(l);
      const double a = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - 1.0 * m * m));
      const double b = std::sqrt(((ll - 1.0) * (ll - 1.0) - 1.0 * m * m) /
                                 (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
      const double cur = a * (x[j] * prev1 - b * prev2);
      p[static_cast<std::size_t>(l - m) * n + j] = cur;
      prev2 = prev1;
      prev1 = cur;
    }
  }
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// SphereGrid

GridPtr SphereGrid::build(int nlat, int nlon) {
  if (nlat < 4) throw std::invalid_argument("nlat must be >= 4, got " + std::to_string(nlat));
  if (nlon < 4 || nlon % 2 != 0) {
    throw std::invalid_argument("nlon must be even and >= 4, got " + std::to_string(nlon));
  }
  return GridPtr(new SphereGrid(nlat, nlon));
}

int SphereGrid::max_order() const { return std::min(nlat_ - 1, nlon_ / 2 - 1); }

SphereGrid::SphereGrid(int nlat, int nlon) : nlat_(nlat), nlon_(nlon) {
  phi_.resize(nlat);
  cos_phi_.resize(nlat);
  sin_phi_.resize(nlat);
  gauss_w_.resize(nlat);
  for (int i = 0; i < nlat; ++i) {
    // Newton on P_n; the initial guesses order the roots by decreasing x.
    double x = std::cos(kPi * (i + 0.75) / (nlat + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre_with_derivative(nlat, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [p, dp] = legendre_with_derivative(nlat, x);
    (void)p;
    cos_phi_[i] = x;
    sin_phi_[i] = std::sqrt((1.0 - x) * (1.0 + x));
    phi_[i] = std::acos(x);
    gauss_w_[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }

  theta_.resize(nlon);
  for (int k = 0; k < nlon; ++k) theta_[k] = 2.0 * kPi * k / nlon;

  weights_.resize(size());
  for (int j = 0; j < nlat; ++j) {
    for (int k = 0; k < nlon; ++k) weights_[index(j, k)] = gauss_w_[j] * 2.0 * kPi / nlon;
  }

  // Barycentric weights for Gauss-Legendre nodes: (-1)^j sqrt((1 - x_j^2) w_j).
  std::vector<double> bw(nlat);
  for (int j = 0; j < nlat; ++j) {
    bw[j] = ((j % 2) ? -1.0 : 1.0) * std::sqrt((1.0 - cos_phi_[j] * cos_phi_[j]) * gauss_w_[j]);
  }
  diff_x_.assign(static_cast<std::size_t>(nlat) * nlat, 0.0);
  for (int i = 0; i < nlat; ++i) {
    double diag = 0.0;
    for (int j = 0; j < nlat; ++j) {
      if (i == j) continue;
      const double d = (bw[j] / bw[i]) / (cos_phi_[i] - cos_phi_[j]);
      diff_x_[static_cast<std::size_t>(i) * nlat + j] = d;
      diag -= d;
    }
    diff_x_[static_cast<std::size_t>(i) * nlat + i] = diag;
  }

  legendre_.assign(static_cast<std::size_t>(nlat) * nlat, 0.0);
  for (int j = 0; j < nlat; ++j) {
    double p0 = 1.0;
    double p1 = cos_phi_[j];
    legendre_[j] = 1.0;
    if (nlat > 1) legendre_[static_cast<std::size_t>(nlat) + j] = p1;
    for (int k = 2; k < nlat; ++k) {
      const double p2 = ((2.0 * k - 1.0) * cos_phi_[j] * p1 - (k - 1.0) * p0) / k;
      legendre_[static_cast<std::size_t>(k) * nlat + j] = p2;
      p0 = p1;
      p1 = p2;
    }
  }

  const int half = nlon / 2;
  cos_tab_.resize(static_cast<std::size_t>(half + 1) * nlon);
  sin_tab_.resize(cos_tab_.size());
  for (int m = 0; m <= half; ++m) {
    for (int k = 0; k < nlon; ++k) {
      // Exact index arithmetic keeps the tables symmetric to the last bit.
      const long mk = (static_cast<long>(m) * k) % nlon;
      const double ang = 2.0 * kPi * static_cast<double>(mk) / nlon;
      cos_tab_[static_cast<std::size_t>(m) * nlon + k] = std::cos(ang);
      sin_tab_[static_cast<std::size_t>(m) * nlon + k] = std::sin(ang);
    }
  }
}

// ---------------------------------------------------------------------------
// Fields

ScalarField::ScalarField(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid->size()) throw std::invalid_argument("scalar field size mismatch");
}

ScalarField::ScalarField(GridPtr g, double fill) : grid(std::move(g)), values(grid->size(), fill) {}

TangentField::TangentField(GridPtr g, std::vector<double> a_, std::vector<double> b_)
    : grid(std::move(g)), a(std::move(a_)), b(std::move(b_)) {
  if (a.size() != grid->size() || b.size() != grid->size()) {
    throw std::invalid_argument("tangent field size mismatch");
  }
}

TangentField::TangentField(GridPtr g)
    : grid(std::move(g)), a(grid->size(), 0.0), b(grid->size(), 0.0) {}

ScalarField sample(const GridPtr& grid, const std::function<double(double, double)>& fn) {
  ScalarField s(grid);
  for (int j = 0; j < grid->nlat(); ++j) {
    for (int k = 0; k < grid->nlon(); ++k) s(j, k) = fn(grid->phi(j), grid->theta(k));
  }
  return s;
}

TangentField sample_tangent(const GridPtr& grid, const std::function<double(double, double)>& a,
                            const std::function<double(double, double)>& b) {
  return {grid, sample(grid, a).values, sample(grid, b).values};
}

namespace {
template <class Op>
ScalarField zip(const ScalarField& x, const ScalarField& y, Op op) {
  require_same_grid(x.grid, y.grid);
  ScalarField r(x.grid);
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = op(x.values[i], y.values[i]);
  return r;
}
}  // namespace

ScalarField operator+(const ScalarField& x, const ScalarField& y) {
  return zip(x, y, [](double p, double q) { return p + q; });
}
ScalarField operator-(const ScalarField& x, const ScalarField& y) {
  return zip(x, y, [](double p, double q) { return p - q; });
}
ScalarField operator*(const ScalarField& x, const ScalarField& y) {
  return zip(x, y, [](double p, double q) { return p * q; });
}
ScalarField operator*(double s, const ScalarField& x) {
  return map(x, [s](double v) { return s * v; });
}
ScalarField operator-(const ScalarField& x) {
  return map(x, [](double v) { return -v; });
}

TangentField operator+(const TangentField& x, const TangentField& y) {
  return {x.grid, (x.a_field() + y.a_field()).values, (x.b_field() + y.b_field()).values};
}
TangentField operator-(const TangentField& x, const TangentField& y) {
  return {x.grid, (x.a_field() - y.a_field()).values, (x.b_field() - y.b_field()).values};
}
TangentField operator*(double s, const TangentField& x) {
  return {x.grid, (s * x.a_field()).values, (s * x.b_field()).values};
}
TangentField operator*(const ScalarField& s, const TangentField& x) {
  return {x.grid, (s * x.a_field()).values, (s * x.b_field()).values};
}

ScalarField dot(const TangentField& u, const TangentField& v) {
  return u.a_field() * v.a_field() + u.b_field() * v.b_field();
}

ScalarField cross_normal(const TangentField& u, const TangentField& v) {
  return u.a_field() * v.b_field() - u.b_field() * v.a_field();
}

ScalarField map(const ScalarField& x, const std::function<double(double)>& fn) {
  ScalarField r(x.grid);
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = fn(x.values[i]);
  return r;
}

double norm_linf(const ScalarField& s) {
  double m = 0.0;
  for (double v : s.values) m = std::max(m, std::abs(v));
  return m;
}

double norm_linf(const TangentField& w) {
  double m = 0.0;
  for (std::size_t i = 0; i < w.a.size(); ++i) m = std::max(m, std::hypot(w.a[i], w.b[i]));
  return m;
}

double norm_l2(const ScalarField& s) { return std::sqrt(std::max(0.0, quadrature(s * s))); }

double norm_l2(const TangentField& w) { return std::sqrt(std::max(0.0, quadrature(dot(w, w)))); }

// ---------------------------------------------------------------------------
// Calculus

double quadrature(const ScalarField& s) {
  const auto w = s.grid->weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < s.values.size(); ++i) acc += w[i] * s.values[i];
  return acc;
}

ScalarField d_phi(const ScalarField& s, DerivativeScheme scheme) {
  return {s.grid, dphi_impl(*s.grid, s.values, Kind::Scalar, scheme)};
}

ScalarField d_theta(const ScalarField& s, DerivativeScheme scheme) {
  return {s.grid, dtheta_impl(*s.grid, s.values, scheme)};
}

namespace {
// Per-node multiplier from a per-latitude array.
std::vector<double> per_node(const SphereGrid& g, const std::function<double(int)>& lat) {
  std::vector<double> out(g.size());
  for (int j = 0; j < g.nlat(); ++j) {
    const double v = lat(j);
    for (int k = 0; k < g.nlon(); ++k) out[g.index(j, k)] = v;
  }
  return out;
}
}  // namespace

TangentField grad(const ScalarField& s, DerivativeScheme scheme) {
  const auto& g = *s.grid;
  auto a = dphi_impl(g, s.values, Kind::Scalar, scheme);
  auto b = dtheta_impl(g, s.values, scheme);
  const auto inv_sin = per_node(g, [&](int j) { return 1.0 / g.sin_phi()[j]; });
  for (std::size_t i = 0; i < b.size(); ++i) b[i] *= inv_sin[i];
  return {s.grid, std::move(a), std::move(b)};
}

ScalarField div(const TangentField& w, DerivativeScheme scheme) {
  const auto& g = *w.grid;
  const auto a_phi = dphi_impl(g, w.a, Kind::VectorComponent, scheme);
  const auto b_theta = dtheta_impl(g, w.b, scheme);
  const auto cot = per_node(g, [&](int j) { return g.cos_phi()[j] / g.sin_phi()[j]; });
  const auto inv_sin = per_node(g, [&](int j) { return 1.0 / g.sin_phi()[j]; });
  ScalarField r(w.grid);
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    r.values[i] = a_phi[i] + w.a[i] * cot[i] + b_theta[i] * inv_sin[i];
  }
  return r;
}

ScalarField curl(const TangentField& w, DerivativeScheme scheme) {
  const auto& g = *w.grid;
  const auto b_phi = dphi_impl(g, w.b, Kind::VectorComponent, scheme);
  const auto a_theta = dtheta_impl(g, w.a, scheme);
  const auto cot = per_node(g, [&](int j) { return g.cos_phi()[j] / g.sin_phi()[j]; });
  const auto inv_sin = per_node(g, [&](int j) { return 1.0 / g.sin_phi()[j]; });
  ScalarField r(w.grid);
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    r.values[i] = b_phi[i] + w.b[i] * cot[i] - a_theta[i] * inv_sin[i];
  }
  return r;
}

TangentField perp(const TangentField& w) {
  std::vector<double> a(w.b.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = -w.b[i];
  return {w.grid, std::move(a), w.a};
}

ScalarField laplace_beltrami(const ScalarField& s, DerivativeScheme scheme) {
  return div(grad(s, scheme), scheme);
}

ScalarField advect(const TangentField& w, const ScalarField& s, DerivativeScheme scheme) {
  return dot(w, grad(s, scheme));
}

TangentField covariant_derivative(const TangentField& v, const TangentField& w,
                                  DerivativeScheme scheme) {
  const auto& g = *v.grid;
  require_same_grid(v.grid, w.grid);
  const auto A_phi = dphi_impl(g, w.a, Kind::VectorComponent, scheme);
  const auto B_phi = dphi_impl(g, w.b, Kind::VectorComponent, scheme);
  const auto A_theta = dtheta_impl(g, w.a, scheme);
  const auto B_theta = dtheta_impl(g, w.b, scheme);
  const auto cot = per_node(g, [&](int j) { return g.cos_phi()[j] / g.sin_phi()[j]; });
  const auto inv_sin = per_node(g, [&](int j) { return 1.0 / g.sin_phi()[j]; });
  TangentField r(v.grid);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double a = v.a[i];
    const double b = v.b[i];
    r.a[i] = a * A_phi[i] + b * A_theta[i] * inv_sin[i] - b * w.b[i] * cot[i];
    r.b[i] = a * B_phi[i] + b * B_theta[i] * inv_sin[i] + b * w.a[i] * cot[i];
  }
  return r;
}

// ---------------------------------------------------------------------------
// Harmonics

ScalarField sph_harmonic(int l, int m, const GridPtr& grid) {
  if (l < 0 || std::abs(m) > l) {
    throw std::invalid_argument("spherical harmonic requires |m| <= l, got l=" + std::to_string(l) +
                                " m=" + std::to_string(m));
  }
  const int am = std::abs(m);
  const auto p = normalized_legendre(*grid, am, l);
  const int n = grid->nlat();
  ScalarField s(grid);
  for (int j = 0; j < n; ++j) {
    const double plm = p[static_cast<std::size_t>(l - am) * n + j];
    for (int k = 0; k < grid->nlon(); ++k) {
      const double th = grid->theta(k);
      double v = plm;
      if (m > 0) v *= std::sqrt(2.0) * std::cos(am * th);
      if (m < 0) v *= std::sqrt(2.0) * std::sin(am * th);
      s(j, k) = v;
    }
  }
  return s;
}

HarmonicCoefficients sh_analysis(const ScalarField& s) {
  const auto& g = *s.grid;
  const int L = g.max_degree();
  const int M = g.max_order();
  const int n = g.nlat();
  std::vector<double> C, S;
  forward_dft(g, s.values, C, S);
  HarmonicCoefficients out;
  out.lmax = L;
  out.c.assign(static_cast<std::size_t>(L + 1) * (L + 1), 0.0);
  const double dtheta = 2.0 * kPi / g.nlon();
  const auto w = g.gauss_weights();
  for (int m = 0; m <= M; ++m) {
    const auto p = normalized_legendre(g, m, L);
    const double norm = m == 0 ? 1.0 : std::sqrt(2.0);
    for (int l = m; l <= L; ++l) {
      double cc = 0.0;
      double cs = 0.0;
      for (int j = 0; j < n; ++j) {
        const double pj = p[static_cast<std::size_t>(l - m) * n + j] * w[j];
        cc += pj * C[static_cast<std::size_t>(m) * n + j];
        cs += pj * S[static_cast<std::size_t>(m) * n + j];
      }
      out.at(l, m) = norm * dtheta * cc;
      if (m > 0) out.at(l, -m) = norm * dtheta * cs;
    }
  }
  return out;
}

ScalarField sh_synthesis(const HarmonicCoefficients& coeffs, const GridPtr& grid) {
  const auto& g = *grid;
  const int L = std::min(coeffs.lmax, g.max_degree());
  const int M = std::min(L, g.max_order());
  const int n = g.nlat();
  const int half = g.nlon() / 2;
  std::vector<double> C(static_cast<std::size_t>(half + 1) * n, 0.0);
  std::vector<double> S(C.size(), 0.0);
  for (int m = 0; m <= M; ++m) {
    const auto p = normalized_legendre(g, m, L);
    const double norm = m == 0 ? 1.0 : std::sqrt(2.0);
    for (int l = m; l <= L; ++l) {
      const double cc = coeffs.at(l, m);
      const double cs = m > 0 ? coeffs.at(l, -m) : 0.0;
      for (int j = 0; j < n; ++j) {
        const double pj = norm * p[static_cast<std::size_t>(l - m) * n + j];
        C[static_cast<std::size_t>(m) * n + j] += pj * cc;
        S[static_cast<std::size_t>(m) * n + j] += pj * cs;
      }
    }
  }
  // inverse_dft divides by nlon (and 2/nlon off the ends); undo that scaling.
  for (int m = 0; m <= half; ++m) {
    const double scale = (m == 0 || m == half) ? g.nlon() : g.nlon() / 2.0;
    for (int j = 0; j < n; ++j) {
      C[static_cast<std::size_t>(m) * n + j] *= scale;
      S[static_cast<std::size_t>(m) * n + j] *= scale;
    }
  }
  return {grid, inverse_dft(g, C, S)};
}

ScalarField poisson_solve(const ScalarField& rhs) {
  const double inf = norm_linf(rhs);
  if (inf == 0.0) return ScalarField(rhs.grid);
  const double mean = quadrature(rhs) / (4.0 * kPi);
  if (std::abs(mean) >= 1e-8 * inf) {
    throw SolvabilityError("Poisson right-hand side has nonzero mean " + std::to_string(mean));
  }
  auto c = sh_analysis(rhs);
  c.at(0, 0) = 0.0;
  for (int l = 1; l <= c.lmax; ++l) {
    const double ev = -static_cast<double>(l) * (l + 1);
    for (int m = -l; m <= l; ++m) c.at(l, m) /= ev;
  }
  return sh_synthesis(c, rhs.grid);
}

HelmholtzResult helmholtz_solve(const ScalarField& rhs, double shift) {
  auto c = sh_analysis(rhs);
  double resonant = 0.0;
  const double scale = std::max(1.0, std::abs(shift));
  for (int l = 0; l <= c.lmax; ++l) {
    const double ev = -static_cast<double>(l) * (l + 1) + shift;
    for (int m = -l; m <= l; ++m) {
      if (std::abs(ev) < 1e-10 * scale) {
        resonant = std::max(resonant, std::abs(c.at(l, m)));
        c.at(l, m) = 0.0;
      } else {
        c.at(l, m) /= ev;
      }
    }
  }
  return {sh_synthesis(c, rhs.grid), resonant};
}

}  // namespace homog
