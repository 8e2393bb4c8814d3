#include "homog/families.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace homog {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct TagName {
  FamilyTag tag;
  const char* name;
};

constexpr std::array<TagName, 8> kTagNames{{{FamilyTag::Shear, "shear"},
                                            {FamilyTag::Radial, "radial"},
                                            {FamilyTag::Conical, "conical"},
                                            {FamilyTag::Rotational, "rotational"},
                                            {FamilyTag::Irrotational, "irrotational"},
                                            {FamilyTag::Lifted2D, "lifted2d"},
                                            {FamilyTag::TwoHalfD, "two_half_d"},
                                            {FamilyTag::Custom, "custom"}}};

std::string range_note(double alpha) {
  if (alpha <= -1.0) return "C1 across the axis for alpha <= -1";
  return "singular on the axis for alpha > -1";
}

void check_periodic(const std::function<double(double)>& fn, const char* what) {
  const double at0 = fn(0.0);
  const double at1 = fn(kTwoPi);
  double scale = 1.0;
  for (int i = 0; i < 64; ++i) scale = std::max(scale, std::abs(fn(kTwoPi * i / 64.0)));
  if (!std::isfinite(at0) || !std::isfinite(at1) || std::abs(at0 - at1) > 1e-8 * scale) {
    throw std::invalid_argument(std::string(what) + " is not 2pi-periodic");
  }
}

}  // namespace

std::string to_string(FamilyTag tag) {
  for (const auto& tn : kTagNames) {
    if (tn.tag == tag) return tn.name;
  }
  return "custom";
}

FamilyTag family_tag_from_string(std::string_view name) {
  for (const auto& tn : kTagNames) {
    if (name == tn.name) return tn.tag;
  }
  throw std::invalid_argument("unknown family tag: " + std::string(name));
}

HomogeneousSolution sample_solution(double alpha, FamilyTag tag, std::string note, Params params,
                                    AnalyticFields closure, const GridPtr& grid) {
  const int nlat = grid->nlat();
  const int nlon = grid->nlon();
  std::vector<double> f(grid->size()), a(grid->size()), b(grid->size()), p(grid->size());
  for (int j = 0; j < nlat; ++j) {
    for (int k = 0; k < nlon; ++k) {
      const auto pv = closure(grid->phi(j), grid->theta(k));
      const auto i = grid->index(j, k);
      f[i] = pv.f;
      a[i] = pv.a;
      b[i] = pv.b;
      p[i] = pv.p;
    }
  }
  HomogeneousSolution sol;
  sol.alpha = alpha;
  sol.f = ScalarField(grid, std::move(f));
  sol.v = TangentField(grid, std::move(a), std::move(b));
  sol.p = ScalarField(grid, std::move(p));
  sol.family_tag = tag;
  sol.smooth_range_note = std::move(note);
  sol.params = std::move(params);
  sol.closure = std::move(closure);
  return sol;
}

HomogeneousSolution resample(const HomogeneousSolution& sol, const GridPtr& grid) {
  if (sol.closure) {
    return sample_solution(sol.alpha, sol.family_tag, sol.smooth_range_note, sol.params,
                           sol.closure, grid);
  }
  if (sol.family_tag == FamilyTag::Irrotational) {
    return irrotational(static_cast<int>(sol.params.at("l")), static_cast<int>(sol.params.at("m")),
                        sol.params.at("amp"), grid);
  }
  throw std::invalid_argument("solution has no closure to resample");
}

HomogeneousSolution parallel_shear(double alpha, const PeriodicFunction& z, const GridPtr& grid,
                                   Params params) {
  if (!z.value) throw std::invalid_argument("shear profile is empty");
  check_periodic(z.value, "shear profile");
  params["alpha"] = alpha;
  auto zv = z.value;
  AnalyticFields closure = [alpha, zv](double phi, double theta) {
    const double s = std::sin(phi);
    const double zt = zv(theta);
    const double sa = std::pow(s, -alpha);
    return PointValues{zt * std::cos(phi) * sa, -zt * s * sa, 0.0, 0.0};
  };
  return sample_solution(alpha, FamilyTag::Shear, range_note(alpha), std::move(params),
                         std::move(closure), grid);
}

HomogeneousSolution radial(double c, const GridPtr& grid) {
  AnalyticFields closure = [c](double, double) { return PointValues{c, 0.0, 0.0, -0.5 * c * c}; };
  return sample_solution(2.0, FamilyTag::Radial, "smooth away from the origin", {{"c", c}},
                         std::move(closure), grid);
}

HomogeneousSolution conical_axisym(double alpha, double a0, double b0, const GridPtr& grid) {
  if (std::abs(a0 * a0 + b0 * b0 - 1.0) > 1e-12) {
    throw std::invalid_argument("conical family needs a0^2 + b0^2 = 1");
  }
  AnalyticFields closure = [alpha, a0, b0](double phi, double theta) {
    const double sp = std::sin(phi), cp = std::cos(phi);
    const double st = std::sin(theta), ct = std::cos(theta);
    const double x = sp * ct, y = sp * st, z = cp;
    const double r2 = x * x + y * y;
    const double K = a0 * a0 * r2 - b0 * b0 * z * z;
    if (K <= 0.0 || r2 == 0.0) return PointValues{};
    const double k1 = std::pow(K, -0.5 * alpha);
    const double k2 = std::pow(K, 0.5 * (1.0 - alpha));
    const double vx = b0 * b0 * x * z / r2 * k1 + b0 * y / r2 * k2;
    const double vy = b0 * b0 * y * z / r2 * k1 - b0 * x / r2 * k2;
    const double vz = a0 * a0 * k1;
    PointValues pv;
    pv.f = vx * x + vy * y + vz * z;
    pv.a = vx * cp * ct + vy * cp * st - vz * sp;
    pv.b = -vx * st + vy * ct;
    return pv;
  };
  std::string note = range_note(alpha) + "; vanishes inside the cone b0^2 z^2 >= a0^2 (x^2 + y^2)";
  return sample_solution(alpha, FamilyTag::Conical, std::move(note),
                         {{"alpha", alpha}, {"a0", a0}, {"b0", b0}}, std::move(closure), grid);
}

HomogeneousSolution rotational(double alpha, double amp, const GridPtr& grid) {
  if (alpha == 0.0) throw std::invalid_argument("rotational family needs alpha != 0");
  AnalyticFields closure = [alpha, amp](double phi, double) {
    const double sa = std::pow(std::sin(phi), -alpha);
    return PointValues{0.0, 0.0, amp * sa, -amp * amp / (2.0 * alpha) * sa * sa};
  };
  return sample_solution(alpha, FamilyTag::Rotational, range_note(alpha),
                         {{"alpha", alpha}, {"amp", amp}}, std::move(closure), grid);
}

HomogeneousSolution irrotational(int l, int m, double amp, const GridPtr& grid) {
  if (l < 1) throw std::invalid_argument("irrotational family needs l >= 1");
  if (std::abs(m) > l) throw std::invalid_argument("irrotational family needs |m| <= l");
  const double lam = static_cast<double>(l);
  HomogeneousSolution sol;
  sol.alpha = 1.0 - lam;
  sol.f = amp * sph_harmonic(l, m, grid);
  const TangentField g = grad(sol.f);
  sol.v = (1.0 / lam) * g;
  const ScalarField g2 = dot(g, g);
  sol.p = ScalarField(grid, 0.0);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    sol.p.values[i] = -0.5 * sol.f.values[i] * sol.f.values[i] - g2.values[i] / (2.0 * lam * lam);
  }
  sol.family_tag = FamilyTag::Irrotational;
  sol.smooth_range_note = "smooth for every integer l >= 1";
  sol.params = {{"l", lam}, {"m", static_cast<double>(m)}, {"amp", amp}};
  return sol;
}

HomogeneousSolution lift_2d(const Solution2D& sol2d, const GridPtr& grid) {
  if (!sol2d.psi || !sol2d.psi_prime) throw std::invalid_argument("2D profile is empty");
  check_periodic(sol2d.psi, "stream profile");
  check_periodic(sol2d.psi_prime, "stream profile derivative");
  const double alpha = sol2d.alpha;
  const double pc = sol2d.p_const;
  auto psi = sol2d.psi;
  auto dpsi = sol2d.psi_prime;
  AnalyticFields closure = [alpha, pc, psi, dpsi](double phi, double theta) {
    const double s = std::sin(phi);
    const double sa = std::pow(s, -alpha);
    const double q = psi(theta), dq = dpsi(theta);
    return PointValues{-dq * s * sa, -dq * std::cos(phi) * sa, (1.0 - alpha) * q * sa,
                       pc * sa * sa};
  };
  return sample_solution(alpha, FamilyTag::Lifted2D, range_note(alpha),
                         {{"alpha", alpha}, {"p_const", pc}, {"bern", sol2d.bern}},
                         std::move(closure), grid);
}

PeriodicFunction two_half_d_profile(const Solution2D& sol2d, double const_c,
                                    const std::vector<int>& sign_profile) {
  const double alpha = sol2d.alpha;
  if (alpha == 0.0 || alpha == 1.0) throw std::invalid_argument("2.5D needs alpha not in {0, 1}");
  if (!(const_c > 0.0)) throw std::invalid_argument("2.5D needs a positive constant");
  if (!sol2d.psi) throw std::invalid_argument("2D profile is empty");
  const double expo = -alpha / (1.0 - alpha);
  if (!sol2d.zeros.empty() && expo < 0.0) {
    throw std::invalid_argument("third component unbounded at zeros of psi for this alpha");
  }
  const std::size_t pieces = std::max<std::size_t>(1, sol2d.zeros.size());
  std::vector<int> signs(pieces);
  for (std::size_t i = 0; i < pieces; ++i) {
    if (i < sign_profile.size()) {
      signs[i] = sign_profile[i] >= 0 ? 1 : -1;
    } else {
      signs[i] = i % 2 == 0 ? 1 : -1;
    }
  }
  const auto zeros = sol2d.zeros;
  const double scale = std::pow(const_c, 1.0 / (1.0 - alpha));
  auto piece_sign = [zeros, signs](double theta) {
    if (zeros.empty()) return signs[0];
    double t = std::fmod(theta, kTwoPi);
    if (t < 0) t += kTwoPi;
    const auto count = static_cast<std::size_t>(std::upper_bound(zeros.begin(), zeros.end(), t) -
                                                zeros.begin());
    return signs[count % zeros.size()];
  };
  auto psi = sol2d.psi;
  auto dpsi = sol2d.psi_prime;
  PeriodicFunction out;
  out.value = [=](double theta) {
    const double q = std::abs(psi(theta));
    if (q == 0.0) return 0.0;
    return piece_sign(theta) * scale * std::pow(q, expo);
  };
  if (dpsi) {
    out.derivative = [=](double theta) {
      const double q = psi(theta);
      if (q == 0.0) return 0.0;
      const double aq = std::abs(q);
      return piece_sign(theta) * scale * expo * std::pow(aq, expo - 1.0) * (q > 0 ? 1.0 : -1.0) *
             dpsi(theta);
    };
  }
  return out;
}

HomogeneousSolution two_half_d(const Solution2D& sol2d, double const_c,
                               const std::vector<int>& sign_profile, const GridPtr& grid) {
  const PeriodicFunction zf = two_half_d_profile(sol2d, const_c, sign_profile);
  HomogeneousSolution planar = lift_2d(sol2d, grid);
  const double alpha = sol2d.alpha;
  auto base = planar.closure;
  auto zv = zf.value;
  AnalyticFields closure = [alpha, base, zv](double phi, double theta) {
    PointValues pv = base(phi, theta);
    const double s = std::sin(phi);
    const double sa = std::pow(s, -alpha);
    const double zt = zv(theta);
    pv.f += zt * std::cos(phi) * sa;
    pv.a -= zt * s * sa;
    return pv;
  };
  Params params = planar.params;
  params["const_c"] = const_c;
  return sample_solution(alpha, FamilyTag::TwoHalfD, range_note(alpha), std::move(params),
                         std::move(closure), grid);
}

}  // namespace homog
