#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "homog/axisym.hpp"
#include "homog/families.hpp"
#include "homog/homo2d.hpp"
#include "homog/io.hpp"
#include "homog/onsager.hpp"
#include "homog/residuals.hpp"

namespace homog::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  int nlat = 64;
  int nlon = 128;
  double tol = 1e-6;
  std::string output;
  std::string format;
};

struct FamilyArgs {
  std::string family;
  std::string input;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  int l = 2;
  int m = 0;
  double amp = 1.0;
  double a0 = 1.0;
  double b0 = 0.0;
  double c = 1.0;
  int k = 0;
  double gamma1 = 2.0;
  double gamma2 = 1.0;
  std::string b_list;
  std::string signs;
};

void add_common(CLI::App* sub, Common& c, const std::string& default_format) {
  c.format = default_format;
  sub->add_option("--nlat", c.nlat, "Latitude nodes")->check(CLI::Range(4, 1024));
  sub->add_option("--nlon", c.nlon, "Longitude nodes (even)")->check(CLI::Range(4, 2048));
  sub->add_option("--tol", c.tol, "Pass tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--output,-o", c.output, "Output path (default: stdout)");
  sub->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

void add_family(CLI::App* sub, FamilyArgs& f) {
  sub->add_option("--family", f.family, "Solution family")
      ->check(CLI::IsMember({"shear", "radial", "conical", "rotational", "irrotational",
                             "lifted2d", "two_half_d"}));
  sub->add_option("--input", f.input, "Solution JSON to load instead of a family");
  sub->add_option("--alpha", f.alpha, "Homogeneity exponent");
  sub->add_option("--l", f.l, "Harmonic degree (irrotational)");
  sub->add_option("--m", f.m, "Harmonic order (irrotational)");
  sub->add_option("--amp", f.amp, "Amplitude");
  sub->add_option("--a0", f.a0, "Meridional component at the equator (conical)");
  sub->add_option("--b0", f.b0, "Swirl at the equator (conical)");
  sub->add_option("--c", f.c, "Radial constant or 2.5D constant");
  sub->add_option("--k", f.k, "Shear profile z = cos(k theta); 0 gives z = 1");
  sub->add_option("--gamma1", f.gamma1, "Exceptional 2D profile constant");
  sub->add_option("--gamma2", f.gamma2, "Exceptional 2D profile amplitude");
  sub->add_option("--B-list", f.b_list, "Comma-separated B values for glued 2D profiles");
  sub->add_option("--signs", f.signs, "Comma-separated signs of the 2.5D third component");
}

double alpha_or(const FamilyArgs& f, double fallback) {
  return std::isnan(f.alpha) ? fallback : f.alpha;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_number(const std::string& s) {
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw UsageError("not a number: '" + s + "'");
  return v;
}

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;
  std::vector<double> values() const {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    return v;
  }
};

Range parse_range(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw UsageError("range must be lo:hi:n, got '" + s + "'");
  Range r{parse_number(parts[0]), parse_number(parts[1]), 0};
  const double n = parse_number(parts[2]);
  if (n < 1 || n != std::floor(n)) throw UsageError("range count must be a positive integer");
  r.n = static_cast<int>(n);
  return r;
}

Solution2D base_2d(const FamilyArgs& f) {
  if (f.b_list.empty()) return elliptic_exceptional(f.gamma1, f.gamma2);
  std::vector<double> bs;
  for (const auto& s : split(f.b_list, ',')) bs.push_back(parse_number(s));
  const auto glued = glue_hyperbolic(alpha_or(f, -2.0), bs);
  if (!glued) throw UsageError("B list does not close a 2pi-periodic profile");
  return glued->solution;
}

HomogeneousSolution build_family(const FamilyArgs& f, const GridPtr& grid) {
  if (!f.input.empty()) {
    try {
      return solution_from_json(read_text(f.input));
    } catch (const std::runtime_error& e) {
      throw UsageError(e.what());
    }
  }
  if (f.family.empty()) throw UsageError("either --family or --input is required");
  if (f.family == "shear") {
    const int k = f.k;
    const double amp = f.amp;
    PeriodicFunction z{[k, amp](double t) { return k == 0 ? amp : amp * std::cos(k * t); },
                       [k, amp](double t) { return k == 0 ? 0.0 : -amp * k * std::sin(k * t); }};
    return parallel_shear(alpha_or(f, -2.0), z, grid, {{"k", k}, {"amp", amp}});
  }
  if (f.family == "radial") return radial(f.c, grid);
  if (f.family == "conical") return conical_axisym(alpha_or(f, -2.0), f.a0, f.b0, grid);
  if (f.family == "rotational") return rotational(alpha_or(f, -1.0), f.amp, grid);
  if (f.family == "irrotational") return irrotational(f.l, f.m, f.amp, grid);
  if (f.family == "lifted2d") return lift_2d(base_2d(f), grid);
  if (f.family == "two_half_d") {
    std::vector<int> signs;
    for (const auto& s : split(f.signs, ',')) signs.push_back(parse_number(s) < 0 ? -1 : 1);
    return two_half_d(base_2d(f), f.c, signs, grid);
  }
  throw UsageError("unknown family " + f.family);
}

void emit(const Common& c, const std::string& content, std::ostream& out) {
  if (c.output.empty()) {
    out << content;
    if (!content.empty() && content.back() != '\n') out << '\n';
    return;
  }
  try {
    write_text(c.output, content);
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
}

std::string report_csv(const ResidualReport& rep) {
  std::ostringstream s;
  s << "equation,linf,l2\n";
  char buf[64];
  for (const auto& e : rep.equations) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", e.linf, e.l2);
    s << e.name << ',' << buf << '\n';
  }
  return s.str();
}

std::string table_out(const Common& c, const Table& t) {
  return c.format == "json" ? to_json(t, 2) : to_csv(t);
}

/// Evaluates fn(i) for i < n on up to thread_count() threads; results keep index order.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(n);
  const unsigned workers = std::min<std::size_t>(thread_count(), std::max<std::size_t>(n, 1));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

GridPtr make_grid(const Common& c) {
  if (c.nlon % 2 != 0) throw UsageError("--nlon must be even");
  return SphereGrid::build(c.nlat, c.nlon);
}

}  // namespace

unsigned thread_count() {
  if (const char* env = std::getenv("HOMOG_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stationary homogeneous Euler solutions on the sphere"};
  app.set_config("--config", "", "TOML config file; command-line flags override it");
  app.require_subcommand(1);

  Common c_verify, c_family, c_scan2d, c_axi, c_flux, c_landau;
  FamilyArgs f_verify, f_family, f_flux;

  auto* verify = app.add_subcommand("verify", "Residuals of the reduced system and its equivalent forms");
  add_common(verify, c_verify, "json");
  add_family(verify, f_verify);

  auto* family = app.add_subcommand("family", "Construct a family and export its fields");
  add_common(family, c_family, "json");
  add_family(family, f_family);

  auto* scan2d = app.add_subcommand("scan2d", "Time span T(B) of 2D hyperbolic arches");
  add_common(scan2d, c_scan2d, "csv");
  double s2_alpha = -1.0;
  std::string s2_range = "0:10:11";
  scan2d->add_option("--alpha", s2_alpha, "Homogeneity exponent (<= -1)");
  scan2d->add_option("--B-range", s2_range, "lo:hi:n");

  auto* axi = app.add_subcommand("scan-axisym", "Shooting defects of the no-swirl system");
  add_common(axi, c_axi, "csv");
  std::string axi_range = "-3.2:-0.8:25";
  double axi_B = 0.0;
  axi->add_option("--alpha-range", axi_range, "lo:hi:n");
  axi->add_option("--B", axi_B, "Bernoulli constant");

  auto* fluxc = app.add_subcommand("flux", "Energy flux and the vanishing moments");
  add_common(fluxc, c_flux, "json");
  add_family(fluxc, f_flux);
  int n_max = 4;
  fluxc->add_option("--n-max", n_max, "Highest moment")->check(CLI::NonNegativeNumber);

  auto* landau = app.add_subcommand("landau", "Landau profiles and the vanishing-viscosity ladder");
  add_common(landau, c_landau, "csv");
  std::vector<double> nus{1.0, 0.1, 0.01};
  double lc = 2.0;
  std::optional<double> eA, eB, eC;
  landau->add_option("--nu", nus, "Viscosity ladder");
  landau->add_option("--c", lc, "Smooth-branch pole c, |c| > 1");
  landau->add_option("--A", eA, "Inviscid branch coefficient A");
  landau->add_option("--B", eB, "Inviscid branch coefficient B");
  landau->add_option("--C", eC, "Inviscid branch coefficient C");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (verify->parsed()) {
      const auto grid = make_grid(c_verify);
      const HomogeneousSolution sol = build_family(f_verify, grid);
      ResidualReport rep = check_system(sol, c_verify.tol);
      rep.merge(check_bernoulli_transport(sol, c_verify.tol));
      rep.merge(check_vorticity_system(sol, c_verify.tol));
      rep.merge(check_lie_bracket(sol, c_verify.tol));
      emit(c_verify, c_verify.format == "json" ? report_to_json(rep, 2) : report_csv(rep), out);
      return rep.pass ? kOk : kFailed;
    }
    if (family->parsed()) {
      const auto grid = make_grid(c_family);
      const HomogeneousSolution sol = build_family(f_family, grid);
      if (c_family.format == "json") {
        emit(c_family, solution_to_json(sol, 2), out);
      } else {
        Table t{{"phi", "theta", "f", "a", "b", "p"}, {}};
        for (int j = 0; j < grid->nlat(); ++j) {
          for (int k = 0; k < grid->nlon(); ++k) {
            const std::size_t i = grid->index(j, k);
            t.rows.push_back({grid->phi(j), grid->theta(k), sol.f.values[i], sol.v.a[i],
                              sol.v.b[i], sol.p.values[i]});
          }
        }
        emit(c_family, to_csv(t), out);
      }
      return kOk;
    }
    if (scan2d->parsed()) {
      const Range r = parse_range(s2_range);
      const auto bs = r.values();
      const auto spans = parallel_map<double>(
          bs.size(), [&](std::size_t i) { return time_span(s2_alpha, bs[i], 1e-12); });
      Table t{{"B", "T"}, {}};
      for (std::size_t i = 0; i < bs.size(); ++i) t.rows.push_back({bs[i], spans[i]});
      emit(c_scan2d, table_out(c_scan2d, t), out);
      return kOk;
    }
    if (axi->parsed()) {
      const Range r = parse_range(axi_range);
      const auto als = r.values();
      const auto shots = parallel_map<ShootResult>(
          als.size(), [&](std::size_t i) { return shoot_endpoint(als[i], axi_B); });
      Table t{{"alpha", "B", "defect", "blowup_flag"}, {}};
      for (const auto& s : shots) t.rows.push_back({s.alpha, s.B, s.defect, s.blew_up ? 1.0 : 0.0});
      emit(c_axi, table_out(c_axi, t), out);
      return kOk;
    }
    if (fluxc->parsed()) {
      const auto grid = make_grid(c_flux);
      const HomogeneousSolution sol = build_family(f_flux, grid);
      const double pi_flux = flux(sol);
      const auto rows = moment_identities(sol, n_max, c_flux.tol);
      bool pass = std::abs(pi_flux) < c_flux.tol;
      Table t{{"n", "f_moment", "omega_moment", "bound", "f_exempt"}, {}};
      for (const auto& r : rows) {
        pass = pass && r.pass;
        t.rows.push_back({double(r.n), r.f_moment, r.omega_moment, r.bound, r.f_exempt ? 1.0 : 0.0});
      }
      if (c_flux.format == "json") {
        std::ostringstream s;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", pi_flux);
        s << "{\n  \"flux\": " << buf << ",\n  \"pass\": " << (pass ? "true" : "false")
          << ",\n  \"moments\": " << to_json(t, -1) << "\n}\n";
        emit(c_flux, s.str(), out);
      } else {
        emit(c_flux, to_csv(t), out);
      }
      return pass ? kOk : kFailed;
    }
    if (landau->parsed()) {
      if (eA || eB || eC) {
        const auto res = euler_axistokes(eA.value_or(0.0), eB.value_or(0.0), eC.value_or(0.0));
        Table t{{"feasible", "constraint_set", "smooth", "residual"}, {}};
        const double resid = res.feasible ? landau_residual(res.profile) : 0.0;
        t.rows.push_back({res.feasible ? 1.0 : 0.0, double(res.constraint_set),
                          res.smooth ? 1.0 : 0.0, resid});
        emit(c_landau, table_out(c_landau, t), out);
        return res.feasible && resid < c_landau.tol ? kOk : kFailed;
      }
      const auto rows = vanishing_viscosity_study(nus, lc);
      Table t{{"nu", "sup_psi", "residual"}, {}};
      for (const auto& r : rows) t.rows.push_back({r.nu, r.sup_psi, r.residual});
      emit(c_landau, table_out(c_landau, t), out);
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kUsage;
}

}  // namespace homog::cli
