#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "opoly/asymptotics.hpp"
#include "opoly/cfrac.hpp"
#include "opoly/errors.hpp"
#include "opoly/io.hpp"
#include "opoly/polycore.hpp"
#include "opoly/spectral.hpp"

namespace opoly::cli {

namespace {

using nlohmann::json;

const std::map<std::string, Family> kFamilies{
    {"gen-hermite", Family::GenHermite},
    {"gen-ultraspherical", Family::GenUltraspherical},
    {"sieved-first", Family::SievedFirst},
    {"sieved-second", Family::SievedSecond},
};

struct FamilyOptions {
  std::string family = "gen-hermite";
  double alpha = 0.0;
  double gamma = 0.0;
  int k = 1;
};

struct OutputOptions {
  std::string format = "csv";
  std::string path;
};

void add_family_options(CLI::App* app, FamilyOptions& f) {
  std::vector<std::string> names;
  for (const auto& [name, fam] : kFamilies) names.push_back(name);
  app->add_option("--family", f.family, "polynomial family")->check(CLI::IsMember(names));
  app->add_option("--alpha", f.alpha, "alpha > -1/2 ([-1,1] families)");
  app->add_option("--gamma", f.gamma, "gamma > -1");
  app->add_option("-k", f.k, "sieve order k >= 1");
}

void add_output_options(CLI::App* app, OutputOptions& o) {
  app->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("-o,--output", o.path, "output file (default stdout)");
}

FamilySpec make_spec(const FamilyOptions& f) {
  switch (kFamilies.at(f.family)) {
    case Family::GenHermite:
      return FamilySpec::gen_hermite(f.gamma);
    case Family::GenUltraspherical:
      return FamilySpec::gen_ultraspherical(f.alpha, f.gamma);
    case Family::SievedFirst:
      return FamilySpec::sieved_first(f.alpha, f.gamma, f.k);
    case Family::SievedSecond:
      return FamilySpec::sieved_second(f.alpha, f.gamma, f.k);
  }
  throw DomainError("unknown family " + f.family);
}

// Writes to the -o file or to `out`.
class Sink {
 public:
  Sink(const OutputOptions& o, std::ostream& out) : out_(&out) {
    if (!o.path.empty()) {
      file_.open(o.path, std::ios::binary | std::ios::trunc);
      if (!file_) throw DomainError("cannot open output file " + o.path);
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

json measure_json(const DiscreteMeasure& m) {
  json j = json::parse(measure_to_json(m));
  j["mass_sum"] = m.total_mass();
  return j;
}

void write_measure(const DiscreteMeasure& m, const OutputOptions& o, std::ostream& out) {
  Sink sink(o, out);
  if (o.format == "json") {
    sink.stream() << measure_json(m).dump(2) << '\n';
    return;
  }
  CsvTable t({"x", "mass"});
  for (std::size_t i = 0; i < m.size(); ++i) {
    t.add_row({format_number(m.points[i]), format_number(m.masses[i])});
  }
  t.add_footer("mass_sum=" + format_number(m.total_mass()));
  t.write(sink.stream());
}

struct CheckOptions {
  FamilyOptions fam;
  OutputOptions out;
  std::string theorem;
  int m = -1;
  double tol = 1e-9;
  std::vector<std::string> perturb;
};

struct TheoremCase {
  Family family;
  std::size_t n;
};

// Pattern ids with their families and degree schedules.
std::vector<TheoremCase> theorem_cases(const std::string& id, int m, int k) {
  static const std::map<std::string, std::string> aliases{
      {"hermite", "2.1"},           {"hermite-even", "2.2"},
      {"ultraspherical", "2.3"},    {"sieved-first", "3.1"},
      {"sieved-second", "3.2"},     {"sieved-first-uniform", "3.3a"},
      {"sieved-second-uniform", "3.3b"},
  };
  std::string key = id;
  if (auto it = aliases.find(id); it != aliases.end()) key = it->second;
  const auto mm = static_cast<std::size_t>(m);
  const auto kk = static_cast<std::size_t>(k);
  auto need = [&](int lo) {
    if (m < lo) {
      throw StructureError("pattern " + id + " needs m >= " + std::to_string(lo));
    }
  };
  if (key == "2.1") {
    need(1);
    return {{Family::GenHermite, 2 * mm}, {Family::GenHermite, 2 * mm - 1}};
  }
  if (key == "2.2") {
    need(1);
    return {{Family::GenHermite, 2 * mm}};
  }
  if (key == "2.3") {
    need(1);
    return {{Family::GenUltraspherical, 2 * mm}};
  }
  if (key == "3.1") {
    need(0);
    return {{Family::SievedFirst, kk * (2 * mm + 1) - 1}};
  }
  if (key == "3.2") {
    need(0);
    return {{Family::SievedSecond, kk * (2 * mm + 2) - 2}};
  }
  if (key == "3.3a") {
    need(1);
    return {{Family::SievedFirst, 2 * mm * kk - 1}};
  }
  if (key == "3.3b") {
    need(0);
    if (kk * (2 * mm + 1) < 3) throw StructureError("pattern 3.3b needs k(2m+1) >= 3");
    return {{Family::SievedSecond, kk * (2 * mm + 1) - 2}};
  }
  throw DomainError("unknown pattern id '" + id +
                    "' (use 2.1, 2.2, 2.3, 3.1, 3.2, 3.3a, 3.3b)");
}

std::pair<std::size_t, double> parse_perturbation(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw DomainError("--perturb expects i:delta, got " + s);
  try {
    std::size_t used = 0;
    const long i = std::stol(s.substr(0, colon), &used);
    if (used != colon || i < 1) throw DomainError("--perturb index must be >= 1");
    const std::string rest = s.substr(colon + 1);
    const double delta = std::stod(rest, &used);
    if (used != rest.size()) throw DomainError("--perturb: bad delta in " + s);
    return {static_cast<std::size_t>(i), delta};
  } catch (const std::logic_error&) {
    throw DomainError("--perturb expects i:delta, got " + s);
  }
}

int cmd_check(const CheckOptions& o, std::ostream& out) {
  const auto cases = theorem_cases(o.theorem, o.m, o.fam.k);
  std::vector<PatternReport> reports;
  std::vector<std::size_t> degrees;
  for (const auto& tc : cases) {
    FamilyOptions f = o.fam;
    for (const auto& [name, fam] : kFamilies) {
      if (fam == tc.family) f.family = name;
    }
    const FamilySpec spec = make_spec(f);
    CoefficientSequence c = family_coeffs(spec, tc.n);
    if (!o.perturb.empty()) {
      std::vector<double> a = c.a();
      for (const auto& p : o.perturb) {
        const auto [i, delta] = parse_perturbation(p);
        if (i > a.size()) {
          throw DomainError("--perturb index " + std::to_string(i) + " exceeds n = " +
                            std::to_string(a.size()));
        }
        a[i - 1] += delta;
      }
      c = CoefficientSequence(c.b(), std::move(a));
    }
    const CoefficientSequence rc =
        spec.on_interval() ? to_coefficients(reverse_chain(to_chain(c))) : reverse(c);
    reports.push_back(check_pattern(zeros_and_masses(rc), pattern_catalog(spec, tc.n), o.tol));
    degrees.push_back(tc.n);
  }
  const bool pass = std::all_of(reports.begin(), reports.end(),
                                [](const PatternReport& r) { return r.pass; });

  Sink sink(o.out, out);
  if (o.out.format == "json") {
    json j;
    j["pattern"] = o.theorem;
    j["pass"] = pass;
    for (std::size_t r = 0; r < reports.size(); ++r) {
      json jr;
      jr["n"] = degrees[r];
      jr["label"] = reports[r].label;
      jr["pass"] = reports[r].pass;
      jr["max_deviation"] = reports[r].max_deviation;
      jr["tol"] = reports[r].tol;
      for (const auto& g : reports[r].groups) {
        jr["groups"].push_back({{"group", point_set_name(g.set)},
                                {"count", g.count},
                                {"ratio", g.ratio},
                                {"expected_mass", g.expected_mass},
                                {"mean_mass", g.mean_mass},
                                {"measured_ratio", g.measured_ratio},
                                {"max_deviation", g.max_deviation}});
      }
      j["reports"].push_back(jr);
    }
    sink.stream() << j.dump(2) << '\n';
  } else {
    CsvTable t({"n", "group", "count", "ratio", "expected_mass", "mean_mass", "measured_ratio",
                "max_deviation"});
    for (std::size_t r = 0; r < reports.size(); ++r) {
      for (const auto& g : reports[r].groups) {
        t.add_row({std::to_string(degrees[r]), point_set_name(g.set), std::to_string(g.count),
                   format_number(g.ratio), format_number(g.expected_mass),
                   format_number(g.mean_mass), format_number(g.measured_ratio),
                   format_number(g.max_deviation)});
      }
    }
    for (std::size_t r = 0; r < reports.size(); ++r) {
      t.add_footer("n=" + std::to_string(degrees[r]) + " " + (reports[r].pass ? "PASS" : "FAIL") +
                   " max_deviation=" + format_number(reports[r].max_deviation) +
                   " tol=" + format_number(reports[r].tol) + " pattern: " + reports[r].label);
    }
    t.add_footer(std::string(pass ? "PASS" : "FAIL") + " pattern " + o.theorem);
    t.write(sink.stream());
  }
  return pass ? kOk : kCheckFailed;
}

struct DensityOptions {
  OutputOptions out;
  double a = 0.0;
  double c = 0.0;
  int k = 1;
  bool hermite = false;
  double g = -1.0;
  double h = -1.0;
  std::size_t points = 1000;
};

int cmd_density(const DensityOptions& o, std::ostream& out) {
  if (o.points < 1) throw DomainError("--points must be >= 1");
  const bool general = o.g >= 0.0 || o.h >= 0.0;
  if (general && (o.g < 0.0 || o.h < 0.0)) throw DomainError("--g and --h go together");
  if (general && o.hermite) throw DomainError("--hermite excludes --g/--h");

  std::function<double(double)> density;
  double lo = -1.0;
  double hi = 1.0;
  double continuous = 0.0;
  std::vector<PointMass> discrete;
  std::vector<std::string> notes;
  if (o.hermite) {
    const HermiteLimit lim(o.c);
    lo = -lim.outer();
    hi = lim.outer();
    density = [lim](double x) { return lim.density(x); };
    continuous = lim.mass_between(lo, hi);
    notes.push_back("hermite c=" + format_number(o.c));
  } else {
    const ChainLimit lim = general ? ChainLimit(o.g, o.h, o.k)
                                   : LimitDensity::from_ac(o.a, o.c, o.k).even_blocks();
    density = [lim](double x) { return lim.density(x); };
    continuous = lim.continuous_mass();
    discrete = lim.catalog();
    notes.push_back("g=" + format_number(lim.g()) + " h=" + format_number(lim.h()) +
                    " k=" + std::to_string(lim.k()) +
                    " kappa=" + format_number(lim.region().kappa()) +
                    " mu=" + format_number(lim.region().mu()));
  }

  // Midpoint grid; a point landing exactly on a singularity is reported as nan.
  std::vector<double> xs(o.points);
  std::vector<double> ys(o.points);
  const double step = (hi - lo) / static_cast<double>(o.points);
  for (std::size_t i = 0; i < o.points; ++i) {
    xs[i] = lo + step * (static_cast<double>(i) + 0.5);
    try {
      ys[i] = density(xs[i]);
    } catch (const SingularityError&) {
      ys[i] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  double discrete_mass = 0.0;
  for (const auto& p : discrete) discrete_mass += p.mass;

  Sink sink(o.out, out);
  if (o.out.format == "json") {
    json j;
    j["x"] = xs;
    j["density"] = ys;
    j["continuous_mass"] = continuous;
    for (const auto& p : discrete) j["discrete"].push_back({{"x", p.x}, {"mass", p.mass}});
    j["total_mass"] = continuous + discrete_mass;
    sink.stream() << j.dump(2) << '\n';
    return kOk;
  }
  CsvTable t({"x", "density"});
  for (std::size_t i = 0; i < o.points; ++i) {
    t.add_row({format_number(xs[i]), format_number(ys[i])});
  }
  for (const auto& n : notes) t.add_footer(n);
  for (const auto& p : discrete) {
    t.add_footer("point_mass x=" + format_number(p.x) + " mass=" + format_number(p.mass));
  }
  t.add_footer("continuous_mass=" + format_number(continuous) +
               " total_mass=" + format_number(continuous + discrete_mass));
  t.write(sink.stream());
  return kOk;
}

struct CdfCompareOptions {
  OutputOptions out;
  std::string family = "gen-hermite";
  double a = 0.0;
  double c = 0.0;
  int k = 1;
  std::vector<std::size_t> degrees;
  std::string schedule_file;
  std::size_t grid = 2001;
  std::size_t bins = 10;
};

int cmd_cdf_compare(const CdfCompareOptions& o, std::ostream& out) {
  if (o.degrees.empty()) throw DomainError("-l needs at least one degree");
  const Family fam = kFamilies.at(o.family);
  if (fam == Family::GenUltraspherical) {
    throw DomainError("cdf-compare supports gen-hermite, sieved-first and sieved-second");
  }
  const FamilySpec spec = fam == Family::GenHermite     ? FamilySpec::gen_hermite(0.0)
                          : fam == Family::SievedFirst ? FamilySpec::sieved_first(0.0, 0.0, o.k)
                                                       : FamilySpec::sieved_second(0.0, 0.0, o.k);
  const std::size_t lmax = *std::max_element(o.degrees.begin(), o.degrees.end());
  ParameterSchedule schedule;
  if (!o.schedule_file.empty()) {
    std::ifstream in(o.schedule_file);
    if (!in) throw DomainError("cannot read schedule file " + o.schedule_file);
    schedule = read_schedule(in);
  } else {
    schedule = ParameterSchedule::linear(o.a, o.c, lmax + 1);
  }
  const LimitTarget target = fam == Family::GenHermite
                                 ? LimitTarget::hermite(o.c)
                                 : LimitTarget::sieved(LimitDensity::from_ac(o.a, o.c, o.k));
  const unsigned threads = worker_threads();
  const LimitGrid grid = tabulate(target, o.grid, threads);

  // Degrees are independent; results are kept in input order.
  std::vector<EmpiricalCDF> empirical(o.degrees.size());
  std::vector<std::exception_ptr> failures(o.degrees.size());
  auto work = [&](std::size_t i) {
    try {
      empirical[i] = empirical_cdf(spec, schedule, o.degrees[i]);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  };
  for (std::size_t start = 0; start < o.degrees.size(); start += threads) {
    std::vector<std::thread> pool;
    const std::size_t end = std::min(o.degrees.size(), start + threads);
    for (std::size_t i = start; i < end; ++i) pool.emplace_back(work, i);
    for (auto& th : pool) th.join();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  std::vector<ComparisonReport> reports;
  for (const auto& e : empirical) reports.push_back(compare(e, grid, o.bins));
  bool nonincreasing = true;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (reports[i].sup_distance > reports[i - 1].sup_distance) nonincreasing = false;
  }

  Sink sink(o.out, out);
  if (o.out.format == "json") {
    json j;
    j["family"] = o.family;
    j["a"] = o.a;
    j["c"] = o.c;
    j["k"] = o.k;
    j["grid_points"] = o.grid;
    j["nonincreasing"] = nonincreasing;
    for (const auto& r : reports) {
      json jr{{"l", r.degree}, {"sup_distance", r.sup_distance}, {"argmax", r.argmax}};
      for (const auto& b : r.intervals) {
        jr["intervals"].push_back({{"lo", b.lo}, {"hi", b.hi}, {"max_distance", b.max_distance}});
      }
      j["degrees"].push_back(jr);
    }
    sink.stream() << j.dump(2) << '\n';
    return kOk;
  }
  std::vector<std::string> header{"l", "sup_distance", "argmax"};
  for (std::size_t b = 0; b < o.bins; ++b) header.push_back("bin_" + std::to_string(b + 1));
  CsvTable t(header);
  for (const auto& r : reports) {
    std::vector<std::string> row{std::to_string(r.degree), format_number(r.sup_distance),
                                 format_number(r.argmax)};
    for (const auto& b : r.intervals) row.push_back(format_number(b.max_distance));
    t.add_row(row);
  }
  for (std::size_t b = 0; b < o.bins; ++b) {
    const auto& iv = reports.front().intervals[b];
    t.add_footer("bin_" + std::to_string(b + 1) + "=[" + format_number(iv.lo) + "," +
                 format_number(iv.hi) + "]");
  }
  t.add_footer(std::string("nonincreasing=") + (nonincreasing ? "yes" : "no"));
  t.write(sink.stream());
  return kOk;
}

}  // namespace

unsigned worker_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("OPOLY_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) {
      throw DomainError(std::string("OPOLY_THREADS must be an integer >= 1, got '") + env + "'");
    }
    n = std::min<unsigned>(n, static_cast<unsigned>(std::min<long>(v, 1024)));
  }
  return n;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Recurrences, reversed measures and zero asymptotics of orthogonal polynomials",
               "opoly"};
  app.require_subcommand(1);

  FamilyOptions coeffs_fam;
  OutputOptions coeffs_out;
  std::size_t coeffs_n = 0;
  auto* coeffs = app.add_subcommand("coeffs", "recurrence coefficients and chain parameters");
  add_family_options(coeffs, coeffs_fam);
  add_output_options(coeffs, coeffs_out);
  coeffs->add_option("-n", coeffs_n, "number of a-terms")->required();

  FamilyOptions zeros_fam;
  OutputOptions zeros_out;
  std::size_t zeros_n = 0;
  auto* zeros_cmd = app.add_subcommand("zeros", "support points and masses of mu_n");
  add_family_options(zeros_cmd, zeros_fam);
  add_output_options(zeros_cmd, zeros_out);
  zeros_cmd->add_option("-n", zeros_n, "number of a-terms (n+1 support points)")->required();

  FamilyOptions rev_fam;
  OutputOptions rev_out;
  std::size_t rev_n = 0;
  auto* reversed = app.add_subcommand("reversed", "support points and masses of mu_n^R");
  add_family_options(reversed, rev_fam);
  add_output_options(reversed, rev_out);
  reversed->add_option("-n", rev_n, "number of a-terms (n+1 support points)")->required();

  CheckOptions chk;
  auto* check = app.add_subcommand("check", "verify an equal-mass pattern of a reversed measure");
  check->add_option("--theorem", chk.theorem, "pattern id: 2.1 2.2 2.3 3.1 3.2 3.3a 3.3b")
      ->required();
  check->add_option("--alpha", chk.fam.alpha, "alpha > -1/2");
  check->add_option("--gamma", chk.fam.gamma, "gamma > -1");
  check->add_option("-k", chk.fam.k, "sieve order k >= 1");
  check->add_option("-m", chk.m, "block index m")->required();
  check->add_option("--tol", chk.tol, "mass tolerance");
  check->add_option("--perturb", chk.perturb, "add delta to a_i before reversing (i:delta)");
  add_output_options(check, chk.out);

  DensityOptions dens;
  auto* density = app.add_subcommand("density", "limiting zero density on a grid");
  density->set_help_flag("--help", "print this help message and exit");  // frees --h
  density->add_option("--a", dens.a, "lim alpha_l / l >= 0");
  density->add_option("--c", dens.c, "lim gamma_l / l >= 0");
  density->add_option("-k", dens.k, "sieve order k >= 1");
  density->add_flag("--hermite", dens.hermite, "generalized Hermite limit (uses --c)");
  density->add_option("--g", dens.g, "chain value at odd multiples of k");
  density->add_option("--h", dens.h, "chain value at even multiples of k");
  density->add_option("--points", dens.points, "grid size");
  add_output_options(density, dens.out);

  CdfCompareOptions cmp;
  auto* cdf = app.add_subcommand("cdf-compare", "empirical zero CDFs against the limit");
  cdf->add_option("--family", cmp.family, "gen-hermite, sieved-first or sieved-second")
      ->check(CLI::IsMember({"gen-hermite", "sieved-first", "sieved-second"}));
  cdf->add_option("--a", cmp.a, "alpha_n = a n");
  cdf->add_option("--c", cmp.c, "gamma_n = c n");
  cdf->add_option("-k", cmp.k, "sieve order k >= 1");
  cdf->add_option("-l", cmp.degrees, "degrees, comma separated")->delimiter(',')->required();
  cdf->add_option("--schedule-file", cmp.schedule_file, "rows n alpha_n gamma_n");
  cdf->add_option("--grid", cmp.grid, "grid points on the support hull");
  cdf->add_option("--bins", cmp.bins, "sub-intervals in the discrepancy table");
  add_output_options(cdf, cmp.out);

  std::vector<std::string> argv_store{"opoly"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*coeffs) {
      const FamilySpec spec = make_spec(coeffs_fam);
      const CoefficientSequence c = family_coeffs(spec, coeffs_n);
      std::vector<double> p;
      if (spec.on_interval()) p = to_chain(c).p();
      Sink sink(coeffs_out, out);
      if (coeffs_out.format == "json") {
        json j = json::parse(coefficients_to_json(c));
        j["family"] = coeffs_fam.family;
        if (!p.empty()) j["p"] = p;
        sink.stream() << j.dump(2) << '\n';
      } else {
        std::vector<std::string> header{"i", "b_i", "a_i"};
        if (!p.empty()) header.push_back("p_2i");
        CsvTable t(header);
        for (std::size_t i = 0; i < c.size(); ++i) {
          std::vector<std::string> row{std::to_string(i + 1), format_number(c.b()[i]),
                                       format_number(c.a()[i])};
          if (!p.empty()) row.push_back(format_number(p[i]));
          t.add_row(row);
        }
        t.add_footer("b_" + std::to_string(c.size() + 1) + "=" + format_number(c.b().back()));
        t.write(sink.stream());
      }
      return kOk;
    }
    if (*zeros_cmd) {
      write_measure(zeros_and_masses(family_coeffs(make_spec(zeros_fam), zeros_n)), zeros_out,
                    out);
      return kOk;
    }
    if (*reversed) {
      write_measure(reversed_measure(make_spec(rev_fam), rev_n), rev_out, out);
      return kOk;
    }
    if (*check) return cmd_check(chk, out);
    if (*density) return cmd_density(dens, out);
    if (*cdf) return cmd_cdf_compare(cmp, out);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const StructureError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}

}  // namespace opoly::cli
