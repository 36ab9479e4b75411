#include "cli.hpp"

#include "mdlab/bohr.hpp"
#include "mdlab/dioph.hpp"
#include "mdlab/dynlab.hpp"
#include "mdlab/errors.hpp"
#include "mdlab/flows.hpp"
#include "mdlab/kernels.hpp"
#include "mdlab/parallel.hpp"
#include "mdlab/serialize.hpp"

#include "oracles/brute_bohr.hpp"
#include "oracles/brute_dioph.hpp"
#include "oracles/brute_dynlab.hpp"
#include "oracles/brute_lattice.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace fs = std::filesystem;

namespace mdlab::cli {

namespace {

class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct Run {
  fs::path dir;
  Json results = Json::object();
  Json checks = Json::array();
  std::vector<std::string> files;
  std::vector<std::string> warnings;
  bool check = false;
  bool mismatch = false;

  std::ofstream open(const std::string& name) {
    files.push_back(name);
    std::ofstream f(dir / name, std::ios::out | std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    return f;
  }

  void verdict(const std::string& what, bool ok, const std::string& detail = "") {
    checks.push_back({{"check", what}, {"ok", ok}, {"detail", detail}});
    if (!ok) mismatch = true;
  }
  void skipped(const std::string& what, const std::string& why) {
    checks.push_back({{"check", what}, {"ok", nullptr}, {"detail", "skipped: " + why}});
  }
};

// RFC 4180 quoting.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Real real_arg(const std::string& text, Run& run) {
  std::string warning;
  Real r = parse_real(text, &warning);
  if (!warning.empty()) run.warnings.push_back(warning);
  return r;
}

Line line_arg(const std::string& text, Run& run) {
  auto parts = split(text, ',');
  if (parts.size() != 2) throw UsageError("--line expects a,b");
  return {real_arg(parts[0], run), real_arg(parts[1], run)};
}

Interval interval_arg(const std::string& text, Run& run) {
  auto parts = split(text, ',');
  if (parts.size() != 2) throw UsageError("interval expects lo,hi");
  Interval I{real_arg(parts[0], run), real_arg(parts[1], run)};
  if (!(I.lo < I.hi)) throw UsageError("interval needs lo < hi");
  return I;
}

// "e^15" or a plain real.
Real radius_arg(const std::string& text, Run& run) {
  if (text.rfind("e^", 0) == 0) return Real(exp(real_arg(text.substr(2), run).to_bigfloat()));
  return real_arg(text, run);
}

// Q^p, exact when Q^p is rational.
Real qpow(long Q, const Rational& p) {
  Integer num = p.get_num(), den = p.get_den();
  if (den.fits_ulong_p() && num.fits_slong_p()) {
    Integer root;
    mpz_root(root.get_mpz_t(), Integer(Q).get_mpz_t(), den.get_ui());
    Integer back;
    mpz_pow_ui(back.get_mpz_t(), root.get_mpz_t(), den.get_ui());
    if (back == Q) {
      long e = num.get_si();
      Integer pw;
      mpz_pow_ui(pw.get_mpz_t(), root.get_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
      return e < 0 ? Real(Rational(Integer(1), pw)) : Real(pw);
    }
  }
  return Real(pow(BigFloat(Q), BigFloat(p)));
}

std::pair<long, long> ts_arg(const std::string& text) {
  auto parts = split(text, ':');
  if (parts.size() != 2) throw UsageError("expected t:s, got '" + text + "'");
  try {
    return {std::stol(parts[0]), std::stol(parts[1])};
  } catch (const std::exception&) {
    throw UsageError("expected integers in '" + text + "'");
  }
}

ObservableSpec observable_arg(const std::string& text, Run& run) {
  auto colon = text.find(':');
  std::string kind = text.substr(0, colon);
  if (kind == "const") return ObservableSpec::constant();
  if (colon == std::string::npos) throw UsageError("observable needs a parameter: " + text);
  Real p = real_arg(text.substr(colon + 1), run);
  if (kind == "cusp") return ObservableSpec::cusp(p);
  if (kind == "capped") return ObservableSpec::capped(p);
  if (kind == "power") return ObservableSpec::power(p);
  throw UsageError("unknown observable: " + text);
}

PsiSpec psi_arg(const std::string& text, Run& run) {
  auto colon = text.find(':');
  std::string kind = text.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "const") return PsiSpec::constant(real_arg(rest, run));
  if (kind == "closed") {
    auto parts = split(rest, ',');
    if (parts.size() != 2) throw UsageError("closed:c,gamma");
    return PsiSpec::closed(real_arg(parts[0], run), real_arg(parts[1], run));
  }
  throw UsageError("unknown psi: " + text);
}

Json option_values(const CLI::App& app) {
  Json out = Json::object();
  for (const CLI::Option* opt : app.get_options()) {
    std::string name = opt->get_name();
    if (name == "--help" || name == "--version" || name == "--out" || name == "--replay") continue;
    Json entry;
    if (opt->count() > 0) {
      entry["value"] = opt->results();
      entry["default"] = false;
    } else {
      entry["value"] = opt->get_default_str();
      entry["default"] = true;
    }
    out[name] = entry;
  }
  return out;
}

// Fresh run-NNNN under root; never reuses a directory.
fs::path fresh_dir(const fs::path& root) {
  fs::create_directories(root);
  for (int n = 1; n < 1000000; ++n) {
    char name[32];
    std::snprintf(name, sizeof name, "run-%04d", n);
    fs::path p = root / name;
    if (fs::create_directory(p)) return p;
  }
  throw std::runtime_error("no free run directory under " + root.string());
}

// ---- subcommands -----------------------------------------------------------

struct ScanOpts {
  std::string line, beta;
  long nmax = 100000;
};

void do_scan(const ScanOpts& o, Run& run) {
  Line line = line_arg(o.line, run);
  Real beta = real_arg(o.beta, run);
  Real alpha = line.f(beta);
  if (o.nmax < 2) throw UsageError("--nmax must be >= 2");
  GallagherResult r = gallagher_scan(alpha, beta, o.nmax);
  auto f = run.open("scan.csv");
  write_trace_csv(f, r.trace);
  run.results = {{"alpha", alpha.repr()}, {"beta", beta.repr()}, {"min_value", r.min_value.to_string(30)},
                 {"argmin", r.argmin}, {"trace_rows", r.trace.size()}};
  if (run.check) {
    GallagherResult ref = gallagher_scan_reference(alpha, beta, o.nmax);
    bool same = ref.trace.size() == r.trace.size();
    for (std::size_t i = 0; same && i < ref.trace.size(); ++i)
      same = ref.trace[i].n == r.trace[i].n && ref.trace[i].value == r.trace[i].value;
    run.verdict("trace equals plain big-float loop", same);
  }
}

struct BohrOpts {
  std::string line;
  std::vector<long> ladder{64, 256, 1024};
  std::string delta = "qpow:-1/2";
  long cover = kDefaultCoverC;
  bool members = false;
};

void do_bohr(const BohrOpts& o, Run& run) {
  Line line = line_arg(o.line, run);
  std::vector<LadderRow> rows;
  Json dump = Json::array();
  for (long Q : o.ladder) {
    if (Q < 1) throw UsageError("Q must be positive");
    Real delta;
    if (o.delta.rfind("qpow:", 0) == 0) {
      Real p = real_arg(o.delta.substr(5), run);
      if (p.kind() != Real::Kind::rational) throw UsageError("qpow exponent must be rational");
      delta = qpow(Q, p.as_rational());
    } else {
      delta = real_arg(o.delta, run);
    }
    BohrParams p{line.a, line.b, Q, delta};
    BohrSet B = enumerate_bohr(p);
    GapCover P = gap_cover(p, o.cover);
    Containment c = certify_containment(B, P);
    rows.push_back({Q, delta, B.members.size(), P.size(), P.minima_product(), c.ok, p.regime_ok()});
    dump.push_back({{"bohr", to_json(B, o.members)}, {"cover", to_json(P)}, {"contained", c.ok},
                    {"violations", c.violations.size()}});
    if (run.check) {
      run.verdict("Q=" + std::to_string(Q) + " contained", c.ok);
      if (Q <= 1024)
        run.verdict("Q=" + std::to_string(Q) + " members equal serial kernel",
                    kernels::bohr_members_serial(line.a, line.b, Q, delta) == B.members);
      else
        run.skipped("Q=" + std::to_string(Q) + " serial kernel", "Q > 1024");
    }
  }
  auto f = run.open("bohr.csv");
  write_ladder_csv(f, rows);
  auto j = run.open("bohr.json");
  j << dump.dump(1) << "\n";
}

struct CountOpts {
  std::string line;
  std::vector<long> t{6, 7, 8, 9, 10, 11, 12};
  std::vector<long> m{-2, -1, 0, 1, 2};
  std::string psi = "closed:1,3";
  std::string interval = "0,1";
};

void do_count(const CountOpts& o, Run& run) {
  Line line = line_arg(o.line, run);
  PsiSpec psi = psi_arg(o.psi, run);
  Interval I = interval_arg(o.interval, run);
  auto f = run.open("count.csv");
  f << "t,m,count,normalized,bridge_max,bridge_bound\n";
  for (long t : o.t)
    for (long m : o.m) {
      if (t < 1 || t > 40) throw UsageError("t must be in 1..40");
      bool keep = run.check && t <= 8;
      NearLineCount c = count_near_line(t, m, line.a, line.b, I, psi, keep);
      BigFloat scale = ldexp(sqrt(psi(1L << t)), std::labs(m) + 2 * t);
      BigFloat normalized = scale.is_zero() ? BigFloat(0L) : BigFloat(c.count) / scale;
      f << t << ',' << m << ',' << c.count << ',' << normalized.to_string(30) << ',' << c.bridge_max.to_string(30)
        << ',' << c.bridge_bound.to_string(30) << "\n";
      if (keep) {
        std::sort(c.triples.begin(), c.triples.end());
        run.verdict("t=" + std::to_string(t) + " m=" + std::to_string(m) + " triple loop",
                    c.triples == oracle::near_line(t, m, line.a, line.b, I, psi));
      }
    }
}

struct GridOpts {
  std::string line;
  std::string grid = "2/5,9/20,40";
  std::vector<std::string> at;
  std::string eps = "1/2";
  std::string interval = "0,1";
  long samples = 256;
  long exhaustive_cap = 1L << 15;
  long t1 = -1;
};

std::vector<std::pair<long, long>> grid_points(const GridOpts& o, Run& run, Json& grid_info) {
  std::vector<std::pair<long, long>> pts;
  if (!o.at.empty()) {
    for (const auto& s : o.at) pts.push_back(ts_arg(s));
    grid_info = {{"points", pts}};
    return pts;
  }
  auto parts = split(o.grid, ',');
  if (parts.size() != 3) throw UsageError("--grid expects c1,c2,s_max");
  GridR g = grid_R(real_arg(parts[0], run), real_arg(parts[1], run), std::stol(parts[2]));
  grid_info = {{"c1", g.c1.repr()}, {"c2", g.c2.repr()}, {"s_max", g.s_max}, {"size", g.members.size()}};
  return g.members;
}

std::vector<BStarReport> build_reports(const GridOpts& o, const std::vector<std::pair<long, long>>& pts, Run& run) {
  Line line = line_arg(o.line, run);
  Real eps = real_arg(o.eps, run);
  Interval J = interval_arg(o.interval, run);
  std::vector<BStarReport> reports;
  for (auto [t, s] : pts) {
    BStarParams p;
    p.t = t;
    p.s = s;
    p.eps = eps;
    p.J = J;
    p.line = line;
    p.T1 = o.t1;
    p.exhaustive_cap = o.exhaustive_cap;
    p.samples = o.samples;
    reports.push_back(build_B_star(p));
  }
  return reports;
}

void do_bstar(const GridOpts& o, Run& run) {
  Json grid;
  auto pts = grid_points(o, run, grid);
  auto reports = build_reports(o, pts, run);
  auto f = run.open("bstar.csv");
  write_bstar_csv(f, reports);
  long cells = 0, violations = 0;
  for (const auto& r : reports) {
    cells += r.evaluated;
    violations += r.minkowski_violations;
  }
  run.results = {{"grid", grid}, {"reports", reports.size()}, {"evaluated", cells}, {"minkowski_violations", violations}};
  if (run.check) {
    run.verdict("Minkowski bound on every evaluated cell", violations == 0, std::to_string(cells) + " cells");
    for (const auto& r : reports) {
      std::string tag = "(" + std::to_string(r.params.t) + "," + std::to_string(r.params.s) + ")";
      if (r.empty || r.t_star + r.s_star > 14) {
        run.skipped(tag + " c3 scan", r.empty ? "empty report" : "t*+s* > 14");
        continue;
      }
      bool ok = true;
      for (std::size_t i = 0; i < r.cells.size() && i < 16; ++i) {
        const BStarCell& c = r.cells[i];
        oracle::CellOracle want = oracle::bstar_cell(r, c.index.get_si());
        ok = ok && want.case_i && want.norm == c.norm;
      }
      run.verdict(tag + " cells equal c3 scan", ok);
    }
  }
}

struct PairOpts : GridOpts {
  long outer = 16, inner = 8;
  bool all_pairs = false;
};

void do_pairwise(const PairOpts& o, Run& run) {
  Json grid;
  auto pts = grid_points(o, run, grid);
  auto reports = build_reports(o, pts, run);
  Interval J = interval_arg(o.interval, run);
  Real c1 = Real::rational(2, 5), c2 = Real::rational(9, 20);
  if (o.at.empty()) {
    auto parts = split(o.grid, ',');
    c1 = real_arg(parts[0], run);
    c2 = real_arg(parts[1], run);
  }
  std::vector<PairRow> rows;
  std::vector<std::pair<std::size_t, std::size_t>> idx;
  for (std::size_t i = 0; i < reports.size(); ++i)
    for (std::size_t j = i + 1; j < reports.size(); ++j) {
      const auto &a = reports[i], &b = reports[j];
      if (a.empty || b.empty || a.measure.is_zero() || b.measure.is_zero()) continue;
      bool nc = is_noncritical(a.params.t, a.params.s, b.params.t, b.params.s, c1, c2);
      if (!nc && !o.all_pairs) continue;
      idx.push_back({i, j});
      rows.push_back({a.params.t, a.params.s, b.params.t, b.params.s, Real(0), nc, false});
    }
  PairwiseOptions opt{o.outer, o.inner};
  std::vector<PairwiseResult> res(rows.size());
  kernels::parallel_for(static_cast<long>(rows.size()), [&](long k) {
    res[k] = pairwise_ratio(reports[idx[k].first], reports[idx[k].second], J, opt);
  });
  BigFloat lo = BigFloat::infinity(), hi(0L);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    rows[k].ratio = res[k].ratio;
    rows[k].exact = res[k].exact;
    BigFloat r = res[k].ratio.to_bigfloat();
    if (r < lo) lo = r;
    if (r > hi) hi = r;
  }
  auto f = run.open("pairwise.csv");
  write_pairwise_csv(f, rows);
  run.results = {{"grid", grid}, {"pairs", rows.size()}};
  if (!rows.empty()) {
    run.results["min_ratio"] = lo.to_string(30);
    run.results["max_ratio"] = hi.to_string(30);
  }
  if (run.check) {
    bool ok = true;
    long tested = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto &a = reports[idx[k].first], &b = reports[idx[k].second];
      if (!a.exhaustive || !b.exhaustive) continue;
      ++tested;
      Real sum = a.intervals.measure() + b.intervals.measure();
      Real both = unite(a.intervals, b.intervals).measure() + intersect(a.intervals, b.intervals).measure();
      ok = ok && sum == both;
    }
    run.verdict("inclusion-exclusion on exact pairs", ok, std::to_string(tested) + " pairs");
  }
}

struct EquidistOpts {
  std::string line;
  std::vector<std::string> at{"10:25"};
  std::vector<std::string> observables{"cusp:1/10"};
  long samples = 1024;
  std::string interval = "0,1";
};

void do_equidist(const EquidistOpts& o, Run& run) {
  Line line = line_arg(o.line, run);
  Interval J = interval_arg(o.interval, run);
  std::vector<ObservableSpec> obs;
  for (const auto& s : o.observables) obs.push_back(observable_arg(s, run));
  if (o.samples < 100) throw UsageError("--samples must be >= 100");
  std::vector<EquidistRow> rows;
  for (const auto& at : o.at) {
    auto [t, s] = ts_arg(at);
    auto norms = orbit_shortest_norms(Real(t), Real(s), J, line, o.samples);
    for (const auto& F : obs) {
      BigFloat sum(0L);
      for (const auto& n : norms) sum += F(n);
      Real avg = F.kind == ObservableSpec::Kind::constant ? Real(1) : Real(sum / BigFloat(o.samples));
      rows.push_back({Real(t), Real(s), avg, F.id()});
    }
    if (run.check) {
      std::string tag = "(" + std::to_string(t) + "," + std::to_string(s) + ")";
      if (t + s > 12) {
        run.skipped(tag + " c3 scan", "t+s > 12");
        continue;
      }
      FlowPrecision fp(static_cast<double>(t), static_cast<double>(s));
      BigFloat et = exp(BigFloat(t)), es = exp(BigFloat(s));
      BigFloat lo = J.lo.to_bigfloat(), w = (J.hi - J.lo).to_bigfloat() / BigFloat(o.samples);
      BigFloat alpha = (sqrt(BigFloat(5L)) - BigFloat(1L)) / BigFloat(2L);
      bool ok = true;
      for (long i = 0; i < 4; ++i) {
        BigFloat k = alpha * BigFloat(i + 1);
        BigFloat x = lo + w * (BigFloat(i) + k - BigFloat(floor_to_integer(k)));
        Lattice3 L{orbit_basis(et, es, line.f(x), x), ""};
        ShortVecResult sv = oracle::orbit_shortest_scan(L, static_cast<long>(std::exp(double(t + s))) + 1);
        BigFloat rel = abs(sv.norm - norms[i]) / sv.norm;
        ok = ok && rel < ldexp(BigFloat(1L), -100);
      }
      run.verdict(tag + " sample norms equal c3 scan", ok);
    }
  }
  auto f = run.open("equidist.csv");
  write_equidist_csv(f, rows);
}

struct LoglawOpts {
  std::string line;
  std::vector<std::string> x;
  long golden = 20;
  std::string radius = "e^15";
  std::string step = "1";
  std::string cover;
  long anti_tmax = 20;
};

void do_loglaw(const LoglawOpts& o, Run& run) {
  Line line = line_arg(o.line, run);
  std::vector<Real> xs;
  for (const auto& s : o.x) xs.push_back(real_arg(s, run));
  if (xs.empty()) {
    Real g = Real::golden_ratio() - Real(1);
    for (long k = 1; k <= o.golden; ++k) xs.push_back(frac_part(Real(k) * g));
  }
  Real R = radius_arg(o.radius, run);
  Real step = real_arg(o.step, run);
  std::optional<Real> cap;
  if (!o.cover.empty()) cap = radius_arg(o.cover, run);
  auto summary = run.open("loglaw.csv");
  summary << "x,sup_ratio,t1,t2,covered_radius\n";
  auto anti = run.open("antiquadrant.csv");
  anti << "x,t,delta,t_minus_delta\n";
  std::vector<Real> ts;
  for (long t = 1; t <= o.anti_tmax; ++t) ts.push_back(Real(t));
  BigFloat C = BigFloat::infinity(-1);
  bool ok = true;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    LoglawResult r = loglaw_excursion(xs[k], line, R, step, cap);
    summary << csv_field(xs[k].to_string(30)) << ',' << r.sup_ratio.to_string(30) << ',' << r.t1.to_string(30) << ','
            << r.t2.to_string(30) << ',' << r.covered_radius.to_string(30) << "\n";
    auto trace = run.open("loglaw_trace_" + std::to_string(k + 1) + ".csv");
    write_loglaw_csv(trace, r.trace);
    if (!ts.empty()) {
      AntiQuadrantFit fit = anti_quadrant_fit(xs[k], line, ts);
      for (const auto& [t, d] : fit.rows)
        anti << csv_field(xs[k].to_string(30)) << ',' << t.to_string(30) << ',' << d.to_string(30) << ','
             << (t.to_bigfloat() - d).to_string(30) << "\n";
      if (fit.C > C) C = fit.C;
    }
    if (run.check) {
      ScopedPrecision twice(2 * precision_bits());
      FlowPrecision fp(r.t1.to_double(), r.t2.to_double());
      FlowPoint p{r.t1, r.t2, line, xs[k]};
      BigFloat d = delta_of(orbit_lattice(p));
      BigFloat norm = sqrt(r.t1.to_bigfloat() * r.t1.to_bigfloat() + r.t2.to_bigfloat() * r.t2.to_bigfloat());
      BigFloat again = d / log(norm);
      ok = ok && abs(again - r.sup_ratio) <= abs(again) * ldexp(BigFloat(1L), -80);
    }
  }
  if (!ts.empty()) run.results["anti_quadrant_C"] = C.to_string(30);
  run.results["samples"] = xs.size();
  if (run.check) run.verdict("argmax recomputed at doubled precision", ok);
}

struct ExponentOpts {
  std::string line;
  std::string kind = "all";
  long bound = 2000;
};

void do_exponents(const ExponentOpts& o, Run& run) {
  Line line = line_arg(o.line, run);
  std::vector<ExponentKind> kinds;
  if (o.kind == "all" || o.kind == "dual") kinds.push_back(ExponentKind::dual);
  if (o.kind == "all" || o.kind == "simultaneous") kinds.push_back(ExponentKind::simultaneous);
  if (o.kind == "all" || o.kind == "multiplicative") kinds.push_back(ExponentKind::multiplicative);
  if (kinds.empty()) throw UsageError("--kind must be dual, simultaneous, multiplicative or all");
  if (o.bound < 2) throw UsageError("--bound must be >= 2");
  auto f = run.open("exponents.csv");
  f << "kind,lower_bound,search_bound,infinite,witness\n";
  for (ExponentKind k : kinds) {
    ExponentEstimate e = k == ExponentKind::dual           ? omega_dual_lower(line.a, line.b, o.bound)
                         : k == ExponentKind::simultaneous ? omega_simul_lower(line.a, line.b, o.bound)
                                                           : omega_mult_lower(line.a, line.b, o.bound);
    std::string witness;
    if (!e.witnesses.empty())
      for (const auto& v : e.witnesses.back().datum) witness += (witness.empty() ? "" : " ") + v.get_str();
    f << to_string(k) << ',' << e.lower_bound.to_string(30) << ',' << e.search_bound << ','
      << (e.infinite ? "true" : "false") << ',' << csv_field(witness) << "\n";
    if (run.check && !e.witnesses.empty() && !e.infinite) {
      BigFloat again;
      {
        ScopedPrecision twice(2 * precision_bits());
        again = witness_quality(k, line.a, line.b, e.witnesses.back());
      }
      bool ok = abs(again - e.lower_bound) <= abs(again) * ldexp(BigFloat(1L), -80);
      if (o.bound <= 500) {
        BigFloat brute = k == ExponentKind::dual ? oracle::dual_best(line.a, line.b, o.bound)
                                                 : oracle::n_best(line.a, line.b, o.bound, k == ExponentKind::multiplicative);
        ok = ok && abs(brute - e.lower_bound) <= abs(brute) * ldexp(BigFloat(1L), -80);
      }
      run.verdict(to_string(k) + " witness recomputed", ok);
    }
  }
}

struct ReduceOpts {
  std::string basis;
  std::string flow;
  std::string line = "sqrt2,sqrt3";
};

void do_reduce(const ReduceOpts& o, Run& run) {
  Lattice3 L{Mat3<BigFloat>::zero(), ""};
  std::optional<FlowPrecision> fp;
  if (!o.basis.empty() == !o.flow.empty()) throw UsageError("give exactly one of --basis or --flow");
  if (!o.basis.empty()) {
    auto parts = split(o.basis, ',');
    if (parts.size() != 9) throw UsageError("--basis expects 9 entries, row-major");
    for (int i = 0; i < 9; ++i) L.basis(i / 3, i % 3) = real_arg(parts[i], run).to_bigfloat();
    L.provenance = "basis " + o.basis;
    BigFloat err = abs(L.basis.det() - BigFloat(1L));
    if (err > ldexp(BigFloat(1L), -static_cast<long>(precision_bits() / 2)))
      throw UsageError("basis is not unimodular (det = " + L.basis.det().to_string(20) + ")");
  } else {
    auto parts = split(o.flow, ',');
    if (parts.size() != 3) throw UsageError("--flow expects t,s,x");
    FlowPoint p{real_arg(parts[0], run), real_arg(parts[1], run), line_arg(o.line, run), real_arg(parts[2], run)};
    p.validate();
    fp.emplace(p.t.to_double(), p.s.to_double());
    L = orbit_lattice(p);
  }
  LllResult lll = lll_reduce(L);
  ShortVecResult sv = sup_shortest_vector(L);
  SiegelResult sg = siegel_reduce(L.basis);
  BigFloat delta = delta_of(L);
  auto f = run.open("reduce.csv");
  f << "c1,c2,c3,v1,v2,v3,norm,delta\n";
  f << sv.coeffs[0].get_str() << ',' << sv.coeffs[1].get_str() << ',' << sv.coeffs[2].get_str() << ','
    << sv.vector[0].to_string(30) << ',' << sv.vector[1].to_string(30) << ',' << sv.vector[2].to_string(30) << ','
    << sv.norm.to_string(30) << ',' << delta.to_string(30) << "\n";
  Json a = Json::array();
  for (const auto& v : sg.a) a.push_back(to_json(v));
  Json doc{{"lattice", to_json(L)},
           {"lll", {{"reduced", to_json(lll.reduced)}, {"transform", to_json(lll.transform)}}},
           {"shortest", {{"coeffs", to_json(sv.coeffs)}, {"norm", to_json(sv.norm)}}},
           {"siegel", {{"k", to_json(sg.k)}, {"a", a}, {"n", to_json(sg.n)}, {"gamma", to_json(sg.gamma)}}},
           {"delta", to_json(delta)}};
  auto j = run.open("reduce.json");
  j << doc.dump(1) << "\n";
  if (run.check) {
    long box = 1;
    while (box <= 64 && !oracle::box_certifies(L, box)) box *= 2;
    if (box > 64) {
      run.skipped("brute-force shortest vector", "certifying box exceeds 64");
    } else {
      ShortVecResult b = oracle::brute_shortest(L, box);
      run.verdict("shortest vector equals brute force", b.norm == sv.norm && b.coeffs == sv.coeffs,
                  "box " + std::to_string(box));
    }
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lattice-flow and Diophantine experiment driver", "mdlab"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(0, 1);

  unsigned bits = kDefaultPrecisionBits;
  double budget = kDefaultBudgetCells;
  std::string out_root = "runs";
  std::string replay;
  int threads = 0;
  bool check = false;
  app.add_option("--precision-bits", bits, "Working precision in bits")->capture_default_str()->check(CLI::Range(64u, 1u << 20));
  app.add_option("--budget-cells", budget, "Cell budget for enumerations")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--out", out_root, "Output root; each run gets a fresh run-NNNN directory")->capture_default_str();
  app.add_option("--threads", threads, "OpenMP threads (0 = default)")->capture_default_str()->check(CLI::NonNegativeNumber);
  app.add_flag("--check", check, "Run oracle comparisons; exit 3 on any mismatch");
  app.add_option("--replay", replay, "Re-run the command recorded in a manifest");

  std::function<void(Run&)> action;

  ScanOpts scan;
  auto* s_scan = app.add_subcommand("scan", "Running minima of n (log n)^2 <n alpha><n beta> with alpha = a beta + b");
  s_scan->add_option("--line", scan.line, "a,b")->required();
  s_scan->add_option("--beta", scan.beta, "beta")->required();
  s_scan->add_option("--nmax", scan.nmax)->capture_default_str();
  s_scan->callback([&] { action = [&](Run& r) { do_scan(scan, r); }; });

  BohrOpts bohr;
  auto* s_bohr = app.add_subcommand("bohr", "Dual Bohr sets, GAP covers and containment over a Q ladder");
  s_bohr->add_option("--line", bohr.line, "a,b")->required();
  s_bohr->add_option("--q-ladder", bohr.ladder)->delimiter(',')->capture_default_str();
  s_bohr->add_option("--delta", bohr.delta, "qpow:p for Q^p, or a real")->capture_default_str();
  s_bohr->add_option("--cover", bohr.cover, "cover constant C")->capture_default_str();
  s_bohr->add_flag("--members", bohr.members, "include members in bohr.json");
  s_bohr->callback([&] { action = [&](Run& r) { do_bohr(bohr, r); }; });

  CountOpts count;
  auto* s_count = app.add_subcommand("count", "Rational points near a line, N(t, m)");
  s_count->add_option("--line", count.line, "a,b")->required();
  s_count->add_option("--t", count.t)->delimiter(',')->capture_default_str();
  s_count->add_option("--m", count.m)->delimiter(',')->capture_default_str();
  s_count->add_option("--psi", count.psi, "closed:c,gamma or const:c")->capture_default_str();
  s_count->add_option("--interval", count.interval, "lo,hi")->capture_default_str();
  s_count->callback([&] { action = [&](Run& r) { do_count(count, r); }; });

  auto grid_options = [](CLI::App* sub, GridOpts& g) {
    sub->add_option("--line", g.line, "a,b")->required();
    sub->add_option("--grid", g.grid, "c1,c2,s_max")->capture_default_str();
    sub->add_option("--at", g.at, "t:s points (replace the grid)");
    sub->add_option("--eps", g.eps)->capture_default_str();
    sub->add_option("--interval", g.interval, "J = lo,hi")->capture_default_str();
    sub->add_option("--samples", g.samples, "sampled subintervals above the exhaustive cap")->capture_default_str();
    sub->add_option("--exhaustive-cap", g.exhaustive_cap)->capture_default_str();
    sub->add_option("--T1", g.t1, "empty below s+t < T1; -1 for the automatic rule")->capture_default_str();
  };

  GridOpts bstar;
  auto* s_bstar = app.add_subcommand("bstar", "B*(t, s) over a grid");
  grid_options(s_bstar, bstar);
  s_bstar->callback([&] { action = [&](Run& r) { do_bstar(bstar, r); }; });

  PairOpts pair;
  auto* s_pair = app.add_subcommand("pairwise", "|B* cap B*'| |J| / (|B*| |B*'|) over grid pairs");
  grid_options(s_pair, pair);
  s_pair->add_option("--outer-max", pair.outer)->capture_default_str();
  s_pair->add_option("--inner-max", pair.inner)->capture_default_str();
  s_pair->add_flag("--all-pairs", pair.all_pairs, "include critical pairs");
  s_pair->callback([&] { action = [&](Run& r) { do_pairwise(pair, r); }; });

  EquidistOpts eq;
  auto* s_eq = app.add_subcommand("equidist", "Orbit averages of cusp observables");
  s_eq->add_option("--line", eq.line, "a,b")->required();
  s_eq->add_option("--at", eq.at, "t:s")->capture_default_str();
  s_eq->add_option("--observable", eq.observables, "const, cusp:theta, capped:M, power:p")->capture_default_str();
  s_eq->add_option("--samples", eq.samples)->capture_default_str();
  s_eq->add_option("--interval", eq.interval)->capture_default_str();
  s_eq->callback([&] { action = [&](Run& r) { do_equidist(eq, r); }; });

  LoglawOpts ll;
  auto* s_ll = app.add_subcommand("loglaw", "Cusp excursions over the quadrant, Delta / log|t|");
  s_ll->add_option("--line", ll.line, "a,b")->required();
  s_ll->add_option("--x", ll.x, "sample points (default: golden sequence)");
  s_ll->add_option("--golden", ll.golden, "number of x = frac(k (phi - 1)) when --x is absent")->capture_default_str();
  s_ll->add_option("--radius", ll.radius, "R, a real or e^N")->capture_default_str();
  s_ll->add_option("--step", ll.step, "grid step")->capture_default_str();
  s_ll->add_option("--cover", ll.cover, "cap on |t| (result is then a lower bound)");
  s_ll->add_option("--anti-tmax", ll.anti_tmax, "anti-quadrant t = 1..N (0 disables)")->capture_default_str();
  s_ll->callback([&] { action = [&](Run& r) { do_loglaw(ll, r); }; });

  ExponentOpts ex;
  auto* s_ex = app.add_subcommand("exponents", "Certified lower bounds for Diophantine exponents");
  s_ex->add_option("--line", ex.line, "a,b")->required();
  s_ex->add_option("--kind", ex.kind, "dual, simultaneous, multiplicative or all")->capture_default_str();
  s_ex->add_option("--bound", ex.bound, "search height")->capture_default_str();
  s_ex->callback([&] { action = [&](Run& r) { do_exponents(ex, r); }; });

  ReduceOpts red;
  auto* s_red = app.add_subcommand("reduce", "LLL, Siegel reduction and sup-norm shortest vector");
  s_red->add_option("--basis", red.basis, "9 reals, row-major; columns generate");
  s_red->add_option("--flow", red.flow, "t,s,x for a(t,s)u(phi(x))Z^3");
  s_red->add_option("--line", red.line)->capture_default_str();
  s_red->callback([&] { action = [&](Run& r) { do_reduce(red, r); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  bool out_given = app.get_option("--out")->count() > 0;
  if (!replay.empty()) {
    std::ifstream in(replay);
    Json m;
    try {
      m = Json::parse(in);
    } catch (const std::exception& e) {
      err << "error: cannot read manifest " << replay << ": " << e.what() << "\n";
      return kUsage;
    }
    std::vector<std::string> again = m.at("argv").get<std::vector<std::string>>();
    if (out_given) again.insert(again.begin(), {"--out", out_root});
    return run(again, out, err);
  }
  if (!action) {
    err << "error: a subcommand is required\n" << app.help();
    return kUsage;
  }

  // argv without output placement, so replays land wherever the caller points them.
  std::vector<std::string> recorded;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out") {
      ++i;
      continue;
    }
    if (args[i].rfind("--out=", 0) == 0) continue;
    recorded.push_back(args[i]);
  }

  set_precision_bits(bits);
  set_budget_cells(budget);
  kernels::set_threads(threads);

  const CLI::App* sub = app.get_subcommands().front();
  Run r;
  r.check = check;
  try {
    r.dir = fresh_dir(out_root);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInternal;
  }

  auto start = std::chrono::steady_clock::now();
  int code = kOk;
  std::string status = "ok", message;
  try {
    action(r);
    if (r.mismatch) {
      code = kCheckFailed;
      status = "check_failed";
    }
  } catch (const BudgetError& e) {
    code = kBudget;
    status = "budget_exceeded";
    message = e.what();
  } catch (const UsageError& e) {
    code = kUsage;
    status = "invalid_arguments";
    message = e.what();
  } catch (const DomainError& e) {
    code = kUsage;
    status = "invalid_arguments";
    message = e.what();
  } catch (const std::exception& e) {
    code = kInternal;
    status = "error";
    message = e.what();
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  Json manifest{{"tool", "mdlab"},
                {"version", kVersion},
                {"subcommand", sub->get_name()},
                {"argv", recorded},
                {"parameters", option_values(*sub)},
                {"global", option_values(app)},
                {"precision_bits", precision_bits()},
                {"budget_cells", budget_cells()},
                {"threads", threads},
                {"openmp_max_threads", omp_get_max_threads()},
                {"seed", nullptr},
                {"sampling", "deterministic: golden-section offsets, no random draws"},
                {"status", status},
                {"exit_code", code},
                {"outputs", r.files},
                {"results", r.results},
                {"warnings", r.warnings},
                {"wall_time_s", wall}};
  if (check) manifest["checks"] = r.checks;
  if (!message.empty()) manifest["error"] = message;
  {
    std::ofstream m(r.dir / "manifest.json");
    m << manifest.dump(1) << "\n";
  }

  for (const auto& w : r.warnings) err << "warning: " << w << "\n";
  if (code == kUsage) err << "error: " << message << "\n" << sub->help();
  else if (code != kOk && !message.empty()) err << "error: " << message << "\n";
  if (code == kCheckFailed)
    for (const auto& c : r.checks)
      if (c["ok"] == false) err << "check failed: " << c["check"].get<std::string>() << "\n";
  out << r.dir.string() << "\n";
  return code;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args);
}

}  // namespace mdlab::cli
