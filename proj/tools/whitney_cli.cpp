// whitney: decomposition export, extension evaluation, bound tables and the
// invariant checker.
//
// Exit codes: 0 success, 1 failed check or internal error, 2 malformed input
// or arguments, 3 empty set.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "whitney/check.hpp"
#include "whitney/extend.hpp"
#include "whitney/io.hpp"

using namespace whitney;
using nlohmann::json;

namespace {

struct EmptySet : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int log_level() {
  const char* v = std::getenv("WHITNEY_LOG");
  if (!v) return 0;
  const std::string s(v);
  if (s == "debug" || s == "2") return 2;
  if (s == "info" || s == "1") return 1;
  return 0;
}

void log(int level, const std::string& msg) {
  static const int threshold = log_level();
  if (level <= threshold) std::cerr << "whitney: " << msg << '\n';
}

struct Options {
  std::string set_path, jet_path, region, levels, point, deriv, suite = "all", format, out;
  std::string eps = "1/8";
  long precision = 16;
  long resolution = 33;
  int order = 4;
  int dim = 0;
  std::uint64_t seed = 42;
};

SetSpec load_set(const std::string& path) {
  if (path.empty()) throw InputError("--set is required");
  SetSpec spec = set_spec_from_json(read_json_file(path));
  if (spec.parts.empty()) throw EmptySet("set " + path + " has no parts");
  return spec;
}

SetPtr build_set(const SetSpec& spec) {
  try {
    return make_set(spec);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

JetSpec load_jet(const std::string& path) {
  if (path.empty()) throw InputError("--jet is required");
  return jet_spec_from_json(read_json_file(path));
}

WhitneyJet build_jet(const JetSpec& spec, const SetPtr& F) {
  try {
    return jet_make(spec, F);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

Dyadic parse_eps(const std::string& text) {
  Rational q;
  try {
    q = parse_rational(text);
  } catch (const std::exception&) {
    throw InputError("--eps '" + text + "' is not a number");
  }
  auto d = Dyadic::from_rational(q);
  if (!d || d->sign() <= 0 || !(q < Rational(1, 5))) throw InputError("--eps must be dyadic with 0 < eps < 1/5");
  return *d;
}

void check_dim(int want, int got, const std::string& what) {
  if (want != got)
    throw InputError(what + " has dimension " + std::to_string(got) + ", the set has " + std::to_string(want));
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw InputError("cannot write " + o.out);
  f << text;
}

std::string format_or(const Options& o, const std::string& def) {
  const std::string f = o.format.empty() ? def : o.format;
  if (f != "json" && f != "csv" && f != "text") throw InputError("--format must be json, csv or text");
  return f;
}

json decimals(const DyPoint& p) {
  json a = json::array();
  for (const auto& v : p) a.push_back(v.decimal());
  return a;
}

std::string join_decimals(const DyPoint& p, const char* sep) {
  std::string s;
  for (size_t c = 0; c < p.size(); ++c) s += (c ? sep : "") + p[c].decimal();
  return s;
}

std::string rational_approx(const Rational& q) {
  std::ostringstream os;
  os << std::setprecision(6) << q.get_d();
  return os.str();
}

// ---------------------------------------------------------------------------

int cmd_decompose(const Options& o) {
  const SetSpec spec = load_set(o.set_path);
  const SetPtr F = build_set(spec);
  if (o.region.empty()) throw InputError("--region is required");
  if (o.levels.empty()) throw InputError("--levels is required");
  const Box region = parse_box(o.region);
  check_dim(F->dim(), region.dim(), "--region");
  const auto [kmin, kmax] = parse_range(o.levels);
  const std::string fmt = format_or(o, "json");

  const CubeContext ctx(F, parse_eps(o.eps));
  const auto t0 = std::chrono::steady_clock::now();
  auto cubes = ctx.enum_region(region, kmin, kmax);
  std::sort(cubes.begin(), cubes.end());
  log(1, "decompose: " + std::to_string(cubes.size()) + " cubes in " +
             std::to_string(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()) + " s");

  std::ostringstream os;
  json arr = json::array();
  if (fmt == "csv") {
    os << "level";
    for (int c = 0; c < F->dim(); ++c) os << ",lo" << c + 1 << ",hi" << c + 1;
    os << ",d_lo,d_hi,c3\n";
  }
  for (const auto& q : cubes) {
    const DyInterval d = ctx.cube_distance(q, q.level + 24);
    const bool c3 = CubeContext::c3_certified(q, d);
    const DyPoint lo = q.lo(), hi = q.hi();
    if (fmt == "json") {
      json j = cube_json(q);
      j["lo"] = decimals(lo);
      j["hi"] = decimals(hi);
      j["distance"] = interval_json(d);
      j["c3"] = c3;
      arr.push_back(j);
    } else if (fmt == "csv") {
      os << q.level;
      for (int c = 0; c < q.dim(); ++c) os << ',' << lo[c].decimal() << ',' << hi[c].decimal();
      os << ',' << d.lo.decimal() << ',' << d.hi.decimal() << ',' << (c3 ? "pass" : "fail") << '\n';
    } else {
      os << "level " << std::setw(4) << q.level << "  [";
      for (int c = 0; c < q.dim(); ++c) os << (c ? "] x [" : "") << lo[c].decimal() << ", " << hi[c].decimal();
      os << "]  d in [" << d.lo.decimal() << ", " << d.hi.decimal() << "]  c3 " << (c3 ? "pass" : "fail") << '\n';
    }
  }
  if (fmt == "json") {
    json doc = {{"levels", {kmin, kmax}}, {"count", cubes.size()}, {"cubes", arr}};
    os << doc.dump(2) << '\n';
  }
  emit(o, os.str());
  return 0;
}

struct Query {
  SetPtr F;
  WhitneyJet jet;
  std::shared_ptr<const CubeContext> ctx;
  MultiIndex k;
};

Query load_query(const Options& o) {
  Query q;
  const SetSpec spec = load_set(o.set_path);
  q.F = build_set(spec);
  q.jet = build_jet(load_jet(o.jet_path), q.F);
  const int n = q.F->dim();
  q.k = o.deriv.empty() ? MultiIndex(n, 0) : parse_index(o.deriv);
  check_dim(n, static_cast<int>(q.k.size()), "--deriv");
  if (norm(q.k) > q.jet.order)
    throw InputError("derivative order " + std::to_string(norm(q.k)) + " exceeds the jet order " +
                     std::to_string(q.jet.order));
  if (o.precision < 0 || o.precision > 200) throw InputError("--precision must lie in 0..200");
  q.ctx = std::make_shared<const CubeContext>(q.F, parse_eps(o.eps));
  return q;
}

int cmd_eval(const Options& o) {
  const Query q = load_query(o);
  if (o.point.empty()) throw InputError("--point is required");
  const DyPoint x = parse_point(o.point);
  check_dim(q.F->dim(), static_cast<int>(x.size()), "--point");
  const std::string fmt = format_or(o, "json");

  const Extender ext(q.ctx);
  const auto t0 = std::chrono::steady_clock::now();
  const EvalResult r = ext.wetm(q.jet, CPoint::exact(x), q.k, o.precision);
  log(1, "eval: stage " + std::to_string(r.stage) + ", " +
             std::to_string(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()) + " s");

  std::ostringstream os;
  if (fmt == "json") {
    json doc = {{"point", decimals(x)},     {"deriv", q.k},
                {"value", dyadic_json(r.value)}, {"precision", r.precision},
                {"branch", branch_name(r.branch)}};
    os << doc.dump(2) << '\n';
  } else if (fmt == "csv") {
    os << "value,precision,branch\n" << r.value.decimal() << ',' << r.precision << ',' << branch_name(r.branch) << '\n';
  } else {
    os << "value      " << r.value.decimal() << "\nexact      " << r.value.str() << "\nprecision  2^-" << r.precision
       << "\nbranch     " << branch_name(r.branch) << '\n';
  }
  emit(o, os.str());
  return 0;
}

int cmd_grid(const Options& o) {
  const Query q = load_query(o);
  if (o.region.empty()) throw InputError("--region is required");
  const Box box = parse_box(o.region);
  const int n = q.F->dim();
  check_dim(n, box.dim(), "--region");
  if (o.resolution < 1 || o.resolution > 4096) throw InputError("--resolution must lie in 1..4096 per axis");
  const std::string fmt = format_or(o, "csv");
  if (fmt == "text") throw InputError("grid writes csv or json");

  // axis abscissae lo + (hi - lo) j / (N - 1), rounded to nearest on a fine grid
  std::vector<std::vector<Dyadic>> axis(n);
  for (int c = 0; c < n; ++c) {
    for (long j = 0; j < o.resolution; ++j) {
      if (o.resolution == 1) {
        axis[c].push_back(box.lo[c]);
        continue;
      }
      const Rational t = box.lo[c].to_rational() +
                         (box.hi[c] - box.lo[c]).to_rational() * Rational(j) / Rational(o.resolution - 1);
      auto d = Dyadic::from_rational(t);
      axis[c].push_back(d ? *d : Dyadic(rational_floor(t, kInputBits + 1)).round_to(kInputBits));
    }
  }
  long total = 1;
  for (int c = 0; c < n; ++c) {
    if (total > (1L << 24) / o.resolution) throw InputError("grid has too many points");
    total *= o.resolution;
  }
  auto point_of = [&](long idx) {
    DyPoint x(n);
    for (int c = n - 1; c >= 0; --c) {
      x[c] = axis[c][idx % o.resolution];
      idx /= o.resolution;
    }
    return x;
  };

  const Extender ext(q.ctx);
  std::vector<EvalResult> res(total);
  std::atomic<long> next{0};
  auto work = [&] {
    for (long t; (t = next++) < total;) res[t] = ext.wetm(q.jet, CPoint::exact(point_of(t)), q.k, o.precision);
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 16));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  log(1, "grid: " + std::to_string(total) + " points on " + std::to_string(workers) + " threads");

  std::ostringstream os;
  if (fmt == "csv") {
    for (int c = 0; c < n; ++c) os << 'x' << c + 1 << ',';
    os << "value,branch\n";
    for (long t = 0; t < total; ++t)
      os << join_decimals(point_of(t), ",") << ',' << res[t].value.decimal() << ',' << branch_name(res[t].branch)
         << '\n';
  } else {
    json rows = json::array();
    for (long t = 0; t < total; ++t)
      rows.push_back({{"point", decimals(point_of(t))},
                      {"value", dyadic_json(res[t].value)},
                      {"branch", branch_name(res[t].branch)}});
    json doc = {{"deriv", q.k}, {"precision", o.precision}, {"rows", rows}};
    os << doc.dump(2) << '\n';
  }
  emit(o, os.str());
  return 0;
}

int cmd_bounds(const Options& o) {
  if (o.order < 0 || o.order > 12) throw InputError("--order must lie in 0..12");
  const std::string fmt = format_or(o, "text");
  const Dyadic eps = parse_eps(o.eps);
  int n = o.dim > 0 ? o.dim : 1;
  std::optional<WhitneyJet> jet;
  if (!o.set_path.empty()) {
    const SetPtr F = build_set(load_set(o.set_path));
    n = F->dim();
    if (!o.jet_path.empty()) jet = build_jet(load_jet(o.jet_path), F);
  }
  if (n > 8) throw InputError("--dim must lie in 1..8");
  const DerivBoundTable t = deriv_bounds(o.order);
  const auto idx = indices_up_to(n, o.order);

  std::ostringstream os;
  if (fmt == "json") {
    json rows = json::array();
    for (int k = 0; k <= o.order; ++k)
      rows.push_back({{"k", k}, {"A", t.A[k].get_str()}, {"H", t.H[k].get_str()}, {"B", t.B[k].get_str()}});
    json bp = json::array();
    for (const auto& k : idx) bp.push_back({{"k", k}, {"value", dyadic_json(bprime(k, n))}});
    json doc = {{"order", o.order}, {"dim", n}, {"scalar", rows}, {"bprime", bp}};
    if (jet) {
      const ExtConstants c = ext_constants(*jet, eps);
      json ak = json::array();
      for (const auto& [k, v] : c.Ak) ak.push_back({{"k", k}, {"value", rational_str(v)}});
      doc["extension"] = {{"eps", eps.decimal()}, {"m", c.m},
                          {"M", rational_str(c.M)}, {"e", rational_str(c.e)},
                          {"c", rational_str(c.c)}, {"N", c.N.get_str()},
                          {"A", rational_str(c.A)}, {"Ak", ak}};
    }
    os << doc.dump(2) << '\n';
  } else if (fmt == "csv") {
    os << "k,A,H,B\n";
    for (int k = 0; k <= o.order; ++k) os << k << ',' << t.A[k] << ',' << t.H[k] << ',' << t.B[k] << '\n';
    os << "\nmulti_index,bprime\n";
    for (const auto& k : idx) os << '"' << index_str(k) << "\"," << bprime(k, n).decimal() << '\n';
  } else {
    size_t w = 4;
    for (int k = 0; k <= o.order; ++k) w = std::max({w, t.A[k].get_str().size(), t.H[k].get_str().size()});
    os << std::left << std::setw(4) << "k" << std::setw(w + 2) << "A_k" << std::setw(w + 2) << "H_k" << "B_k\n";
    for (int k = 0; k <= o.order; ++k)
      os << std::setw(4) << k << std::setw(w + 2) << t.A[k].get_str() << std::setw(w + 2) << t.H[k].get_str()
         << t.B[k].get_str() << '\n';
    os << "\nB' in dimension " << n << '\n';
    for (const auto& k : idx)
      os << std::setw(16) << index_str(k) << bprime(k, n).str() << "  (~" << std::setprecision(6)
         << bprime(k, n).to_double() << ")\n";
    if (jet) {
      const ExtConstants c = ext_constants(*jet, eps);
      os << "\nextension constants, eps = " << eps.decimal() << ", m = " << c.m << '\n';
      os << "  M  " << rational_str(c.M) << "\n  e  " << rational_str(c.e) << "\n  c  " << rational_str(c.c)
         << "\n  N  " << c.N << '\n';
      for (const auto& [k, v] : c.Ak) os << "  A^" << std::setw(12) << index_str(k) << " ~" << rational_approx(v) << '\n';
    }
  }
  emit(o, os.str());
  return 0;
}

int cmd_check(const Options& o) {
  CheckConfig cfg;
  cfg.suite = o.suite;
  if (o.set_path.empty()) {
    cfg.set.dim = 1;
    cfg.set.parts.push_back(SetPart{SetPart::Kind::Point, {Dyadic(0)}, {}, Dyadic(0)});
  } else {
    cfg.set = load_set(o.set_path);
  }
  build_set(cfg.set);
  if (!o.jet_path.empty()) cfg.jet = load_jet(o.jet_path);
  if (!o.region.empty()) {
    cfg.region = parse_box(o.region);
    check_dim(cfg.set.dim, cfg.region->dim(), "--region");
  }
  cfg.seed = o.seed;
  cfg.eps = parse_eps(o.eps);
  const std::string fmt = format_or(o, "json");

  CheckReport rep;
  try {
    rep = run_check(cfg);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  std::ostringstream os;
  if (fmt == "json") {
    os << rep.to_json().dump(2) << '\n';
  } else if (fmt == "csv") {
    os << "invariant,pass,checked\n";
    for (const auto& it : rep.items) os << it.name << ',' << (it.pass ? "pass" : "fail") << ',' << it.checked << '\n';
  } else {
    for (const auto& it : rep.items) {
      os << (it.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(32) << it.name << it.checked << " checked\n";
      if (!it.pass) os << "      " << it.counterexample << '\n';
    }
  }
  emit(o, os.str());
  for (const auto& it : rep.items)
    if (!it.pass) log(0, "invariant " + it.name + " failed: " + it.counterexample);
  return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Computable Whitney extension: decomposition, evaluation, bounds and checks"};
  app.require_subcommand(1);
  Options o;

  auto add_format = [&](CLI::App* s) {
    s->add_option("--format", o.format, "json, csv or text");
    s->add_option("--out", o.out, "output file (default: standard output)");
    s->add_option("--eps", o.eps, "enlargement parameter, dyadic, below 1/5")->capture_default_str();
  };

  auto* dec = app.add_subcommand("decompose", "list the cubes of the complement decomposition meeting a region");
  dec->add_option("--set", o.set_path, "set JSON")->required();
  dec->add_option("--region", o.region, "box lo1:hi1,lo2:hi2,...")->required();
  dec->add_option("--levels", o.levels, "level range kmin:kmax (cube edge 2^-k)")->required();
  add_format(dec);

  auto* ev = app.add_subcommand("eval", "evaluate a derivative of the extension at a point");
  ev->add_option("--set", o.set_path, "set JSON")->required();
  ev->add_option("--jet", o.jet_path, "jet JSON")->required();
  ev->add_option("--point", o.point, "dyadic point x1,x2,...")->required();
  ev->add_option("--deriv", o.deriv, "multi-index k1,k2,... (default 0)");
  ev->add_option("--precision", o.precision, "absolute error 2^-i")->capture_default_str();
  add_format(ev);

  auto* gr = app.add_subcommand("grid", "evaluate the extension on a regular grid");
  gr->add_option("--set", o.set_path, "set JSON")->required();
  gr->add_option("--jet", o.jet_path, "jet JSON")->required();
  gr->add_option("--region", o.region, "box lo1:hi1,lo2:hi2,...")->required();
  gr->add_option("--resolution", o.resolution, "points per axis, at most 4096")->capture_default_str();
  gr->add_option("--deriv", o.deriv, "multi-index k1,k2,... (default 0)");
  gr->add_option("--precision", o.precision, "absolute error 2^-i")->capture_default_str();
  add_format(gr);

  auto* bd = app.add_subcommand("bounds", "print the derivative bound tables");
  bd->add_option("--order", o.order, "largest derivative order")->capture_default_str();
  bd->add_option("--dim", o.dim, "dimension when no set is given");
  bd->add_option("--set", o.set_path, "set JSON (dimension and extension constants)");
  bd->add_option("--jet", o.jet_path, "jet JSON (extension constants)");
  add_format(bd);

  auto* ck = app.add_subcommand("check", "run the invariant suites");
  ck->add_option("--suite", o.suite, "cubes, partition, extend or all")->capture_default_str();
  ck->add_option("--seed", o.seed, "sampling seed")->capture_default_str();
  ck->add_option("--set", o.set_path, "set JSON (default: the origin of R)");
  ck->add_option("--jet", o.jet_path, "jet JSON (default: identity of x1, order 1)");
  ck->add_option("--region", o.region, "sampling window");
  add_format(ck);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*dec) return cmd_decompose(o);
    if (*ev) return cmd_eval(o);
    if (*gr) return cmd_grid(o);
    if (*bd) return cmd_bounds(o);
    if (*ck) return cmd_check(o);
  } catch (const EmptySet& e) {
    std::cerr << "whitney: " << e.what() << '\n';
    return 3;
  } catch (const InputError& e) {
    std::cerr << "whitney: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "whitney: internal error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
