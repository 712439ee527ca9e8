#include "whitney/check.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace whitney {

namespace {

std::string point_str(const DyPoint& x) {
  std::string s = "(";
  for (size_t c = 0; c < x.size(); ++c) s += (c ? "," : "") + x[c].decimal();
  return s + ")";
}

Box default_window(const TotalClosedSet& F) {
  const int n = F.dim();
  Box w;
  if (auto hull = F.bounding_box()) {
    for (int c = 0; c < n; ++c) {
      w.lo.push_back(hull->lo[c] - Dyadic(1));
      w.hi.push_back(hull->hi[c] + Dyadic(1));
    }
  } else {
    w.lo.assign(n, Dyadic(-4));
    w.hi.assign(n, Dyadic(4));
  }
  return w;
}

long window_level(const Box& w) {
  Dyadic width(0);
  for (int c = 0; c < w.dim(); ++c) width = max(width, w.hi[c] - w.lo[c]);
  return width.is_zero() ? 0 : -width.log2_ceil() - 1;
}

// off-F sample with 2^-8 <= d(x, F), or nullopt after many misses
std::optional<DyPoint> off_set_point(std::mt19937_64& rng, const TotalClosedSet& F, const Box& w) {
  for (int tries = 0; tries < 4096; ++tries) {
    DyPoint x = random_point(rng, w);
    if (F.dist(CPoint::exact(x), 12) >= Dyadic::pow2(-8) + Dyadic::pow2(-12)) return x;
  }
  return std::nullopt;
}

CheckItem check_consistency(const TotalClosedSet& F) {
  CheckItem it{"stream_consistency", true, 0, ""};
  // complement round s has about 4^(s n) balls
  const long rounds = F.dim() == 1 ? 4 : F.dim() == 2 ? 2 : 1;
  const StreamAudit a = audit_streams(F, 512, rounds);
  it.checked = 512;
  it.pass = a.ok;
  it.counterexample = a.detail;
  return it;
}

void suite_cubes(const CubeContext& ctx, const Box& w, std::mt19937_64& rng, std::vector<CheckItem>& out) {
  const int n = ctx.dim();
  const long kmin = window_level(w);
  const long kmax = kmin + (n == 1 ? 10 : n == 2 ? 6 : 4);
  const auto cubes = ctx.enum_region(w, kmin, kmax);

  CheckItem c3{"cube_distance_c3", true, 0, ""};
  for (const auto& q : cubes) {
    ++c3.checked;
    const DyInterval d = ctx.cube_distance(q, q.level + 24);
    if (!CubeContext::c3_certified(q, d)) {
      c3.pass = false;
      c3.counterexample = q.str() + " d in [" + d.lo.decimal() + "," + d.hi.decimal() + "]";
      break;
    }
  }
  out.push_back(c3);

  CheckItem disj{"cubes_disjoint", true, 0, ""};
  std::set<std::string> keys;
  for (const auto& q : cubes) keys.insert(q.key());
  for (const auto& q : cubes) {
    ++disj.checked;
    for (long h = kmin; h < q.level && disj.pass; ++h) {
      if (keys.count(q.ancestor(h).key())) {
        disj.pass = false;
        disj.counterexample = q.str() + " lies inside " + q.ancestor(h).str();
      }
    }
    if (!disj.pass) break;
  }
  out.push_back(disj);

  CheckItem cover{"cover_off_set_points", true, 0, ""};
  for (int t = 0; t < 200; ++t) {
    auto x = off_set_point(rng, ctx.F(), w);
    if (!x) break;
    ++cover.checked;
    auto q = ctx.find_cover(*x);
    bool inside = q.has_value();
    if (inside) {
      const DyPoint lo = q->lo(), hi = q->hi();
      for (int c = 0; c < n; ++c) inside = inside && lo[c] <= (*x)[c] && (*x)[c] <= hi[c];
    }
    if (!inside) {
      cover.pass = false;
      cover.counterexample = "no cube covers " + point_str(*x);
      break;
    }
  }
  out.push_back(cover);
}

void suite_partition(const CubeContext& ctx, const Box& w, std::mt19937_64& rng, std::vector<CheckItem>& out) {
  CheckItem sum{"partition_sums_to_one", true, 0, ""};
  CheckItem deriv{"partition_derivatives_vanish", true, 0, ""};
  CheckItem support{"partition_support", true, 0, ""};
  const Dyadic tol0 = Dyadic::pow2(-20), tol1 = Dyadic::pow2(-16);
  for (int t = 0; t < 100; ++t) {
    auto xa = off_set_point(rng, ctx.F(), w);
    if (!xa) break;
    const CPoint x = CPoint::exact(*xa);
    auto gx = ctx.enum_Gx(x);
    if (!gx) {
      sum.pass = false;
      sum.counterexample = "no cube list at " + point_str(*xa);
      break;
    }
    const PhiTable tab = phi_table(gx->cubes, x, 2, ctx.eps(), 40);
    // cubes whose enlargement misses x contribute exact zeros, and the
    // decomposition cube holding x is listed
    ++support.checked;
    for (size_t j = 0; j < gx->cubes.size() && support.pass; ++j) {
      if (enlarged_contains(gx->cubes[j], ctx.eps(), *xa)) continue;
      for (const auto& v : tab.phistar[j]) {
        if (!v.lo.is_zero() || !v.hi.is_zero()) {
          support.pass = false;
          support.counterexample = gx->cubes[j].str() + " is nonzero off its support at " + point_str(*xa);
          break;
        }
      }
    }
    if (auto home = ctx.find_cover(*xa); support.pass && home &&
        std::find(gx->cubes.begin(), gx->cubes.end(), *home) == gx->cubes.end()) {
      support.pass = false;
      support.counterexample = home->str() + " holds " + point_str(*xa) + " but is not listed";
    }
    for (size_t s = 0; s < tab.index.size(); ++s) {
      DyInterval acc(Dyadic(0));
      for (const auto& row : tab.phistar) acc += row[s];
      const bool zero = norm(tab.index[s]) == 0;
      if (zero) acc = acc - DyInterval(Dyadic(1));
      const Dyadic bound = zero ? tol0 : tol1;
      CheckItem& it = zero ? sum : deriv;
      ++it.checked;
      if (it.pass && abs(acc).hi > bound) {
        it.pass = false;
        it.counterexample = "x=" + point_str(*xa) + " l=" + index_str(tab.index[s]) + " residual<=" +
                            abs(acc).hi.decimal();
      }
    }
  }
  out.push_back(sum);
  out.push_back(deriv);
  out.push_back(support);
}

void suite_extend(const std::shared_ptr<const CubeContext>& ctx, const SetPtr& F, const JetSpec& spec,
                  const Box& w, std::mt19937_64& rng, std::uint64_t seed, std::vector<CheckItem>& out) {
  const Extender ext(ctx);
  const WhitneyJet jet = jet_make(spec, F);
  const auto ks = indices_up_to(jet.dim(), jet.order);

  CheckItem compat{"jet_compatibility", true, 0, ""};
  const CompatReport cr = validate_compat(jet, 300, seed);
  compat.checked = cr.checks;
  compat.pass = cr.ok;
  compat.counterexample = cr.first_violation;
  out.push_back(compat);

  const long i = 12;
  CheckItem agree{"extension_agrees_on_F", true, 0, ""};
  auto cur = F->dense();
  for (int t = 0; t < 16 && agree.pass; ++t) {
    const DyPoint y = cur.next();
    const CPoint yc = CPoint::exact(y);
    for (const auto& k : ks) {
      ++agree.checked;
      const Dyadic g = ext.wetm(jet, yc, k, i).value;
      const Dyadic f = jet[k].eval(yc, i + 4);
      if ((g - f).abs() > Dyadic::pow2(-i) + Dyadic::pow2(-i - 4)) {
        agree.pass = false;
        agree.counterexample = "y=" + point_str(y) + " k=" + index_str(k) + " g=" + g.decimal() + " f=" + f.decimal();
        break;
      }
    }
  }
  out.push_back(agree);

  CheckItem mono{"precision_monotone", true, 0, ""};
  CheckItem det{"deterministic", true, 0, ""};
  const long j = 8;
  for (int t = 0; t < 8; ++t) {
    const DyPoint xa = random_point(rng, w, 8);
    const CPoint x = CPoint::exact(xa);
    for (const auto& k : ks) {
      const Dyadic a = ext.wetm(jet, x, k, j).value;
      const Dyadic b = ext.wetm(jet, x, k, j + 1).value;
      const Dyadic a2 = ext.wetm(jet, x, k, j).value;
      ++mono.checked;
      ++det.checked;
      if (mono.pass && (a - b).abs() > Dyadic::pow2(-j) + Dyadic::pow2(-j - 1)) {
        mono.pass = false;
        mono.counterexample = "x=" + point_str(xa) + " k=" + index_str(k) + " " + a.decimal() + " vs " + b.decimal();
      }
      if (det.pass && !(a == a2)) {
        det.pass = false;
        det.counterexample = "x=" + point_str(xa) + " k=" + index_str(k);
      }
    }
  }
  out.push_back(mono);
  out.push_back(det);
}

}  // namespace

bool CheckReport::pass() const {
  for (const auto& it : items)
    if (!it.pass) return false;
  return true;
}

nlohmann::json CheckReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& it : items) {
    nlohmann::json j = {{"name", it.name}, {"pass", it.pass}, {"checked", it.checked}};
    if (!it.pass) j["counterexample"] = it.counterexample;
    arr.push_back(j);
  }
  return {{"suite", suite}, {"seed", seed}, {"pass", pass()}, {"invariants", arr}};
}

DyPoint random_point(std::mt19937_64& rng, const Box& box, int bits) {
  std::uniform_int_distribution<long> u(0, 1L << bits);
  DyPoint x;
  for (int c = 0; c < box.dim(); ++c)
    x.push_back(box.lo[c] + (box.hi[c] - box.lo[c]) * Dyadic(BigInt(u(rng)), -bits));
  return x;
}

CheckReport run_check(const CheckConfig& cfg) {
  const std::string& s = cfg.suite;
  if (s != "cubes" && s != "partition" && s != "extend" && s != "all")
    throw std::invalid_argument("unknown suite '" + s + "'");
  CheckReport rep;
  rep.suite = s;
  rep.seed = cfg.seed;
  const SetPtr F = make_set(cfg.set);
  rep.items.push_back(check_consistency(*F));
  // the remaining invariants presuppose a consistent name
  if (!rep.items.back().pass) return rep;

  auto ctx = std::make_shared<const CubeContext>(F, cfg.eps);
  const Box w = cfg.region ? *cfg.region : default_window(*F);
  std::mt19937_64 rng(cfg.seed);
  if (s == "cubes" || s == "all") suite_cubes(*ctx, w, rng, rep.items);
  if (s == "partition" || s == "all") suite_partition(*ctx, w, rng, rep.items);
  if (s == "extend" || s == "all") {
    JetSpec spec;
    if (cfg.jet) {
      spec = *cfg.jet;
    } else {
      spec.builtin = "poly";
      spec.coeffs = {Dyadic(0), Dyadic(1)};
      spec.order = 1;
    }
    suite_extend(ctx, F, spec, w, rng, cfg.seed, rep.items);
  }
  return rep;
}

}  // namespace whitney
