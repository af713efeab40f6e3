#include "gsum/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gsum/asymptotics.hpp"
#include "gsum/renorm.hpp"

namespace gsum {

namespace {

template <class F>
std::int64_t median_ns(int reps, F&& run) {
  std::vector<std::int64_t> times;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    run();
    const auto t1 = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

}  // namespace

CurlicuePath curlicue_path(std::int64_t N, const Params& p, const PrecisionConfig& cfg, bool annotate) {
  p.validate();
  cfg.validate();
  if (N < 0) fail(ErrorKind::domain, "curlicue needs N >= 0");
  if (N > kMaxPathLength) fail(ErrorKind::domain, "memory-guard: paths are limited to N <= 10^7");
  CurlicuePath path;
  path.params = p;
  path.N = N;
  path.points.reserve(static_cast<std::size_t>(N) + 1);
  path.points.push_back({0.0, 0.0});
  for (std::int64_t n = 0; n < N; ++n) path.points.push_back(path.points.back() + unit_exp(reduced_phase(n, p.a, p.b, cfg)));

  if (annotate) {
    // L(n) is non-decreasing; it steps up at each N^-(l)
    std::vector<std::int64_t> starts;
    std::vector<double> a_at;
    GaussCascade c(p.a);
    for (int l = 0; N >= 1; ++l) {
      NBounds nb = n_bounds(l, p.a);
      if (nb.minus > N) break;
      starts.push_back(nb.minus);
      a_at.push_back(static_cast<double>(c.a(l)));
      if (!nb.plus) break;
    }
    path.level.assign(path.points.size(), -1);
    path.a_level.assign(path.points.size(), std::nan(""));
    std::size_t l = 0;
    for (std::int64_t n = 1; n <= N; ++n) {
      while (l + 1 < starts.size() && starts[l + 1] <= n) ++l;
      path.level[n] = static_cast<int>(l);
      path.a_level[n] = a_at[l];
    }
  }
  return path;
}

void write_curlicue_csv(const CurlicuePath& path, std::ostream& out) {
  const bool annotated = !path.level.empty();
  out << (annotated ? "n,re,im,L,a_L\n" : "n,re,im\n");
  out.precision(17);
  for (std::size_t n = 0; n < path.points.size(); ++n) {
    out << n << ',' << path.points[n].real() << ',' << path.points[n].imag();
    if (annotated) {
      out << ',' << path.level[n] << ',';
      if (path.level[n] >= 0) out << path.a_level[n];
    }
    out << '\n';
  }
}

double max_increment_defect(const CurlicuePath& path) {
  double worst = 0.0;
  for (std::size_t n = 1; n < path.points.size(); ++n)
    worst = std::max(worst, std::abs(std::abs(path.points[n] - path.points[n - 1]) - 1.0));
  return worst;
}

ArcComparison compare_to_fresnel_arc(int L, const Params& p, std::size_t arc_points, const PrecisionConfig& cfg) {
  p.validate();
  if (arc_points < 2) fail(ErrorKind::domain, "the arc needs at least two points");
  NBounds nb = n_bounds(L, p.a);
  if (!nb.plus) fail(ErrorKind::domain, "level L is never left: a_L = 0");
  ArcComparison out;
  out.L = L;
  out.N_minus = nb.minus;
  out.N_plus = *nb.plus;
  if (out.N_plus > kMaxPathLength) fail(ErrorKind::domain, "memory-guard: level L ends beyond 10^7");

  CascadeLevels cl = cascade_levels(out.N_minus, p, cfg.max_depth);
  const RenormStep& last = cl.steps.back();
  out.a_L = static_cast<double>(last.a);
  out.b_L = static_cast<double>(last.b);
  double weight_sq = 1.0;
  for (const RenormStep& s : cl.steps) weight_sq *= static_cast<double>(s.a);
  const Complex rotate = unit_exp(-cl.theta_next) * std::sqrt(weight_sq);
  const bool conj = last.conj_odd;

  CurlicuePath path = curlicue_path(out.N_plus, p, cfg);
  GaussCascade c(p.a);
  std::vector<Complex> z;
  double xi_max = 0.0;
  for (std::int64_t N = out.N_minus; N <= out.N_plus; ++N) {
    const double xi = static_cast<double>(c.a(L) * DoubleDouble(static_cast<double>(c.level_count(N, L))));
    if (xi - out.b_L > 0.5) continue;
    xi_max = std::max(xi_max, xi);
    const Complex w = path.points[static_cast<std::size_t>(N)] * rotate;
    z.push_back(conj ? std::conj(w) : w);
  }
  out.path_points = z.size();
  if (z.empty()) fail(ErrorKind::domain, "no N on level L with xi_L - b_L <= 1/2");

  // the swept arc: t from -b_L/sqrt(a_L) to (xi_max - b_L)/sqrt(a_L)
  const double sa = std::sqrt(out.a_L);
  const double lo = -out.b_L / sa;
  const double hi = (xi_max - out.b_L) / sa;
  std::vector<Complex> arc;
  arc.reserve(arc_points);
  for (std::size_t i = 0; i < arc_points; ++i) {
    const double t = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(arc_points - 1);
    arc.push_back(fresnel_integral(lo, t));
  }
  auto directed = [](const std::vector<Complex>& from, const std::vector<Complex>& to) {
    double worst = 0.0;
    for (const Complex& w : from) {
      double best = INFINITY;
      for (const Complex& q : to) best = std::min(best, std::abs(w - q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  out.arc_points = arc_points;
  out.hausdorff = std::max(directed(z, arc), directed(arc, z));
  out.C = out.hausdorff / sa;
  return out;
}

std::vector<BenchRecord> bench(const std::vector<std::int64_t>& Ns, const Params& p, const PrecisionConfig& cfg,
                               int reps, std::int64_t naive_limit) {
  p.validate();
  cfg.validate();
  if (reps < 1) fail(ErrorKind::domain, "bench needs reps >= 1");
  std::vector<BenchRecord> out;
  for (std::int64_t N : Ns) {
    BenchRecord r{N, "renorm", 0, {}, {}};
    r.wall_ns = median_ns(reps, [&] { r.value = renorm_sum(N, p, cfg); });
    if (N <= naive_limit) {
      BenchRecord nv{N, "naive", 0, {}, {}};
      nv.wall_ns = median_ns(reps, [&] { nv.value = naive_sum(N, p, cfg); });
      r.residual = nv.residual = std::abs(nv.value - r.value);
      out.push_back(nv);
    }
    out.push_back(r);
  }
  return out;
}

Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json config_json(const PrecisionConfig& cfg) {
  return Json{{"working_bits", cfg.working_bits}, {"quad_tolerance", cfg.quad_tolerance}, {"max_depth", cfg.max_depth}};
}

Json make_report(const std::string& command, const Json& config, std::optional<std::uint64_t> seed,
                 const Json& outputs) {
  Json r;
  r["tool"] = "gsum";
  r["version"] = kVersion;
  r["command"] = command;
  r["seed"] = seed ? Json(*seed) : Json(nullptr);
  r["config"] = config;
  r["outputs"] = outputs;
  return r;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::io, "cannot open " + path + " for writing");
  f << text;
  f.close();
  if (!f) fail(ErrorKind::io, "failed writing " + path);
}

Json parse_report(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::io, std::string("malformed report: ") + e.what());
  }
}

}  // namespace gsum
