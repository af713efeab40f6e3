// Command-line front end: each subcommand prints a JSON report or CSV rows.

#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gsum/asymptotics.hpp"
#include "gsum/dynamics.hpp"
#include "gsum/error.hpp"
#include "gsum/harness.hpp"
#include "gsum/renorm.hpp"
#include "gsum/special.hpp"

using namespace gsum;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  double tol = 1e-12;
  int bits = 106;
  std::string out;
  std::string format;

  PrecisionConfig config() const {
    PrecisionConfig c;
    c.working_bits = bits;
    c.quad_tolerance = tol;
    c.validate();
    return c;
  }
  bool csv(const char* fallback) const { return (format.empty() ? std::string(fallback) : format) == "csv"; }
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

template <class F>
std::int64_t timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0).count();
}

// "1/6", "0.25" or "pow:1/6" -> the exponent p of phi(l) = (l + 2)^-p
double parse_phi(const std::string& spec) {
  std::string s = spec.rfind("pow:", 0) == 0 ? spec.substr(4) : spec;
  try {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return std::stod(s);
    return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
  } catch (const std::exception&) {
    fail(ErrorKind::domain, "cannot parse --phi " + spec);
  }
}

std::vector<std::int64_t> parse_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(static_cast<std::int64_t>(std::stod(item)));
    } catch (const std::exception&) {
      fail(ErrorKind::domain, "cannot parse list entry " + item);
    }
  }
  return out;
}

const char* symbol_name(BSymbol s) {
  switch (s) {
    case BSymbol::zero: return "0";
    case BSymbol::half: return "1/2";
    case BSymbol::plus_half_a: return "a/2";
    case BSymbol::minus_half_a: return "-a/2";
    case BSymbol::other: break;
  }
  return "other";
}

Json estimate_json(const Estimate& e) { return Json{{"mean", e.mean}, {"se", e.se}}; }

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::domain: return 2;
    case ErrorKind::io: return 4;
    default: return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian exponential sums S(N, a, b) = sum_{n<N} e(-a n^2/2 + b n) and the (a, b) dynamics",
               "gsum"};
  app.footer(
      "Examples:\n"
      "  gsum sum --n 100000 --a 0.618 --b 0.1 --method both\n"
      "  gsum trace --n 1000000 --a 0.3 --b 0.2\n"
      "  gsum special-fn --xi 0.3 --a 0.05\n"
      "  gsum growth --a 0.618 --b 0 --lmax 12\n"
      "  gsum dynamics norms --phi 1/6 --L 1000 --samples 10000 --seed 7\n"
      "  gsum dynamics invariance --samples 100000\n"
      "  gsum dynamics ba-orbit --a 0.3 --m 3 --n 2\n"
      "  gsum curlicue --n 100000 --a 0.618 --b 0 --annotate --out path.csv\n"
      "  gsum bench --ns 1e4,1e6,1e8 --a 0.618 --b 0.1\n"
      "Exit codes: 0 ok, 2 domain error, 3 precision or tolerance failure, 4 io error.");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "seed for Monte Carlo commands")->capture_default_str();
  app.add_option("--tol", g.tol, "absolute quadrature tolerance")->capture_default_str();
  app.add_option("--bits", g.bits, "working precision in bits, 53 (double) to 106 (double-double)")
      ->capture_default_str();
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--format", g.format, "csv or json (default depends on the command)")
      ->check(CLI::IsMember({"csv", "json"}));

  std::function<std::string()> run;
  std::int64_t N = 0;
  double a = 0.5, b = 0.0;

  // sum
  auto* sum = app.add_subcommand("sum", "evaluate S(N, a, b)");
  std::string method = "renorm";
  sum->add_option("--n", N, "number of terms")->required();
  sum->add_option("--a", a, "a in (0,1)")->required();
  sum->add_option("--b", b, "b in (-1/2,1/2]")->required();
  sum->add_option("--method", method, "naive, renorm or both")->check(CLI::IsMember({"naive", "renorm", "both"}));
  sum->callback([&] {
    run = [&] {
      const PrecisionConfig cfg = g.config();
      const Params p{a, b};
      p.validate();
      Json out;
      out["N"] = N;
      out["a"] = a;
      out["b"] = b;
      Complex naive, renorm;
      if (method != "naive") {
        RenormTrace tr;
        out["renorm_ns"] = timed([&] { renorm = renorm_sum(N, p, cfg); });
        tr = build_trace(N, p, cfg);
        out["renorm"] = complex_json(renorm);
        out["trace"] = Json{{"L", tr.L},
                            {"error_bound", trace_error(tr)},
                            {"rational_termination", tr.rational_termination},
                            {"direct_tail", tr.direct_tail}};
      }
      if (method != "renorm") {
        out["naive_ns"] = timed([&] { naive = naive_sum(N, p, cfg); });
        out["naive"] = complex_json(naive);
      }
      if (method == "both") out["residual"] = std::abs(naive - renorm);
      if (g.csv("json")) {
        std::string s = "method,re,im\n";
        if (method != "renorm") s += "naive," + fmt(naive.real()) + "," + fmt(naive.imag()) + "\n";
        if (method != "naive") s += "renorm," + fmt(renorm.real()) + "," + fmt(renorm.imag()) + "\n";
        return s;
      }
      return dump(make_report("sum", config_json(cfg), std::nullopt, out));
    };
  });

  // trace
  auto* trace = app.add_subcommand("trace", "the renormalization cascade of S(N, a, b)");
  trace->add_option("--n", N, "number of terms")->required();
  trace->add_option("--a", a, "a in (0,1)")->required();
  trace->add_option("--b", b, "b in (-1/2,1/2]")->required();
  trace->callback([&] {
    run = [&] {
      const PrecisionConfig cfg = g.config();
      RenormTrace tr = build_trace(N, {a, b}, cfg);
      if (g.csv("csv")) {
        std::string s = "l,a_l,b_l,N_l,xi_l,theta_l,term_re,term_im,term_err\n";
        for (std::size_t l = 0; l < tr.steps.size(); ++l) {
          const RenormStep& st = tr.steps[l];
          s += std::to_string(st.l) + "," + fmt(static_cast<double>(st.a)) + "," + fmt(static_cast<double>(st.b)) +
               "," + std::to_string(st.N) + "," + fmt(static_cast<double>(st.xi)) + "," +
               fmt(static_cast<double>(st.theta));
          if (l < tr.terms.size())
            s += "," + fmt(tr.terms[l].real()) + "," + fmt(tr.terms[l].imag()) + "," + fmt(tr.term_errors[l]);
          else
            s += ",,,";
          s += "\n";
        }
        return s;
      }
      Json steps = Json::array();
      for (std::size_t l = 0; l < tr.steps.size(); ++l) {
        const RenormStep& st = tr.steps[l];
        Json row{{"l", st.l},
                 {"a", static_cast<double>(st.a)},
                 {"b", static_cast<double>(st.b)},
                 {"N", st.N},
                 {"xi", static_cast<double>(st.xi)},
                 {"theta", static_cast<double>(st.theta)}};
        if (l < tr.terms.size()) {
          row["term"] = complex_json(tr.terms[l]);
          row["term_err"] = tr.term_errors[l];
        }
        steps.push_back(row);
      }
      Json out{{"N", N}, {"a", a}, {"b", b}, {"L", tr.L}, {"steps", steps}, {"value", complex_json(recompose(tr))}};
      return dump(make_report("trace", config_json(cfg), std::nullopt, out));
    };
  });

  // special-fn
  auto* special = app.add_subcommand("special-fn", "calF(xi, a) with its error estimate");
  double xi = 0.0;
  special->add_option("--xi", xi, "xi")->required();
  special->add_option("--a", a, "a in (0,1)")->required();
  special->callback([&] {
    run = [&] {
      const PrecisionConfig cfg = g.config();
      SpecialValue v = calF(xi, a, cfg);
      if (g.csv("json"))
        return "xi,a,re,im,err_estimate\n" + fmt(xi) + "," + fmt(a) + "," + fmt(v.value.real()) + "," +
               fmt(v.value.imag()) + "," + fmt(v.err_estimate) + "\n";
      Json out{{"xi", xi}, {"a", a}, {"value", complex_json(v.value)}, {"err_estimate", v.err_estimate}};
      return dump(make_report("special-fn", config_json(cfg), std::nullopt, out));
    };
  });

  // growth
  auto* growth = app.add_subcommand("growth", "M(L) = max |S(N)|/sqrt(N) over each depth level");
  int lmax = 8;
  std::int64_t budget = 1 << 20;
  growth->add_option("--a", a, "a in (0,1)")->required();
  growth->add_option("--b", b, "b in (-1/2,1/2]")->required();
  growth->add_option("--lmax", lmax, "last level")->capture_default_str();
  growth->add_option("--budget", budget, "largest exact scan")->capture_default_str();
  growth->callback([&] {
    run = [&] {
      const PrecisionConfig cfg = g.config();
      const Params p{a, b};
      p.validate();
      std::vector<GrowthBound> rows;
      for (int L = 0; L <= lmax; ++L) {
        NBounds nb = n_bounds(L, a);
        if (!nb.plus) break;
        rows.push_back(M_of_L(L, p, cfg, budget));
      }
      if (g.csv("csv")) {
        std::string s = "L,M,key,bound_upper,bound_lower,a_L,b_L,N_minus,N_plus,argmax_N,exact_scan\n";
        for (const GrowthBound& r : rows)
          s += std::to_string(r.L) + "," + fmt(r.M) + "," + fmt(r.key) + "," + fmt(r.bound_upper) + "," +
               (r.bound_lower ? fmt(*r.bound_lower) : "") + "," + fmt(r.a_L) + "," + fmt(r.b_L) + "," +
               std::to_string(r.N_minus) + "," + std::to_string(r.N_plus) + "," + std::to_string(r.argmax_N) +
               "," + (r.exact_scan ? "1" : "0") + "\n";
        return s;
      }
      Json arr = Json::array();
      for (const GrowthBound& r : rows)
        arr.push_back(Json{{"L", r.L},
                           {"M", r.M},
                           {"key", r.key},
                           {"bound_upper", r.bound_upper},
                           {"bound_lower", r.bound_lower ? Json(*r.bound_lower) : Json(nullptr)},
                           {"a_L", r.a_L},
                           {"b_L", r.b_L},
                           {"N_minus", r.N_minus},
                           {"N_plus", r.N_plus},
                           {"argmax_N", r.argmax_N},
                           {"exact_scan", r.exact_scan}});
      return dump(make_report("growth", config_json(cfg), std::nullopt, Json{{"a", a}, {"b", b}, {"levels", arr}}));
    };
  });

  // dynamics
  auto* dyn = app.add_subcommand("dynamics", "Monte Carlo and orbit statistics of the (a, b) skew product");
  dyn->require_subcommand(1);
  dyn->fallthrough();
  std::string phi = "1/6";
  int L = 100;
  std::int64_t samples = 10000;
  int threads = 0;
  auto* norms = dyn->add_subcommand("norms", "L1 and L2 norms of the counting function");
  norms->add_option("--phi", phi, "exponent p of phi(l) = (l+2)^-p, e.g. 1/6")->capture_default_str();
  norms->add_option("--L", L, "last level")->capture_default_str();
  norms->add_option("--samples", samples, "Monte Carlo samples")->capture_default_str();
  norms->add_option("--threads", threads, "worker threads, 0 for all cores");
  norms->callback([&] {
    run = [&] {
      const Threshold th = power_threshold(parse_phi(phi));
      CountingStats st = counting_norms(L, th, samples, g.seed, {}, threads);
      const double ref = counting_reference(L, th);
      if (g.csv("json"))
        return "L,phi,samples,norm1,norm1_se,norm2,norm2_se,reference\n" + std::to_string(L) + "," + st.phi + "," +
               std::to_string(samples) + "," + fmt(st.norm1.mean) + "," + fmt(st.norm1.se) + "," +
               fmt(st.norm2.mean) + "," + fmt(st.norm2.se) + "," + fmt(ref) + "\n";
      Json out{{"L", L},
               {"phi", st.phi},
               {"samples", samples},
               {"norm1", estimate_json(st.norm1)},
               {"norm2", estimate_json(st.norm2)},
               {"reference", ref}};
      return dump(make_report("dynamics norms", Json::object(), g.seed, out));
    };
  });
  auto* inv = dyn->add_subcommand("invariance", "pushforward of nu under the coding map and P1 = 1");
  inv->add_option("--samples", samples, "Monte Carlo samples")->capture_default_str();
  inv->callback([&] {
    run = [&] {
      InvarianceReport r = tilde_invariance_check(samples, g.seed);
      if (g.csv("json")) {
        std::string s = "y,P1\n";
        for (std::size_t i = 0; i < r.grid.size(); ++i) s += fmt(r.grid[i]) + "," + fmt(r.P1[i]) + "\n";
        return s;
      }
      Json out{{"samples", samples},
               {"ks_distance", r.ks_distance},
               {"max_P1_deviation", r.max_P1_deviation},
               {"max_gauss_deviation", r.max_gauss_deviation},
               {"event_probability", r.event_probability},
               {"lag_covariance", r.lag_covariance},
               {"decay_rate", r.decay_rate}};
      return dump(make_report("dynamics invariance", Json::object(), g.seed, out));
    };
  });
  auto* ba = dyn->add_subcommand("ba-orbit", "orbit of b = {(m a + n)/2} under the skew product");
  std::int64_t m = 0, n = 0;
  int jmax = 60;
  ba->add_option("--a", a, "a in (0,1)")->required();
  ba->add_option("--m", m, "m")->required();
  ba->add_option("--n", n, "n")->required();
  ba->add_option("--jmax", jmax, "last step")->capture_default_str();
  ba->callback([&] {
    run = [&] {
      BaOrbit o = ba_orbit(a, m, n, jmax);
      if (g.csv("csv")) {
        std::string s = "j,n_j,eps_j,a_j,b_exact,b_step,b_free,symbol,parity_even\n";
        for (const BaPoint& p : o.points)
          s += std::to_string(p.j) + "," + std::to_string(p.n) + "," + std::to_string(p.epsilon) + "," + fmt(p.a) +
               "," + fmt(p.b_exact) + "," + fmt(p.b_step) + "," + fmt(p.b_free) + "," + symbol_name(p.symbol) + "," +
               (p.parity_even ? "1" : "0") + "\n";
        return s;
      }
      Json pts = Json::array();
      for (const BaPoint& p : o.points)
        pts.push_back(Json{{"j", p.j}, {"n", p.n}, {"epsilon", p.epsilon}, {"a", p.a}, {"b", p.b_exact},
                           {"symbol", symbol_name(p.symbol)}});
      Json out{{"a", a},
               {"m", m},
               {"n", n},
               {"j0", o.j0 ? Json(*o.j0) : Json(nullptr)},
               {"membership", o.membership},
               {"table_consistent", o.table_consistent},
               {"max_step_mismatch", o.max_step_mismatch},
               {"free_departure", o.free_departure ? Json(*o.free_departure) : Json(nullptr)},
               {"points", pts}};
      return dump(make_report("dynamics ba-orbit", Json::object(), std::nullopt, out));
    };
  });

  // curlicue
  auto* curl = app.add_subcommand("curlicue", "the path S(0), S(1), ..., S(N) as CSV");
  bool annotate = false;
  curl->add_option("--n", N, "last index, at most 10^7")->required();
  curl->add_option("--a", a, "a in (0,1)")->required();
  curl->add_option("--b", b, "b in (-1/2,1/2]")->required();
  curl->add_flag("--annotate", annotate, "add the columns L(n) and a_L(n)");
  curl->callback([&] {
    run = [&] {
      CurlicuePath path = curlicue_path(N, {a, b}, g.config(), annotate);
      std::ostringstream s;
      write_curlicue_csv(path, s);
      return s.str();
    };
  });

  // bench
  auto* bn = app.add_subcommand("bench", "wall time of renorm_sum against naive summation");
  std::string ns = "10000,1000000";
  int reps = 5;
  std::int64_t naive_limit = 10'000'000;
  bn->add_option("--ns", ns, "comma-separated N values")->capture_default_str();
  bn->add_option("--a", a, "a in (0,1)")->required();
  bn->add_option("--b", b, "b in (-1/2,1/2]")->required();
  bn->add_option("--reps", reps, "repetitions per timing (median)")->capture_default_str();
  bn->add_option("--naive-limit", naive_limit, "largest N summed naively")->capture_default_str();
  bn->callback([&] {
    run = [&] {
      const PrecisionConfig cfg = g.config();
      std::vector<BenchRecord> recs = bench(parse_list(ns), {a, b}, cfg, reps, naive_limit);
      if (g.csv("csv")) {
        std::string s = "N,method,wall_ns,re,im,residual\n";
        for (const BenchRecord& r : recs)
          s += std::to_string(r.N) + "," + r.method + "," + std::to_string(r.wall_ns) + "," + fmt(r.value.real()) +
               "," + fmt(r.value.imag()) + "," + (r.residual ? fmt(*r.residual) : "") + "\n";
        return s;
      }
      Json arr = Json::array();
      for (const BenchRecord& r : recs)
        arr.push_back(Json{{"N", r.N},
                           {"method", r.method},
                           {"wall_ns", r.wall_ns},
                           {"value", complex_json(r.value)},
                           {"residual", r.residual ? Json(*r.residual) : Json(nullptr)}});
      return dump(make_report("bench", config_json(cfg), std::nullopt, Json{{"a", a}, {"b", b}, {"records", arr}}));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    write_output(g.out, run());
  } catch (const Error& e) {
    std::cerr << "gsum: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  }
  return 0;
}
