// Copyright 2026 The qbu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qbu/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "qbu/errors.hpp"
#include "qbu/estimators.hpp"
#include "qbu/exact.hpp"
#include "qbu/graphred.hpp"
#include "qbu/hilbert.hpp"
#include "qbu/json_io.hpp"
#include "qbu/matchperm.hpp"
#include "qbu/rng.hpp"
#include "qbu/satcompile.hpp"
#include "qbu/sphere.hpp"

namespace qbu {

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_ll(long long x) { return std::to_string(x); }

// Deterministic work distribution: results land in caller-indexed slots, so
// the outcome is independent of the thread count.
template <typename F>
void parallel_for(int n, int threads, F&& f) {
  threads = std::clamp(threads, 1, n > 0 ? n : 1);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i; (i = next.fetch_add(1)) < n;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

ObservationSet random_rank_one_set(int d, int items, bool real_only, long long max_mult,
                                   SplitMix64& rng) {
  ObservationSet obs(d);
  for (int i = 0; i < items; ++i) {
    CVec v(d);
    for (int k = 0; k < d; ++k)
      v[k] = real_only ? Complex(rng.normal(), 0.0) : Complex(rng.normal(), rng.normal());
    const long long mult = 1 + static_cast<long long>(rng.next() % max_mult);
    obs.add(Observation::rank_one(v), mult);
  }
  return obs;
}

Dense<BigInt> all_ones(int size) {
  Dense<BigInt> s(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) s(i, j) = 1;
  return s;
}

WeightedDigraph indexed_graph(int n, std::uint32_t bits) {
  WeightedDigraph g;
  g.n = n;
  int k = 0;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v, ++k)
      if (bits & (1u << k)) g.edges.push_back({u, v, Rat(1)});
  return g;
}

}  // namespace

std::vector<CheckResult> verify_constants() {
  std::vector<CheckResult> out;
  const double pi = std::numbers::pi;

  for (int d = 2; d <= 5; ++d) {
    const PureState b = b0_state(SignVector::from_index(d, 0));
    const auto obs = basic_observation_set(d);
    const auto p = exact_likelihood(*b.exact, obs);
    FactoredRational want = FactoredRational::from_rat(Rat(1, d));
    want.pow(BigInt(d) * d);
    out.push_back(check_true("basic round likelihood equals d^-d^2, d=" + std::to_string(d),
                             p.has_value() && *p == want,
                             p ? p->to_string() : "(no exact value)", want.to_string(),
                             "exact rational"));
    out.push_back(check_close("basic round log likelihood, d=" + std::to_string(d),
                              p ? p->log() : 0.0, -double(d) * d * std::log(double(d)),
                              1e-9, "natural log"));
  }

  for (int d : {3, 4, 5}) {
    const auto triple = clause_observations({1, 2, 3}, d);
    SignVector s = SignVector::from_index(d, 0);
    s.signs[2] = -1;  // not-all-equal pattern (+, +, -) on the clause
    const PureState b = b0_state(s);
    const Rat span(3, d);
    Rat product(1);
    std::vector<Rat> ratios;
    for (const auto& o : triple) {
      const Rat r = exact_squared_overlap(*o.exact, *b.exact);
      ratios.push_back(r / span);
      product *= r;
    }
    const bool ratios_ok =
        ratios[0] == Rat(8, 9) && ratios[1] == Rat(2, 9) && ratios[2] == Rat(2, 9);
    out.push_back(check_true(
        "clause overlaps within the span are {8/9, 2/9, 2/9}, d=" + std::to_string(d),
        ratios_ok,
        rat_to_string(ratios[0]) + ", " + rat_to_string(ratios[1]) + ", " +
            rat_to_string(ratios[2]),
        "8/9, 2/9, 2/9", "squared overlaps divided by 3/d"));
    const Rat want(BigInt(32), BigInt(27) * d * d * d);
    out.push_back(check_true("clause-triple update at a good point, d=" + std::to_string(d),
                             product == want, rat_to_string(product), rat_to_string(want),
                             d == 3 ? "equals 32/729" : ""));
  }

  {
    bool all_ok = true;
    std::string table;
    for (int n = 1; n <= 8; ++n) {
      const BigInt got = pairing_sum(all_ones(2 * n));
      const BigInt want = double_factorial(2 * n - 1);
      if (got != want) all_ok = false;
      table += (n > 1 ? " " : "") + got.str();
    }
    out.push_back(check_true("pairing count of the complete matrix is (2n-1)!!, n<=8",
                             all_ok, table, "1 3 15 105 945 10395 135135 2027025", ""));
  }

  {
    const double areas[] = {2.0, 2.0 * pi, 4.0 * pi, 2.0 * pi * pi};
    for (int m = 1; m <= 4; ++m) {
      out.push_back(check_close("sphere area, ambient dimension " + std::to_string(m),
                                sphere_area(m).value(), areas[m - 1], 1e-12, ""));
    }
  }

  {
    const WickConstant w11 = wick_constant(1, 1);
    out.push_back(check_close("pairing normalization constant, d=1 n=1", w11.value(), pi,
                              1e-15, "derived reading"));
    out.push_back(check_close("printed pairing constant, d=1 n=1", w11.printed_value(),
                              4.0 * pi, 1e-15, "printed reading; differs from derived"));
    bool ratio_ok = true;
    std::string table;
    for (const auto& [d, n] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {2, 2}, {3, 1}}) {
      const WickConstant w = wick_constant(d, n);
      const Rat ratio = w.printed_coeff / w.coeff;
      if (ratio != Rat(ipow(BigInt(4), static_cast<unsigned long>(n)))) ratio_ok = false;
      table += "(d=" + std::to_string(d) + ",n=" + std::to_string(n) +
               ")=" + rat_to_string(ratio) + " ";
    }
    out.push_back(check_true("printed over derived constant ratio is 4^n", ratio_ok, table,
                             "4^n at every (d, n)",
                             "the two readings are never silently swapped"));
  }
  return out;
}

std::vector<CheckResult> verify_oracles(const VerifyOptions& opts) {
  std::vector<CheckResult> out;

  {
    const int instances = opts.quick ? 4 : 10;
    const long long samples = opts.quick ? 20000 : 200000;
    for (int i = 0; i < instances; ++i) {
      SplitMix64 rng(mix_seed(opts.seed, 100 + static_cast<std::uint64_t>(i)));
      const int d = 1 + static_cast<int>(rng.next() % 3);
      const int items = 1 + static_cast<int>(rng.next() % 4);
      const auto obs = random_rank_one_set(d, items, false, 2, rng);
      const auto exact = pnorm_exact(obs, Convention::normalized);
      const auto mc = pnorm_montecarlo(obs, samples, mix_seed(opts.seed, 200 + i),
                                       opts.threads);
      const double tol = 4.0 * mc.std_error + 1e-12;
      out.push_back(check_close("pnorm exact vs monte carlo, instance " + std::to_string(i),
                                mc.estimate, exact.value, tol,
                                "normalized convention, 4 sigma"));
    }
  }

  {
    // Ratio table for real-vector instances: produced, finite, reproducible.
    for (int d = 1; d <= 3; ++d) {
      for (int n = 1; n <= 3; ++n) {
        double ratio[2] = {0, 0};
        for (int pass = 0; pass < 2; ++pass) {
          SplitMix64 rng(mix_seed(opts.seed, 300 + static_cast<std::uint64_t>(10 * d + n)));
          const auto obs = random_rank_one_set(d, n, true, 1, rng);
          ratio[pass] = pnorm_exact(obs, Convention::raw).value / pnorm_via_pairings(obs);
        }
        out.push_back(check_true(
            "pairing formula ratio, d=" + std::to_string(d) + " n=" + std::to_string(n),
            std::isfinite(ratio[0]) &&
                std::abs(ratio[0] - ratio[1]) <= 1e-9 * std::abs(ratio[0]),
            fmt(ratio[0]), "finite and reproducible to 1e-9",
            "surface integral over pairing formula, raw convention"));
      }
    }
    // Frozen anchors for the same comparison.
    {
      ObservationSet obs(1);
      CVec v(1);
      v << 1.0;
      obs.add(Observation::rank_one(v), 1);
      const double r = pnorm_exact(obs, Convention::raw).value / pnorm_via_pairings(obs);
      out.push_back(check_close("pairing formula ratio anchor, d=1 single projector", r,
                                2.0, 1e-12, ""));
    }
    {
      ObservationSet obs(2);
      CVec v(2);
      v << 1.0, 0.0;
      obs.add(Observation::rank_one(v), 2);
      const double r = pnorm_exact(obs, Convention::raw).value / pnorm_via_pairings(obs);
      out.push_back(check_close("pairing formula ratio anchor, d=2 repeated projector", r,
                                8.0 / 3.0, 1e-12, ""));
    }
  }

  {
    const int matrices = opts.quick ? 30 : 100;
    SplitMix64 rng(mix_seed(opts.seed, 400));
    int equal = 0;
    for (int i = 0; i < matrices; ++i) {
      const int size = 1 + static_cast<int>(rng.next() % 7);
      Dense<BigInt> a(size, size);
      for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) a(r, c) = static_cast<long long>(rng.next() % 4);
      if (permanent(a) == permanent_bruteforce(a)) ++equal;
    }
    out.push_back(check_true("ryser permanent vs permutation sum", equal == matrices,
                             std::to_string(equal) + "/" + std::to_string(matrices),
                             "all equal", "integer matrices up to 7x7"));
  }

  {
    SplitMix64 rng(mix_seed(opts.seed, 500));
    int equal = 0, total = 0;
    for (int size = 2; size <= 12; size += 2) {
      for (int i = 0; i < 3; ++i) {
        Dense<BigInt> s(size, size);
        for (int r = 0; r < size; ++r)
          for (int c = r; c < size; ++c) {
            s(r, c) = static_cast<long long>(rng.next() % 3);
            s(c, r) = s(r, c);
          }
        ++total;
        if (pairing_sum(s) == pairing_sum_enumerate(s)) ++equal;
      }
    }
    out.push_back(check_true("memoized pairing sum vs enumeration", equal == total,
                             std::to_string(equal) + "/" + std::to_string(total),
                             "all equal", "symmetric integer matrices up to 12x12"));
  }

  {
    const int instances = opts.quick ? 6 : 15;
    SplitMix64 rng(mix_seed(opts.seed, 600));
    int ok = 0;
    double worst = 0.0;
    for (int i = 0; i < instances; ++i) {
      const int d = 2 + static_cast<int>(rng.next() % 2);
      const int items = 2 + static_cast<int>(rng.next() % 3);
      const auto obs = random_rank_one_set(d, items, false, 1, rng);
      const DoubledMatrix dm = gram_from_observations(obs);
      Dense<double> base = dm.matrix();
      for (int r = 0; r < base.rows(); r += 2) {
        base(r, r) -= 1.0;
        base(r, r + 1) -= 1.0;
        base(r + 1, r) -= 1.0;
        base(r + 1, r + 1) -= 1.0;
      }
      const double direct = permanent(base);
      ExtractOptions eopts;
      eopts.chebyshev_nodes = true;
      const double extracted = extract_base_permanent(dm, eopts);
      const double rel = std::abs(extracted - direct) /
                         std::max(1e-30, std::abs(direct));
      worst = std::max(worst, rel);
      if (rel <= 1e-3) ++ok;
    }
    out.push_back(check_true("float interpolation extraction vs direct permanent",
                             ok == instances, "worst relative error " + fmt(worst),
                             "within 1e-3 on every instance",
                             "degree-8 leading-coefficient conditioning"));
  }

  {
    SplitMix64 rng(mix_seed(opts.seed, 650));
    int equal = 0;
    const int total = opts.quick ? 4 : 8;
    for (int i = 0; i < total; ++i) {
      const int half = 2 + static_cast<int>(rng.next() % 3);
      RatMatrix base(half, half);
      for (int r = 0; r < half; ++r) {
        base(r, r) = Rat(1);
        for (int c = r + 1; c < half; ++c) {
          base(r, c) = Rat(static_cast<long long>(rng.next() % 5) - 2, 4);
          base(c, r) = base(r, c);
        }
      }
      RatMatrix doubled(2 * half, 2 * half);
      for (int r = 0; r < 2 * half; ++r)
        for (int c = 0; c < 2 * half; ++c) doubled(r, c) = base(r / 2, c / 2);
      RatMatrix shifted = doubled;
      for (int r = 0; r < 2 * half; r += 2) {
        shifted(r, r) -= 1;
        shifted(r, r + 1) -= 1;
        shifted(r + 1, r) -= 1;
        shifted(r + 1, r + 1) -= 1;
      }
      const bool perm_ok = extract_base_rational(doubled, Rat(1, 3),
                                                 ExtractTarget::permanent) ==
                           permanent(shifted);
      const bool pair_ok = extract_base_rational(doubled, Rat(1, 3),
                                                 ExtractTarget::pairing) ==
                           pairing_sum(shifted);
      if (perm_ok && pair_ok) ++equal;
    }
    out.push_back(check_true("exact interpolation extraction, both functionals",
                             equal == total,
                             std::to_string(equal) + "/" + std::to_string(total),
                             "all equal", "rational arithmetic, exact equality"));
  }

  {
    const int instances = opts.quick ? 4 : 8;
    int ok = 0;
    double worst = 0.0;
    for (int i = 0; i < instances; ++i) {
      SplitMix64 rng(mix_seed(opts.seed, 700 + static_cast<std::uint64_t>(i)));
      const int d = 1 + static_cast<int>(rng.next() % 3);
      const int items = 1 + static_cast<int>(rng.next() % 3);
      const auto obs = random_rank_one_set(d, items, false, 2, rng);
      const double exact = pnorm_exact(obs, Convention::normalized).value;
      const double assembled = pnorm_from_rho_avg(obs);
      const double rel = std::abs(assembled - exact) / std::abs(exact);
      worst = std::max(worst, rel);
      if (rel <= 1e-9) ++ok;
    }
    out.push_back(check_true("pnorm reassembled from the posterior mean state",
                             ok == instances, "worst relative error " + fmt(worst),
                             "within 1e-9 on every instance", "normalized convention"));
  }

  {
    ObservationSet obs(2);
    CVec v(2);
    v << 1.0, 0.0;
    obs.add(Observation::rank_one(v), 1);
    const CMat rho = rho_avg(obs).matrix();
    const bool ok = std::abs(rho(0, 0).real() - 2.0 / 3.0) < 1e-12 &&
                    std::abs(rho(1, 1).real() - 1.0 / 3.0) < 1e-12 &&
                    std::abs(rho(0, 1)) < 1e-12;
    out.push_back(check_true("posterior mean state after one basis observation, d=2", ok,
                             fmt(rho(0, 0).real()) + ", " + fmt(rho(1, 1).real()),
                             "2/3, 1/3", "diagonal entries"));
  }

  {
    SplitMix64 rng(mix_seed(opts.seed, 800));
    const auto obs = random_rank_one_set(2, 2, false, 1, rng);
    const PureState psi = random_pure_state(2, rng);
    double lik = 1.0;
    for (const auto& item : obs.items())
      for (long long m = 0; m < item.multiplicity; ++m) lik *= item.obs.expectation(psi);
    const double density = posterior_density(obs, psi);
    const double norm = pnorm_exact(obs, Convention::normalized).value;
    out.push_back(check_close("posterior density times pnorm equals the likelihood",
                              density * norm, lik, 1e-12 * std::max(1.0, lik),
                              "normalized convention"));

    CMat a = CMat::Zero(2, 2);
    a(0, 0) = 0.7;
    a(1, 1) = -0.2;
    a(0, 1) = Complex(0.1, 0.3);
    a(1, 0) = Complex(0.1, -0.3);
    const CMat rho = rho_avg(obs).matrix();
    const double trace_form = (a * rho).trace().real();
    out.push_back(check_close("observable expectation vs trace against the mean state",
                              observable_expectation(obs, a), trace_form, 1e-9, ""));
  }
  return out;
}

std::vector<CheckResult> verify_lemmas(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  const long long samples =
      opts.quick ? std::min<long long>(opts.lemma_samples, 2000) : opts.lemma_samples;
  const LemmaSweepReport rep = verify_lemma_bounds(opts.lemma_d, samples, opts.seed);

  out.push_back(check_true("sweep size", rep.states_tested == rep.samples,
                           fmt_ll(rep.states_tested), fmt_ll(rep.samples),
                           "d=" + std::to_string(rep.d)));
  const auto branch = [&](const char* name, long long count) {
    out.push_back(check_true(std::string("sweep exercised the ") + name + " bound",
                             count > 0, fmt_ll(count), "> 0 states", ""));
  };
  branch("amplitude contraction", rep.amplitude_checked);
  branch("phase contraction", rep.phase_checked);
  branch("near-binarized floor", rep.near_floor_checked);
  branch("good-point clause floor", rep.good_floor_checked);
  branch("bad-point clause ceiling", rep.bad_ceiling_checked);
  branch("unit ceiling", rep.unit_ceiling_checked);
  branch("binarized-distance", rep.b0_distance_checked);
  out.push_back(check_true("no bound violations", rep.violations.empty(),
                           std::to_string(rep.violations.size()) + " violations",
                           "0 violations",
                           rep.violations.empty() ? "" : rep.violations.front()));
  return out;
}

std::vector<CheckResult> verify_graph_chain(const VerifyOptions& opts) {
  std::vector<CheckResult> out;

  {
    const GadgetResult g = search_gadget(5);
    const bool profile_ok = g.profile == FlowProfile{BigInt(3), BigInt(4), BigInt(3)};
    out.push_back(check_true("gadget search hits the (3, 4, 3) flow profile", profile_ok,
                             g.profile.f0.str() + ", " + g.profile.f1.str() + ", " +
                                 g.profile.f2.str(),
                             "3, 4, 3", "edge mask " + std::to_string(g.edge_mask)));
    out.push_back(check_true("gadget search is deterministic",
                             search_gadget(5).edge_mask == g.edge_mask,
                             std::to_string(g.edge_mask), std::to_string(g.edge_mask), ""));
  }

  {
    WeightedDigraph loop;
    loop.n = 1;
    loop.edges.push_back({0, 0, Rat(1)});
    const ReductionPlan plan = compile_dcc_to_qbu(loop, 1);
    const bool ok = plan.gadget_weighted.f0 == Rat(3, 4) &&
                    plan.gadget_weighted.f1 == Rat(3, 2) &&
                    plan.gadget_weighted.f2 == Rat(3, 8);
    out.push_back(check_true("collapse-weighted gadget profile", ok,
                             rat_to_string(plan.gadget_weighted.f0) + ", " +
                                 rat_to_string(plan.gadget_weighted.f1) + ", " +
                                 rat_to_string(plan.gadget_weighted.f2),
                             "3/4, 3/2, 3/8", ""));
  }

  {
    const bool ok = chain_length(1) == 21 && chain_length(2) == 21 && chain_length(3) == 26;
    out.push_back(check_true("chain lengths for 1..3 vertices", ok,
                             fmt_ll(chain_length(1)) + ", " + fmt_ll(chain_length(2)) +
                                 ", " + fmt_ll(chain_length(3)),
                             "21, 21, 26", "smallest l with (4/3)^(l-1) >= 271 + n^(2n)"));
  }

  {
    // The printed flow-class bound (1 + n + n(n+1)/2)^n < 271 + n^(2n),
    // measured for n <= 8.  It holds with equality, not strictly, at n = 3
    // (both sides are 1000); the chain-length formula consumes the right side
    // directly, so nothing downstream depends on strictness.
    std::string table;
    for (int n = 1; n <= 8; ++n) {
      const BigInt lhs = ipow(BigInt(1 + n + n * (n + 1) / 2), static_cast<unsigned long>(n));
      const BigInt rhs = 271 + ipow(BigInt(n), static_cast<unsigned long>(2 * n));
      table += "n=" + std::to_string(n) +
               (lhs < rhs ? "<" : (lhs == rhs ? "=" : ">")) + " ";
    }
    out.push_back(check_true("flow-class bound report, n<=8", true, table,
                             "strict for all n except the n=3 equality",
                             "measured, not assumed"));
  }

  {
    // Doubling identities over 0/1 digraphs: the collapse-weighted form
    // perm(D(G)) = 4^|V| x weighted covers must hold everywhere; the bare
    // 2^|V| form is counted and reported, failing whenever a double cover
    // uses a single edge.
    struct Row {
      bool collapse_ok = false;
      bool printed_ok = false;
      bool recovered_ok = false;
      bool consistent = false;
      std::string name;
    };
    std::vector<std::pair<int, std::uint32_t>> cases;
    for (std::uint32_t bits = 0; bits < 2; ++bits) cases.push_back({1, bits});
    for (std::uint32_t bits = 0; bits < 16; ++bits) cases.push_back({2, bits});
    const int three_count = opts.quick ? 8 : 64;
    SplitMix64 rng(mix_seed(opts.seed, 900));
    for (int i = 0; i < three_count; ++i)
      cases.push_back({3, static_cast<std::uint32_t>(rng.next() % 512)});

    std::vector<Row> rows(cases.size());
    default_gadget();  // warm the cache before any worker needs it
    parallel_for(static_cast<int>(cases.size()), opts.threads, [&](int i) {
      const auto [n, bits] = cases[static_cast<std::size_t>(i)];
      const WeightedDigraph g = indexed_graph(n, bits);
      const PlanExecution ex = execute_plan(compile_dcc_to_qbu(g, 1));
      Row& row = rows[static_cast<std::size_t>(i)];
      row.collapse_ok = ex.collapse_identity_holds;
      row.printed_ok = ex.printed_identity_holds;
      row.recovered_ok = ex.recovered == ex.cycle_covers_direct;
      row.consistent = ex.consistent;
      row.name = std::to_string(n) + "/" + std::to_string(bits);
    });

    int collapse = 0, printed = 0, recovered = 0, consistent = 0;
    std::string first_printed_miss;
    for (const auto& row : rows) {
      collapse += row.collapse_ok;
      printed += row.printed_ok;
      recovered += row.recovered_ok;
      consistent += row.consistent;
      if (!row.printed_ok && first_printed_miss.empty()) first_printed_miss = row.name;
    }
    const std::string total = std::to_string(rows.size());
    out.push_back(check_true("collapse doubling identity 4^|V| across the sweep",
                             collapse == static_cast<int>(rows.size()),
                             std::to_string(collapse) + "/" + total, "all graphs", ""));
    out.push_back(check_true(
        "bare doubling factor 2^|V| report", true, std::to_string(printed) + "/" + total,
        "holds only for covers built from doubled edges alone",
        first_printed_miss.empty() ? "no counterexample in this sample"
                                   : "first counterexample graph " + first_printed_miss));
    out.push_back(check_true("chain recovery matches the cycle-cover oracle",
                             recovered == static_cast<int>(rows.size()),
                             std::to_string(recovered) + "/" + total, "all graphs",
                             "one-link chains, exact subtraction"));
    out.push_back(check_true("plan executions internally consistent",
                             consistent == static_cast<int>(rows.size()),
                             std::to_string(consistent) + "/" + total, "all graphs", ""));
  }

  {
    SplitMix64 rng(mix_seed(opts.seed, 1000));
    int equal = 0;
    const int total = 8;
    for (int i = 0; i < total; ++i) {
      const int m = 1 + static_cast<int>(rng.next() % 4);
      RatMatrix a(m, m);
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
          a(r, c) = Rat(static_cast<long long>(rng.next() % 3),
                        1 + static_cast<long long>(rng.next() % 2));
      if (pairing_sum(bipartite_lift(a)) == permanent(a)) ++equal;
    }
    out.push_back(check_true("bipartite lift turns permanents into pairing sums",
                             equal == total,
                             std::to_string(equal) + "/" + std::to_string(total),
                             "all equal", "rational matrices up to 4x4"));
  }

  {
    WeightedDigraph loop;
    loop.n = 1;
    loop.edges.push_back({0, 0, Rat(1)});
    const PlanExecution ex = execute_plan(compile_dcc_to_qbu(loop, 1));
    const bool ok = ex.n_prime == 10 && ex.recovered == 1 && ex.w_prime &&
                    *ex.w_prime == Rat(9, 4) && ex.recovered_weighted &&
                    *ex.recovered_weighted == 1 && ex.consistent;
    out.push_back(check_true("single-loop anchor through the full pipeline", ok,
                             "n'=" + ex.n_prime.str() + " recovered=" + ex.recovered.str(),
                             "n'=10 recovered=1",
                             "collapse track gives perm(D)/4^|V'| = 9/4"));
  }
  return out;
}

std::vector<CheckResult> verify_end_to_end(const VerifyOptions& opts) {
  std::vector<CheckResult> out;

  Mnae3SatInstance one_clause;
  one_clause.d = 3;
  one_clause.clauses = {{1, 2, 3}};
  const CompiledMle mle = compile_mle(one_clause, 2.0);

  {
    const auto entries = enumerate_b0(mle);
    int good = 0;
    bool values_ok = true;
    for (const auto& e : entries) {
      if (e.good) {
        ++good;
        if (!(e.likelihood == mle.p_exact)) values_ok = false;
      } else if (!e.likelihood.is_zero()) {
        values_ok = false;
      }
    }
    out.push_back(check_true("single-clause instance has three good sign patterns",
                             good == 3 && entries.size() == 4, std::to_string(good) + "/4",
                             "3/4", ""));
    out.push_back(check_true("good patterns sit exactly at the promised likelihood",
                             values_ok, values_ok ? "all equal" : "mismatch",
                             "equal as factored rationals", ""));
    const double closed =
        -double(mle.k1) * 9.0 * std::log(3.0) +
        double(mle.k2) * std::log(32.0 / 729.0);
    out.push_back(check_close("promised log likelihood matches its closed form",
                              mle.log_p, closed, 1e-9 * std::abs(closed), ""));
  }

  {
    const int restarts = opts.quick ? 4 : 16;
    const MleResult best = maximize_likelihood(mle.obs, restarts, opts.seed);
    out.push_back(check_true(
        "search reaches the promised value on the satisfiable instance",
        best.log_likelihood >= mle.log_p - 1e-6,
        fmt(best.log_likelihood), ">= " + fmt(mle.log_p) + " - 1e-6",
        "margin " + fmt(best.log_likelihood - mle.log_p)));
  }

  {
    const CompiledQbu fano = compile_qbu(fano_instance());
    const auto entries = enumerate_b0(fano);
    int bad = 0;
    for (const auto& e : entries) bad += e.likelihood.is_zero();
    out.push_back(check_true("every sign pattern dies on the unsatisfiable instance",
                             bad == 64 && entries.size() == 64, std::to_string(bad) + "/64",
                             "64/64", "likelihood exactly zero"));

    const int restarts = opts.quick ? 8 : 64;
    const MleResult best = maximize_likelihood(fano.obs, restarts, opts.seed);
    out.push_back(check_true("searched maximum stays below the promised value",
                             best.log_likelihood < fano.log_p, fmt(best.log_likelihood),
                             "< " + fmt(fano.log_p),
                             "margin " + fmt(fano.log_p - best.log_likelihood) + " over " +
                                 std::to_string(restarts) + " restarts"));
  }

  {
    bool ok = true;
    std::string detail;
    for (long long reps : {2ll, 3ll, 5ll}) {
      const CompiledMle amped = amplify(mle, reps);
      FactoredRational want = mle.p_exact;
      want.pow(BigInt(reps));
      if (!(amped.p_exact == want) || amped.log_p != mle.log_p * double(reps) ||
          amped.obs.total_multiplicity() != mle.obs.total_multiplicity() * reps) {
        ok = false;
        detail += "reps=" + std::to_string(reps) + " mismatch; ";
      }
    }
    out.push_back(check_true("amplification scales likelihoods by exactly reps", ok,
                             ok ? "reps 2, 3, 5 exact" : detail,
                             "log_p and p_exact scale by reps", "exact arithmetic"));
  }

  {
    // Likelihood floor near a good point of the override-free compilation:
    // inside the good radius the log likelihood may drop at most
    // ln(1 - ln d / sqrt d) below the promised value.
    const CompiledQbu qbu = compile_qbu(one_clause);
    SignVector s = SignVector::from_index(3, 0);
    s.signs[2] = -1;  // (+, +, -), a good pattern for the single clause
    const PureState b = b0_state(s);

    for (int shift : {32, 28}) {
      const Rat delta(BigInt(1), BigInt(1) << shift);
      ExactVector pert;
      pert.entries = b.exact->entries;
      pert.entries[0].re += delta;
      pert.entries[1].im += delta / 3;

      const Rat overlap = exact_squared_overlap(pert, *b.exact);
      const Rat eps = qbu.eps_g;
      const Rat gate = (Rat(1) - eps * eps / 2) * (Rat(1) - eps * eps / 2);
      out.push_back(check_true(
          "perturbed state stays within the good radius, scale 2^-" + std::to_string(shift),
          overlap >= gate, "overlap margin " + fmt(rat_to_double(overlap - gate)), ">= 0",
          "exact comparison of squared overlap against (1 - eps^2/2)^2"));

      const auto ll = exact_log_likelihood(pert, qbu.obs);
      const double floor = qbu.log_p + std::log(1.0 - std::log(3.0) / std::sqrt(3.0));
      out.push_back(check_true(
          "likelihood floor inside the good radius, scale 2^-" + std::to_string(shift),
          ll.has_value() && *ll >= floor, ll ? fmt(*ll) : "(missing)",
          ">= " + fmt(floor),
          ll ? "drop below the promise " + fmt(qbu.log_p - *ll) : ""));
    }
  }
  return out;
}

RunReport run_suite(const std::string& suite, const VerifyOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  RunReport r;
  std::ostringstream cmd;
  cmd << "verify --suite " << suite << " --seed " << opts.seed;
  if (suite == "lemmas")
    cmd << " --d " << opts.lemma_d << " --samples " << opts.lemma_samples;
  if (opts.quick) cmd << " --quick";
  r.command = cmd.str();
  r.config_hash = fnv1a_str(r.command + " threads=" + std::to_string(opts.threads));

  if (suite == "constants") {
    r.checks = verify_constants();
  } else if (suite == "oracles") {
    r.checks = verify_oracles(opts);
  } else if (suite == "lemmas") {
    r.checks = verify_lemmas(opts);
  } else if (suite == "graph-chain") {
    r.checks = verify_graph_chain(opts);
  } else if (suite == "end-to-end") {
    r.checks = verify_end_to_end(opts);
  } else {
    throw invalid_input("unknown suite: " + suite +
                        " (expected constants, oracles, lemmas, graph-chain, end-to-end)");
  }

  r.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace qbu
