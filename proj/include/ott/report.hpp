#pragma once

#include "ott/equations.hpp"
#include "ott/io_json.hpp"
#include "ott/models.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ott
{
  // ------------------------------------------------------------ worker pool
  inline unsigned worker_count()
  {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if( const char* env = std::getenv("ODECO_TT_THREADS") )
    {
      const long v = std::strtol(env, nullptr, 10);
      if( v >= 1 && v <= 1024 )
        n = unsigned(v);
    }
    return n;
  }

  // run f(0..count-1) on a bounded pool; caller's f writes only to its own
  // index, so the assembled result is independent of scheduling
  template <typename F>
  void parallel_for(std::size_t count, F&& f)
  {
    const unsigned workers = unsigned(std::min<std::size_t>(worker_count(), count));
    if( workers <= 1 )
    {
      for( std::size_t i = 0; i < count; ++i )
        f(i);
      return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for( unsigned w = 0; w < workers; ++w )
      pool.emplace_back(
          [&]
          {
            for( ;; )
            {
              const std::size_t i = next.fetch_add(1);
              if( i >= count )
                return;
              try
              {
                f(i);
              }
              catch( ... )
              {
                std::lock_guard<std::mutex> lock(error_mutex);
                if( !error )
                  error = std::current_exception();
                return;
              }
            }
          });
    for( auto& t : pool )
      t.join();
    if( error )
      std::rethrow_exception(error);
  }

  // ----------------------------------------------------------- run settings
  struct RunConfig
  {
    std::vector<int> ns;
    std::vector<std::uint64_t> seeds;
    double tol_p = 1e-10; // normalized linear-family residual bound
    double tol_q = 1e-9; // normalized quadratic-family residual bound
    double tol_h = 1e-8; // normalized invariant residual bound
    double tol_certify = 1e-10; // certificate acceptance bound
    double reject_floor = 1e-3; // negative controls must exceed this
    std::vector<std::uint64_t> primes{default_primes.begin(), default_primes.end()};

    static std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count)
    {
      std::vector<std::uint64_t> s(count);
      for( std::size_t i = 0; i < count; ++i )
        s[i] = first + i;
      return s;
    }
  };

  inline json run_config_to_json(const RunConfig& c)
  {
    json j;
    j["ns"] = c.ns;
    j["seeds"] = c.seeds;
    j["tol_p"] = c.tol_p;
    j["tol_q"] = c.tol_q;
    j["tol_h"] = c.tol_h;
    j["tol_certify"] = c.tol_certify;
    j["reject_floor"] = c.reject_floor;
    j["primes"] = c.primes;
    return j;
  }

  namespace detail
  {
    class SuiteTimer
    {
    public:
      double seconds() const
      {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
      }

    private:
      std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
    };

    inline json finish_suite(const std::string& name, json items, json aggregates,
                             const SuiteTimer& timer)
    {
      std::size_t passed = 0;
      for( const auto& it : items )
        if( it.at("pass").get<bool>() )
          ++passed;
      bool pass = passed == items.size();
      for( const auto& agg : aggregates )
        pass = pass && agg.at("pass").get<bool>();
      json suite;
      suite["name"] = name;
      suite["pass"] = pass;
      suite["passed"] = passed;
      suite["failed"] = items.size() - passed;
      if( !aggregates.empty() )
        suite["aggregates"] = std::move(aggregates);
      suite["items"] = std::move(items);
      suite["elapsed_seconds"] = timer.seconds();
      return suite;
    }

    template <typename F>
    json map_items(const std::vector<int>& ns, const std::vector<std::uint64_t>& seeds,
                   F&& one_item)
    {
      if( ns.empty() || seeds.empty() )
        return json::array();
      std::vector<json> slots(ns.size() * seeds.size());
      parallel_for(slots.size(),
                   [&](std::size_t i)
                   { slots[i] = one_item(ns[i / seeds.size()], seeds[i % seeds.size()]); });
      json items = json::array();
      for( auto& s : slots )
        items.push_back(std::move(s));
      return items;
    }
  }

  // ---------------------------------------------------------------- suites
  //
  // every suite returns {"name", "pass", "passed", "failed", ["aggregates"],
  // "items", "elapsed_seconds"}; item rows carry their own "pass" flag

  // the three families must vanish on sampled trains
  inline json vanish_suite(const RunConfig& cfg)
  {
    const detail::SuiteTimer timer;
    json items = detail::map_items(
        cfg.ns, cfg.seeds,
        [&](int n, std::uint64_t seed)
        {
          const auto t = build_train(sample_train_model(n, seed));
          const auto rp = make_residual_report("P", t, eval_P_residual(t));
          const auto rq = make_residual_report("Q", t, eval_Q_residual(t));
          const auto rh = make_residual_report("h", t, eval_h_residual(t));
          json item;
          item["n"] = n;
          item["seed"] = seed;
          item["reports"] = json::array({residual_report_to_json(rp),
                                         residual_report_to_json(rq),
                                         residual_report_to_json(rh)});
          item["pass"] = rp.normalized <= cfg.tol_p && rq.normalized <= cfg.tol_q &&
                         rh.normalized <= cfg.tol_h;
          return item;
        });
    return detail::finish_suite("vanish", std::move(items), json::array(), timer);
  }

  // certificates accept odeco cores and reject planted overlaps
  inline json certify_suite(const RunConfig& cfg)
  {
    const detail::SuiteTimer timer;
    json items = detail::map_items(
        cfg.ns, cfg.seeds,
        [&](int n, std::uint64_t seed)
        {
          const auto good = certify_odeco(build_odeco(sample_odeco_model(n, seed)),
                                          cfg.tol_certify);
          const auto bad = certify_odeco(build_odeco(sample_planted_model(n, seed)),
                                         cfg.tol_certify);
          json item;
          item["n"] = n;
          item["seed"] = seed;
          item["odeco_residual"] = good.residual;
          item["planted_residual"] = bad.residual;
          item["pass"] = good.pass && !bad.pass && bad.residual > cfg.reject_floor;
          return item;
        });
    return detail::finish_suite("certify", std::move(items), json::array(), timer);
  }

  // h on generic (non-odeco) rank<=n trains: vanishes for even n, generically
  // nonzero for odd n; the odd-n rate is an aggregate, not a per-item claim
  inline json parity_suite(const RunConfig& cfg)
  {
    const detail::SuiteTimer timer;
    const double odd_floor = 1e-6;
    json items = detail::map_items(
        cfg.ns, cfg.seeds,
        [&](int n, std::uint64_t seed)
        {
          const auto t = build_generic_train(sample_generic_model(n, n, seed, 0),
                                             sample_generic_model(n, n, seed, 1));
          const auto rh = make_residual_report("h", t, eval_h_residual(t));
          json item;
          item["n"] = n;
          item["seed"] = seed;
          item["h_normalized"] = rh.normalized;
          if( n % 2 == 0 )
            item["pass"] = rh.normalized <= cfg.tol_h;
          else
          {
            item["exceeds_floor"] = rh.normalized > odd_floor;
            item["pass"] = true; // odd-n items are judged in the aggregate
          }
          return item;
        });

    json aggregates = json::array();
    for( int n : cfg.ns )
    {
      if( n % 2 == 0 )
        continue;
      std::size_t exceeding = 0, total = 0;
      for( const auto& it : items )
        if( it["n"].get<int>() == n )
        {
          ++total;
          if( it["exceeds_floor"].get<bool>() )
            ++exceeding;
        }
      // at least 95% of generic odd-n samples must show a nonzero invariant
      const std::size_t required = (total * 95 + 99) / 100;
      json agg;
      agg["n"] = n;
      agg["floor"] = odd_floor;
      agg["exceeding"] = exceeding;
      agg["required"] = required;
      agg["pass"] = exceeding >= required;
      aggregates.push_back(std::move(agg));
    }
    return detail::finish_suite("parity", std::move(items), std::move(aggregates), timer);
  }

  // degree-n slice membership: the invariant stays outside, a planted
  // combination stays inside
  inline json ideal_suite(const RunConfig& cfg)
  {
    const detail::SuiteTimer timer;
    json items = json::array();
    for( int n : cfg.ns )
    {
      const EquationSystem p = gen_P(n), q = gen_Q(n);
      const std::string suffix = "_" + std::to_string(n);

      auto hv = ideal_membership("h" + suffix, gen_h(n), {&p, &q}, cfg.primes);
      if( n == 2 )
        hv.probe_residual = membership_float_probe(gen_h(n), {&p, &q}, 400, 1);
      json hi;
      hi["expected_verdict"] = "non-member";
      hi["verdict"] = membership_verdict_to_json(hv);
      hi["pass"] = hv.verdict == "non-member" &&
                   (!hv.probe_residual || *hv.probe_residual > 0.1);
      items.push_back(std::move(hi));

      SparsePolynomial member(p.nvars);
      Monomial mult;
      for( int d = 0; d < n - 1; ++d )
        mult.push_back({entry_var(n, 0, d % n, 1, (d + 1) % n), 1});
      member += p.generators[2].poly.mul_monomial(mono_canonical(mult)).scaled(3);
      member += q.generators[1].poly.mul_monomial(
          n == 2 ? Monomial{} : Monomial{{entry_var(n, 1, 0, 2, 1), 1}});
      auto mv = ideal_membership("planted" + suffix, member, {&p, &q}, cfg.primes);
      if( n == 2 )
        mv.probe_residual = membership_float_probe(member, {&p, &q}, 400, 1);
      json mi;
      mi["expected_verdict"] = "member-mod-all-primes";
      mi["verdict"] = membership_verdict_to_json(mv);
      mi["pass"] = mv.verdict == "member-mod-all-primes" &&
                   (!mv.probe_residual || *mv.probe_residual <= 1e-8);
      items.push_back(std::move(mi));
    }
    return detail::finish_suite("ideal", std::move(items), json::array(), timer);
  }

  // chart rank of the parametrization
  inline json dimension_param_suite(const RunConfig& cfg)
  {
    const detail::SuiteTimer timer;
    json items = detail::map_items(cfg.ns, cfg.seeds,
                                   [&](int n, std::uint64_t seed) {
                                     return jacobian_report_to_json(
                                         param_jacobian_rank(n, seed));
                                   });
    return detail::finish_suite("dimension-param", std::move(items), json::array(), timer);
  }

  // corank of the defining equations at sampled points
  inline json dimension_variety_suite(const RunConfig& cfg)
  {
    const detail::SuiteTimer timer;
    json items = detail::map_items(cfg.ns, cfg.seeds,
                                   [&](int n, std::uint64_t seed) {
                                     return jacobian_report_to_json(
                                         variety_jacobian_corank(n, seed));
                                   });
    return detail::finish_suite("dimension-variety", std::move(items), json::array(), timer);
  }

  // ------------------------------------------------------------ full report
  inline constexpr const char* suite_order[] = {"vanish",          "certify",
                                               "parity",          "ideal",
                                               "dimension-param", "dimension-variety"};

  inline json full_report(std::size_t sample_seeds = 100, std::size_t rank_seeds = 20)
  {
    json doc;
    doc["tool"] = "odeco-tt";
    doc["version"] = OTT_VERSION;

    RunConfig base;
    const auto many = RunConfig::seed_range(1, sample_seeds);
    const auto few = RunConfig::seed_range(1, rank_seeds);

    json suites = json::array();
    json config = json::object();

    RunConfig vanish = base;
    vanish.ns = {2, 3, 4};
    vanish.seeds = many;
    config["vanish"] = run_config_to_json(vanish);
    suites.push_back(vanish_suite(vanish));

    RunConfig certify = base;
    certify.ns = {2, 3, 4, 5, 6};
    certify.seeds = many;
    config["certify"] = run_config_to_json(certify);
    suites.push_back(certify_suite(certify));

    RunConfig parity = base;
    parity.ns = {2, 3, 4};
    parity.seeds = many;
    config["parity"] = run_config_to_json(parity);
    suites.push_back(parity_suite(parity));

    RunConfig ideal = base;
    ideal.ns = {2, 3};
    config["ideal"] = run_config_to_json(ideal);
    suites.push_back(ideal_suite(ideal));

    RunConfig dim_param = base;
    dim_param.ns = {2, 3, 4};
    dim_param.seeds = few;
    config["dimension-param"] = run_config_to_json(dim_param);
    suites.push_back(dimension_param_suite(dim_param));

    RunConfig dim_var = base;
    dim_var.ns = {2};
    dim_var.seeds = few;
    json var_suite = dimension_variety_suite(dim_var);
    {
      // the next ambient dimension is recorded as evidence alongside the
      // asserted case; its lower bound is part of the pass judgement
      RunConfig recorded = base;
      recorded.ns = {3};
      recorded.seeds = RunConfig::seed_range(1, std::min<std::size_t>(rank_seeds, 5));
      const json extra = dimension_variety_suite(recorded);
      for( const auto& it : extra["items"] )
        var_suite["items"].push_back(it);
      var_suite["passed"] =
          var_suite["passed"].get<std::size_t>() + extra["passed"].get<std::size_t>();
      var_suite["failed"] =
          var_suite["failed"].get<std::size_t>() + extra["failed"].get<std::size_t>();
      var_suite["pass"] = var_suite["pass"].get<bool>() && extra["pass"].get<bool>();
      dim_var.ns = {2, 3};
      config["dimension-variety"] = run_config_to_json(dim_var);
    }
    suites.push_back(std::move(var_suite));

    doc["config"] = std::move(config);
    doc["suites"] = std::move(suites);

    std::size_t passed = 0;
    for( const auto& s : doc["suites"] )
      if( s["pass"].get<bool>() )
        ++passed;
    json summary;
    summary["suite_count"] = doc["suites"].size();
    summary["passed"] = passed;
    summary["failed"] = doc["suites"].size() - passed;
    summary["pass"] = passed == doc["suites"].size();
    doc["summary"] = std::move(summary);

    doc["notes"] = json::array(
        {"Primeness and radicality of the generator ideals are not established by this "
         "tool; the degree-bounded membership tests over several 31-bit prime fields and "
         "the numerical Jacobian coranks are the strongest desk-scale evidence reported "
         "here.",
         "A 'member-mod-all-primes' verdict is evidence modulo the chosen primes only; "
         "'non-member' verdicts are exact.",
         "Coranks for ambient dimension 3 are recorded observations; only the lower "
         "bound from the parametrization is asserted."});
    return doc;
  }

  // bit i of the exit code flags a failing suite, in the fixed suite order
  inline int report_exit_code(const json& doc)
  {
    int code = 0;
    for( const auto& s : doc.at("suites") )
    {
      const std::string name = s.at("name").get<std::string>();
      for( std::size_t i = 0; i < std::size(suite_order); ++i )
        if( name == suite_order[i] && !s.at("pass").get<bool>() )
          code |= 1 << i;
    }
    return code;
  }

  // deep-copy with every "elapsed_seconds" key removed, for determinism
  // comparisons
  inline json strip_timing(const json& v)
  {
    if( v.is_object() )
    {
      json out = json::object();
      for( const auto& [key, val] : v.items() )
        if( key != "elapsed_seconds" )
          out[key] = strip_timing(val);
      return out;
    }
    if( v.is_array() )
    {
      json out = json::array();
      for( const auto& e : v )
        out.push_back(strip_timing(e));
      return out;
    }
    return v;
  }

  // flat CSV for item rows: columns are the scalar fields of the first item
  inline std::string items_csv(const json& items)
  {
    if( !items.is_array() || items.empty() )
      return "";
    std::vector<std::string> cols;
    for( const auto& [key, val] : items[0].items() )
      if( !val.is_object() && !val.is_array() )
        cols.push_back(key);
    std::string out;
    for( std::size_t c = 0; c < cols.size(); ++c )
      out += (c ? "," : "") + cols[c];
    out += "\n";
    for( const auto& it : items )
    {
      for( std::size_t c = 0; c < cols.size(); ++c )
      {
        if( c )
          out += ",";
        const json cell = it.contains(cols[c]) ? it[cols[c]] : json(nullptr);
        if( cell.is_string() )
          out += cell.get<std::string>();
        else
        {
          std::string s = dump_json(cell, 0);
          while( !s.empty() && (s.back() == '\n' || s.back() == ' ') )
            s.pop_back();
          out += s;
        }
      }
      out += "\n";
    }
    return out;
  }
}
