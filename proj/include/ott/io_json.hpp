#pragma once

#include "ott/generators.hpp"
#include "ott/ideal.hpp"
#include "ott/jacobian.hpp"
#include "ott/models.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ott
{
  using json = nlohmann::ordered_json;

  // ---------------------------------------------------------------- writing
  //
  // deterministic serializer: object keys keep insertion order, doubles are
  // printed with 17 significant digits (lossless for binary64), integers in
  // full precision.  identical trees therefore produce identical bytes.
  namespace detail
  {
    inline void write_value(std::string& out, const json& v, int indent, int depth)
    {
      const std::string pad(std::size_t(indent) * std::size_t(depth), ' ');
      const std::string pad_in(std::size_t(indent) * std::size_t(depth + 1), ' ');
      char buf[64];
      switch( v.type() )
      {
        case json::value_t::null: out += "null"; break;
        case json::value_t::boolean: out += v.get<bool>() ? "true" : "false"; break;
        case json::value_t::number_integer:
          std::snprintf(buf, sizeof buf, "%" PRId64, std::int64_t(v.get<std::int64_t>()));
          out += buf;
          break;
        case json::value_t::number_unsigned:
          std::snprintf(buf, sizeof buf, "%" PRIu64, std::uint64_t(v.get<std::uint64_t>()));
          out += buf;
          break;
        case json::value_t::number_float:
        {
          const double d = v.get<double>();
          if( !std::isfinite(d) )
            throw std::invalid_argument("write_json: non-finite number");
          std::snprintf(buf, sizeof buf, "%.17g", d);
          out += buf;
          break;
        }
        case json::value_t::string: out += json(v.get<std::string>()).dump(); break;
        case json::value_t::array:
          if( v.empty() )
          {
            out += "[]";
            break;
          }
          out += "[\n";
          for( std::size_t i = 0; i < v.size(); ++i )
          {
            out += pad_in;
            write_value(out, v[i], indent, depth + 1);
            out += (i + 1 < v.size()) ? ",\n" : "\n";
          }
          out += pad + "]";
          break;
        case json::value_t::object:
        {
          if( v.empty() )
          {
            out += "{}";
            break;
          }
          out += "{\n";
          std::size_t i = 0;
          for( const auto& [key, val] : v.items() )
          {
            out += pad_in + json(key).dump() + ": ";
            write_value(out, val, indent, depth + 1);
            out += (++i < v.size()) ? ",\n" : "\n";
          }
          out += pad + "}";
          break;
        }
        default: throw std::invalid_argument("write_json: unsupported value type");
      }
    }
  }

  inline std::string dump_json(const json& v, int indent = 2)
  {
    std::string out;
    detail::write_value(out, v, indent, 0);
    out += "\n";
    return out;
  }

  inline void write_json_file(const std::string& path, const json& v)
  {
    std::ofstream f(path, std::ios::binary);
    if( !f )
      throw std::runtime_error("write_json_file: cannot open " + path);
    const std::string s = dump_json(v);
    f.write(s.data(), std::streamsize(s.size()));
    if( !f )
      throw std::runtime_error("write_json_file: write failed for " + path);
  }

  inline json read_json_file(const std::string& path)
  {
    std::ifstream f(path, std::ios::binary);
    if( !f )
      throw std::runtime_error("read_json_file: cannot open " + path);
    return json::parse(f);
  }

  // ---------------------------------------------------------------- tensors
  //
  // {"dims": [..], "kind": "real"|"integer", "data": [..]} with row-major
  // data; integer entries are decimal strings so arbitrary precision survives
  inline json tensor_to_json(const DenseTensor<double>& t)
  {
    json j;
    j["dims"] = t.dims();
    j["kind"] = "real";
    j["data"] = t.data();
    return j;
  }

  inline json tensor_to_json(const DenseTensor<bigint>& t)
  {
    json j;
    j["dims"] = t.dims();
    j["kind"] = "integer";
    json data = json::array();
    for( const bigint& v : t.data() )
      data.push_back(v.str());
    j["data"] = std::move(data);
    return j;
  }

  namespace detail
  {
    inline void check_tensor_layout(const json& j, const char* kind)
    {
      if( !j.is_object() || !j.contains("dims") || !j.contains("kind") ||
          !j.contains("data") || !j["dims"].is_array() || !j["data"].is_array() )
        throw std::invalid_argument("tensor_from_json: malformed tensor object");
      if( j["kind"] != kind )
        throw std::invalid_argument(std::string("tensor_from_json: expected kind ") + kind);
    }
  }

  inline DenseTensor<double> tensor_from_json_real(const json& j)
  {
    detail::check_tensor_layout(j, "real");
    DenseTensor<double> t(j["dims"].get<std::vector<std::size_t>>());
    const auto& data = j["data"];
    if( data.size() != t.data().size() )
      throw std::invalid_argument("tensor_from_json: data length mismatch");
    for( std::size_t i = 0; i < data.size(); ++i )
    {
      if( !data[i].is_number() )
        throw std::invalid_argument("tensor_from_json: real data must be numeric");
      t.data()[i] = data[i].get<double>();
    }
    return t;
  }

  inline DenseTensor<bigint> tensor_from_json_integer(const json& j)
  {
    detail::check_tensor_layout(j, "integer");
    DenseTensor<bigint> t(j["dims"].get<std::vector<std::size_t>>());
    const auto& data = j["data"];
    if( data.size() != t.data().size() )
      throw std::invalid_argument("tensor_from_json: data length mismatch");
    for( std::size_t i = 0; i < data.size(); ++i )
    {
      // canonical form is a decimal string; bare integer tokens are accepted
      // for hand-written files
      if( data[i].is_string() )
        t.data()[i] = bigint(data[i].get<std::string>());
      else if( data[i].is_number_integer() )
        t.data()[i] = bigint(data[i].get<std::int64_t>());
      else
        throw std::invalid_argument("tensor_from_json: integer data must be string or int");
    }
    return t;
  }

  // ----------------------------------------------------------------- models
  //
  // {"n": int, "left": {"lambdas": [...], "frame": [[...]]}, "right": {...}}
  namespace detail
  {
    inline json core_to_json(const OdecoModel& m)
    {
      json j;
      j["lambdas"] = m.lambdas;
      json frame = json::array();
      for( Eigen::Index r = 0; r < m.frame.rows(); ++r )
      {
        json row = json::array();
        for( Eigen::Index c = 0; c < m.frame.cols(); ++c )
          row.push_back(m.frame(r, c));
        frame.push_back(std::move(row));
      }
      j["frame"] = std::move(frame);
      return j;
    }

    inline OdecoModel core_from_json(const json& j, int n)
    {
      if( !j.is_object() || !j.contains("lambdas") || !j.contains("frame") ||
          !j["lambdas"].is_array() || !j["frame"].is_array() )
        throw std::invalid_argument("model_from_json: malformed core object");
      OdecoModel m;
      m.n = n;
      m.lambdas = j["lambdas"].get<std::vector<double>>();
      const auto& rows = j["frame"];
      if( rows.size() != m.lambdas.size() || rows.empty() )
        throw std::invalid_argument("model_from_json: frame rows must match lambdas");
      m.frame.resize(Eigen::Index(rows.size()), n);
      for( std::size_t r = 0; r < rows.size(); ++r )
      {
        const auto row = rows[r].get<std::vector<double>>();
        if( int(row.size()) != n )
          throw std::invalid_argument("model_from_json: frame row has wrong length");
        for( int c = 0; c < n; ++c )
          m.frame(Eigen::Index(r), c) = row[std::size_t(c)];
      }
      return m;
    }
  }

  inline json model_to_json(const TrainModel& m)
  {
    json j;
    j["n"] = m.left.n;
    j["left"] = detail::core_to_json(m.left);
    j["right"] = detail::core_to_json(m.right);
    return j;
  }

  // structural checks only: deliberately non-orthonormal models (negative
  // controls) must survive a round trip, so no orthonormality validation here
  inline TrainModel model_from_json(const json& j)
  {
    if( !j.is_object() || !j.contains("n") || !j.contains("left") || !j.contains("right") ||
        !j["n"].is_number_integer() )
      throw std::invalid_argument("model_from_json: malformed model object");
    const int n = j["n"].get<int>();
    if( n < 1 )
      throw std::invalid_argument("model_from_json: n must be positive");
    TrainModel m;
    m.left = detail::core_from_json(j["left"], n);
    m.right = detail::core_from_json(j["right"], n);
    return m;
  }

  // ------------------------------------------------------------ polynomials
  //
  // {"n": int, "nvars": int, "terms": [{"coeff": "...", "monomial": [[v,e],..]},..]}
  // with terms in the canonical descending order
  inline json polynomial_to_json(const SparsePolynomial& p, int n)
  {
    json j;
    j["n"] = n;
    j["nvars"] = p.nvars();
    json terms = json::array();
    for( const auto& [mono, coeff] : p.terms() )
    {
      json t;
      t["coeff"] = coeff.str();
      json m = json::array();
      for( const auto& [var, exp] : mono )
        m.push_back(json::array({var, exp}));
      t["monomial"] = std::move(m);
      terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j;
  }

  inline SparsePolynomial polynomial_from_json(const json& j)
  {
    if( !j.is_object() || !j.contains("nvars") || !j.contains("terms") ||
        !j["nvars"].is_number_integer() || !j["terms"].is_array() )
      throw std::invalid_argument("polynomial_from_json: malformed polynomial object");
    SparsePolynomial p(j["nvars"].get<std::uint32_t>());
    for( const auto& t : j["terms"] )
    {
      if( !t.is_object() || !t.contains("coeff") || !t.contains("monomial") ||
          !t["coeff"].is_string() || !t["monomial"].is_array() )
        throw std::invalid_argument("polynomial_from_json: malformed term");
      Monomial m;
      for( const auto& ve : t["monomial"] )
      {
        if( !ve.is_array() || ve.size() != 2 )
          throw std::invalid_argument("polynomial_from_json: malformed monomial entry");
        m.push_back({ve[0].get<std::uint32_t>(), ve[1].get<std::uint32_t>()});
      }
      p.add_term(m, bigint(t["coeff"].get<std::string>()));
    }
    return p;
  }

  inline json equation_system_to_json(const EquationSystem& sys)
  {
    json j;
    j["family"] = sys.family;
    j["n"] = sys.n;
    j["nvars"] = sys.nvars;
    json gens = json::array();
    for( const auto& g : sys.generators )
    {
      json e = polynomial_to_json(g.poly, sys.n);
      e["provenance"] = g.provenance;
      gens.push_back(std::move(e));
    }
    j["generators"] = std::move(gens);
    return j;
  }

  inline EquationSystem equation_system_from_json(const json& j)
  {
    if( !j.is_object() || !j.contains("family") || !j.contains("n") ||
        !j.contains("nvars") || !j.contains("generators") || !j["generators"].is_array() )
      throw std::invalid_argument("equation_system_from_json: malformed system object");
    EquationSystem sys;
    sys.family = j["family"].get<std::string>();
    sys.n = j["n"].get<int>();
    sys.nvars = j["nvars"].get<std::uint32_t>();
    for( const auto& e : j["generators"] )
    {
      Generator g;
      g.poly = polynomial_from_json(e);
      if( g.poly.nvars() != sys.nvars )
        throw std::invalid_argument("equation_system_from_json: generator nvars mismatch");
      if( e.contains("provenance") )
        g.provenance = e["provenance"].get<std::vector<int>>();
      sys.generators.push_back(std::move(g));
    }
    return sys;
  }

  // ---------------------------------------------------------------- reports
  inline json residual_report_to_json(const ResidualReport& r)
  {
    json j;
    j["family"] = r.family;
    j["n"] = r.n;
    j["max_abs"] = r.max_abs;
    j["normalized"] = r.normalized;
    j["argmax"] = r.argmax;
    return j;
  }

  inline json membership_verdict_to_json(const MembershipVerdict& v)
  {
    json j;
    j["target"] = v.target;
    j["degree"] = v.degree;
    j["nvars"] = v.nvars;
    j["rows"] = v.rows;
    j["cols"] = v.cols;
    j["primes"] = v.primes;
    j["rank_without"] = v.rank_without;
    j["rank_with"] = v.rank_with;
    j["verdict"] = v.verdict;
    j["probe_residual"] = v.probe_residual ? json(*v.probe_residual) : json(nullptr);
    return j;
  }

  inline json jacobian_report_to_json(const JacobianReport& r)
  {
    json j;
    j["n"] = r.n;
    j["mode"] = r.mode;
    j["seed"] = r.seed;
    j["rows"] = std::int64_t(r.rows);
    j["cols"] = std::int64_t(r.cols);
    j["singular_values"] = r.singular_values;
    j["rank"] = std::int64_t(r.rank);
    j["corank"] = std::int64_t(r.corank);
    j["gap_ratio"] = r.gap_ratio ? json(*r.gap_ratio) : json(nullptr);
    j["expected"] = std::int64_t(r.expected);
    j["exact_expectation"] = r.exact_expectation;
    j["pass"] = r.pass;
    j["indeterminate"] = r.indeterminate;
    return j;
  }
}
