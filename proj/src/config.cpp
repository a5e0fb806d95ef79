#include "hypersketch/config.hpp"

#include <sodium.h>

#include <bit>
#include <cmath>
#include <fstream>
#include "json.hpp"
#include <sstream>

#include "hypersketch/errors.hpp"
#include "hypersketch/l0_sampler.hpp"
#include "hypersketch/one_sparse.hpp"

namespace hypersketch {

using nlohmann::json;

std::size_t ceil_log2(std::uint64_t x) {
  if (x <= 1) return 0;
  return static_cast<std::size_t>(std::bit_width(x - 1));
}

Rational set_error_parameter(const Rational& eps, std::size_t n) {
  if (!(eps > Rational(0) && eps < Rational(1))) throw InputError("eps must lie strictly between 0 and 1");
  if (n < 1) throw InputError("n must be positive");
  // Smallest k with 2^k * eps >= n, i.e. k = ceil(log2(n / eps)).
  std::int64_t k = 0;
  Rational scaled = eps;
  while (scaled < Rational(static_cast<std::int64_t>(n))) {
    scaled *= 2;
    ++k;
  }
  if (k == 0) return eps;
  return eps / Rational(k * k);
}

void SketchConfig::validate() const {
  if (n < 2) throw InputError("n must be at least 2");
  if (n > 4096) throw InputError("n above 4096 is not supported");
  if (r_max < 2 || r_max > n || r_max > 64) throw InputError("r_max must lie in [2, min(n, 64)]");
  if (m_max < 1) throw InputError("m_max must be positive");
  if (!(eps > Rational(0) && eps < Rational(1))) throw InputError("eps must lie strictly between 0 and 1");
  if (!(C > 0) || !(c_rep > 0) || !(c_conn > 0) || !(l0_rep_constant > 0)) {
    throw InputError("sampling constants must be positive");
  }
  if (rep_cap < 1) throw InputError("rep_cap must be at least 1");
  if (delta != 0.0 && !(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0, 1)");
}

double SketchConfig::log_n() const { return std::log2(static_cast<double>(n)); }

double SketchConfig::phi() const {
  double es = to_double(eps_star());
  return C * log_n() / (es * es);
}

std::size_t SketchConfig::stages() const { return l0_levels(m_max); }

std::size_t SketchConfig::reps() const {
  double budget = std::ceil(c_rep * phi() * log_n());
  if (budget >= static_cast<double>(rep_cap)) return rep_cap;
  return budget < 1.0 ? 1 : static_cast<std::size_t>(budget);
}

double SketchConfig::sampler_delta() const {
  if (delta != 0.0) return delta;
  double nn = static_cast<double>(n);
  return 1.0 / (nn * nn * nn);
}

std::size_t SketchConfig::sampler_levels() const { return l0_levels(m_max); }

std::size_t SketchConfig::sampler_reps() const { return l0_reps(sampler_delta(), l0_rep_constant); }

std::size_t SketchConfig::alpha_limbs() const { return alpha_limbs_for(n); }

std::size_t SketchConfig::conn_stages() const {
  return stages() + (conn_extra_stages != 0 ? conn_extra_stages : log2n());
}

std::size_t SketchConfig::conn_copies() const {
  return static_cast<std::size_t>(std::ceil(c_conn * static_cast<double>(log2n())));
}

std::size_t SketchConfig::conn_levels() const {
  // floor(log2(n^5)) + 1, computed without overflow.
  unsigned __int128 p = 1;
  for (int i = 0; i < 5; ++i) p *= n;
  std::size_t bits = 0;
  while (p > 0) {
    ++bits;
    p >>= 1;
  }
  return bits;
}

namespace {

json config_json(const SketchConfig& c) {
  json j;
  j["n"] = c.n;
  j["m_max"] = c.m_max;
  j["r_max"] = c.r_max;
  j["eps"] = to_string(c.eps);
  j["C"] = c.C;
  j["c_rep"] = c.c_rep;
  j["rep_cap"] = c.rep_cap;
  j["c_conn"] = c.c_conn;
  j["delta"] = c.delta;
  j["l0_rep_constant"] = c.l0_rep_constant;
  j["conn_extra_stages"] = c.conn_extra_stages;
  j["oracle_vertex_cap"] = c.oracle_vertex_cap;
  j["oracle_two_cut_cap"] = c.oracle_two_cut_cap;
  j["sparse_cap"] = c.sparse_cap;
  j["preprocess_offset"] = c.preprocess_offset ? json(*c.preprocess_offset) : json(nullptr);
  j["strict"] = c.strict;
  return j;
}

}  // namespace

// Stream strictness only affects input validation, so it is left out.
std::string SketchConfig::canonical() const {
  json j = config_json(*this);
  j.erase("strict");
  return j.dump();
}

std::uint64_t SketchConfig::hash() const {
  std::string text = canonical();
  unsigned char out[8];
  crypto_generichash(out, sizeof out, reinterpret_cast<const unsigned char*>(text.data()), text.size(), nullptr, 0);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | out[i];
  return v;
}

std::string SketchConfig::to_json(bool include_seed) const {
  json j = config_json(*this);
  if (include_seed) j["seed"] = seed_to_hex(seed);
  return j.dump(2);
}

SketchConfig SketchConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("config must be a JSON object");
  SketchConfig c;
  try {
    for (auto& [key, value] : j.items()) {
      if (key == "n") c.n = value.get<std::size_t>();
      else if (key == "m_max") c.m_max = value.get<std::uint64_t>();
      else if (key == "r_max") c.r_max = value.get<std::size_t>();
      else if (key == "eps") c.eps = value.is_string() ? parse_rational(value.get<std::string>())
                                                       : parse_rational(value.dump());
      else if (key == "C") c.C = value.get<double>();
      else if (key == "c_rep") c.c_rep = value.get<double>();
      else if (key == "rep_cap") c.rep_cap = value.get<std::size_t>();
      else if (key == "c_conn") c.c_conn = value.get<double>();
      else if (key == "delta") c.delta = value.get<double>();
      else if (key == "l0_rep_constant") c.l0_rep_constant = value.get<double>();
      else if (key == "conn_extra_stages") c.conn_extra_stages = value.get<std::size_t>();
      else if (key == "oracle_vertex_cap") c.oracle_vertex_cap = value.get<std::size_t>();
      else if (key == "oracle_two_cut_cap") c.oracle_two_cut_cap = value.get<std::size_t>();
      else if (key == "sparse_cap") c.sparse_cap = value.get<std::size_t>();
      else if (key == "preprocess_offset") {
        if (value.is_null()) c.preprocess_offset.reset();
        else c.preprocess_offset = value.get<std::int64_t>();
      } else if (key == "strict") c.strict = value.get<bool>();
      else if (key == "seed") c.seed = seed_from_hex(value.get<std::string>());
      else throw InputError("unknown config key '" + key + "'");
    }
  } catch (const json::type_error& e) {
    throw InputError(std::string("config has a value of the wrong type: ") + e.what());
  }
  return c;
}

SketchConfig SketchConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

}  // namespace hypersketch
