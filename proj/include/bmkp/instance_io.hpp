// Copyright 2026 the bmkp authors
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

#ifndef BMKP_INSTANCE_IO_HPP
#define BMKP_INSTANCE_IO_HPP

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bmkp/model.hpp"

namespace bmkp {

struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error(what) {}
};

namespace io_detail {

// Rationals travel as integer pairs. Each integer is a JSON integer when it
// fits, a decimal string otherwise; decimal floats are rejected outright.
inline nlohmann::json int_out(const Int& v) {
  if (v.fits_slong_p()) return nlohmann::json(v.get_si());
  return nlohmann::json(v.get_str());
}

inline Int int_in(const nlohmann::json& j, const std::string& where) {
  if (j.is_number_integer()) return Int(static_cast<long>(j.get<int64_t>()));
  if (j.is_string()) {
    try {
      return Int(j.get<std::string>());
    } catch (const std::invalid_argument&) {
      throw ParseError(where + ": malformed integer literal '" +
                       j.get<std::string>() + "'");
    }
  }
  if (j.is_number_float())
    throw ParseError(where + ": decimal literals are not accepted, " +
                     "rationals must be integer pairs");
  throw ParseError(where + ": expected an integer");
}

inline nlohmann::json rat_out(const Rat& r) {
  return nlohmann::json::array({int_out(r.get_num()), int_out(r.get_den())});
}

inline Rat rat_in(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2)
    throw ParseError(where + ": expected [numerator, denominator]");
  Int num = int_in(j[0], where + " numerator");
  Int den = int_in(j[1], where + " denominator");
  if (den <= 0) throw ParseError(where + ": denominator must be positive");
  return rat(num, den);
}

}  // namespace io_detail

inline nlohmann::json instance_to_json(const Instance& inst) {
  nlohmann::json j;
  j["version"] = 1;
  j["kind"] = inst.kind == Kind::identical ? "identical" : "arbitrary";
  j["items"] = nlohmann::json::array();
  for (const Item& it : inst.items)
    j["items"].push_back(nlohmann::json::array(
        {it.id, io_detail::int_out(it.profit.get_num()),
         io_detail::int_out(it.profit.get_den()),
         io_detail::int_out(it.weight.get_num()),
         io_detail::int_out(it.weight.get_den())}));
  j["capacities"] = nlohmann::json::array();
  for (const Rat& b : inst.capacities)
    j["capacities"].push_back(io_detail::rat_out(b));
  return j;
}

inline Instance instance_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("instance file: expected a JSON object");
  if (!j.contains("version") || j["version"] != 1)
    throw ParseError("instance file: missing or unsupported version tag");
  Instance inst;
  std::string kind = j.value("kind", "");
  if (kind == "identical")
    inst.kind = Kind::identical;
  else if (kind == "arbitrary")
    inst.kind = Kind::arbitrary;
  else
    throw ParseError("instance file: kind must be identical|arbitrary");
  if (!j.contains("items") || !j["items"].is_array())
    throw ParseError("instance file: items must be an array");
  std::set<int> ids;
  for (size_t k = 0; k < j["items"].size(); ++k) {
    const auto& row = j["items"][k];
    std::string where = "item " + std::to_string(k);
    if (!row.is_array() || row.size() != 5)
      throw ParseError(where + ": expected [id, pn, pd, wn, wd]");
    Item it;
    Int id = io_detail::int_in(row[0], where + " id");
    if (!id.fits_sint_p()) throw ParseError(where + ": id out of range");
    it.id = static_cast<int>(id.get_si());
    if (!ids.insert(it.id).second)
      throw ParseError("duplicate item id " + std::to_string(it.id));
    Int pd = io_detail::int_in(row[2], where + " profit denominator");
    Int wd = io_detail::int_in(row[4], where + " weight denominator");
    if (pd <= 0 || wd <= 0)
      throw ParseError(where + ": denominators must be positive");
    it.profit = rat(io_detail::int_in(row[1], where + " profit numerator"), pd);
    it.weight = rat(io_detail::int_in(row[3], where + " weight numerator"), wd);
    inst.items.push_back(it);
  }
  if (!j.contains("capacities") || !j["capacities"].is_array())
    throw ParseError("instance file: capacities must be an array");
  for (size_t k = 0; k < j["capacities"].size(); ++k)
    inst.capacities.push_back(io_detail::rat_in(
        j["capacities"][k], "capacity " + std::to_string(k)));
  if (auto v = inst.invariant_violation()) throw ParseError(*v);
  return inst;
}

inline void write_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << instance_to_json(inst).dump(2) << "\n";
}

inline Instance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return instance_from_json(j);
}

inline std::string instance_hash(const Instance& inst) {
  std::uint64_t h = fnv1a(instance_to_json(inst).dump());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return std::string(buf);
}

// --- solution files ------------------------------------------------------

inline nlohmann::json assignment_to_json(const Instance& inst,
                                         const Assignment& a) {
  nlohmann::json j;
  j["value"] = rat_str(evaluate(inst, a));
  j["bundles"] = nlohmann::json::array();
  for (const auto& b : a.bundles) {
    auto sorted = b;
    std::sort(sorted.begin(), sorted.end());
    j["bundles"].push_back(sorted);
  }
  return j;
}

inline Assignment assignment_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("bundles"))
    throw ParseError("solution file: expected object with bundles");
  Assignment a;
  for (const auto& b : j["bundles"]) {
    std::vector<int> bundle;
    for (const auto& id : b) bundle.push_back(id.get<int>());
    a.bundles.push_back(std::move(bundle));
  }
  return a;
}

inline void write_assignment(const Instance& inst, const Assignment& a,
                             const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << assignment_to_json(inst, a).dump(2) << "\n";
}

inline Assignment read_assignment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return assignment_from_json(j);
}

// --- generators -----------------------------------------------------------

/// Deterministic instance generator. The PRNG is mt19937_64 seeded directly;
/// bounded draws are `lo + next() % (hi - lo + 1)` so corpora reproduce
/// across platforms and languages.
inline Instance gen_random(int n, int m, std::pair<long, long> profit_range,
                           std::pair<long, long> weight_range, Kind kind,
                           std::uint64_t seed) {
  if (n < 0 || m < 1) throw Error("gen_random: need n >= 0, m >= 1");
  if (profit_range.first <= 0 || profit_range.second < profit_range.first ||
      weight_range.first <= 0 || weight_range.second < weight_range.first)
    throw Error("gen_random: ranges must be positive and ordered");
  std::mt19937_64 rng(seed);
  auto draw = [&rng](long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  Instance inst;
  inst.kind = kind;
  for (int i = 0; i < n; ++i) {
    Item it;
    it.id = i + 1;
    it.profit = Rat(draw(profit_range.first, profit_range.second));
    it.weight = Rat(draw(weight_range.first, weight_range.second));
    inst.items.push_back(it);
  }
  long cap_lo = weight_range.second;
  long cap_hi = weight_range.second * std::max<long>(2, (2L * std::max(n, 1)) / m);
  if (kind == Kind::identical) {
    Rat b(draw(cap_lo, cap_hi));
    inst.capacities.assign(m, b);
  } else {
    std::vector<Rat> caps;
    for (int jx = 0; jx < m; ++jx) caps.emplace_back(draw(cap_lo, cap_hi));
    std::sort(caps.begin(), caps.end());
    inst.capacities = std::move(caps);
  }
  inst.require_valid();
  return inst;
}

// --- run records ----------------------------------------------------------

struct RunRecord {
  std::string instance_hash;
  std::string algo;
  Epsilon eps{10};
  Rat opt_guess;
  Rat value;
  bool has_ratio = false;
  Rat ratio;  // exact, when the oracle OPT is known
  long ms = 0;
  std::uint64_t seed = 0;
};

/// Appends one CSV row, creating the header if the file is new or empty.
/// Callers must serialize concurrent writers externally.
inline void persist_run(const RunRecord& rec, const std::string& csv_path) {
  bool need_header = true;
  {
    std::ifstream probe(csv_path);
    if (probe && probe.peek() != std::ifstream::traits_type::eof())
      need_header = false;
  }
  std::ofstream out(csv_path, std::ios::app);
  if (!out) throw Error("cannot open " + csv_path + " for appending");
  if (need_header)
    out << "instance_hash,algo,eps,opt_guess,value,ratio_exact,ratio_float,ms,"
           "seed\n";
  char fbuf[32] = "";
  if (rec.has_ratio)
    std::snprintf(fbuf, sizeof fbuf, "%.6f", rat_double(rec.ratio));
  out << rec.instance_hash << ',' << rec.algo << ',' << rec.eps.str() << ','
      << rat_str(rec.opt_guess) << ',' << rat_str(rec.value) << ','
      << (rec.has_ratio ? rat_str(rec.ratio) : "") << ','
      << (rec.has_ratio ? fbuf : "") << ',' << rec.ms << ',' << rec.seed
      << "\n";
}

}  // namespace bmkp

#endif  // BMKP_INSTANCE_IO_HPP
