#pragma once

#include "torex/collections.hpp"
#include "torex/picard.hpp"

#include <json.hpp>

#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>

namespace torex {

inline constexpr const char* kTorexVersion = "1";

namespace iodetail {

inline void reject_unknown_fields(const nlohmann::json& j, const std::set<std::string>& allowed,
                                  const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw TorexError(where + ": unknown field \"" + it.key() + "\"");
}

inline Int int_from_json(const nlohmann::json& j, const std::string& where) {
  if (j.is_number_integer()) return Int(j.get<long long>());
  if (j.is_string()) return Int(j.get<std::string>());
  throw TorexError(where + ": expected an integer");
}

inline nlohmann::json int_to_json(const Int& x) {
  if (x >= std::numeric_limits<long long>::min() && x <= std::numeric_limits<long long>::max())
    return nlohmann::json(static_cast<long long>(x));
  return nlohmann::json(x.str());
}

}  // namespace iodetail

inline nlohmann::json rat_to_json(const Rat& q) { return nlohmann::json(rat_string(q)); }

inline Rat rat_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_string()) return parse_rat(j.get<std::string>());
  throw TorexError("expected a rational as \"p/q\" or an integer");
}

inline nlohmann::json vec_to_json(const IntVec& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const Int& x : v) a.push_back(iodetail::int_to_json(x));
  return a;
}

inline nlohmann::json vec_to_json(const RatVec& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const Rat& x : v) a.push_back(rat_to_json(x));
  return a;
}

inline IntVec intvec_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) throw TorexError(where + ": expected an array");
  IntVec v;
  for (const auto& x : j) v.push_back(iodetail::int_from_json(x, where));
  return v;
}

inline RatVec ratvec_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) throw TorexError(where + ": expected an array");
  RatVec v;
  for (const auto& x : j) v.push_back(rat_from_json(x));
  return v;
}

// Fan document: d, rays, optional max_cones / trusted_complete / name.
// Cones are synthesized as the face fan when absent. Unknown fields are
// rejected so published inputs stay unambiguous.
inline StackyFan fan_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw TorexError("fan document: expected an object");
  iodetail::reject_unknown_fields(
      j, {"torex_version", "name", "d", "rays", "max_cones", "trusted_complete"},
      "fan document");
  if (j.contains("torex_version") && j["torex_version"] != kTorexVersion)
    throw TorexError("fan document: unsupported torex_version");
  if (!j.contains("d") || !j["d"].is_number_integer() || j["d"].get<long long>() <= 0)
    throw TorexError("fan document: field \"d\" must be a positive integer");
  if (!j.contains("rays")) throw TorexError("fan document: field \"rays\" is required");

  StackyFan fan;
  fan.d = j["d"].get<std::size_t>();
  for (const auto& ray : j["rays"]) {
    IntVec v = intvec_from_json(ray, "fan rays");
    if (v.size() != fan.d) throw TorexError("fan document: a ray has the wrong length");
    fan.rays.push_back(v);
  }
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw TorexError("fan document: \"name\" must be a string");
    fan.name = j["name"].get<std::string>();
  }
  if (j.contains("trusted_complete")) {
    if (!j["trusted_complete"].is_boolean())
      throw TorexError("fan document: \"trusted_complete\" must be a boolean");
    fan.trusted_complete = j["trusted_complete"].get<bool>();
  }
  if (j.contains("max_cones")) {
    for (const auto& cone : j["max_cones"]) {
      if (!cone.is_array()) throw TorexError("fan document: a cone must be an index array");
      std::vector<int> c;
      for (const auto& idx : cone) {
        if (!idx.is_number_integer()) throw TorexError("fan document: cone indices are integers");
        c.push_back(idx.get<int>());
      }
      fan.max_cones.push_back(c);
    }
  } else {
    StackyFan synthesized = face_fan_from_points(fan.rays, fan.name);
    fan.max_cones = synthesized.max_cones;
    fan.trusted_complete = true;
  }
  return fan;
}

inline nlohmann::json fan_to_json(const StackyFan& fan) {
  nlohmann::json j;
  j["torex_version"] = kTorexVersion;
  if (!fan.name.empty()) j["name"] = fan.name;
  j["d"] = fan.d;
  j["rays"] = nlohmann::json::array();
  for (const auto& r : fan.rays) j["rays"].push_back(vec_to_json(r));
  j["max_cones"] = fan.max_cones;
  if (fan.trusted_complete) j["trusted_complete"] = true;
  return j;
}

// Classes serialize as {"free": [...], "torsion": [...]} everywhere.
inline nlohmann::json class_to_json(const PicClass& c) {
  nlohmann::json j;
  j["free"] = vec_to_json(c.free);
  j["torsion"] = vec_to_json(c.torsion);
  return j;
}

inline PicClass class_from_json(const nlohmann::json& j, const PicardGroup& pic) {
  if (!j.is_object()) throw TorexError("class: expected an object");
  iodetail::reject_unknown_fields(j, {"free", "torsion"}, "class");
  if (!j.contains("free")) throw TorexError("class: field \"free\" is required");
  PicClass c;
  c.free = intvec_from_json(j["free"], "class free part");
  if (j.contains("torsion")) c.torsion = intvec_from_json(j["torsion"], "class torsion part");
  if (c.free.size() != pic.rank())
    throw TorexError("class: free part must have length " + std::to_string(pic.rank()));
  if (c.torsion.size() != pic.torsion().size())
    throw TorexError("class: torsion part must have length " +
                     std::to_string(pic.torsion().size()));
  for (std::size_t i = 0; i < c.torsion.size(); ++i) {
    c.torsion[i] %= pic.torsion()[i];
    if (c.torsion[i] < 0) c.torsion[i] += pic.torsion()[i];
  }
  return c;
}

inline StackyFan load_fan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TorexError("cannot open fan file " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') { ++line; col = 1; }
      else ++col;
    }
    std::ostringstream msg;
    msg << path << ":" << line << ":" << col << ": malformed JSON: " << e.what();
    throw TorexError(msg.str());
  }
  return fan_from_json(j);
}

inline nlohmann::json make_report(const std::string& command, const std::string& fan_name,
                                  nlohmann::json result, nlohmann::json witnesses) {
  nlohmann::json j;
  j["torex_version"] = kTorexVersion;
  j["command"] = command;
  j["fan_name"] = fan_name;
  j["result"] = std::move(result);
  j["witnesses"] = std::move(witnesses);
  return j;
}

inline nlohmann::json table_to_json(const CohomologyTable& t) {
  nlohmann::json j;
  j["dims"] = vec_to_json(t.dims);
  nlohmann::json contributions = nlohmann::json::array();
  for (const auto& w : t.contributions) {
    nlohmann::json c;
    c["index_set"] = w.index_set;
    c["w"] = vec_to_json(w.w);
    c["degree"] = w.degree;
    c["multiplicity"] = w.multiplicity;
    contributions.push_back(c);
  }
  j["contributions"] = contributions;
  return j;
}

inline nlohmann::json cone_to_json(const ForbiddenCone& c) {
  nlohmann::json j;
  j["index_set"] = nlohmann::json::array();
  for (int i = 0; i < 32; ++i)
    if ((c.index_set >> i) & 1) j["index_set"].push_back(i);
  j["apex"] = vec_to_json(c.apex);
  j["generators"] = nlohmann::json::array();
  for (const auto& g : c.generators) j["generators"].push_back(vec_to_json(g));
  return j;
}

inline nlohmann::json collection_to_json(const ExceptionalCollection& col) {
  nlohmann::json j;
  j["kind"] = col.kind == WindowKind::rank1     ? "rank1"
              : col.kind == WindowKind::rank2   ? "rank2"
                                                : "delpezzo";
  j["classes"] = nlohmann::json::array();
  for (const auto& c : col.classes) j["classes"].push_back(class_to_json(c));
  j["shift"] = vec_to_json(col.shift);
  j["expected"] = iodetail::int_to_json(col.expected);
  j["count_check"] = col.count_check;
  nlohmann::json window;
  window["facets"] = nlohmann::json::array();
  for (const auto& q : col.window.polytope.ineqs) {
    nlohmann::json f;
    f["normal"] = vec_to_json(q.a);
    f["offset"] = rat_to_json(q.c);
    window["facets"].push_back(f);
  }
  window["center"] = vec_to_json(col.window.center);
  j["window"] = window;
  return j;
}

}  // namespace torex
