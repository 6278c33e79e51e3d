#include "sf/report.hpp"

#include <sstream>

namespace sf {

json dlog_json(const FieldCtx& K, elt v) {
  if (v == 0) return json("zero");
  return json(K.dlog(v));
}

elt dlog_from_json(const FieldCtx& K, const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "zero") return 0;
    throw std::invalid_argument("dlog_from_json: expected integer or \"zero\"");
  }
  return K.from_dlog(j.get<int64_t>());
}

json coords_json(const FieldCtx& K, elt v) {
  json arr = json::array();
  for (uint8_t c : K.coeffs(v)) arr.push_back(static_cast<int>(c));
  return arr;
}

elt coords_from_json(const FieldCtx& K, const json& j) {
  std::vector<uint8_t> c;
  for (const auto& d : j) c.push_back(static_cast<uint8_t>(d.get<int>()));
  return K.from_coeffs(c);
}

json planar_to_json(const PlanarMap& F, const FamilyMeta* meta) {
  const FieldCtx& K = planar_base(F);
  json j;
  j["schema"] = std::string("map/") + kSchemaVersion;
  j["field"] = {{"p", K.p()}, {"m", K.m()}};
  if (const auto* bp = std::get_if<BiprojPair>(&F)) {
    j["kind"] = "biproj";
    j["k"] = bp->k;
    j["l"] = bp->l;
    json f = json::array(), g = json::array();
    for (elt c : bp->f) f.push_back(coords_json(K, c));
    for (elt c : bp->g) g.push_back(coords_json(K, c));
    j["f"] = f;
    j["g"] = g;
  } else if (const auto* dp = std::get_if<DOPoly>(&F)) {
    j["kind"] = "do_poly";
    json terms = json::array();
    for (const auto& t : dp->terms)
      terms.push_back({{"coef", coords_json(K, t.coef)}, {"i", t.i}, {"j", t.j}});
    j["terms"] = terms;
    json lin = json::array();
    for (const auto& t : dp->linear)
      lin.push_back({{"coef", coords_json(K, t.coef)}, {"i", t.exp}});
    j["linear"] = lin;
  } else {
    const auto& pm = std::get<PairMap>(F);
    j["kind"] = "pair_map";
    json comps = json::array();
    for (int c = 0; c < 2; ++c) {
      json terms = json::array();
      for (const auto& t : pm.comp[c])
        terms.push_back({{"coef", coords_json(K, t.coef)},
                         {"v1", t.v1 ? "y" : "x"},
                         {"i", t.i},
                         {"v2", t.v2 ? "y" : "x"},
                         {"j", t.j}});
      json lin = json::array();
      for (const auto& t : pm.lin[c])
        lin.push_back({{"coef", coords_json(K, t.coef)}, {"v", t.v ? "y" : "x"}, {"i", t.i}});
      comps.push_back({{"terms", terms}, {"linear", lin}});
    }
    j["components"] = comps;
  }
  if (meta && !meta->family.empty()) {
    j["family"] = meta->family;
    json params = json::object();
    for (const auto& [k, v] : meta->params) params[k] = v;
    j["params"] = params;
    if (!meta->reduced_to.empty()) j["reduced_to"] = meta->reduced_to;
    if (!meta->count_note.empty()) j["count_note"] = meta->count_note;
    if (meta->predicted_nuclei)
      j["predicted_nuclei"] = {(*meta->predicted_nuclei)[0], (*meta->predicted_nuclei)[1],
                               (*meta->predicted_nuclei)[2]};
  }
  return j;
}

PlanarMap planar_from_json(const json& j) {
  const uint32_t p = j.at("field").at("p").get<uint32_t>();
  const int m = j.at("field").at("m").get<int>();
  const FieldCtx& K = FieldCtx::get(p, m);
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "biproj") {
    BiprojPair bp;
    bp.M = &K;
    bp.k = j.at("k").get<int>();
    bp.l = j.at("l").get<int>();
    for (int i = 0; i < 4; ++i) {
      bp.f[i] = coords_from_json(K, j.at("f")[i]);
      bp.g[i] = coords_from_json(K, j.at("g")[i]);
    }
    return bp;
  }
  if (kind == "do_poly") {
    DOPoly dp;
    dp.F = &K;
    for (const auto& t : j.at("terms"))
      dp.terms.push_back({coords_from_json(K, t.at("coef")), t.at("i").get<int>(), t.at("j").get<int>()});
    for (const auto& t : j.at("linear"))
      dp.linear.push_back({coords_from_json(K, t.at("coef")), t.at("i").get<int>()});
    dp.normalize();
    return dp;
  }
  if (kind == "pair_map") {
    PairMap pm;
    pm.M = &K;
    int c = 0;
    for (const auto& comp : j.at("components")) {
      for (const auto& t : comp.at("terms"))
        pm.comp[c].push_back({coords_from_json(K, t.at("coef")),
                              static_cast<uint8_t>(t.at("v1").get<std::string>() == "y"),
                              t.at("i").get<int>(),
                              static_cast<uint8_t>(t.at("v2").get<std::string>() == "y"),
                              t.at("j").get<int>()});
      for (const auto& t : comp.at("linear"))
        pm.lin[c].push_back({coords_from_json(K, t.at("coef")),
                             static_cast<uint8_t>(t.at("v").get<std::string>() == "y"),
                             t.at("i").get<int>()});
      ++c;
    }
    return pm;
  }
  throw std::invalid_argument("planar_from_json: unknown kind " + kind);
}

FamilyMeta meta_from_json(const json& j) {
  FamilyMeta meta;
  if (j.contains("family")) meta.family = j.at("family").get<std::string>();
  if (j.contains("params"))
    for (auto it = j.at("params").begin(); it != j.at("params").end(); ++it)
      meta.params[it.key()] = it.value().get<std::string>();
  if (j.contains("reduced_to")) meta.reduced_to = j.at("reduced_to").get<std::string>();
  if (j.contains("count_note")) meta.count_note = j.at("count_note").get<std::string>();
  if (j.contains("predicted_nuclei")) {
    const auto& pn = j.at("predicted_nuclei");
    meta.predicted_nuclei = {{pn[0].get<uint64_t>(), pn[1].get<uint64_t>(), pn[2].get<uint64_t>()}};
  }
  return meta;
}

FamilyInstance instance_from_json(const json& j) {
  FamilyInstance inst;
  inst.map = planar_from_json(j);
  inst.meta = meta_from_json(j);
  inst.psf = Presemifield::from_planar(inst.map);
  inst.psf.meta = inst.meta;
  return inst;
}

std::string canonical_dump(const json& payload) { return payload.dump(); }

uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string map_hash(const PlanarMap& F) {
  const uint64_t h = fnv1a64(canonical_dump(planar_to_json(F)));
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

json certificate_to_json(const PlanarityCertificate& cert, const FieldCtx& base) {
  json j;
  j["schema"] = std::string("certificate/") + kSchemaVersion;
  j["planar"] = cert.planar;
  j["agreement"] = cert.agreement;
  json runs = json::array();
  for (const auto& r : cert.runs) {
    json rj;
    rj["name"] = r.name;
    rj["pass"] = r.pass;
    if (r.biproj_witness) {
      rj["witness"] = {{"u", r.biproj_witness->at_infinity ? json("inf") : dlog_json(base, r.biproj_witness->u)},
                       {"x", dlog_json(base, r.biproj_witness->x)},
                       {"y", dlog_json(base, r.biproj_witness->y)}};
    }
    if (r.brute_witness) {
      json a = json::array(), kvec = json::array();
      for (uint8_t c : r.brute_witness->a) a.push_back(static_cast<int>(c));
      for (uint8_t c : r.brute_witness->kernel) kvec.push_back(static_cast<int>(c));
      rj["witness"] = {{"a", a}, {"kernel", kvec}};
    }
    runs.push_back(std::move(rj));
  }
  j["runs"] = runs;
  return j;
}

PlanarityCertificate certificate_from_json(const json& j, const FieldCtx& base) {
  (void)base;
  PlanarityCertificate cert;
  cert.planar = j.at("planar").get<bool>();
  cert.agreement = j.at("agreement").get<bool>();
  for (const auto& rj : j.at("runs")) {
    CheckerRun r;
    r.name = rj.at("name").get<std::string>();
    r.pass = rj.at("pass").get<bool>();
    cert.runs.push_back(std::move(r));
  }
  return cert;
}

json matrix_to_json(const MatFp& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json isotopism_to_json(const Isotopism& iso, const FieldCtx& base) {
  (void)base;
  json j;
  j["N"] = matrix_to_json(iso.N.matrix());
  j["L"] = matrix_to_json(iso.L.matrix());
  j["M"] = matrix_to_json(iso.M.matrix());
  j["strong"] = iso.strong;
  j["verified"] = iso.verified;
  j["provenance"] = iso.provenance;
  return j;
}

json nuclei_to_json(const NucleiReport& rep) {
  json j;
  j["schema"] = std::string("nuclei/") + kSchemaVersion;
  j["Nl"] = rep.nl;
  j["Nm"] = rep.nm;
  j["Nr"] = rep.nr;
  j["dims"] = {rep.dim_l, rep.dim_m, rep.dim_r};
  if (rep.predicted) j["predicted"] = {(*rep.predicted)[0], (*rep.predicted)[1], (*rep.predicted)[2]};
  j["match"] = rep.match;
  return j;
}

json centralizer_to_json(const CentralizerReport& rep) {
  json j;
  j["schema"] = std::string("centralizer/") + kSchemaVersion;
  j["size"] = rep.size;
  j["diagonal_count"] = rep.diag_count;
  j["antidiagonal_count"] = rep.anti_count;
  j["predicted"] = {rep.predicted_small, rep.predicted_large};
  j["matches_closed_form"] = rep.matches_closed_form;
  j["antidiagonal_contributes"] = rep.antidiag_contributes;
  j["torus_order"] = rep.torus_order;
  j["index_over_torus"] = rep.index_over_torus;
  j["pprime"] = rep.pprime;
  j["condition_c"] = rep.condition_c;
  return j;
}

json orbit_to_json(const OrbitReport& rep) {
  const FieldCtx& K = *rep.base.M;
  json j;
  j["schema"] = std::string("orbit/") + kSchemaVersion;
  j["base"] = {{"p", rep.base.p}, {"m", rep.base.m}, {"k", rep.base.k},
               {"B", dlog_json(K, rep.base.B)}, {"a", dlog_json(K, rep.base.a)}};
  json orbit = json::array();
  for (elt a : rep.orbit) orbit.push_back(K.dlog(a));
  j["orbit"] = orbit;
  j["orbit_size"] = rep.orbit.size();
  json entries = json::array();
  for (const auto& e : rep.entries) {
    entries.push_back({{"a_prime", dlog_json(K, e.a_prime)},
                       {"t", e.t},
                       {"branch", std::string(1, e.branch)},
                       {"ratio", dlog_json(K, e.ratio)},
                       {"witness", isotopism_to_json(e.iso, K)}});
  }
  j["entries"] = entries;
  j["neg_pairing"] = rep.neg_pairing_ok;
  return j;
}

json classify_to_json(const ClassifyReport& rep, const FieldCtx* M) {
  json j;
  j["schema"] = std::string("classify/") + kSchemaVersion;
  j["p"] = rep.p;
  j["n"] = rep.n;
  j["m"] = rep.m;
  j["admissible_k"] = rep.admissible_k;
  j["class_count"] = rep.classes.size();
  j["lower_bound"] = rep.lower_bound;
  j["upper_bound"] = rep.upper_bound;
  j["bound_ok"] = rep.bound_ok;
  j["witness_edges_verified"] = rep.witness_edges_verified;
  json classes = json::array();
  for (const auto& c : rep.classes) {
    json cj;
    cj["rep"] = {{"k", c.rep.k}, {"a", M ? dlog_json(*M, c.rep.a) : json(c.rep.a)}};
    json members = json::array();
    for (const auto& mem : c.members)
      members.push_back({{"k", mem.k}, {"a", M ? dlog_json(*M, mem.a) : json(mem.a)}});
    cj["members"] = members;
    cj["size"] = c.members.size();
    cj["nuclei"] = {c.nuclei[0], c.nuclei[1], c.nuclei[2]};
    cj["centralizer_size"] = c.centralizer_size;
    classes.push_back(std::move(cj));
  }
  j["classes"] = classes;
  json ev = json::array();
  for (const auto& e : rep.pair_evidence)
    ev.push_back({{"a", e.class_a}, {"b", e.class_b}, {"evidence", e.evidence}});
  j["pair_evidence"] = ev;
  return j;
}

json compare_to_json(const CompareResult& res, const FieldCtx* base) {
  json j;
  j["schema"] = std::string("compare/") + kSchemaVersion;
  j["verdict"] = res.verdict;
  j["evidence"] = res.evidence;
  j["detail"] = res.detail;
  if (res.nuclei_a) j["nuclei_a"] = {(*res.nuclei_a)[0], (*res.nuclei_a)[1], (*res.nuclei_a)[2]};
  if (res.nuclei_b) j["nuclei_b"] = {(*res.nuclei_b)[0], (*res.nuclei_b)[1], (*res.nuclei_b)[2]};
  if (res.witness && base) j["witness"] = isotopism_to_json(*res.witness, *base);
  return j;
}

namespace {

bool type_matches(const json& v, const std::string& ty) {
  if (ty == "integer") return v.is_number_integer() || v.is_number_unsigned();
  if (ty == "number") return v.is_number();
  if (ty == "string") return v.is_string();
  if (ty == "boolean") return v.is_boolean();
  if (ty == "array") return v.is_array();
  if (ty == "object") return v.is_object();
  if (ty == "integer_or_string") return v.is_string() || v.is_number_integer() || v.is_number_unsigned();
  return false;
}

}  // namespace

bool validate_schema(const json& payload, const json& schema, std::string* err) {
  for (auto it = schema.at("required").begin(); it != schema.at("required").end(); ++it) {
    const std::string path = it.key();
    const std::string ty = it.value().get<std::string>();
    // Walk dotted paths; "[]" descends into every array element.
    std::vector<const json*> frontier{&payload};
    std::istringstream ss(path);
    std::string part;
    bool ok = true;
    while (std::getline(ss, part, '.') && ok) {
      std::vector<const json*> next;
      for (const json* node : frontier) {
        if (part == "[]") {
          if (!node->is_array()) {
            ok = false;
            break;
          }
          for (const auto& el : *node) next.push_back(&el);
        } else {
          if (!node->is_object() || !node->contains(part)) {
            ok = false;
            break;
          }
          next.push_back(&node->at(part));
        }
      }
      frontier = std::move(next);
    }
    if (!ok) {
      if (err) *err = "missing required path: " + path;
      return false;
    }
    for (const json* node : frontier) {
      if (!type_matches(*node, ty)) {
        if (err) *err = "wrong type at " + path + " (want " + ty + ")";
        return false;
      }
    }
  }
  return true;
}

}  // namespace sf
