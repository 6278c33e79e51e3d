#include <algorithm>
#include <map>

#include "sf/isotopy.hpp"
#include "sf/nt.hpp"
#include "sf/planarity.hpp"

namespace sf {

namespace {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

ClassifyReport count_classes_family_s(uint32_t p, int n, int jobs, bool with_invariants) {
  if (n < 4 || n % 2 != 0) throw ConditionError("n_range", "classify: n = 2m with m >= 2 required");
  const int m = n / 2;
  ClassifyReport rep;
  rep.p = p;
  rep.n = n;
  rep.m = m;

  const uint64_t sigma = nt::odd_part(static_cast<uint64_t>(n));
  const uint64_t q_classes = (sigma - 1) / 2;
  const uint64_t a_count = m % 2 == 0 ? nt::pow_u64(p, static_cast<unsigned>(m / 2)) - 1 : 0;
  rep.upper_bound = q_classes * a_count;
  rep.lower_bound = rep.upper_bound == 0 ? 0 : (q_classes * a_count + n - 1) / n;

  if (m % 2 != 0) {
    rep.bound_ok = rep.lower_bound == 0;
    return rep;
  }
  rep.admissible_k = family_s_admissible_k(m);
  if (rep.admissible_k.empty()) {
    rep.bound_ok = rep.lower_bound == 0;
    return rep;
  }

  const FieldCtx& M = FieldCtx::get(p, m);
  const elt B = M.gen();  // canonical non-square
  std::vector<elt> a_values;
  for (elt a : M.subfield_elements(m / 2))
    if (a != 0) a_values.push_back(a);
  std::sort(a_values.begin(), a_values.end(),
            [&](elt x, elt y) { return M.dlog(x) < M.dlog(y); });

  // Node indexing.
  std::map<std::pair<int, elt>, int> node_of;
  std::vector<std::pair<int, elt>> nodes;
  for (int k : rep.admissible_k)
    for (elt a : a_values) {
      node_of[{k, a}] = static_cast<int>(nodes.size());
      nodes.emplace_back(k, a);
    }

  Dsu dsu(static_cast<int>(nodes.size()));
  uint64_t edges = 0;
  for (int k : rep.admissible_k) {
    for (elt a : a_values) {
      const FamilySParams prm = FamilySParams::make(p, m, k, B, a);
      const OrbitReport orb = orbit_of_a(prm);
      for (const auto& e : orb.entries) {
        if (!e.iso.verified) throw std::logic_error("classify: unverified orbit witness");
        dsu.unite(node_of.at({k, a}), node_of.at({k, e.a_prime}));
        ++edges;
      }
      // q-bar identification with the k <-> m-k partner.
      auto [flip, a_prime] = qbar_isotopism(prm);
      if (!flip.verified) throw std::logic_error("classify: unverified flip witness");
      dsu.unite(node_of.at({k, a}), node_of.at({(m - k) % m, a_prime}));
      ++edges;
    }
  }
  rep.witness_edges_verified = edges;

  std::map<int, std::vector<ClassMember>> groups;
  for (size_t i = 0; i < nodes.size(); ++i)
    groups[dsu.find(static_cast<int>(i))].push_back({nodes[i].first, nodes[i].second});
  for (auto& [root, members] : groups) {
    (void)root;
    std::sort(members.begin(), members.end(), [&](const ClassMember& x, const ClassMember& y) {
      return std::make_pair(x.k, M.dlog(x.a)) < std::make_pair(y.k, M.dlog(y.a));
    });
    ClassInfo info;
    info.rep = members.front();
    info.members = members;
    rep.classes.push_back(std::move(info));
  }
  std::sort(rep.classes.begin(), rep.classes.end(), [&](const ClassInfo& x, const ClassInfo& y) {
    return std::make_pair(x.rep.k, M.dlog(x.rep.a)) < std::make_pair(y.rep.k, M.dlog(y.rep.a));
  });

  std::vector<bool> cond_c(rep.classes.size(), false);
  if (with_invariants) {
    for (size_t i = 0; i < rep.classes.size(); ++i) {
      auto& cls = rep.classes[i];
      const FamilySParams prm = FamilySParams::make(p, m, cls.rep.k, B, cls.rep.a);
      FamilyInstance inst = family_s(prm);
      certify(inst.psf, jobs);
      const NucleiReport nuc = nuclei_of(inst.psf);
      cls.nuclei = {nuc.nl, nuc.nm, nuc.nr};
      const CentralizerReport cent = centralizer_enumerate(prm, jobs);
      cls.centralizer_size = cent.size;
      cond_c[i] = cent.condition_c;
    }
    for (size_t i = 0; i < rep.classes.size(); ++i) {
      for (size_t j = i + 1; j < rep.classes.size(); ++j) {
        PairEvidence ev;
        ev.class_a = static_cast<int>(i);
        ev.class_b = static_cast<int>(j);
        if (rep.classes[i].nuclei != rep.classes[j].nuclei) {
          ev.evidence = "invariant";
        } else if (rep.classes[i].rep.k == rep.classes[j].rep.k) {
          ev.evidence = "search";
        } else {
          const FamilySParams pi = FamilySParams::make(p, m, rep.classes[i].rep.k, B, rep.classes[i].rep.a);
          const FamilySParams pj = FamilySParams::make(p, m, rep.classes[j].rep.k, B, rep.classes[j].rep.a);
          const ScreenResult sr = degree_pattern_screen(pi.pair(), pj.pair(), cond_c[i]);
          ev.evidence = sr.verdict == ScreenVerdict::NonIsotopicByDegree ? "degree" : "search";
        }
        rep.pair_evidence.push_back(std::move(ev));
      }
    }
  }

  const uint64_t count = rep.classes.size();
  rep.bound_ok = rep.lower_bound <= count && count <= rep.upper_bound;
  return rep;
}

}  // namespace sf
