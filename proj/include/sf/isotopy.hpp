#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sf/families.hpp"
#include "sf/structure.hpp"

namespace sf {

struct Isotopism {
  LinMap N, L, M;
  bool strong = false;    // L = M
  bool verified = false;  // set only after verify_isotopism passes
  std::string provenance;

  LinTriple triple() const { return {N, L, M}; }
};

// Identity check on all basis pairs plus invertibility; stamps `verified`.
bool verify_isotopism(Isotopism& iso, const Presemifield& P1, const Presemifield& P2);

// gamma^{-1} * delta * gamma, componentwise.
LinTriple conjugate_triple(const Isotopism& gamma, const LinTriple& delta);

// Strong isotopism P_{q,B,a} -> P_{qbar,B,a'} with a' = B^{Q+1}/a.
std::pair<Isotopism, elt> qbar_isotopism(const FamilySParams& prm);

struct OrbitEntry {
  elt a_prime = 0;
  int t = 0;
  char branch = 'd';  // 'd' diagonal, 'a' antidiagonal
  elt ratio = 0;      // solved a2/d2 (resp. b2/c2)
  Isotopism iso;      // verified strong witness P_{q,B,a} -> P_{q,B,a'}
};

struct OrbitReport {
  FamilySParams base;
  std::vector<OrbitEntry> entries;
  std::vector<elt> orbit;   // distinct a' values, sorted by discrete log
  bool neg_pairing_ok = false;  // a'(t + m/2) = -a'(t) on both branches
};

// All a' with P_{q,B,a} isotopic to P_{q,B,a'}, each with a verified strong
// witness, built from the per-t diagonal/antidiagonal solutions at omega = 1.
OrbitReport orbit_of_a(const FamilySParams& prm);

// Strong isotopism witness for a single (t, branch) choice.
std::pair<Isotopism, elt> orbit_witness(const FamilySParams& prm, int t, char branch);

enum class ScreenVerdict { NonIsotopicByDegree, Compatible, Unknown };

struct ScreenResult {
  ScreenVerdict verdict = ScreenVerdict::Unknown;
  std::vector<std::string> relations;
  std::string reason;
};

// Exponent-pattern screen for biprojective pre-semifields over the same M:
// under the hypotheses on P1 (q1 distinct from r1, rbar1, 1, Q) plus its
// certified centralizer condition, isotopy forces one of the admissible
// sign relations between (k1, l1) and (k2, l2).
ScreenResult degree_pattern_screen(const BiprojPair& P1, const BiprojPair& P2,
                                   bool p1_condition_c);

struct ZpNonIsoResult {
  bool non_isotopic = false;
  uint64_t patterns_checked = 0;      // symbolic support patterns
  uint64_t patterns_surviving = 0;    // must be 0
  uint64_t candidates_checked = 0;    // concrete first-component solutions
  uint64_t candidates_surviving = 0;  // must be 0
  std::vector<std::string> notes;
};

// The matching-exponent separation from a Family-S instance to the Zhou-Pott
// pre-semifield with the same (q, qQ): support propagation through the
// second-component coefficient equations, then an exhaustive sweep over the
// monomial-shape candidates that solve the first-component equations.
ZpNonIsoResult zp_noniso_check(const FamilySParams& s, const BiprojPair& zp, int jobs = 0);

// Strong isotopism from [(1,0,0,B)_1, (0,1,A,0)_Q] onto the Dickson shape
// [(1,0,0,B)_1, (0,1,0,0)_Q]; requires A outside the (Q+1)-st roots of unity.
Isotopism dickson_reduction_shape(const FieldCtx& M, elt B, elt A);
Isotopism dickson_reduction_q1(const FieldCtx& M, elt B, elt a);  // A = a/B

struct B4BoundReport {
  uint64_t gcd_sum_form = 0;   // gcd(Q^2+Q+q+1, Q^3+Q^2+Q+1)
  uint64_t gcd_diff_form = 0;  // gcd(Q^3-q,     Q^3+Q^2+Q+1)
  uint64_t bound = 0;          // 8 * sigma(s)
};
B4BoundReport b4_class_bound(uint32_t p, int s, int t);
uint64_t b3_class_bound(int s);  // 9 * sigma(s)

// Exhaustive strong-isotopism search over monomial-blocked L = M candidates;
// calibration tool for |field| <= 81 only.
std::optional<Isotopism> tiny_strong_search(const Presemifield& P1, const Presemifield& P2);

enum class StrongVerdict { StronglyIsotopic, IsotopicNotStrong, NotIsotopicRestricted };

struct StrongCompareResult {
  StrongVerdict verdict = StrongVerdict::NotIsotopicRestricted;
  std::optional<Isotopism> witness;
  bool restricted = true;  // verdict relative to the monomial-shape search
  std::string note;
};

// Commutative planar maps: tests F against G and against the shifted square
// map G'(x) = x *2 (a *2 x) for a non-square a in the middle nucleus.
StrongCompareResult strong_vs_plain_isotopy(const FamilyInstance& A, const FamilyInstance& B,
                                            int jobs = 0);

struct CompareResult {
  std::string verdict;   // "isotopic" | "non_isotopic" | "unknown"
  std::string evidence;  // "witness" | "invariant" | "degree" | "search"
  std::string detail;
  std::optional<Isotopism> witness;
  std::optional<std::array<uint64_t, 3>> nuclei_a, nuclei_b;
};

// Full pipeline: invariants first, degree screen second, coefficient system
// / restricted search last.
CompareResult compare_presemifields(const FamilyInstance& A, const FamilyInstance& B, int jobs = 0);

// ---------------------------------------------------------------------------
// Classification (classify.cpp).

struct ClassMember {
  int k;
  elt a;
};

struct ClassInfo {
  ClassMember rep;
  std::vector<ClassMember> members;  // sorted by (k, dlog a)
  std::array<uint64_t, 3> nuclei{};
  uint64_t centralizer_size = 0;
};

struct PairEvidence {
  int class_a = 0, class_b = 0;
  std::string evidence;  // "degree" | "search" | "invariant"
};

struct ClassifyReport {
  uint32_t p = 0;
  int n = 0, m = 0;
  std::vector<int> admissible_k;
  std::vector<ClassInfo> classes;
  uint64_t lower_bound = 0, upper_bound = 0;
  bool bound_ok = false;
  uint64_t witness_edges_verified = 0;
  std::vector<PairEvidence> pair_evidence;
};

ClassifyReport count_classes_family_s(uint32_t p, int n, int jobs = 0,
                                      bool with_invariants = true);

// Component swap [f, g] -> [g~, f~] (variables exchanged), and the strong
// isotopism realizing it; swapping the components preserves isotopy.
BiprojPair component_swap(const BiprojPair& P);
Isotopism component_swap_isotopism(const BiprojPair& P);

}  // namespace sf
