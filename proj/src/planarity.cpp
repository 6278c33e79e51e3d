#include "sf/planarity.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>

#include "sf/parallel.hpp"
#include "sf/report.hpp"

namespace sf {

namespace {

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

// Point index <-> coordinates for the brute-force scan: single-variable maps
// use the element index directly; two-variable maps use x + order * y.
struct Domain {
  const FieldCtx* K;
  bool two_var;
  uint64_t size;

  explicit Domain(const PlanarMap& F)
      : K(&planar_base(F)), two_var(planar_two_var(F)),
        size(two_var ? K->order() * K->order() : K->order()) {}
};

}  // namespace

bool is_planar_bruteforce(const PlanarMap& F, BruteWitness* witness, int jobs) {
  const Domain dom(F);
  if (dom.size > kBruteForceCap)
    throw std::domain_error("is_planar_bruteforce: field larger than the 3^12 oracle cap");
  const FieldCtx& K = *dom.K;
  const int n = planar_dim(F);
  const uint32_t p = K.p();
  const int m = K.m();

  // eval on (x, y) index pairs; single-variable maps keep y unused.
  auto eval2 = [&](elt x, elt y) -> std::pair<elt, elt> {
    if (const auto* bp = std::get_if<BiprojPair>(&F)) return bp->eval(x, y);
    if (const auto* pm = std::get_if<PairMap>(&F)) return pm->eval(x, y);
    return {std::get<DOPoly>(F).eval(x), 0};
  };

  // Basis points and their images.
  std::vector<std::pair<elt, elt>> basis(n), fbasis(n);
  for (int i = 0; i < n; ++i) {
    if (dom.two_var) {
      basis[i] = {i < m ? K.from_coeffs([&] {
        std::vector<uint8_t> c(m, 0);
        c[i] = 1;
        return c;
      }())
                        : 0,
                  i < m ? 0 : K.from_coeffs([&] {
                    std::vector<uint8_t> c(m, 0);
                    c[i - m] = 1;
                    return c;
                  }())};
    } else {
      std::vector<uint8_t> c(m, 0);
      c[i] = 1;
      basis[i] = {K.from_coeffs(c), 0};
    }
    fbasis[i] = eval2(basis[i].first, basis[i].second);
  }

  std::atomic<uint64_t> first_bad{dom.size};
  parallel_chunks(static_cast<int64_t>(dom.size) - 1, jobs, [&](int64_t lo, int64_t hi) {
    std::vector<uint8_t> buf(n * n);
    std::vector<uint8_t> crd(m);
    for (int64_t idx = lo; idx < hi; ++idx) {
      const uint64_t a_index = static_cast<uint64_t>(idx) + 1;  // skip 0
      if (a_index >= first_bad.load(std::memory_order_relaxed)) return;
      const elt ax = dom.two_var ? static_cast<elt>(a_index % K.order()) : static_cast<elt>(a_index);
      const elt ay = dom.two_var ? static_cast<elt>(a_index / K.order()) : 0;
      const auto fa = eval2(ax, ay);
      for (int i = 0; i < n; ++i) {
        const elt sx = K.add(basis[i].first, ax);
        const elt sy = dom.two_var ? K.add(basis[i].second, ay) : 0;
        auto fs = eval2(sx, sy);
        // column i = F(e_i + a) - F(e_i) - F(a)
        const elt c1 = K.sub(K.sub(fs.first, fbasis[i].first), fa.first);
        const elt c2 = dom.two_var ? K.sub(K.sub(fs.second, fbasis[i].second), fa.second) : 0;
        uint64_t v = c1;
        for (int r = 0; r < m; ++r) {
          buf[r * n + i] = static_cast<uint8_t>(v % p);
          v /= p;
        }
        if (dom.two_var) {
          v = c2;
          for (int r = 0; r < m; ++r) {
            buf[(m + r) * n + i] = static_cast<uint8_t>(v % p);
            v /= p;
          }
        }
      }
      if (fp_rank_inplace(p, buf.data(), n, n) != n) {
        uint64_t cur = first_bad.load();
        while (a_index < cur && !first_bad.compare_exchange_weak(cur, a_index)) {
        }
        return;
      }
    }
    (void)crd;
  });

  if (first_bad.load() == dom.size) return true;
  if (witness) {
    const uint64_t a_index = first_bad.load();
    const elt ax = dom.two_var ? static_cast<elt>(a_index % K.order()) : static_cast<elt>(a_index);
    const elt ay = dom.two_var ? static_cast<elt>(a_index / K.order()) : 0;
    const FpVec av = dom.two_var ? pack2(K, ax, ay) : pack1(K, ax);
    MatFp D(p, n, n);
    for (int i = 0; i < n; ++i) {
      FpVec ei(n, 0);
      ei[i] = 1;
      D.set_col(i, fp_sub(p, fp_sub(p, planar_eval(F, fp_add(p, ei, av)), planar_eval(F, ei)),
                          planar_eval(F, av)));
    }
    const auto kb = D.kernel_basis();
    witness->a = av;
    witness->kernel = kb.front();
  }
  return false;
}

bool is_planar_biproj(const BiprojPair& P, BiprojWitness* witness, int jobs) {
  const FieldCtx& K = *P.M;
  const int m = K.m();
  const int n = 2 * m;
  const uint32_t p = K.p();

  // Frobenius images of the polynomial basis for the two component exponents.
  std::vector<elt> bq(m), br(m), be(m);
  for (int s = 0; s < m; ++s) {
    std::vector<uint8_t> c(m, 0);
    c[s] = 1;
    be[s] = K.from_coeffs(c);
    bq[s] = K.frob(be[s], P.k);
    br[s] = K.frob(be[s], P.l);
  }

  // u-index order: 0, 1, ..., order-1, then infinity last.
  const uint64_t total = K.order() + 1;
  std::atomic<uint64_t> first_bad{total};
  parallel_chunks(static_cast<int64_t>(total), jobs, [&](int64_t lo, int64_t hi) {
    std::vector<uint8_t> buf(n * n);
    for (int64_t idx = lo; idx < hi; ++idx) {
      if (static_cast<uint64_t>(idx) >= first_bad.load(std::memory_order_relaxed)) return;
      const bool inf = static_cast<uint64_t>(idx) == K.order();
      elt A, B, C, D, A2, B2, C2, D2;
      if (inf) {
        A = P.f[0]; B = P.f[0]; C = P.f[2]; D = P.f[1];
        A2 = P.g[0]; B2 = P.g[0]; C2 = P.g[2]; D2 = P.g[1];
      } else {
        const elt u = static_cast<elt>(idx);
        const elt uq = K.frob(u, P.k), ur = K.frob(u, P.l);
        A = K.add(K.mul(P.f[0], u), P.f[1]);
        B = K.add(K.mul(P.f[0], uq), P.f[2]);
        C = K.add(K.mul(P.f[2], u), P.f[3]);
        D = K.add(K.mul(P.f[1], uq), P.f[3]);
        A2 = K.add(K.mul(P.g[0], u), P.g[1]);
        B2 = K.add(K.mul(P.g[0], ur), P.g[2]);
        C2 = K.add(K.mul(P.g[2], u), P.g[3]);
        D2 = K.add(K.mul(P.g[1], ur), P.g[3]);
      }
      for (int s = 0; s < n; ++s) {
        elt top, bot;
        if (s < m) {
          top = K.add(K.mul(A, bq[s]), K.mul(B, be[s]));
          bot = K.add(K.mul(A2, br[s]), K.mul(B2, be[s]));
        } else {
          top = K.add(K.mul(C, bq[s - m]), K.mul(D, be[s - m]));
          bot = K.add(K.mul(C2, br[s - m]), K.mul(D2, be[s - m]));
        }
        uint64_t v = top;
        for (int r = 0; r < m; ++r) {
          buf[r * n + s] = static_cast<uint8_t>(v % p);
          v /= p;
        }
        v = bot;
        for (int r = 0; r < m; ++r) {
          buf[(m + r) * n + s] = static_cast<uint8_t>(v % p);
          v /= p;
        }
      }
      if (fp_rank_inplace(p, buf.data(), n, n) != n) {
        uint64_t cur = first_bad.load();
        const uint64_t mine = static_cast<uint64_t>(idx);
        while (mine < cur && !first_bad.compare_exchange_weak(cur, mine)) {
        }
        return;
      }
    }
  });

  if (first_bad.load() == total) return true;
  if (witness) {
    const uint64_t idx = first_bad.load();
    witness->at_infinity = idx == K.order();
    witness->u = witness->at_infinity ? 0 : static_cast<elt>(idx);
    // Recompute the failing system and extract the smallest kernel vector.
    MatFp Dm(p, n, n);
    for (int s = 0; s < n; ++s) {
      FpVec col(n, 0);
      const elt x = s < m ? be[s] : 0;
      const elt y = s < m ? 0 : be[s - m];
      elt df, dg;
      if (witness->at_infinity) {
        df = K.add(K.add(K.mul(P.f[0], K.frob(x, P.k)), K.mul(P.f[0], x)),
                   K.add(K.mul(P.f[2], K.frob(y, P.k)), K.mul(P.f[1], y)));
        dg = K.add(K.add(K.mul(P.g[0], K.frob(x, P.l)), K.mul(P.g[0], x)),
                   K.add(K.mul(P.g[2], K.frob(y, P.l)), K.mul(P.g[1], y)));
      } else {
        const elt u = witness->u;
        df = K.add(K.add(K.mul(K.add(K.mul(P.f[0], u), P.f[1]), K.frob(x, P.k)),
                         K.mul(K.add(K.mul(P.f[0], K.frob(u, P.k)), P.f[2]), x)),
                   K.add(K.mul(K.add(K.mul(P.f[2], u), P.f[3]), K.frob(y, P.k)),
                         K.mul(K.add(K.mul(P.f[1], K.frob(u, P.k)), P.f[3]), y)));
        dg = K.add(K.add(K.mul(K.add(K.mul(P.g[0], u), P.g[1]), K.frob(x, P.l)),
                         K.mul(K.add(K.mul(P.g[0], K.frob(u, P.l)), P.g[2]), x)),
                   K.add(K.mul(K.add(K.mul(P.g[2], u), P.g[3]), K.frob(y, P.l)),
                         K.mul(K.add(K.mul(P.g[1], K.frob(u, P.l)), P.g[3]), y)));
      }
      col = pack2(K, df, dg);
      Dm.set_col(s, col);
    }
    const auto kb = Dm.kernel_basis();
    const auto [wx, wy] = unpack2(K, kb.front());
    witness->x = wx;
    witness->y = wy;
  }
  return false;
}

namespace {

std::optional<std::filesystem::path> cache_path_for(const PlanarMap& F) {
  const char* dir = std::getenv("SEMIFIELD_CACHE_DIR");
  if (!dir || !*dir) return std::nullopt;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  return std::filesystem::path(dir) / (map_hash(F) + ".json");
}

}  // namespace

PlanarityCertificate certify(const PlanarMap& F, int jobs, bool force_oracle) {
  const auto cache = cache_path_for(F);
  if (cache && !force_oracle) {
    std::ifstream in(*cache);
    if (in) {
      json j;
      in >> j;
      PlanarityCertificate cert = certificate_from_json(j, planar_base(F));
      cert.from_cache = true;
      return cert;
    }
  }

  PlanarityCertificate cert;
  const Domain domain{F};
  const bool brute_ok = domain.size <= kBruteForceCap;
  if (force_oracle && !brute_ok)
    throw std::domain_error("certify: --oracle requested beyond the brute-force cap");

  if (const auto* bp = std::get_if<BiprojPair>(&F)) {
    CheckerRun run;
    run.name = "biprojective_system";
    BiprojWitness w;
    const double t0 = now_seconds();
    run.pass = is_planar_biproj(*bp, &w, jobs);
    run.seconds = now_seconds() - t0;
    if (!run.pass) run.biproj_witness = w;
    cert.runs.push_back(std::move(run));
  }
  if (brute_ok) {
    CheckerRun run;
    run.name = "bruteforce_polarization";
    BruteWitness w;
    const double t0 = now_seconds();
    run.pass = is_planar_bruteforce(F, &w, jobs);
    run.seconds = now_seconds() - t0;
    if (!run.pass) run.brute_witness = w;
    cert.runs.push_back(std::move(run));
  }
  if (cert.runs.empty()) throw std::domain_error("certify: no applicable checker for this map");

  cert.planar = cert.runs.front().pass;
  for (const auto& r : cert.runs) cert.agreement = cert.agreement && (r.pass == cert.planar);
  if (!cert.agreement)
    throw std::logic_error("certify: planarity checkers disagree (internal error)");

  if (cache) {
    std::ofstream out(*cache);
    out << certificate_to_json(cert, planar_base(F)).dump();
  }
  return cert;
}

PlanarityCertificate certify(Presemifield& P, int jobs, bool force_oracle) {
  if (!P.origin()) throw std::logic_error("certify: pre-semifield has no origin map");
  PlanarityCertificate cert = certify(*P.origin(), jobs, force_oracle);
  P.set_s3_certified(cert.planar);
  return cert;
}

}  // namespace sf
