// Acceptance suite. Each criterion prints exactly one [PASS]/[FAIL] line and
// the process exits nonzero if any criterion fails or overruns its budget.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ordkit/audit.hpp"
#include "ordkit/jsonio.hpp"

using namespace ordkit;

namespace {

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void line(int idx, const char* name, bool pass, const std::string& detail, double secs, double budget) {
  bool ok = pass && secs < budget;
  std::printf("[%s] criterion %d: %s (%s; %.1fs of %.0fs budget)\n", ok ? "PASS" : "FAIL", idx, name,
              detail.c_str(), secs, budget);
  std::fflush(stdout);
  if (!ok) ++failures;
}

// ---------------------------------------------------------------------------
// Criteria 1-3 grid: nonnegative dominant coweights for GL_n with deg <= 3.
// The orbit count is invariant under central shifts lambda + (c,...,c) (the
// extra factor is the scalar p^c), so "all dominant lambda" is covered by
// bottom entry 0 together with explicit central shifts 0..2.
// ---------------------------------------------------------------------------

long long deg_gl(const Vec& la) {
  long long deg = 0;
  for (std::size_t i = 0; i < la.size(); ++i)
    for (std::size_t j = i + 1; j < la.size(); ++j) deg += la[i] - la[j];
  return deg;
}

std::vector<Vec> dominant_grid(int n) {
  std::vector<Vec> shapes;
  Vec cur(static_cast<std::size_t>(n), 0);
  // descending tuples with bottom entry 0 and top entry <= 3
  std::function<void(int, long long)> rec = [&](int pos, long long hi) {
    if (pos == n - 1) {
      cur[static_cast<std::size_t>(pos)] = 0;
      if (deg_gl(cur) <= 3) shapes.push_back(cur);
      return;
    }
    for (long long v = 0; v <= hi; ++v) {
      cur[static_cast<std::size_t>(pos)] = v;
      rec(pos + 1, v);
    }
  };
  rec(0, 3);
  std::vector<Vec> out;
  for (const auto& shape : shapes)
    for (long long shift = 0; shift <= 2; ++shift) {
      Vec la = shape;
      for (auto& x : la) x += shift;
      out.push_back(la);
    }
  return out;
}

void criterion_1_and_2() {
  auto t0 = std::chrono::steady_clock::now();
  long long instances = 0;
  bool counts_ok = true, reps_ok = true;
  std::string witness1, witness2;
  for (int n : {2, 3}) {
    auto grid = dominant_grid(n);
    for (long long p : {2LL, 3LL}) {
      GroupSpec s{n, p, 1, 1};
      for (const auto& la : grid) {
        Int expect = 1;
        for (long long i = 0; i < deg_gl(la); ++i) expect *= p;
        auto orbit = double_coset_count(s, la);
        if (orbit.count != expect) {
          counts_ok = false;
          witness1 = "mismatch at n=" + std::to_string(n) + " p=" + std::to_string(p) +
                     " lambda=" + vec_str(la);
        }
        ++instances;
      }
    }
  }
  double t1 = seconds_since(t0);
  std::ostringstream d1;
  d1 << instances << " exhaustive instances, n in {2,3}, p in {2,3}, deg <= 3";
  if (!counts_ok) d1 << "; " << witness1;
  line(1, "matrix-group double coset count equals p^deg", counts_ok, d1.str(), t1, 300);

  auto t2 = std::chrono::steady_clock::now();
  long long checked = 0;
  for (int n : {2, 3}) {
    RootDatum d = build_preset("GL", n);
    auto grid = dominant_grid(n);
    for (long long p : {2LL, 3LL}) {
      GroupSpec s{n, p, 1, 1};
      for (const auto& la : grid) {
        auto rep = verify_rep_formula(d, s, la);
        if (!rep.ok()) {
          reps_ok = false;
          witness2 = failure_summary(rep) + " at n=" + std::to_string(n) +
                     " p=" + std::to_string(p) + " lambda=" + vec_str(la);
        }
        ++checked;
      }
    }
  }
  std::ostringstream d2;
  d2 << checked << " instances on the same grid";
  if (!reps_ok) d2 << "; " << witness2;
  line(2, "abstract representatives realize the double cosets", reps_ok, d2.str(),
       seconds_since(t2), 300);
}

void criterion_3() {
  auto t0 = std::chrono::steady_clock::now();
  GroupSpec s{2, 3, 1, 1};
  bool ok = true;
  std::string witness;
  long long pairs = 0;
  for (long long a = 0; a <= 3; ++a)
    for (long long b = 0; a + b <= 3; ++b)
      for (long long s1 = 0; s1 <= 1; ++s1)
        for (long long s2 = 0; s2 <= 1; ++s2) {
          Vec la{a + s1, s1}, lb{b + s2, s2};
          auto rep = verify_semigroup(s, la, lb);
          if (!rep.ok()) {
            ok = false;
            witness = failure_summary(rep);
          }
          ++pairs;
        }
  std::ostringstream d;
  d << pairs << " dominant pairs with total deg <= 3 at p=3, n=2";
  if (!ok) d << "; " << witness;
  line(3, "double coset product equals the product coset as sets", ok, d.str(),
       seconds_since(t0), 300);
}

void criterion_4() {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string witness;
  for (long long p : {2LL, 3LL}) {
    auto rep = verify_up_factorization(2, p, 1, 2, {1, 0});
    if (!rep.ok()) {
      ok = false;
      witness = "p=" + std::to_string(p) + ": " + failure_summary(rep);
    }
  }
  line(4, "U_p factors through the looser congruence level", ok,
       ok ? "(b,c)=(1,2), lambda=(1,0), p in {2,3}" : witness, seconds_since(t0), 120);
}

void criterion_5() {
  auto t0 = std::chrono::steady_clock::now();
  GroupSpec s{2, 3, 1, 2};
  auto homs = hom_group(2, 3, 2, 1);
  bool ok = homs.size() == 9;
  std::string witness = ok ? "" : "expected 9 torus functionals";
  for (const auto& F : homs) {
    auto res = diamond_conjugation_check(s, 2, {1, 0}, F);
    if (!res.report.ok()) {
      ok = false;
      witness = failure_summary(res.report);
    }
  }
  // planted counterexample: reading a unipotent coordinate is not invariant
  auto fake = diamond_conjugation_check_fn(
      s, 2, {1, 0}, [](const ModMatrix& g) { return g.at(0, 1) % 3; }, "unipotent coordinate");
  if (fake.report.ok() || !fake.witness.has_value()) {
    ok = false;
    witness = "planted non-torus functional was not rejected";
  }
  std::ostringstream d;
  d << homs.size() << " torus functionals invariant, planted counterexample rejected";
  if (!ok) d.str(witness);
  line(5, "diamond operators commute with the coset action", ok, d.str(), seconds_since(t0), 120);
}

// ---------------------------------------------------------------------------
// Criteria 6-7: the exhaustive F5 family. Both verdicts are invariant under
// permuting the generators and scaling each by a nonzero constant, so the
// ordered family is covered by multisets of scale-normalized polynomials
// (leading coefficient 1); the reduction itself is spot-checked below by
// replaying random permuted/rescaled instances against their normal forms.
// ---------------------------------------------------------------------------

struct NormTerm {
  Expo expo;
  int coeff;
};
using NormPoly = std::vector<NormTerm>;

std::vector<Expo> small_monomials(int r) {
  std::vector<Expo> mons;
  for (int i = 0; i < r; ++i) {
    Expo e(static_cast<std::size_t>(r), 0);
    e[static_cast<std::size_t>(i)] = 1;
    mons.push_back(e);
  }
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j) {
      Expo e(static_cast<std::size_t>(r), 0);
      ++e[static_cast<std::size_t>(i)];
      ++e[static_cast<std::size_t>(j)];
      mons.push_back(e);
    }
  return mons;
}

std::vector<NormPoly> normalized_family(int r) {
  auto mons = small_monomials(r);
  std::vector<NormPoly> fam;
  fam.push_back({});  // the zero polynomial: a legal (never regular) generator
  for (std::size_t j = 0; j < mons.size(); ++j) fam.push_back({{mons[j], 1}});
  for (std::size_t j = 0; j < mons.size(); ++j)
    for (std::size_t i = 0; i < j; ++i)
      for (int c = 1; c <= 4; ++c) fam.push_back({{mons[j], 1}, {mons[i], c}});
  return fam;
}

Poly<FpField> realize(const FpField& k, const NormPoly& np, int r) {
  Poly<FpField> f{r, {}};
  for (const auto& t : np) poly_add_term(k, f, t.expo, k.from_int(t.coeff));
  return f;
}

struct FamilyStats {
  long long instances = 0;
  long long disagreements = 0;
  long long dim_mismatches = 0;
  std::string witness;
};

void run_instance(const FpField& k, const std::vector<Poly<FpField>>& polys,
                  const std::vector<int>& idx, int r, FamilyStats& st) {
  LocalSequence<FpField> seq{PolyRing<FpField>{k, r}, {}};
  for (int i : idx) seq.gens.push_back(polys[static_cast<std::size_t>(i)]);
  auto rep = generation_verdict(seq);
  bool member = is_part_of_regular_system(seq);
  if (rep.generated_over_bottom != member) {
    ++st.disagreements;
    if (st.witness.empty()) {
      std::ostringstream w;
      w << "r=" << r << " idx=";
      for (int i : idx) w << i << ",";
      st.witness = w.str();
    }
  }
  int n = static_cast<int>(idx.size());
  for (int i = 0; i <= n; ++i)
    if (rep.dims[static_cast<std::size_t>(i)] != detail::binom_ll(n, i)) ++st.dim_mismatches;
  ++st.instances;
}

void criterion_6_and_7() {
  auto t0 = std::chrono::steady_clock::now();
  FpField f5(5);
  FamilyStats st;

  std::vector<std::vector<Poly<FpField>>> realized(4);
  for (int r = 1; r <= 3; ++r) {
    auto fam = normalized_family(r);
    for (const auto& np : fam) realized[static_cast<std::size_t>(r)].push_back(realize(f5, np, r));
    const auto& polys = realized[static_cast<std::size_t>(r)];
    int m = static_cast<int>(polys.size());
    for (int a = 0; a < m; ++a) {
      run_instance(f5, polys, {a}, r, st);
      if (r < 2) continue;
      for (int b = a; b < m; ++b) {
        run_instance(f5, polys, {a, b}, r, st);
        if (r < 3) continue;
        for (int c = b; c < m; ++c) run_instance(f5, polys, {a, b, c}, r, st);
      }
    }
  }

  // spot-check the symmetry reduction: permuted and rescaled instances give
  // the same verdicts as their normal forms
  std::mt19937_64 rng(20260825);
  long long invariance_violations = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    int r = 1 + static_cast<int>(rng() % 3);
    const auto& polys = realized[static_cast<std::size_t>(r)];
    int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(r));
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) idx.push_back(static_cast<int>(rng() % polys.size()));
    std::sort(idx.begin(), idx.end());

    LocalSequence<FpField> base{PolyRing<FpField>{f5, r}, {}};
    for (int i : idx) base.gens.push_back(polys[static_cast<std::size_t>(i)]);
    auto base_rep = generation_verdict(base);
    bool base_member = is_part_of_regular_system(base);

    LocalSequence<FpField> moved{PolyRing<FpField>{f5, r}, {}};
    std::vector<int> perm = idx;
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int i : perm) {
      long long c = 1 + static_cast<long long>(rng() % 4);
      moved.gens.push_back(poly_scale(f5, polys[static_cast<std::size_t>(i)], f5.from_int(c)));
    }
    auto moved_rep = generation_verdict(moved);
    if (moved_rep.generated_over_bottom != base_rep.generated_over_bottom ||
        is_part_of_regular_system(moved) != base_member || moved_rep.dims != base_rep.dims)
      ++invariance_violations;
  }

  // 500 random sequences over Q, same shape family
  QField q;
  long long q_disagreements = 0, q_dim_mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    int r = 1 + static_cast<int>(rng() % 3);
    int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(r));
    auto mons = small_monomials(r);
    LocalSequence<QField> seq{PolyRing<QField>{q, r}, {}};
    for (int i = 0; i < n; ++i) {
      Poly<QField> f{r, {}};
      int terms = 1 + static_cast<int>(rng() % 2);
      for (int t = 0; t < terms; ++t) {
        long long num = 1 + static_cast<long long>(rng() % 9);
        if (rng() % 2) num = -num;
        long long den = 1 + static_cast<long long>(rng() % 3);
        poly_add_term(q, f, mons[rng() % mons.size()], Rat(num, den));
      }
      seq.gens.push_back(f);
    }
    auto rep = generation_verdict(seq);
    if (rep.generated_over_bottom != is_part_of_regular_system(seq)) ++q_disagreements;
    for (int i = 0; i <= n; ++i)
      if (rep.dims[static_cast<std::size_t>(i)] != detail::binom_ll(n, i)) ++q_dim_mismatches;
  }

  double elapsed = seconds_since(t0);
  bool ok6 = st.disagreements == 0 && invariance_violations == 0 && q_disagreements == 0;
  std::ostringstream d6;
  d6 << st.instances << " exhaustive F5 multiset instances, 2000 symmetry spot-checks, "
     << "500 random Q-sequences, 0 disagreements";
  if (!ok6)
    d6 << "; disagreements=" << st.disagreements << " invariance=" << invariance_violations
       << " q=" << q_disagreements << " " << st.witness;
  line(6, "generation over the bottom degree is regular-system membership", ok6, d6.str(),
       elapsed, 180);

  bool ok7 = st.dim_mismatches == 0 && q_dim_mismatches == 0;
  std::ostringstream d7;
  d7 << "dims C(n,i) on every criterion-6 sequence, multiplicity 1";
  if (!ok7) d7 << "; mismatches=" << st.dim_mismatches + q_dim_mismatches;
  line(7, "Koszul Ext dimensions follow the binomial pattern", ok7, d7.str(), elapsed, 180);
}

void criterion_8() {
  auto t0 = std::chrono::steady_clock::now();
  QField q;
  FpField f5(5);
  std::mt19937_64 rng(8);
  long long nonzero = 0;
  bool ok = true;
  std::string witness;

  auto one_field = [&](auto k) {
    using F = decltype(k);
    int r = 1 + static_cast<int>(rng() % 3);
    int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(r));
    auto mons = small_monomials(r);
    LocalSequence<F> seq{PolyRing<F>{k, r}, {}};
    for (int i = 0; i < n; ++i) {
      Poly<F> f{r, {}};
      int terms = 1 + static_cast<int>(rng() % 2);
      for (int t = 0; t < terms; ++t) {
        long long c = 1 + static_cast<long long>(rng() % 4);
        if (rng() % 2) c = -c;
        poly_add_term(k, f, mons[rng() % mons.size()], k.from_int(c));
      }
      seq.gens.push_back(f);
    }
    std::vector<typename F::Elem> eta;
    for (int i = 0; i < r; ++i) eta.push_back(k.from_int(static_cast<long long>(rng() % 7) - 3));
    ExtClass<F> cls;
    cls.degree = static_cast<int>(rng() % static_cast<unsigned>(n));
    auto subsets = index_subsets(n, cls.degree);
    for (std::size_t i = 0; i < subsets.size(); ++i)
      cls.coords.push_back(k.from_int(static_cast<long long>(rng() % 7) - 3));

    // every call cross-checks the chain-map route against the closed form
    auto base = yoneda_action(seq, eta, cls);
    std::vector<int> order(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) order[static_cast<std::size_t>(i)] = i;
    std::shuffle(order.begin(), order.end(), rng);
    auto permuted = yoneda_action(seq, eta, cls, &order);
    if (!ext_class_equal(k, base, permuted)) {
      ok = false;
      witness = "division-order dependence found";
    }
    if (!ext_class_is_zero(k, base)) ++nonzero;
  };

  for (int t = 0; t < 200; ++t) {
    if (t % 2 == 0)
      one_field(q);
    else
      one_field(f5);
  }
  std::ostringstream d;
  d << "200 randomized actions over Q and F5, " << nonzero
    << " nonzero; chain map vs closed form checked on every call";
  if (!ok) d << "; " << witness;
  line(8, "Yoneda action agrees along both routes and any division order", ok && nonzero > 50,
       d.str(), seconds_since(t0), 60);
}

void criterion_9() {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string witness;
  for (const char* preset : {"GL2", "GL3", "SL2", "SL3", "Sp4"}) {
    RootDatum d = parse_preset(preset);
    LieDims lie = lie_dims(d);
    if (borel_quotient_rank(d) != lie.r) {
      ok = false;
      witness = std::string(preset) + ": borel quotient rank";
    }
    for (long long l0 = 0; l0 <= lie.r; ++l0) {
      if (dual_selmer_offset(d, l0) != l0) {
        ok = false;
        witness = std::string(preset) + ": dual Selmer offset at l0=" + std::to_string(l0);
      }
      if (smoothness_dim(d, l0) != lie.r - l0) {  // asserts both routes internally
        ok = false;
        witness = std::string(preset) + ": smoothness at l0=" + std::to_string(l0);
      }
      long long a = 0, b = l0, r = lie.r, dd = lie.r - l0, e = 0;
      if (!poitou_tate_consistency(a, b, r, dd, e).ok()) {
        ok = false;
        witness = std::string(preset) + ": smooth tuple rejected at l0=" + std::to_string(l0);
      }
      long long* slots[5] = {&a, &b, &r, &dd, &e};
      for (auto* slot : slots)
        for (long long bump : {-1LL, 1LL}) {
          *slot += bump;
          bool accepted;
          try {
            accepted = poitou_tate_consistency(a, b, r, dd, e).ok();
          } catch (const std::invalid_argument&) {
            accepted = false;
          }
          *slot -= bump;
          if (accepted) {
            ok = false;
            witness = std::string(preset) + ": perturbed tuple accepted";
          }
        }
    }
  }
  line(9, "dimension-ledger identities hold on every preset", ok,
       ok ? "offset = l0, smoothness = r - l0 (both routes), rank = r, exact-sequence "
            "alternating sum rejects all perturbations"
          : witness,
       seconds_since(t0), 10);
}

void criterion_10() {
  auto t0 = std::chrono::steady_clock::now();
  long long h1 = leopoldt_h1(0, 0);
  line(10, "Leopoldt count for the rationals", h1 == 1,
       "h1(0,0) = " + std::to_string(h1), seconds_since(t0), 1);
}

void criterion_11() {
  auto t0 = std::chrono::steady_clock::now();
  AuditReport a = run_audit("GL2", 3, 1, 42);
  AuditReport b = run_audit("GL2", 3, 1, 42);
  bool lib_ok = canonical_json(audit_to_json(a)) == canonical_json(audit_to_json(b)) && a.ok();

  bool proc_ok = true;
  std::string note = "library route only";
#ifdef ORDKIT_CLI_PATH
  namespace fs = std::filesystem;
  fs::path dir = fs::current_path() / "acceptance_out";
  fs::create_directories(dir);
  std::string base = std::string("\"") + ORDKIT_CLI_PATH + "\" audit --preset GL2 --p 3 --l0 1 --seed 42 --out ";
  int r1 = std::system((base + (dir / "r1").string() + " > /dev/null").c_str());
  int r2 = std::system((base + (dir / "r2").string() + " > /dev/null").c_str());
  proc_ok = r1 == 0 && r2 == 0;
  if (proc_ok) {
    std::string f1 = read_text_file((dir / "r1.json").string());
    std::string f2 = read_text_file((dir / "r2.json").string());
    proc_ok = !f1.empty() && f1 == f2;
  }
  note = "library and subprocess routes both byte-identical";
#endif
  line(11, "audits with one seed are byte-identical", lib_ok && proc_ok,
       note + ", " + std::to_string(a.checks.size()) + " checks each", seconds_since(t0), 60);
}

}  // namespace

int main() {
  try {
    criterion_1_and_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6_and_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
