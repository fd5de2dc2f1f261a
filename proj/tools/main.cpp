#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ordkit/audit.hpp"
#include "ordkit/jsonio.hpp"

// ordkit CLI. Exit codes: 0 all checks pass, 1 a check ran and failed,
// 2 usage or IO error. Canonical JSON goes to stdout; --out additionally
// writes <base>.json and <base>.md (and <base>.timings.json for audit).
// ORDKIT_OUT_DIR prefixes relative --out paths.

namespace {

using ordkit::Json;

ordkit::Vec parse_vec(const std::string& text) {
  ordkit::Vec out;
  std::string cur;
  for (char ch : text + ",") {
    if (ch == ',') {
      if (cur.empty()) throw std::invalid_argument("empty component in vector: " + text);
      out.push_back(std::stoll(cur));
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur.push_back(ch);
    }
  }
  if (out.empty()) throw std::invalid_argument("empty vector: " + text);
  return out;
}

ordkit::RootDatum load_datum(const std::string& preset, const std::string& datum_file) {
  if (!preset.empty() && !datum_file.empty())
    throw std::invalid_argument("give either --preset or --datum, not both");
  if (!preset.empty()) return ordkit::parse_preset(preset);
  if (!datum_file.empty()) return ordkit::datum_from_json(Json::parse(ordkit::read_text_file(datum_file)));
  throw std::invalid_argument("a root datum is required: --preset or --datum");
}

// Inline JSON if it looks like JSON, otherwise a file path.
Json json_arg(const std::string& arg) {
  std::size_t i = arg.find_first_not_of(" \t\n\r");
  if (i != std::string::npos && (arg[i] == '[' || arg[i] == '{'))
    return Json::parse(arg);
  return Json::parse(ordkit::read_text_file(arg));
}

std::filesystem::path resolve_out(const std::string& out) {
  std::filesystem::path p(out);
  if (p.is_relative())
    if (const char* dir = std::getenv("ORDKIT_OUT_DIR"))
      p = std::filesystem::path(dir) / p;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  return p;
}

int finish(const Json& canonical, const std::string& out, bool ok,
           const std::optional<Json>& timings = std::nullopt) {
  std::string bytes = ordkit::canonical_json(canonical);
  std::cout << bytes;
  if (!out.empty()) {
    auto base = resolve_out(out);
    ordkit::write_text_file(base.string() + ".json", bytes);
    Json with_title = canonical;
    if (!with_title.contains("title")) with_title["title"] = "audit";
    ordkit::write_text_file(base.string() + ".md", ordkit::report_markdown(with_title));
    if (timings) ordkit::write_text_file(base.string() + ".timings.json", ordkit::canonical_json(*timings));
  }
  return ok ? 0 : 1;
}

struct CommonOpts {
  std::string out;
  std::uint64_t seed = 42;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--out", c.out, "output path base; writes <base>.json and <base>.md");
  cmd->add_option("--seed", c.seed, "seed for sampled checks")->capture_default_str();
}

// ---- rootdata -------------------------------------------------------------

int run_rootdata(const std::string& preset, const std::string& datum_file, const std::string& chi_text,
                 const CommonOpts& c) {
  ordkit::RootDatum d = load_datum(preset, datum_file);
  ordkit::Report rep;
  rep.title = "root datum " + d.name;
  rep.add("finalized root datum", d.finalized,
          std::to_string(d.roots.size()) + " roots, rank " + std::to_string(d.rank));
  auto w = ordkit::weyl_group(d);
  rep.add("weyl group closure", !w.empty(), "order " + std::to_string(w.size()));

  std::vector<ordkit::UnramifiedCharacter> chis;
  if (!chi_text.empty()) {
    ordkit::UnramifiedCharacter chi;
    std::string cur;
    for (char ch : chi_text + ",") {
      if (ch == ',') {
        chi.values.emplace_back(cur);
        cur.clear();
      } else if (!std::isspace(static_cast<unsigned char>(ch))) {
        cur.push_back(ch);
      }
    }
    if (static_cast<int>(chi.values.size()) != d.rank)
      throw std::invalid_argument("--chi needs " + std::to_string(d.rank) + " rational values");
    chis.push_back(chi);
  } else {
    ordkit::detail::AuditSampler sampler(c.seed);
    for (int i = 0; i < 3; ++i) chis.push_back(sampler.character(d.rank));
  }
  for (std::size_t i = 0; i < chis.size(); ++i) {
    auto sr = ordkit::is_strongly_regular(d, chis[i]);
    std::string label = chi_text.empty() ? "sampled character " + std::to_string(i) : "given character";
    rep.add("strong regularity routes agree (" + label + ")", sr.agree(),
            sr.reflection_test ? "strongly regular" : sr.reflection_witness);
  }

  Json canonical = ordkit::report_to_json(rep);
  canonical["datum"] = ordkit::datum_to_json(d);
  return finish(canonical, c.out, rep.ok());
}

// ---- hecke ----------------------------------------------------------------

int run_hecke(const std::string& preset, const std::string& datum_file, const std::string& lambda_text,
              long long p, const std::string& lambda2_text, bool emit_reps, bool oracle,
              const CommonOpts& c) {
  ordkit::RootDatum d = load_datum(preset, datum_file);
  ordkit::Vec la = parse_vec(lambda_text);
  if (static_cast<int>(la.size()) != d.rank) throw std::invalid_argument("--lambda length must equal the rank");
  if (!ordkit::is_dominant(d, la, false)) throw std::invalid_argument("--lambda must be dominant");
  if (!ordkit::is_prime(p)) throw std::invalid_argument("--p must be prime");

  std::optional<ordkit::Int> oracle_count;
  ordkit::Report rep;
  rep.title = "hecke double cosets for " + d.name + ", lambda=" + ordkit::vec_str(la);
  if (oracle) {
    bool gl_small = d.name.rfind("GL", 0) == 0 && d.rank <= 3;
    if (!gl_small) throw std::invalid_argument("--oracle needs a GL_n preset with n <= 3");
    bool nonneg = true;
    for (long long x : la) nonneg = nonneg && x >= 0;
    if (!nonneg) throw std::invalid_argument("--oracle needs a nonnegative dominant lambda");
    ordkit::GroupSpec s{d.rank, p, 1, 1};
    oracle_count = ordkit::double_coset_count(s, la).count;
  }
  auto count = ordkit::make_count_report(d, la, p, oracle_count);
  rep.add("coset count is p^deg", true,
          "p^" + std::to_string(ordkit::deg_coweight(d, la)) + " = " + count.predicted.str());
  if (oracle_count)
    rep.add("matrix-group oracle agrees", count.match, "exhaustive count " + oracle_count->str());
  auto reps = ordkit::coset_representatives(d, la, p);
  rep.add("representative enumeration matches the count", true,
          std::to_string(reps.reps.size()) + " representatives");
  if (!lambda2_text.empty()) {
    ordkit::Vec lb = parse_vec(lambda2_text);
    auto pr = ordkit::product_identity_check(d, la, lb, p);
    for (const auto& ck : pr.checks) rep.add("product identity: " + ck.name, ck.pass, ck.detail);
  }

  Json canonical = ordkit::report_to_json(rep);
  canonical["count"] = ordkit::count_report_to_json(count);
  if (emit_reps) canonical["representatives"] = ordkit::repset_to_json(reps);
  return finish(canonical, c.out, rep.ok());
}

// ---- ext ------------------------------------------------------------------

template <class F>
int run_ext_field(const F& k, int vars, const Json& gens_json, int q0, const CommonOpts& c) {
  ordkit::LocalSequence<F> seq{ordkit::PolyRing<F>{k, vars}, ordkit::gens_from_json(k, gens_json, vars)};
  if (seq.gens.empty()) throw std::invalid_argument("--gens must name at least one polynomial");
  if (static_cast<int>(seq.gens.size()) > vars)
    throw std::invalid_argument("more generators than variables");
  auto er = ordkit::generation_verdict(seq);
  int n = static_cast<int>(seq.gens.size());

  ordkit::Report rep;
  rep.title = "ext algebra over " + k.name() + " with " + std::to_string(n) + " generators";
  rep.add("generated over bottom degree", er.generated_over_bottom,
          er.generated_over_bottom ? er.note : "first failing degree " +
              (er.failing_degree ? std::to_string(*er.failing_degree) : std::string("?")));
  bool binom = true;
  for (int i = 0; i <= n; ++i)
    binom = binom && er.dims[static_cast<std::size_t>(i)] == ordkit::detail::binom_ll(n, i);
  rep.add("ext dimensions are binomial", binom, "dims " + Json(er.dims).dump());
  auto table = ordkit::cohomology_degree_map(n, q0, er.dims);
  rep.add("degree placement pattern", table.pattern_matches,
          "multiplicity " + std::to_string(table.multiplicity));

  Json canonical = ordkit::report_to_json(rep);
  canonical["ext"] = ordkit::ext_report_to_json(k, er);
  canonical["degree_map"] = ordkit::degree_table_to_json(table);
  return finish(canonical, c.out, rep.ok());
}

int run_ext(int vars, const std::string& field, const std::string& gens_arg, int q0, const CommonOpts& c) {
  if (vars < 1) throw std::invalid_argument("--vars must be positive");
  Json gens_json = json_arg(gens_arg);
  if (field == "Q") return run_ext_field(ordkit::QField{}, vars, gens_json, q0, c);
  std::string digits;
  if (field.rfind("Fp:", 0) == 0) digits = field.substr(3);
  else if (field.size() > 1 && field[0] == 'F') digits = field.substr(1);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("--field must be Q, F<p>, or Fp:<p>");
  return run_ext_field(ordkit::FpField(std::stoll(digits)), vars, gens_json, q0, c);
}

// ---- dims -----------------------------------------------------------------

int run_dims(const std::string& ledger_file, const std::string& preset, long long l0, const CommonOpts& c) {
  ordkit::DimLedger led;
  if (!ledger_file.empty() && !preset.empty())
    throw std::invalid_argument("give either --ledger or --preset, not both");
  if (!ledger_file.empty()) {
    led = ordkit::ledger_from_json(Json::parse(ordkit::read_text_file(ledger_file)));
  } else if (!preset.empty()) {
    led = ordkit::crystalline_ledger(ordkit::parse_preset(preset), l0);
  } else {
    throw std::invalid_argument("a ledger is required: --ledger or --preset");
  }
  auto rep = ordkit::dimension_audit(led);
  Json canonical = ordkit::report_to_json(rep);
  canonical["ledger"] = ordkit::ledger_to_json(led);
  return finish(canonical, c.out, rep.ok());
}

// ---- finite ---------------------------------------------------------------

int run_finite(int n, long long p, int b, int cc, const std::string& check,
               const std::string& lambda_text, const std::string& lambda2_text, int level,
               int hom_m, const CommonOpts& c) {
  ordkit::GroupSpec s{n, p, b, cc};
  s.validate();
  ordkit::Report rep;
  Json payload;

  auto need_lambda = [&]() {
    if (lambda_text.empty()) throw std::invalid_argument("--lambda is required for --check " + check);
    ordkit::Vec la = parse_vec(lambda_text);
    if (static_cast<int>(la.size()) != n) throw std::invalid_argument("--lambda length must equal --n");
    return la;
  };

  if (check == "cosets") {
    ordkit::Vec la = need_lambda();
    auto orbit = ordkit::double_coset_count(s, la);
    auto d = ordkit::build_preset("GL", n);
    ordkit::Int expect = ordkit::coset_count(d, la, p);
    rep.title = "double coset count for " + s.str() + ", lambda=" + ordkit::vec_str(la);
    rep.add("orbit count equals p^deg", orbit.count == expect,
            orbit.count.str() + " cosets at working exponent " + std::to_string(orbit.working_exponent));
    payload["count"] = orbit.count.str();
    payload["working_exponent"] = orbit.working_exponent;
  } else if (check == "reps") {
    ordkit::Vec la = need_lambda();
    auto d = ordkit::build_preset("GL", n);
    rep = ordkit::verify_rep_formula(d, s, la);
  } else if (check == "semigroup") {
    ordkit::Vec la = need_lambda();
    if (lambda2_text.empty()) throw std::invalid_argument("--lambda2 is required for --check semigroup");
    ordkit::Vec lb = parse_vec(lambda2_text);
    rep = ordkit::verify_semigroup(s, la, lb);
  } else if (check == "upfact") {
    ordkit::Vec la = need_lambda();
    rep = ordkit::verify_up_factorization(n, p, b, cc, la);
  } else if (check == "diamond") {
    ordkit::Vec la = need_lambda();
    int N = level > 0 ? level : cc;
    auto homs = ordkit::hom_group(n, p, b + 1, hom_m);
    rep.title = "diamond conjugation at level " + std::to_string(N) + " for " + s.str();
    long long isect = 0;
    for (std::size_t i = 0; i < homs.size(); ++i) {
      auto r = ordkit::diamond_conjugation_check(s, N, la, homs[i]);
      rep.add("torus functional " + std::to_string(i), r.report.ok(),
              r.report.ok() ? "invariant" : ordkit::failure_summary(r.report));
      isect = r.intersection_size;
    }
    payload["homomorphisms"] = homs.size();
    payload["intersection_size"] = isect;
  } else if (check == "homs") {
    auto homs = ordkit::hom_group(n, p, b, hom_m);
    long long g = 1;
    for (int i = 0; i < std::min(b - 1, hom_m); ++i) g *= p;
    long long expect = 1;
    for (int i = 0; i < n; ++i) expect *= g;
    rep.title = "homomorphism group from the diamond quotient, " + s.str();
    rep.add("hom group order", static_cast<long long>(homs.size()) == expect,
            std::to_string(homs.size()) + " homomorphisms");
    payload["count"] = homs.size();
  } else {
    throw std::invalid_argument("--check must be one of cosets, reps, semigroup, upfact, diamond, homs");
  }

  Json canonical = ordkit::report_to_json(rep);
  if (!payload.is_null()) canonical["payload"] = payload;
  return finish(canonical, c.out, rep.ok());
}

// ---- audit ----------------------------------------------------------------

int run_audit_cmd(const std::string& preset, long long p, long long l0,
                  const std::vector<std::string>& only, const CommonOpts& c) {
  auto rep = ordkit::run_audit(preset, p, l0, c.seed, only);
  Json canonical = ordkit::audit_to_json(rep);
  return finish(canonical, c.out, rep.ok(), ordkit::audit_timings_json(rep));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ordkit: exact root-datum combinatorics, Koszul Ext algebra, and dimension audits"};
  app.require_subcommand(1);
  std::function<int()> action;

  auto* rd = app.add_subcommand("rootdata", "validate a root datum and probe strong regularity");
  {
    static std::string preset, datum, chi;
    static CommonOpts c;
    rd->add_option("--preset", preset, "preset name (GL2, GL3, SL2, SL3, Sp4)");
    rd->add_option("--datum", datum, "path to a root datum JSON file");
    rd->add_option("--chi", chi, "comma-separated rational values of an unramified character");
    add_common(rd, c);
    rd->callback([&]() { action = [&]() { return run_rootdata(preset, datum, chi, c); }; });
  }

  auto* hk = app.add_subcommand("hecke", "double coset counts and representatives");
  {
    static std::string preset, datum, lambda, lambda2;
    static long long p = 0;
    static bool emit_reps = false, oracle = false;
    static CommonOpts c;
    hk->add_option("--preset", preset, "preset name");
    hk->add_option("--datum", datum, "path to a root datum JSON file");
    hk->add_option("--lambda", lambda, "dominant cocharacter, comma-separated")->required();
    hk->add_option("--p", p, "prime")->required();
    hk->add_option("--lambda2", lambda2, "second cocharacter for the product identity");
    hk->add_flag("--emit-reps", emit_reps, "include the representative tuples in the report");
    hk->add_flag("--oracle", oracle, "cross-check against the matrix-group enumeration (GL_n, n <= 3)");
    add_common(hk, c);
    hk->callback([&]() {
      action = [&]() { return run_hecke(preset, datum, lambda, p, lambda2, emit_reps, oracle, c); };
    });
  }

  auto* ex = app.add_subcommand("ext", "Koszul Ext dimensions and the generation verdict");
  {
    static int vars = 0, q0 = 0;
    static std::string field = "Q", gens;
    static CommonOpts c;
    ex->add_option("--vars", vars, "number of variables")->required();
    ex->add_option("--field", field, "Q, F<p>, or Fp:<p>")->capture_default_str();
    ex->add_option("--gens", gens, "generators: inline JSON or a path to a JSON file")->required();
    ex->add_option("--q0", q0, "bottom cohomological degree for the placement table")->capture_default_str();
    add_common(ex, c);
    ex->callback([&]() { action = [&]() { return run_ext(vars, field, gens, q0, c); }; });
  }

  auto* dm = app.add_subcommand("dims", "audit a dimension ledger");
  {
    static std::string ledger, preset;
    static long long l0 = 0;
    static CommonOpts c;
    dm->add_option("--ledger", ledger, "path to a ledger JSON file");
    dm->add_option("--preset", preset, "build the crystalline ledger for a preset instead");
    dm->add_option("--l0", l0, "defect for --preset")->capture_default_str();
    add_common(dm, c);
    dm->callback([&]() { action = [&]() { return run_dims(ledger, preset, l0, c); }; });
  }

  auto* fi = app.add_subcommand("finite", "matrix-group checks over Z/p^k");
  {
    static int n = 0, b = 1, cc = 1, level = 0, hom_m = 1;
    static long long p = 0;
    static std::string check, lambda, lambda2;
    static CommonOpts c;
    fi->add_option("--n", n, "matrix size")->required();
    fi->add_option("--p", p, "prime")->required();
    fi->add_option("--b", b, "congruence depth b")->capture_default_str();
    fi->add_option("--c", cc, "congruence depth c")->capture_default_str();
    fi->add_option("--check", check, "cosets | reps | semigroup | upfact | diamond | homs")->required();
    fi->add_option("--lambda", lambda, "cocharacter, comma-separated");
    fi->add_option("--lambda2", lambda2, "second cocharacter (semigroup)");
    fi->add_option("--level", level, "working level N for diamond (default: c)");
    fi->add_option("--hom-m", hom_m, "target exponent m for Z/p^m functionals")->capture_default_str();
    add_common(fi, c);
    fi->callback([&]() {
      action = [&]() { return run_finite(n, p, b, cc, check, lambda, lambda2, level, hom_m, c); };
    });
  }

  auto* au = app.add_subcommand("audit", "run the cross-module consistency chain");
  {
    static std::string preset;
    static long long p = 0, l0 = 0;
    static std::vector<std::string> only;
    static CommonOpts c;
    au->add_option("--preset", preset, "preset name")->required();
    au->add_option("--p", p, "prime")->required();
    au->add_option("--l0", l0, "defect, 0 <= l0 <= r")->capture_default_str();
    au->add_option("--only", only, "run only the named checks (repeatable)");
    add_common(au, c);
    au->callback([&]() { action = [&]() { return run_audit_cmd(preset, p, l0, only, c); }; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return action();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
}
