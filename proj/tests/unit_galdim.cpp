#include "doctest.h"

#include <random>
#include <vector>

#include "ordkit/galdim.hpp"

using ordkit::build_preset;
using ordkit::DimLedger;
using ordkit::LocalDatum;
using ordkit::RootDatum;
using ordkit::Vec;

namespace {

std::vector<RootDatum> presets() {
  return {build_preset("GL", 2), build_preset("GL", 3), build_preset("SL", 2), build_preset("SL", 3),
          build_preset("Sp", 4)};
}

// rejection-sample a strictly dominant cocharacter with small entries
Vec random_strict_dominant(const RootDatum& d, std::mt19937& rng) {
  std::uniform_int_distribution<long long> coord(-5, 5);
  for (int tries = 0; tries < 10000; ++tries) {
    Vec chi(static_cast<std::size_t>(d.rank), 0);
    for (auto& x : chi) x = coord(rng);
    if (ordkit::is_strictly_dominant(d, chi)) return chi;
  }
  throw std::runtime_error("no strictly dominant sample found");
}

}  // namespace

TEST_CASE("Lie dimensions from a root datum") {
  auto gl2 = ordkit::lie_dims(build_preset("GL", 2));
  CHECK(gl2.r == 2);
  CHECK(gl2.dim_u == 1);
  CHECK(gl2.dim_b == 3);
  CHECK(gl2.dim_g == 4);
  auto gl3 = ordkit::lie_dims(build_preset("GL", 3));
  CHECK(gl3.dim_u == 3);
  CHECK(gl3.dim_b == 6);
  CHECK(gl3.dim_g == 9);
  auto sl2 = ordkit::lie_dims(build_preset("SL", 2));
  CHECK(sl2.r == 1);
  CHECK(sl2.dim_g == 3);
  auto sp4 = ordkit::lie_dims(build_preset("Sp", 4));
  CHECK(sp4.r == 2);
  CHECK(sp4.dim_u == 4);
  CHECK(sp4.dim_g == 10);
}

TEST_CASE("local Euler characteristic and finite-part dimensions") {
  CHECK(ordkit::local_euler_h1(0, 0, 1, 3) == 3);
  CHECK(ordkit::local_euler_h1(1, 1, 1, 1) == 3);
  CHECK(ordkit::local_euler_h1(2, 0, 2, 4) == 10);
  CHECK_THROWS_AS(ordkit::local_euler_h1(-1, 0, 1, 1), std::invalid_argument);

  CHECK(ordkit::h1f_dim(0, 1, 1) == 1);
  CHECK(ordkit::h1f_dim(2, 1, 0) == 2);
  CHECK(ordkit::h1f_dim(0, 1, 3) == 3);  // number of negative weights on the full Lie algebra of GL3
  CHECK_THROWS_AS(ordkit::h1f_dim(0, -1, 0), std::invalid_argument);
}

TEST_CASE("Borel quotient rank via two routes") {
  CHECK(ordkit::borel_quotient_rank(build_preset("GL", 2)) == 2);
  CHECK(ordkit::borel_quotient_rank(build_preset("GL", 3)) == 3);
  CHECK(ordkit::borel_quotient_rank(build_preset("SL", 2)) == 1);
  CHECK(ordkit::borel_quotient_rank(build_preset("Sp", 4)) == 2);
}

TEST_CASE("ledger validation") {
  auto led = ordkit::ledger_from_datum(build_preset("GL", 2), 1);
  CHECK(led.r == 2);
  CHECK(led.dim_LieB == 3);
  led.validate();

  // Euler identity is enforced as soon as h0, h1, h2 are all present
  LocalDatum ok;
  ok.place = "p";
  ok.h0 = 1;
  ok.h2 = 1;
  ok.dimV = 1;
  ok.h1 = 3;
  ok.validate();
  LocalDatum bad = ok;
  bad.h1 = 2;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  LocalDatum partial = ok;
  partial.h1.reset();  // underdetermined data is fine
  partial.validate();

  auto broken = led;
  broken.dim_LieB = 4;
  CHECK_THROWS_AS(broken.validate(), std::invalid_argument);

  auto qled = led;
  qled.d = 4;
  CHECK_THROWS_AS(qled.validate(), std::invalid_argument);  // d - l0 odd
  qled.d = 5;
  qled.q0 = 2;
  qled.validate();
  qled.q0 = 3;
  CHECK_THROWS_AS(qled.validate(), std::invalid_argument);
}

TEST_CASE("Greenberg-Wiles difference") {
  // all-zero ledger
  auto led = ordkit::ledger_from_datum(build_preset("GL", 2), 0);
  led.h0_V = 0;
  led.h0_Vdual1 = 0;
  CHECK(ordkit::greenberg_wiles(led) == 0);

  // crystalline ledger for GL2, l0=1: p gives +1, infinity gives -2
  auto crys = ordkit::crystalline_ledger(build_preset("GL", 2), 1);
  crys.validate();
  CHECK(ordkit::greenberg_wiles(crys) == -1);
  // so dual_selmer = selmer + 1 is accepted, anything else is not
  crys.selmer = 2;
  crys.dual_selmer = 3;
  CHECK(ordkit::greenberg_wiles(crys) == -1);
  crys.dual_selmer = 2;
  CHECK_THROWS_AS(ordkit::greenberg_wiles(crys), std::invalid_argument);

  auto missing = led;
  missing.h0_V.reset();
  CHECK_THROWS_AS(ordkit::greenberg_wiles(missing), std::invalid_argument);
  auto no_t = led;
  LocalDatum stub;
  stub.place = "q";
  stub.h0 = 0;
  no_t.locals.push_back(stub);
  CHECK_THROWS_AS(ordkit::greenberg_wiles(no_t), std::invalid_argument);
}

TEST_CASE("dual Selmer offset recomputes l0 for every preset") {
  CHECK(ordkit::dual_selmer_offset(build_preset("GL", 2), 1) == 1);
  CHECK(ordkit::dual_selmer_offset(build_preset("GL", 3), 2) == 2);
  for (const auto& d : presets()) {
    for (long long l0 = 0; l0 <= d.rank; ++l0) CHECK(ordkit::dual_selmer_offset(d, l0) == l0);
  }
  CHECK_THROWS_AS(ordkit::dual_selmer_offset(build_preset("GL", 2), -1), std::invalid_argument);
}

TEST_CASE("ordinary tangent and smoothness dimensions") {
  CHECK(ordkit::ordinary_tangent_dim(build_preset("GL", 2), 0) == 3);
  CHECK(ordkit::ordinary_tangent_dim(build_preset("GL", 2), 1) == 4);
  CHECK(ordkit::ordinary_tangent_dim(build_preset("GL", 3), 0) == 6);

  CHECK(ordkit::smoothness_dim(build_preset("GL", 2), 1) == 1);
  CHECK(ordkit::smoothness_dim(build_preset("GL", 3), 2) == 1);
  CHECK(ordkit::smoothness_dim(build_preset("SL", 2), 0) == 1);
  for (const auto& d : presets())
    for (long long l0 = 0; l0 <= d.rank; ++l0) CHECK(ordkit::smoothness_dim(d, l0) == d.rank - l0);
  CHECK_THROWS_AS(ordkit::smoothness_dim(build_preset("GL", 2), 3), std::invalid_argument);
}

TEST_CASE("Poitou-Tate consistency") {
  // smooth-case tuples (0, l0, r, r - l0, 0)
  CHECK(ordkit::poitou_tate_consistency(0, 1, 2, 1, 0).ok());
  CHECK(ordkit::poitou_tate_consistency(0, 0, 2, 2, 0).ok());
  for (const auto& d : presets())
    for (long long l0 = 0; l0 <= d.rank; ++l0) {
      long long r = d.rank;
      CHECK(ordkit::poitou_tate_consistency(0, l0, r, r - l0, 0).ok());
      // every single-coordinate bump breaks the alternating sum
      CHECK_FALSE(ordkit::poitou_tate_consistency(1, l0, r, r - l0, 0).ok());
      CHECK_FALSE(ordkit::poitou_tate_consistency(0, l0 + 1, r, r - l0, 0).ok());
      CHECK_FALSE(ordkit::poitou_tate_consistency(0, l0, r + 1, r - l0, 0).ok());
      CHECK_FALSE(ordkit::poitou_tate_consistency(0, l0, r, r - l0 + 1, 0).ok());
      CHECK_FALSE(ordkit::poitou_tate_consistency(0, l0, r, r - l0, 1).ok());
    }
  auto rep = ordkit::poitou_tate_consistency(1, 1, 2, 3, 0);
  CHECK_FALSE(rep.ok());
  CHECK(rep.first_failure()->detail.find("-1") != std::string::npos);
  CHECK(rep.title.find("no cohomology computed") != std::string::npos);
  CHECK_THROWS_AS(ordkit::poitou_tate_consistency(-1, 0, 0, 0, 0), std::invalid_argument);
}

TEST_CASE("cokernel and Leopoldt bookkeeping") {
  CHECK(ordkit::coker_psi_dim(2, 1, 0) == 1);  // matches the dual Selmer offset in the smooth GL2 case
  CHECK(ordkit::coker_psi_dim(2, 2, 0) == 0);
  CHECK(ordkit::coker_psi_dim(2, 0, 0) == 2);
  CHECK(ordkit::coker_psi_dim(3, 2, 1) == 2);
  CHECK_THROWS_AS(ordkit::coker_psi_dim(2, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(ordkit::coker_psi_dim(1, 2, 0), std::invalid_argument);

  CHECK(ordkit::leopoldt_h1(0, 0) == 1);
  CHECK(ordkit::leopoldt_h1(1, 0) == 2);
  CHECK(ordkit::leopoldt_h1(2, 1) == 4);
  CHECK_THROWS_AS(ordkit::leopoldt_h1(-1, 0), std::invalid_argument);
}

TEST_CASE("Hodge-Tate profiles") {
  auto p2 = ordkit::ht_profile(build_preset("GL", 2), {1, 0});
  CHECK(p2.weights == std::map<long long, long long>{{-1, 1}, {0, 2}, {1, 1}});
  auto p3 = ordkit::ht_profile(build_preset("GL", 3), {2, 1, 0});
  CHECK(p3.weights == std::map<long long, long long>{{-2, 1}, {-1, 2}, {0, 3}, {1, 2}, {2, 1}});
  CHECK(p3.negative_count() == 3);
  CHECK(p3.total() == 9);

  // non-regular chi has a vanishing pairing somewhere
  CHECK_THROWS_AS(ordkit::ht_profile(build_preset("GL", 2), {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(ordkit::ht_profile(build_preset("GL", 3), {2, 1, 1}), std::invalid_argument);

  std::mt19937 rng(2024);
  for (const auto& d : presets()) {
    auto ld = ordkit::lie_dims(d);
    for (int trial = 0; trial < 50; ++trial) {
      auto prof = ordkit::ht_profile(d, random_strict_dominant(d, rng));
      CHECK(prof.negative_count() == ld.dim_u);
      CHECK(prof.total() == ld.dim_g);
    }
  }
}

TEST_CASE("dimension audit lists the ledger identities") {
  auto led = ordkit::crystalline_ledger(build_preset("GL", 2), 1);
  led.selmer = 0;
  led.dual_selmer = 1;
  led.d = 3;
  led.q0 = 1;
  led.ordinary_tangent = 3;
  auto rep = ordkit::dimension_audit(led);
  CHECK(rep.ok());
  CHECK(rep.title.find("no cohomology computed") != std::string::npos);
  bool saw_gw = false, saw_q0 = false, saw_tangent = false;
  for (const auto& c : rep.checks) {
    saw_gw |= c.name == "Greenberg-Wiles ledger";
    saw_q0 |= c.name == "middle degree q0";
    saw_tangent |= c.name == "ordinary tangent dimension";
  }
  CHECK(saw_gw);
  CHECK(saw_q0);
  CHECK(saw_tangent);

  // single perturbations flip exactly the matching line
  auto bump = led;
  bump.dual_selmer = 2;
  auto brep = ordkit::dimension_audit(bump);
  CHECK_FALSE(brep.ok());
  CHECK(brep.first_failure()->name == "Greenberg-Wiles ledger");

  bump = led;
  bump.dim_LieU = 2;
  brep = ordkit::dimension_audit(bump);
  CHECK_FALSE(brep.ok());
  CHECK(brep.first_failure()->name == "Lie algebra additivity");

  bump = led;
  bump.q0 = 0;
  brep = ordkit::dimension_audit(bump);
  CHECK_FALSE(brep.ok());
  CHECK(brep.first_failure()->name == "middle degree q0");

  bump = led;
  bump.ordinary_tangent = 5;
  brep = ordkit::dimension_audit(bump);
  CHECK_FALSE(brep.ok());
  CHECK(brep.first_failure()->name == "ordinary tangent dimension");

  bump = led;
  bump.l0 = 3;
  brep = ordkit::dimension_audit(bump);
  CHECK_FALSE(brep.ok());
  CHECK(brep.first_failure()->name == "l0 within range");

  // a local Euler line appears once h0, h1, h2 are all present
  bump = led;
  LocalDatum full;
  full.place = "q2";
  full.h0 = 1;
  full.h1 = 3;
  full.h2 = 1;
  full.dimV = 1;
  full.t = 0;
  bump.locals.push_back(full);
  bump.selmer.reset();
  bump.dual_selmer.reset();
  brep = ordkit::dimension_audit(bump);
  CHECK(brep.ok());
  bump.locals.back().h1 = 4;
  brep = ordkit::dimension_audit(bump);
  CHECK_FALSE(brep.ok());
  CHECK(brep.first_failure()->name == "local Euler characteristic at q2");
}
