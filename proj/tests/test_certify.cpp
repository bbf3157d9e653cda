#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "crncert/certify.hpp"
#include "helpers.hpp"

using namespace crncert;

namespace {
const char* tail_text = "species: A B C D\nC <-> D\nC + D <-> B\nB <-> 2A\n";
}

TEST_CASE("family members certify with the oracle kernel covector") {
  for (int k = 2; k <= 8; ++k) {
    Certificate cert = certify(family_network(k));
    INFO("k = " << k << " detail: " << cert.detail);
    CHECK(cert.overall == "certified");
    CHECK(cert.c_policy == "default");
    RatVec oracle = primitive_integer(testutil::cofactor_kernel(stoichiometric_matrix(family_network(k))));
    if (dot(oracle, cert.c) < 0)
      for (auto& q : oracle) q = -q;
    CHECK(cert.r == oracle);
  }
  CHECK(certify(family_network(2)).r == RatVec{Rat(2), Rat(1), Rat(1)});
  CHECK(certify(family_network(3)).r == RatVec{Rat(2), Rat(1), Rat(1), Rat(1)});
}

TEST_CASE("the four-species tail network certifies with r = (1,2,1,1)") {
  Certificate cert = certify(parse_network(tail_text));
  CHECK(cert.overall == "certified");
  CHECK(cert.r == RatVec{Rat(1), Rat(2), Rat(1), Rat(1)});
  REQUIRE(cert.d.has_value());
  CHECK(*cert.d == RatVec{Rat(1, 2), Rat(1), Rat(1), Rat(1)});
  REQUIRE(cert.p.has_value());
}

TEST_CASE("A + B <-> C is refuted on persistence with zero-set {A, C}") {
  Certificate cert = certify(parse_network("A + B <-> C\n"));
  CHECK(cert.overall == "refuted");
  CHECK(cert.detail == "persistence");
  CHECK(cert.verdicts.persistence == Verdict::Fail);
  bool has_ac = false;
  for (const auto& zs : cert.failing_zero_sets)
    if (zs == std::vector<int>{0, 2}) has_ac = true;
  CHECK(has_ac);
}

TEST_CASE("an irreversible chain is inapplicable, not refuted") {
  Certificate cert = certify(parse_network("A -> B\nB <-> C\n"));
  CHECK(cert.verdicts.persistence == Verdict::NotRun);
  // strong connectivity fails with the irreversible arc, so this network is
  // actually refuted on that condition
  CHECK(cert.overall == "refuted");
  CHECK(cert.detail == "strong_connectivity");

  // a fully irreversible cycle is strongly connected but persistence can
  // never be evaluated
  Certificate cyc = certify(parse_network("A -> B\nB -> C\nC -> A\n"));
  CHECK(cyc.verdicts.persistence == Verdict::NotRun);
  CHECK(cyc.overall == "inapplicable");
}

TEST_CASE("a provided c that lies in the image is flagged") {
  ReactionNetwork net = family_network(2);
  RatMat gamma = stoichiometric_matrix(net);
  RatVec bad = gamma.col(0);
  Certificate cert = certify(net, bad);
  CHECK(cert.c_policy == "provided");
  CHECK(cert.verdicts.c_choice_valid == Verdict::Fail);
  CHECK(cert.overall == "refuted");

  Certificate good = certify(net, unit_vec(3, 1));
  CHECK(good.overall == "certified");
}

TEST_CASE("species permutation does not change certifiability") {
  auto base = parse_network(tail_text);
  auto permuted = parse_network("species: D B A C\nC <-> D\nC + D <-> B\nB <-> 2A\n");
  Certificate c1 = certify(base), c2 = certify(permuted);
  CHECK(c1.overall == "certified");
  CHECK(c2.overall == "certified");
  // r is carried along the species permutation (D B A C <- A B C D)
  REQUIRE(c2.r.size() == 4);
  RatVec expect{c1.r[3], c1.r[1], c1.r[0], c1.r[2]};
  CHECK(c2.r == expect);
}

TEST_CASE("certificates survive a JSON round trip") {
  for (const char* text : {tail_text, "A + B <-> C\n"}) {
    Certificate cert = certify(parse_network(text));
    json j = certificate_to_json(cert);
    Certificate back = certificate_from_json(json::parse(j.dump()));
    CHECK(back.overall == cert.overall);
    CHECK(back.digest == cert.digest);
    CHECK(back.r == cert.r);
    CHECK(back.c == cert.c);
    CHECK(back.p.has_value() == cert.p.has_value());
    if (cert.p) CHECK(*back.p == *cert.p);
    CHECK(back.failing_zero_sets == cert.failing_zero_sets);
    CHECK(certificate_to_json(back).dump() == j.dump());
  }
}

TEST_CASE("verification accepts genuine certificates") {
  for (int k = 2; k <= 5; ++k) CHECK(verify_certificate(certify(family_network(k))));
  CHECK(verify_certificate(certify(parse_network(tail_text))));
  CHECK(verify_certificate(certify(parse_network("A + B <-> C\n"))));
}

TEST_CASE("verification is invariant under positive rescaling of r") {
  Certificate cert = certify(parse_network(tail_text));
  for (auto& q : cert.r) q *= 2;
  CHECK(verify_certificate(cert));
}

TEST_CASE("verification rejects tampered certificates") {
  Certificate cert = certify(parse_network(tail_text));
  REQUIRE(cert.certified());

  SECTION("negative entry smuggled into P") {
    REQUIRE(cert.p.has_value());
    (*cert.p)(0, 0) -= Rat(1, 7);
    CHECK(!verify_certificate(cert));
  }
  SECTION("digest mismatch") {
    cert.digest[0] = cert.digest[0] == '0' ? '1' : '0';
    CHECK(!verify_certificate(cert));
  }
  SECTION("r not in the kernel") {
    cert.r[0] += 1;
    CHECK(!verify_certificate(cert));
  }
  SECTION("verdict flipped to pass on a failing network") {
    Certificate bad = certify(parse_network("A + B <-> C\n"));
    bad.verdicts.persistence = Verdict::Pass;
    CHECK(!verify_certificate(bad));
  }
  SECTION("certified claim without witnesses") {
    Certificate bad = cert;
    bad.p.reset();
    CHECK(!verify_certificate(bad));
  }
  SECTION("tampered diagonal rescale") {
    REQUIRE(cert.d.has_value());
    (*cert.d)[0] = Rat(1, 3);
    CHECK(!verify_certificate(cert));
  }
}
