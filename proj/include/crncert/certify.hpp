#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "crncert/cone.hpp"
#include "crncert/digraph.hpp"
#include "crncert/kinetics.hpp"
#include "crncert/linalg.hpp"
#include "crncert/network.hpp"

namespace crncert {

enum class Verdict { Pass, Fail, NotRun };

inline const char* verdict_str(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    default: return "not-run";
  }
}

inline Verdict verdict_of(const std::string& s) {
  if (s == "pass") return Verdict::Pass;
  if (s == "fail") return Verdict::Fail;
  if (s == "not-run") return Verdict::NotRun;
  throw std::invalid_argument("bad verdict: " + s);
}

struct CertificateVerdicts {
  Verdict rank_full = Verdict::NotRun;
  Verdict kernel_dim_one = Verdict::NotRun;
  Verdict c_choice_valid = Verdict::NotRun;
  Verdict right_inverse = Verdict::NotRun;
  Verdict diagonal_rescale = Verdict::NotRun;
  Verdict kinetics_sign_class = Verdict::NotRun;
  Verdict strong_connectivity = Verdict::NotRun;
  Verdict persistence = Verdict::NotRun;
};

// Exact, self-contained record of a Theorem 4 + Theorem 5 hypothesis check.
// Lambda is implicit through (network, c); all witness identities can be
// re-verified from the serialized fields alone.
struct Certificate {
  std::string version = "1";
  std::string network_text;  // canonical rendered form
  std::string digest;
  int m = 0, n = 0;
  RatVec c;              // empty when no usable c exists
  std::string c_policy;  // "provided" | "default" | "exhausted-defaults" | "none"
  CertificateVerdicts verdicts;
  RatVec r;                      // empty when not computed
  std::optional<RatMat> p;       // nonnegative right inverse
  std::optional<RatVec> d;       // positive diagonal rescale
  std::vector<std::vector<int>> failing_zero_sets;  // persistence diagnostics
  std::string overall;  // "certified" | "refuted" | "inapplicable"
  std::string detail;   // failing condition / reason

  bool certified() const { return overall == "certified"; }
};

namespace detail {

inline bool is_pm1_or_0(const Rat& q) { return q == 0 || q == 1 || q == -1; }

inline RatMat lambda_of(const RatMat& gamma, const RatVec& c) {
  CubeMatrix b(gamma.cols());
  RatMat lam(gamma.rows(), int(b.cols()));
  for (int j = 1; j <= b.cols(); ++j) {
    RatVec col = c + gamma * b.column(j);
    for (int i = 0; i < gamma.rows(); ++i) lam(i, j - 1) = col[i];
  }
  return lam;
}

}  // namespace detail

inline Certificate certify(const ReactionNetwork& net, std::optional<RatVec> c_opt = std::nullopt) {
  Certificate cert;
  cert.network_text = render(net);
  cert.digest = network_digest(net);
  RatMat gamma = stoichiometric_matrix(net);
  cert.m = gamma.rows();
  cert.n = gamma.cols();

  const int rk = rank(gamma);
  const bool shape_ok = (cert.m == cert.n + 1);
  cert.verdicts.rank_full = (rk == cert.n) ? Verdict::Pass : Verdict::Fail;
  cert.verdicts.kernel_dim_one = (cert.m - rk == 1) ? Verdict::Pass : Verdict::Fail;

  cert.verdicts.kinetics_sign_class = kinetics_sign_class_ok(net) ? Verdict::Pass : Verdict::Fail;
  cert.verdicts.strong_connectivity =
      is_strongly_connected(structural_digraph(net)) ? Verdict::Pass : Verdict::Fail;

  if (net.fully_reversible()) {
    ElementaryFaceReport faces = repelling_faces_check(net);
    cert.verdicts.persistence = faces.all_repelling ? Verdict::Pass : Verdict::Fail;
    cert.failing_zero_sets = faces.failing_zero_sets;
  }

  // Cone construction and the condition-1 witnesses need the (n+1) x n
  // full-rank setting.
  if (shape_ok && rk == cert.n) {
    auto try_c = [&](const RatVec& c) -> bool {
      if (in_column_space(gamma, c)) return false;
      CubicCone cone = build_cubic_cone(gamma, c);
      auto p = find_nonneg_right_inverse(cone.lambda);
      auto d = find_diagonal_rescale(cone.lambda);
      cert.c = c;
      cert.r = cone.r;
      cert.verdicts.c_choice_valid = Verdict::Pass;
      cert.verdicts.right_inverse = p ? Verdict::Pass : Verdict::Fail;
      cert.verdicts.diagonal_rescale = d ? Verdict::Pass : Verdict::Fail;
      if (p) cert.p = p->p;
      if (d) cert.d = d->d;
      return p && d;
    };

    if (c_opt) {
      cert.c_policy = "provided";
      if (in_column_space(gamma, *c_opt)) {
        cert.c = *c_opt;
        cert.verdicts.c_choice_valid = Verdict::Fail;
      } else {
        try_c(*c_opt);
      }
    } else {
      // paper uses c = e_n in both worked examples; try e_{m-1} first, then
      // the remaining unit vectors
      std::vector<int> order{cert.m - 2};
      for (int k = 0; k < cert.m; ++k)
        if (k != cert.m - 2) order.push_back(k);
      bool done = false;
      int fallback = -1;
      for (int k : order) {
        if (in_column_space(gamma, unit_vec(cert.m, k))) continue;
        if (fallback < 0) fallback = k;
        if (try_c(unit_vec(cert.m, k))) {
          cert.c_policy = "default";
          done = true;
          break;
        }
      }
      if (!done) {
        if (fallback >= 0) {
          try_c(unit_vec(cert.m, fallback));
          cert.c_policy = "exhausted-defaults";
        } else {
          cert.c_policy = "none";
          cert.verdicts.c_choice_valid = Verdict::Fail;
        }
      }
    }
  }

  // Overall verdict. Shape mismatch is "outside theorem scope", not a
  // refutation; but a failing shape-independent hypothesis still refutes.
  struct Item {
    const char* name;
    Verdict v;
    bool needs_shape;
  };
  const Item items[] = {
      {"rank_full", cert.verdicts.rank_full, true},
      {"kernel_dim_one", cert.verdicts.kernel_dim_one, true},
      {"c_choice_valid", cert.verdicts.c_choice_valid, true},
      {"right_inverse", cert.verdicts.right_inverse, true},
      {"diagonal_rescale", cert.verdicts.diagonal_rescale, true},
      {"kinetics_sign_class", cert.verdicts.kinetics_sign_class, false},
      {"strong_connectivity", cert.verdicts.strong_connectivity, false},
      {"persistence", cert.verdicts.persistence, false},
  };
  const char* failed = nullptr;
  bool all_pass = true;
  for (const Item& it : items) {
    if (it.needs_shape && !shape_ok) {
      all_pass = false;
      continue;
    }
    if (it.v == Verdict::Fail && !failed) failed = it.name;
    if (it.v != Verdict::Pass) all_pass = false;
  }
  if (failed) {
    cert.overall = "refuted";
    cert.detail = failed;
  } else if (!shape_ok) {
    cert.overall = "inapplicable";
    cert.detail = "m != n+1 (Theorem is stated for (n+1) x n stoichiometric matrices)";
  } else if (!net.fully_reversible()) {
    cert.overall = "inapplicable";
    cert.detail = "irreversible reactions: the repelling-face criterion is not established";
  } else if (all_pass) {
    cert.overall = "certified";
  } else {
    cert.overall = "inapplicable";
    cert.detail = "not all conditions could be evaluated";
  }
  return cert;
}

// ---- serialization ------------------------------------------------------

using json = nlohmann::ordered_json;

namespace detail {

inline json vec_json(const RatVec& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(rat_str(q));
  return a;
}

inline RatVec vec_of_json(const json& a) {
  RatVec v;
  for (const auto& s : a) v.push_back(parse_rat(s.get<std::string>()));
  return v;
}

inline json mat_json(const RatMat& m) {
  json a = json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) a.push_back(rat_str(m(i, j)));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", a}};
}

inline RatMat mat_of_json(const json& j) {
  RatMat m(j.at("rows").get<int>(), j.at("cols").get<int>());
  const json& a = j.at("data");
  if (int(a.size()) != m.rows() * m.cols()) throw std::invalid_argument("matrix data size mismatch");
  std::size_t k = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int c = 0; c < m.cols(); ++c) m(i, c) = parse_rat(a[k++].get<std::string>());
  return m;
}

}  // namespace detail

inline json certificate_to_json(const Certificate& cert) {
  json verdicts = {
      {"rank_full", verdict_str(cert.verdicts.rank_full)},
      {"kernel_dim_one", verdict_str(cert.verdicts.kernel_dim_one)},
      {"c_choice_valid", verdict_str(cert.verdicts.c_choice_valid)},
      {"right_inverse", verdict_str(cert.verdicts.right_inverse)},
      {"diagonal_rescale", verdict_str(cert.verdicts.diagonal_rescale)},
      {"kinetics_sign_class", verdict_str(cert.verdicts.kinetics_sign_class)},
      {"strong_connectivity", verdict_str(cert.verdicts.strong_connectivity)},
      {"persistence", verdict_str(cert.verdicts.persistence)},
  };
  json witnesses = {
      {"r", detail::vec_json(cert.r)},
      {"P", cert.p ? detail::mat_json(*cert.p) : json(nullptr)},
      {"D", cert.d ? detail::vec_json(*cert.d) : json(nullptr)},
      {"failing_zero_sets", cert.failing_zero_sets},
  };
  return json{
      {"version", cert.version},
      {"network", cert.network_text},
      {"digest", cert.digest},
      {"m", cert.m},
      {"n", cert.n},
      {"c", detail::vec_json(cert.c)},
      {"c_policy", cert.c_policy},
      {"verdicts", verdicts},
      {"witnesses", witnesses},
      {"overall", cert.overall},
      {"detail", cert.detail},
  };
}

inline Certificate certificate_from_json(const json& j) {
  Certificate cert;
  cert.version = j.at("version").get<std::string>();
  cert.network_text = j.at("network").get<std::string>();
  cert.digest = j.at("digest").get<std::string>();
  cert.m = j.at("m").get<int>();
  cert.n = j.at("n").get<int>();
  cert.c = detail::vec_of_json(j.at("c"));
  cert.c_policy = j.at("c_policy").get<std::string>();
  const json& v = j.at("verdicts");
  cert.verdicts.rank_full = verdict_of(v.at("rank_full"));
  cert.verdicts.kernel_dim_one = verdict_of(v.at("kernel_dim_one"));
  cert.verdicts.c_choice_valid = verdict_of(v.at("c_choice_valid"));
  cert.verdicts.right_inverse = verdict_of(v.at("right_inverse"));
  cert.verdicts.diagonal_rescale = verdict_of(v.at("diagonal_rescale"));
  cert.verdicts.kinetics_sign_class = verdict_of(v.at("kinetics_sign_class"));
  cert.verdicts.strong_connectivity = verdict_of(v.at("strong_connectivity"));
  cert.verdicts.persistence = verdict_of(v.at("persistence"));
  const json& w = j.at("witnesses");
  cert.r = detail::vec_of_json(w.at("r"));
  if (!w.at("P").is_null()) cert.p = detail::mat_of_json(w.at("P"));
  if (!w.at("D").is_null()) cert.d = detail::vec_of_json(w.at("D"));
  cert.failing_zero_sets = w.at("failing_zero_sets").get<std::vector<std::vector<int>>>();
  cert.overall = j.at("overall").get<std::string>();
  cert.detail = j.at("detail").get<std::string>();
  return cert;
}

// Recomputes every witness identity and every structural verdict from the
// serialized data alone. Scaling-invariant: any positive multiple of r
// verifies.
inline bool verify_certificate(const Certificate& cert) {
  ReactionNetwork net;
  try {
    net = parse_network(cert.network_text);
  } catch (const ParseError&) {
    return false;
  }
  if (network_digest(net) != cert.digest) return false;
  RatMat gamma = stoichiometric_matrix(net);
  if (gamma.rows() != cert.m || gamma.cols() != cert.n) return false;

  const int rk = rank(gamma);
  if ((cert.verdicts.rank_full == Verdict::Pass) != (rk == cert.n)) return false;
  if ((cert.verdicts.kernel_dim_one == Verdict::Pass) != (cert.m - rk == 1)) return false;
  if ((cert.verdicts.kinetics_sign_class == Verdict::Pass) != kinetics_sign_class_ok(net)) return false;
  if ((cert.verdicts.strong_connectivity == Verdict::Pass) !=
      is_strongly_connected(structural_digraph(net)))
    return false;
  if (net.fully_reversible()) {
    ElementaryFaceReport faces = repelling_faces_check(net);
    if ((cert.verdicts.persistence == Verdict::Pass) != faces.all_repelling) return false;
  } else if (cert.verdicts.persistence != Verdict::NotRun) {
    return false;
  }

  if (!cert.r.empty()) {
    if (int(cert.r.size()) != cert.m) return false;
    if (!is_zero(gamma.transpose() * cert.r)) return false;
    if (!cert.c.empty() && dot(cert.r, cert.c) <= 0) return false;
  }

  std::optional<RatMat> lam;
  if (!cert.c.empty() && rk == cert.n && cert.m > cert.n)
    lam = detail::lambda_of(gamma, cert.c);

  if (cert.verdicts.c_choice_valid == Verdict::Pass &&
      (cert.c.empty() || in_column_space(gamma, cert.c)))
    return false;

  if (cert.p) {
    if (!lam) return false;
    if (cert.p->rows() != lam->cols() || cert.p->cols() != cert.m) return false;
    for (int i = 0; i < cert.p->rows(); ++i)
      for (int j = 0; j < cert.p->cols(); ++j)
        if ((*cert.p)(i, j) < 0) return false;
    if (*lam * *cert.p != RatMat::identity(cert.m)) return false;
  } else if (cert.verdicts.right_inverse == Verdict::Pass) {
    return false;
  }

  if (cert.d) {
    if (!lam) return false;
    if (int(cert.d->size()) != cert.m) return false;
    for (int i = 0; i < cert.m; ++i) {
      if ((*cert.d)[i] <= 0) return false;
      for (int j = 0; j < lam->cols(); ++j)
        if (!detail::is_pm1_or_0((*cert.d)[i] * (*lam)(i, j))) return false;
    }
  } else if (cert.verdicts.diagonal_rescale == Verdict::Pass) {
    return false;
  }

  if (cert.certified()) {
    const Verdict all[] = {cert.verdicts.rank_full,          cert.verdicts.kernel_dim_one,
                           cert.verdicts.c_choice_valid,     cert.verdicts.right_inverse,
                           cert.verdicts.diagonal_rescale,   cert.verdicts.kinetics_sign_class,
                           cert.verdicts.strong_connectivity, cert.verdicts.persistence};
    for (Verdict vd : all)
      if (vd != Verdict::Pass) return false;
    if (cert.r.empty() || cert.c.empty()) return false;
  }
  return true;
}

}  // namespace crncert
