#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ua/algebra.hpp"
#include "ua/error.hpp"
#include "ua/maltsev.hpp"
#include "ua/term.hpp"
#include "ua/variety.hpp"

namespace ua {

using nlohmann::json;

// Algebra format:
//   {"name": str, "size": int,
//    "operations": [{"name": str, "arity": int, "table": [int, ...]}]}
// with tables in assignment-index order.
inline json algebra_to_json(const FiniteAlgebra& A) {
  json ops = json::array();
  for (int op = 0; op < A.sig().op_count(); ++op)
    ops.push_back({{"name", A.sig().name(op)},
                   {"arity", A.sig().arity(op)},
                   {"table", A.table(op)}});
  return {{"name", A.name()}, {"size", A.size()}, {"operations", ops}};
}

inline AlgebraPtr algebra_from_json(const json& j) {
  try {
    std::string name = j.at("name").get<std::string>();
    int size = j.at("size").get<int>();
    std::vector<OpSym> ops;
    std::vector<std::vector<int>> tables;
    for (const json& op : j.at("operations")) {
      ops.push_back({op.at("name").get<std::string>(), op.at("arity").get<int>()});
      tables.push_back(op.at("table").get<std::vector<int>>());
    }
    return FiniteAlgebra::make(std::move(name),
                               std::make_shared<const Signature>(std::move(ops)), size,
                               std::move(tables));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed algebra JSON: ") + e.what());
  }
}

// Free algebra report: {"n": int, "size": int, "witnesses": [s-expr, ...]}.
inline json free_algebra_to_json(const FreeAlgebra& F, const Signature& sig) {
  json witnesses = json::array();
  for (const Term& w : F.witnesses) witnesses.push_back(render_term(w, sig));
  return {{"n", F.n}, {"size", F.size()}, {"witnesses", witnesses}};
}

// Witness bundle format: sizes k, m, N plus the nine term lists as
// s-expressions.
inline json bundle_to_json(const WitnessBundle& b, const Signature& sig) {
  auto terms = [&](const std::vector<Term>& list) {
    json out = json::array();
    for (const Term& t : list) out.push_back(render_term(t, sig));
    return out;
  };
  return {{"k", b.k},          {"m", b.m},          {"N", b.N},
          {"f", terms(b.f)},   {"g", terms(b.g)},   {"p", terms(b.p)},
          {"s", terms(b.s)},   {"sigma", terms(b.sigma)},
          {"eta1", terms(b.eta1)}, {"eta2", terms(b.eta2)},
          {"eps1", terms(b.eps1)}, {"eps2", terms(b.eps2)}};
}

inline WitnessBundle bundle_from_json(const json& j, const Signature& sig) {
  try {
    WitnessBundle b;
    b.k = j.at("k").get<int>();
    b.m = j.at("m").get<int>();
    b.N = j.at("N").get<int>();
    auto terms = [&](const char* key) {
      std::vector<Term> out;
      for (const json& t : j.at(key)) out.push_back(parse_term(t.get<std::string>(), sig));
      return out;
    };
    b.f = terms("f");
    b.g = terms("g");
    b.p = terms("p");
    b.s = terms("s");
    b.sigma = terms("sigma");
    b.eta1 = terms("eta1");
    b.eta2 = terms("eta2");
    b.eps1 = terms("eps1");
    b.eps2 = terms("eps2");
    return b;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed bundle JSON: ") + e.what());
  }
}

// Certificate format: the separating algebra as algebra JSON, its provenance
// (power, subalgebra elements, congruence block ids), the two maps as value
// vectors, and the target index.
inline json certificate_to_json(const SeparationCertificate& cert) {
  return {{"S", algebra_to_json(*cert.S)},
          {"provenance",
           {{"power", cert.provenance.power},
            {"subalgebra", cert.provenance.subalgebra},
            {"congruence", cert.provenance.congruence}}},
          {"u", cert.u},
          {"v", cert.v},
          {"target", cert.target}};
}

inline SeparationCertificate certificate_from_json(const json& j) {
  try {
    SeparationCertificate cert;
    cert.S = algebra_from_json(j.at("S"));
    cert.provenance.power = j.at("provenance").at("power").get<int>();
    cert.provenance.subalgebra = j.at("provenance").at("subalgebra").get<std::vector<int>>();
    cert.provenance.congruence = j.at("provenance").at("congruence").get<std::vector<int>>();
    cert.u = j.at("u").get<std::vector<int>>();
    cert.v = j.at("v").get<std::vector<int>>();
    cert.target = j.at("target").get<int>();
    return cert;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed certificate JSON: ") + e.what());
  }
}

inline const char* verdict_name(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Yes: return "yes";
    case VerdictKind::No: return "no";
    default: return "unknown";
  }
}

inline json verdict_to_json(const Verdict& v) {
  json out = {{"verdict", verdict_name(v.kind)}, {"justification", v.justification}};
  if (v.certificate) out["certificate"] = certificate_to_json(*v.certificate);
  if (v.kind == VerdictKind::Unknown) out["exhausted_power"] = v.exhausted_power;
  return out;
}

inline Verdict verdict_from_json(const json& j) {
  try {
    Verdict v;
    std::string kind = j.at("verdict").get<std::string>();
    v.kind = kind == "yes"    ? VerdictKind::Yes
             : kind == "no"   ? VerdictKind::No
                              : VerdictKind::Unknown;
    v.justification = j.value("justification", "");
    if (j.contains("certificate")) v.certificate = certificate_from_json(j.at("certificate"));
    v.exhausted_power = j.value("exhausted_power", 0);
    return v;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed verdict JSON: ") + e.what());
  }
}

}  // namespace ua
