// ua: compute with finitely generated varieties of universal algebras and
// decide Mal'tsev-type properties of them.
//
// Exit codes: 0 yes/success, 1 no/negative, 2 unknown, 3 resource cap,
// 4 input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ua/builtins.hpp"
#include "ua/json_io.hpp"
#include "ua/maltsev.hpp"
#include "ua/variety.hpp"

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitCap = 3;
constexpr int kExitInput = 4;

ua::AlgebraPtr load_algebra(const std::string& source) {
  if (auto builtin = ua::find_builtin_algebra(source)) return *builtin;
  std::ifstream in(source);
  if (!in) throw ua::InvalidArgument("no builtin algebra or readable file named '" + source +
                                     "'");
  ua::json j;
  try {
    in >> j;
  } catch (const ua::json::exception& e) {
    throw ua::InvalidArgument("could not parse '" + source + "' as JSON: " + e.what());
  }
  return ua::algebra_from_json(j);
}

ua::WitnessBundle load_bundle(const std::string& source, const ua::Signature& sig) {
  if (auto builtin = ua::find_builtin_bundle(source)) return *builtin;
  std::ifstream in(source);
  if (!in) throw ua::InvalidArgument("no builtin bundle or readable file named '" + source +
                                     "'");
  ua::json j;
  try {
    in >> j;
  } catch (const ua::json::exception& e) {
    throw ua::InvalidArgument("could not parse '" + source + "' as JSON: " + e.what());
  }
  return ua::bundle_from_json(j, sig);
}

struct GlobalOptions {
  bool json = false;
  std::size_t max_free_size = 0;  // 0: default or environment
  int max_power = 0;              // 0: default

  ua::Caps caps() const {
    ua::Caps caps;
    if (const char* env = std::getenv("UA_MAX_FREE_SIZE")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end && *end == '\0' && v > 0) caps.max_free_size = static_cast<std::size_t>(v);
    }
    if (max_free_size > 0) caps.max_free_size = max_free_size;
    if (max_power > 0) caps.max_power = max_power;
    return caps;
  }
};

void emit(const ua::json& j) { std::cout << j.dump(2) << "\n"; }

int run_verdict_command(const GlobalOptions& opts, const std::string& algebra,
                        const std::string& mode, int max_power,
                        const std::string& cert_out, bool regular) {
  ua::VarietyPresentation V(load_algebra(algebra), opts.caps());
  ua::CoreObjects core = ua::build_core(V);
  ua::DominionMode dmode =
      mode == "cd" ? ua::DominionMode::cd_complete : ua::DominionMode::refute;
  ua::Verdict v = regular ? ua::reg_maltsev(core, dmode, max_power)
                          : ua::weakly_maltsev(core, dmode, max_power);

  if (!cert_out.empty() && v.certificate) {
    std::ofstream out(cert_out);
    out << ua::certificate_to_json(*v.certificate).dump(2) << "\n";
  }

  if (opts.json) {
    emit(ua::verdict_to_json(v));
  } else {
    const char* property = regular ? "every reflexive regular relation an equivalence"
                                   : "weakly Mal'tsev";
    std::cout << property << ": " << ua::verdict_name(v.kind) << " (" << v.justification
              << ")\n";
    if (v.certificate) {
      std::cout << "separating pair into '" << v.certificate->S->name() << "' of size "
                << v.certificate->S->size() << " (quotient of a subalgebra of A^"
                << v.certificate->provenance.power << ")\n";
      if (cert_out.empty()) std::cout << "use --cert-out to save the certificate\n";
    }
  }
  switch (v.kind) {
    case ua::VerdictKind::Yes: return kExitYes;
    case ua::VerdictKind::No: return kExitNo;
    default: return kExitUnknown;
  }
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& text) {
  std::vector<std::pair<int, int>> pairs;
  std::stringstream ss(text);
  std::string chunk;
  while (std::getline(ss, chunk, ',')) {
    std::stringstream ps(chunk);
    long a, b;
    if (!(ps >> a >> b))
      throw ua::InvalidArgument("could not parse pair '" + chunk +
                                "' (expected two integers)");
    std::string rest;
    if (ps >> rest)
      throw ua::InvalidArgument("trailing input in pair '" + chunk + "'");
    pairs.emplace_back(static_cast<int>(a), static_cast<int>(b));
  }
  return pairs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"computations in finitely generated varieties of universal algebras"};
  app.require_subcommand(1);

  GlobalOptions opts;
  app.add_flag("--json", opts.json, "machine-readable JSON output");
  app.add_option("--max-free-size", opts.max_free_size,
                 "cap on free-algebra sizes (overrides UA_MAX_FREE_SIZE)");
  app.add_option("--max-power", opts.max_power, "default power bound for searches");

  // free
  std::string free_algebra_name;
  int free_gens = 0;
  bool free_witnesses = false;
  CLI::App* cmd_free = app.add_subcommand("free", "free algebra of HSP(A) on n generators");
  cmd_free->add_option("--algebra", free_algebra_name, "builtin name or algebra JSON path")
      ->required();
  cmd_free->add_option("--gens", free_gens, "number of generators")->required();
  cmd_free->add_flag("--witnesses", free_witnesses, "list witness terms");

  // maltsev
  std::string mal_algebra;
  CLI::App* cmd_mal = app.add_subcommand("maltsev", "search for a Mal'tsev term");
  cmd_mal->add_option("--algebra", mal_algebra, "builtin name or algebra JSON path")
      ->required();

  // weakly-maltsev / reg-maltsev
  std::string wm_algebra, wm_mode = "cd", wm_cert_out;
  int wm_max_power = 0;
  CLI::App* cmd_wm =
      app.add_subcommand("weakly-maltsev", "decide whether HSP(A) is weakly Mal'tsev");
  cmd_wm->add_option("--algebra", wm_algebra, "builtin name or algebra JSON path")
      ->required();
  cmd_wm->add_option("--mode", wm_mode, "cd (complete for CD varieties) or refute")
      ->check(CLI::IsMember({"cd", "refute"}));
  cmd_wm->add_option("--max-power", wm_max_power, "power bound for refute mode");
  cmd_wm->add_option("--cert-out", wm_cert_out, "write certificate JSON here");

  std::string reg_algebra, reg_mode = "cd", reg_cert_out;
  int reg_max_power = 0;
  CLI::App* cmd_reg = app.add_subcommand(
      "reg-maltsev", "decide whether every reflexive regular relation is an equivalence");
  cmd_reg->add_option("--algebra", reg_algebra, "builtin name or algebra JSON path")
      ->required();
  cmd_reg->add_option("--mode", reg_mode, "cd (complete for CD varieties) or refute")
      ->check(CLI::IsMember({"cd", "refute"}));
  cmd_reg->add_option("--max-power", reg_max_power, "power bound for refute mode");
  cmd_reg->add_option("--cert-out", reg_cert_out, "write certificate JSON here");

  // verify-witness
  std::string vw_algebra, vw_bundle, vw_theorem = "wm";
  CLI::App* cmd_vw =
      app.add_subcommand("verify-witness", "check a witness bundle's equation system");
  cmd_vw->add_option("--algebra", vw_algebra, "builtin name or algebra JSON path")
      ->required();
  cmd_vw->add_option("--bundle", vw_bundle, "bundle JSON path or builtin 'dl-example-3-6'")
      ->required();
  cmd_vw->add_option("--theorem", vw_theorem, "wm or reg")
      ->check(CLI::IsMember({"wm", "reg"}));

  // coproduct
  std::string cop_algebra, cop_left, cop_right;
  CLI::App* cmd_cop = app.add_subcommand("coproduct", "coproduct of two algebras in HSP(A)");
  cmd_cop->add_option("--algebra", cop_algebra, "variety generator")->required();
  cmd_cop->add_option("--left", cop_left, "left summand (default: the generator)");
  cmd_cop->add_option("--right", cop_right, "right summand (default: the generator)");

  // congruence
  std::string cong_algebra, cong_pairs;
  CLI::App* cmd_cong =
      app.add_subcommand("congruence", "congruence generated by element pairs");
  cmd_cong->add_option("--algebra", cong_algebra, "builtin name or algebra JSON path")
      ->required();
  cmd_cong->add_option("--pairs", cong_pairs, "pairs like \"0 1, 2 3\"")->required();

  // relations
  std::string rel_algebra;
  CLI::App* cmd_rel =
      app.add_subcommand("relations", "enumerate reflexive subuniverses of A^2");
  cmd_rel->add_option("--algebra", rel_algebra, "builtin name or algebra JSON path")
      ->required();

  // homs
  std::string hom_algebra, hom_cod;
  std::size_t hom_limit = 0;
  CLI::App* cmd_homs = app.add_subcommand("homs", "enumerate homomorphisms A -> B");
  cmd_homs->add_option("--algebra", hom_algebra, "domain")->required();
  cmd_homs->add_option("--cod", hom_cod, "codomain (default: the domain)");
  cmd_homs->add_option("--limit", hom_limit, "stop after this many homomorphisms");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*cmd_free) {
      ua::VarietyPresentation V(load_algebra(free_algebra_name), opts.caps());
      ua::FreeAlgebra F = ua::free_algebra(V, free_gens);
      if (opts.json) {
        emit(ua::free_algebra_to_json(F, V.sig()));
      } else {
        std::cout << "free algebra on " << free_gens << " generators over '"
                  << V.generator()->name() << "': " << F.size() << " elements\n";
        if (free_witnesses)
          for (int e = 0; e < F.size(); ++e)
            std::cout << "  " << e << ": "
                      << ua::render_term(F.witnesses[static_cast<std::size_t>(e)], V.sig())
                      << "\n";
      }
      return kExitYes;
    }

    if (*cmd_mal) {
      ua::VarietyPresentation V(load_algebra(mal_algebra), opts.caps());
      auto term = ua::maltsev_term(V);
      if (opts.json) {
        ua::json j;
        j["term"] = term ? ua::json(ua::render_term(*term, V.sig())) : ua::json(nullptr);
        emit(j);
      } else {
        std::cout << (term ? ua::render_term(*term, V.sig()) : std::string("none")) << "\n";
      }
      return term ? kExitYes : kExitNo;
    }

    if (*cmd_wm)
      return run_verdict_command(opts, wm_algebra, wm_mode, wm_max_power, wm_cert_out,
                                 false);
    if (*cmd_reg)
      return run_verdict_command(opts, reg_algebra, reg_mode, reg_max_power, reg_cert_out,
                                 true);

    if (*cmd_vw) {
      ua::VarietyPresentation V(load_algebra(vw_algebra), opts.caps());
      ua::WitnessBundle bundle = load_bundle(vw_bundle, V.sig());
      ua::WitnessTheorem thm =
          vw_theorem == "wm" ? ua::WitnessTheorem::wm : ua::WitnessTheorem::reg;
      ua::WitnessReport report = ua::verify_witness(V, bundle, thm);
      if (opts.json) {
        ua::json eqs = ua::json::array();
        for (const auto& eq : report.equations) {
          ua::json je = {{"label", eq.label},
                         {"pass", eq.pass},
                         {"lhs", ua::render_term(eq.identity.lhs, V.sig())},
                         {"rhs", ua::render_term(eq.identity.rhs, V.sig())}};
          if (!eq.pass) je["falsifying"] = eq.falsifying;
          eqs.push_back(je);
        }
        emit({{"theorem", vw_theorem}, {"all_pass", report.all_pass}, {"equations", eqs}});
      } else {
        for (const auto& eq : report.equations) {
          if (eq.pass) {
            std::cout << "PASS " << eq.label << "\n";
          } else {
            std::cout << "FAIL " << eq.label << "  "
                      << ua::render_term(eq.identity.lhs, V.sig())
                      << " != " << ua::render_term(eq.identity.rhs, V.sig()) << "  at (";
            for (std::size_t i = 0; i < eq.falsifying.size(); ++i)
              std::cout << (i ? "," : "") << eq.falsifying[i];
            std::cout << ")\n";
          }
        }
        std::cout << (report.all_pass ? "all equations hold" : "some equations fail")
                  << "\n";
      }
      return report.all_pass ? kExitYes : kExitNo;
    }

    if (*cmd_cop) {
      ua::AlgebraPtr gen = load_algebra(cop_algebra);
      ua::VarietyPresentation V(gen, opts.caps());
      ua::AlgebraPtr left = cop_left.empty() ? gen : load_algebra(cop_left);
      ua::AlgebraPtr right = cop_right.empty() ? gen : load_algebra(cop_right);
      ua::Coproduct cop = ua::coproduct(V, left, right);
      if (opts.json) {
        emit({{"size", cop.algebra->size()},
              {"inj1", cop.inj1.map()},
              {"inj2", cop.inj2.map()},
              {"membership_check_width", 3}});
      } else {
        std::cout << "coproduct size: " << cop.algebra->size()
                  << " (summands checked against identities of width <= 3)\n";
      }
      return kExitYes;
    }

    if (*cmd_cong) {
      ua::AlgebraPtr A = load_algebra(cong_algebra);
      ua::Congruence c = ua::congruence_generated(A, parse_pairs(cong_pairs));
      if (opts.json) {
        emit({{"block_count", c.block_count()}, {"blocks", c.blocks()}});
      } else {
        std::cout << c.block_count() << " block(s):";
        for (const auto& block : c.blocks()) {
          std::cout << " {";
          for (std::size_t i = 0; i < block.size(); ++i)
            std::cout << (i ? "," : "") << block[i];
          std::cout << "}";
        }
        std::cout << "\n";
      }
      return kExitYes;
    }

    if (*cmd_rel) {
      ua::AlgebraPtr A = load_algebra(rel_algebra);
      auto rels = ua::enumerate_reflexive_relations(A);
      ua::json out = ua::json::array();
      for (const ua::Relation& R : rels) {
        auto p = ua::relation_properties(R);
        if (opts.json) {
          ua::json pairs = ua::json::array();
          for (auto [l, r] : R.pairs()) pairs.push_back({l, r});
          out.push_back({{"pairs", pairs},
                         {"reflexive", p.reflexive},
                         {"symmetric", p.symmetric},
                         {"transitive", p.transitive},
                         {"difunctional", p.difunctional},
                         {"equivalence", p.equivalence}});
        } else {
          std::cout << R.pair_count() << " pair(s):";
          for (auto [l, r] : R.pairs()) std::cout << " (" << l << "," << r << ")";
          std::cout << "  [" << (p.reflexive ? " reflexive" : "")
                    << (p.symmetric ? " symmetric" : "")
                    << (p.transitive ? " transitive" : "")
                    << (p.difunctional ? " difunctional" : "")
                    << (p.equivalence ? " equivalence" : "") << " ]\n";
        }
      }
      if (opts.json)
        emit(out);
      else
        std::cout << rels.size() << " reflexive relation(s)\n";
      return kExitYes;
    }

    if (*cmd_homs) {
      ua::AlgebraPtr A = load_algebra(hom_algebra);
      ua::AlgebraPtr B = hom_cod.empty() ? A : load_algebra(hom_cod);
      std::optional<std::size_t> limit;
      if (hom_limit > 0) limit = hom_limit;
      ua::HomEnumeration homs = ua::hom_enumerate(A, B, limit);
      if (opts.json) {
        ua::json maps = ua::json::array();
        for (const auto& h : homs.homs) maps.push_back(h.map());
        emit({{"count", homs.homs.size()}, {"complete", homs.complete}, {"maps", maps}});
      } else {
        std::cout << homs.homs.size() << " homomorphism(s)"
                  << (homs.complete ? "" : " (limit reached)") << "\n";
        for (const auto& h : homs.homs) {
          std::cout << " ";
          for (int v : h.map()) std::cout << " " << v;
          std::cout << "\n";
        }
      }
      return homs.complete ? kExitYes : kExitCap;
    }
  } catch (const ua::CapExceeded& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return kExitCap;
  } catch (const ua::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
