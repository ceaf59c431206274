// Exercises the command-line contract of the `ua` binary: exit codes
// (0 yes/success, 1 no, 2 unknown, 3 cap, 4 input error), the JSON output
// round trip, and determinism across runs. Takes the binary path as argv[1].

#include <array>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include <json.hpp>

#include "ua/builtins.hpp"
#include "ua/json_io.hpp"
#include "ua/maltsev.hpp"

namespace {

int failures = 0;

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& command) {
  RunResult result;
  FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
  if (!pipe) {
    std::cerr << "could not spawn: " << command << "\n";
    std::exit(2);
  }
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe))
    result.output.append(buf.data(), n);
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

void expect(bool ok, const std::string& what) {
  if (ok) {
    std::cout << "ok: " << what << "\n";
  } else {
    std::cout << "FAIL: " << what << "\n";
    ++failures;
  }
}

void expect_exit(const RunResult& r, int code, const std::string& what) {
  expect(r.exit_code == code,
         what + " (exit " + std::to_string(r.exit_code) + ", want " + std::to_string(code) +
             ")");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: ua_cli_contract <path-to-ua>\n";
    return 2;
  }
  std::string ua = argv[1];

  expect_exit(run(ua + " free --algebra lattice2 --gens 3"), 0, "free lattice2 3");
  {
    RunResult r = run(ua + " --json free --algebra lattice2 --gens 3");
    auto j = nlohmann::json::parse(r.output);
    expect(j["size"] == 18, "free lattice2 3 reports 18");
  }
  {
    RunResult r = run(ua + " --json free --algebra z2xor --gens 2");
    auto j = nlohmann::json::parse(r.output);
    expect(j["size"] == 4, "free z2xor 2 reports 4");
  }
  {
    RunResult r = run(ua + " --json free --algebra lattice2 --gens 1");
    auto j = nlohmann::json::parse(r.output);
    expect(j["size"] == 1, "free lattice2 1 reports 1");
  }

  // caps: tiny cap makes the free-algebra computation infeasible -> exit 3
  expect_exit(run(ua + " --max-free-size 5 free --algebra lattice2 --gens 3"), 3,
              "free with tiny cap");
  expect_exit(run("UA_MAX_FREE_SIZE=5 " + ua + " free --algebra lattice2 --gens 3"), 3,
              "free with tiny cap from the environment");

  expect_exit(run(ua + " maltsev --algebra z2xor"), 0, "maltsev z2xor");
  expect_exit(run(ua + " maltsev --algebra lattice2"), 1, "maltsev lattice2");
  expect_exit(run(ua + " maltsev --algebra set2"), 1, "maltsev set2");
  {
    RunResult r = run(ua + " maltsev --algebra lattice2");
    expect(r.output == "none\n", "maltsev lattice2 prints none");
  }

  expect_exit(run(ua + " weakly-maltsev --algebra lattice2 --mode cd"), 0,
              "weakly-maltsev lattice2 cd");
  expect_exit(run(ua + " weakly-maltsev --algebra n5 --mode cd"), 1,
              "weakly-maltsev n5 cd");
  expect_exit(run(ua + " weakly-maltsev --algebra set2 --mode refute --max-power 1"), 1,
              "weakly-maltsev set2 refute 1");
  expect_exit(run(ua + " reg-maltsev --algebra lattice2 --mode cd"), 0,
              "reg-maltsev lattice2 cd");
  expect_exit(run(ua + " reg-maltsev --algebra z2xor --mode refute"), 0,
              "reg-maltsev z2xor refute");
  expect_exit(run(ua + " reg-maltsev --algebra set2 --mode refute --max-power 1"), 1,
              "reg-maltsev set2 refute 1");

  // refute mode on a genuinely weakly Mal'tsev variety can never find a
  // certificate, so the bounded search exits 2 (Unknown)
  expect_exit(run(ua + " weakly-maltsev --algebra lattice2 --mode refute --max-power 1"), 2,
              "weakly-maltsev lattice2 refute is unknown");
  expect_exit(run(ua + " weakly-maltsev --algebra set2 --mode cd"), 4,
              "weakly-maltsev set2 cd is an input error (not CD)");

  expect_exit(run(ua + " verify-witness --algebra lattice2 --bundle dl-example-3-6"), 0,
              "verify-witness builtin bundle");
  expect_exit(
      run(ua + " verify-witness --algebra lattice2 --bundle dl-example-3-6 --theorem reg"),
      0, "verify-witness builtin bundle, reg");
  expect_exit(run(ua + " verify-witness --algebra n5 --bundle dl-example-3-6"), 1,
              "verify-witness bundle fails on n5");
  expect_exit(run(ua + " verify-witness --algebra z2xor --bundle dl-example-3-6"), 4,
              "verify-witness bundle against wrong signature");
  expect_exit(run(ua + " verify-witness --algebra lattice2 --bundle /no/such/file"), 4,
              "verify-witness with missing bundle file");

  // a mutated bundle (sigma1's a replaced by b) must fail with equation (15)
  {
    ua::WitnessBundle mut = ua::builtin_dl_bundle();
    mut.sigma[0] = ua::parse_term("(meet $0 $9)", ua::builtin_lattice2()->sig());
    std::string path = "/tmp/ua_mutated_bundle.json";
    FILE* f = fopen(path.c_str(), "w");
    std::string text =
        ua::bundle_to_json(mut, ua::builtin_lattice2()->sig()).dump(2) + "\n";
    fwrite(text.data(), 1, text.size(), f);
    fclose(f);
    RunResult r = run(ua + " verify-witness --algebra lattice2 --bundle " + path);
    expect_exit(r, 1, "mutated bundle fails");
    expect(r.output.find("FAIL (15)") != std::string::npos,
           "mutated bundle reports equation (15)");
    std::remove(path.c_str());
  }

  // a bundle with wrong widths is a format error (exit 4)
  {
    ua::WitnessBundle bad = ua::builtin_dl_bundle();
    bad.s.pop_back();
    std::string path = "/tmp/ua_bad_bundle.json";
    FILE* f = fopen(path.c_str(), "w");
    std::string text =
        ua::bundle_to_json(bad, ua::builtin_lattice2()->sig()).dump(2) + "\n";
    fwrite(text.data(), 1, text.size(), f);
    fclose(f);
    expect_exit(run(ua + " verify-witness --algebra lattice2 --bundle " + path), 4,
                "bundle with wrong counts is a format error");
    std::remove(path.c_str());
  }

  {
    RunResult r = run(ua + " --json coproduct --algebra z2xor --left z2xor --right z2xor");
    expect_exit(r, 0, "coproduct z2xor");
    auto j = nlohmann::json::parse(r.output);
    expect(j["size"] == 4, "coproduct z2xor size 4");
  }

  {
    RunResult r = run(ua + " --json congruence --algebra z2xor --pairs \"0 1\"");
    expect_exit(r, 0, "congruence z2xor");
    auto j = nlohmann::json::parse(r.output);
    expect(j["block_count"] == 1, "congruence z2xor collapses to 1 block");
  }

  {
    RunResult r = run(ua + " --json relations --algebra lattice2");
    expect_exit(r, 0, "relations lattice2");
    auto j = nlohmann::json::parse(r.output);
    expect(j.size() == 4, "relations lattice2 finds 4");
  }

  {
    RunResult r = run(ua + " --json homs --algebra lattice2");
    auto j = nlohmann::json::parse(r.output);
    expect(j["count"] == 3, "homs lattice2 -> lattice2 count 3");
    expect(j["complete"] == true, "homs enumeration complete");
  }

  // algebra JSON files load; bad files are input errors
  {
    std::string path = "/tmp/ua_algebra.json";
    FILE* f = fopen(path.c_str(), "w");
    std::string text = ua::algebra_to_json(*ua::builtin_z2xor()).dump(2) + "\n";
    fwrite(text.data(), 1, text.size(), f);
    fclose(f);
    expect_exit(run(ua + " maltsev --algebra " + path), 0, "algebra from JSON file");
    std::remove(path.c_str());
  }
  expect_exit(run(ua + " maltsev --algebra /no/such/algebra"), 4, "missing algebra file");
  expect_exit(run(ua + " free --algebra lattice2"), 4, "missing required option");
  expect_exit(run(ua + " frobnicate"), 4, "unknown subcommand");

  // JSON verdict round trip: reload the certificate and re-check it
  {
    RunResult r = run(ua + " --json weakly-maltsev --algebra n5 --mode cd");
    expect_exit(r, 1, "weakly-maltsev n5 cd json");
    ua::Verdict v = ua::verdict_from_json(nlohmann::json::parse(r.output));
    expect(v.kind == ua::VerdictKind::No, "verdict parses as no");
    ua::CoreObjects core = ua::build_core(ua::VarietyPresentation(ua::builtin_n5()));
    auto check = ua::check_certificate(*v.certificate, core.P.algebra, core.R);
    expect(check.ok, "reloaded certificate passes check_certificate");
  }

  // --cert-out writes a certificate file that checks out on reload
  {
    std::string path = "/tmp/ua_cert_out.json";
    RunResult r =
        run(ua + " weakly-maltsev --algebra n5 --mode cd --cert-out " + path);
    expect_exit(r, 1, "weakly-maltsev n5 with --cert-out");
    FILE* f = fopen(path.c_str(), "r");
    expect(f != nullptr, "certificate file written");
    if (f) {
      std::string text;
      std::array<char, 4096> buf;
      while (std::size_t n = fread(buf.data(), 1, buf.size(), f)) text.append(buf.data(), n);
      fclose(f);
      ua::SeparationCertificate cert =
          ua::certificate_from_json(nlohmann::json::parse(text));
      ua::CoreObjects core = ua::build_core(ua::VarietyPresentation(ua::builtin_n5()));
      expect(ua::check_certificate(cert, core.P.algebra, core.R).ok,
             "certificate file passes check_certificate");
      std::remove(path.c_str());
    }
  }

  // determinism: identical runs give identical bytes
  {
    std::string cmd = ua + " --json weakly-maltsev --algebra n5 --mode cd";
    expect(run(cmd).output == run(cmd).output, "weakly-maltsev output deterministic");
    cmd = ua + " --json free --algebra lattice2 --gens 3";
    expect(run(cmd).output == run(cmd).output, "free output deterministic");
  }

  if (failures == 0) {
    std::cout << "cli contract: all checks passed\n";
    return 0;
  }
  std::cout << "cli contract: " << failures << " check(s) failed\n";
  return 1;
}
