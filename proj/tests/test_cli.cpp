#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "structlaws/cli.hpp"
#include "structlaws/examples.hpp"

using namespace structlaws;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string bundle_file(const std::string& bundle, const std::string& file) {
  return std::string(STRUCTLAWS_BUNDLE_DIR) + "/" + bundle + "/" + file;
}

}  // namespace

TEST_CASE("eval") {
  Run r = run({"eval", "--bundle", "peano", "--term", "(aux add () (op s (op z)) ((op s (op z))))"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "(op s (op s (op z)))\n");
}

TEST_CASE("eval reads multi-line terms from standard input") {
  Run r = run({"eval", "--bundle", "peano", "--term", "-"}, "(aux mul ()\n  (op s (op s (op z)))\n  ((op s (op z))))\n");
  CHECK(r.code == kExitOk);
  CHECK(r.out == "(op s (op s (op z)))\n");
}

TEST_CASE("eval of a stuck term reports counterexample exit") {
  Run r = run({"eval", "--bundle", "peano", "--ctx", "1", "--term", "(aux add () (var x 0) ((op z)))"});
  CHECK(r.code == kExitCounterexamples);
  Run n = run({"normalize", "--bundle", "peano", "--ctx", "1", "--term", "(aux add () (var x 0) ((op z)))"});
  CHECK(n.code == kExitOk);
  CHECK(n.out == "(aux add () (var x 0) ((op z)))\n");
}

TEST_CASE("user files") {
  Run r = run({"eval", "--sig", bundle_file("peano", "signature.sexp"), "--laws", bundle_file("peano", "laws.sexp"),
               "--term", "(aux mul () (op s (op s (op z))) ((op s (op s (op z)))))"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "(op s (op s (op s (op s (op z)))))\n");
  Run missing = run({"eval", "--sig", "/nonexistent.sexp", "--laws", "/nonexistent.sexp", "--term", "(op z)"});
  CHECK(missing.code == kExitUsage);
}

TEST_CASE("usage and parse errors") {
  CHECK(run({"check", "nonsense", "--bundle", "peano"}).code == kExitUsage);
  CHECK(run({"eval", "--bundle", "peano"}).code == kExitUsage);
  CHECK(run({"eval", "--bundle", "nope", "--term", "(op z)"}).code == kExitUsage);
  Run bad = run({"eval", "--bundle", "peano", "--term", "(op s"});
  CHECK(bad.code == kExitUsage);
  CHECK_FALSE(bad.err.empty());
  CHECK(run({"eval", "--bundle", "lambda-presheaf", "--term", "(var v 3)"}).code == kExitUsage);
  CHECK(run({"check", "all", "--bundle", "peano", "--jobs", "0"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("vacuous benign check") {
  Run r = run({"check", "benign", "--bundle", "peano", "--size", "0", "--json"});
  CHECK(r.code == kExitOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["instances"] == 0);
  CHECK(j["status"] == "pass");
  CHECK(j["elapsed_ms"].is_null());
}

TEST_CASE("check all on the presheaf bundle") {
  Run r = run({"check", "all", "--bundle", "lambda-presheaf", "--size", "5", "--json"});
  CHECK(r.code == kExitOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["bundle"] == "lambda-presheaf");
  std::set<std::string> suites;
  for (const auto& s : j["suites"]) {
    suites.insert(s["suite"].get<std::string>());
    CHECK(s["status"] == "pass");
  }
  CHECK(suites == std::set<std::string>{"admissible", "monad", "oracle", "coherence", "benign"});
}

TEST_CASE("json output does not depend on jobs") {
  Run a = run({"check", "all", "--bundle", "sharing", "--json", "--jobs", "1"});
  Run b = run({"check", "all", "--bundle", "sharing", "--json", "--jobs", "3"});
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
  Run t = run({"check", "oracle", "--bundle", "sharing", "--json", "--timing"});
  CHECK(nlohmann::json::parse(t.out)["elapsed_ms"].is_number());
}

TEST_CASE("examples") {
  Run l = run({"examples", "list"});
  CHECK(l.code == kExitOk);
  for (const auto& n : bundle_names()) CHECK(l.out.find(n) != std::string::npos);
  Run s = run({"examples", "show", "--bundle", "peano"});
  CHECK(s.code == kExitOk);
  CHECK(s.out.rfind("(signature peano", 0) == 0);
}

TEST_CASE("enum") {
  Run r = run({"enum", "--bundle", "peano", "--sort", "nat", "--size", "3"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "(op z)\n(op s (op z))\n(op s (op s (op z)))\n");
  Run s1 = run({"enum", "--bundle", "lambda-presheaf", "--sort", "p", "--size", "6", "--sample", "5", "--seed", "9"});
  Run s2 = run({"enum", "--bundle", "lambda-presheaf", "--sort", "p", "--size", "6", "--sample", "5", "--seed", "9"});
  CHECK(s1.code == kExitOk);
  CHECK(s1.out == s2.out);
}

TEST_CASE("fold") {
  Run nat = run({"fold", "--bundle", "peano", "--algebra", "nat", "--term", "(aux add () (op s (op z)) ((op s (op z))))"});
  CHECK(nat.code == kExitOk);
  CHECK(nat.out == "2\n");
  Run max = run({"fold", "--bundle", "peano", "--algebra", "max", "--term", "(aux add () (op s (op z)) ((op s (op z))))"});
  CHECK(max.out == "1\n");
}

TEST_CASE("failing checks exit with 1") {
  auto path = std::filesystem::temp_directory_path() / "structlaws_wrong_assoc.sexp";
  {
    std::ofstream f(path);
    f << "(eqsys add-assoc-wrong\n"
         "  (schema add3 (result nat) (main a nat) (params (b term nat) (c term nat)))\n"
         "  (clauses (clause (on z) (aux add () b (c))) (clause (on s) (binds k) (op s (rc k () (b c)))))\n"
         "  (left (aux add () (aux add () a (b)) (c)))\n"
         "  (right (aux add () a ((aux add () b ((op s c)))))))\n";
  }
  Run r = run({"check", "coherence", "--sig", bundle_file("peano", "signature.sexp"), "--laws",
               bundle_file("peano", "laws.sexp"), "--eqs", path.string(), "--size", "2", "--json"});
  std::filesystem::remove(path);
  CHECK(r.code == kExitCounterexamples);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["status"] == "fail");
  CHECK_FALSE(j["counterexamples"].empty());
}
