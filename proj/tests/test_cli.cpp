// End-to-end checks of the command-line tool: argv[1] is the binary path.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int checks = 0, failed = 0;

void expect(bool ok, const std::string& what) {
  ++checks;
  if (!ok) {
    ++failed;
    std::cerr << "FAIL: " << what << "\n";
  }
}

int run(const std::string& cmd) { return std::system(cmd.c_str()); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: test_cli <binary>\n";
    return 1;
  }
  std::string bin = argv[1];
  fs::path work = fs::temp_directory_path() / "betheforge_cli_test";
  fs::remove_all(work);
  fs::create_directories(work);

  write(work / "half2.json", R"({"motif": ["1/2"], "repeats": 2})");
  write(work / "alt.json", R"({"motif": ["1/2", "1"], "repeats": 2})");
  write(work / "bad.json", "{");
  write(work / "ctx.json", R"({"holes": {"1/2": [0.1, -0.4], "1": [0.7, -0.2]}})");
  write(work / "ctx_strings.json",
        R"({"holes": {"1": [0.8, -0.8]}, "new_strings": {"1/2": [0.4]}, "Q": {"1/2": [0]}})");
  write(work / "one.json", R"({"motif": ["1"], "repeats": 2})");
  auto out = [&](const char* name) { return (work / name).string(); };

  // central charge
  expect(run(bin + " central-charge --spec " + out("alt.json") + " > " + out("cc.txt")) == 0,
         "central-charge exit");
  expect(slurp(work / "cc.txt").find("c = 2") != std::string::npos, "central charge value");

  // malformed spec: validation exit code
  expect(run(bin + " count --spec " + out("bad.json") + " 2>/dev/null") / 256 == 2,
         "malformed spec exits 2");
  // cap exceeded
  write(work / "big.json", R"({"motif": ["1/2"], "repeats": 16})");
  expect(run(bin + " diag --spec " + out("big.json") + " --out " + work.string() +
             " 2>/dev/null") /
                 256 ==
             2,
         "cap exceeded exits 2");

  // completeness table
  expect(run(bin + " count --spec " + out("alt.json") + " --cap 100000 --out " +
             out("count.csv") + " > " + out("count.txt")) == 0,
         "count exit");
  expect(slurp(work / "count.csv").find("36 = 36 OK") != std::string::npos,
         "count table footer");

  // determinism: identical invocations give byte-identical files
  expect(run(bin + " count --spec " + out("alt.json") + " --cap 100000 --out " +
             out("count2.csv") + " > /dev/null") == 0,
         "count rerun exit");
  expect(slurp(work / "count.csv") == slurp(work / "count2.csv"), "count deterministic");

  // vacuum report
  expect(run(bin + " vacuum --spec " + out("half2.json") + " --out " + out("vac.csv") +
             " > " + out("vac.txt")) == 0,
         "vacuum exit");
  expect(slurp(work / "vac.txt").find("OK") != std::string::npos, "vacuum OK line");
  expect(slurp(work / "vac.csv").find("-1.38629436112") != std::string::npos,
         "vacuum -2 ln 2 value");

  // diag report on the two-site chain: eigenvalue -4 matched to the root at 0
  expect(run(bin + " diag --spec " + out("half2.json") + " --out " + work.string() +
             " > /dev/null") == 0,
         "diag exit");
  std::string match = slurp(work / "bethe_match.csv");
  expect(match.find("-4") != std::string::npos, "diag reports the -4 eigenvalue");
  expect(match.find("MISMATCH") == std::string::npos, "diag all matched");

  // diag determinism: identical invocations give byte-identical reports
  fs::create_directories(work / "diag2");
  expect(run(bin + " diag --spec " + out("half2.json") + " --out " +
             (work / "diag2").string() + " > /dev/null") == 0,
         "diag rerun exit");
  expect(slurp(work / "bethe_match.csv") == slurp(work / "diag2" / "bethe_match.csv"),
         "diag deterministic");

  // bethe solve from seeds
  write(work / "seeds.json", "[[0.1, 0.0]]");
  expect(run(bin + " bethe --spec " + out("half2.json") + " -M 1 --seeds " +
             out("seeds.json") + " --out " + out("roots.json")) == 0,
         "bethe exit");
  expect(slurp(work / "roots.json").find("\"p\"") != std::string::npos, "bethe JSON output");

  // excitation dispersion
  expect(run(bin + " excite --spec " + out("alt.json") + " --ctx " + out("ctx.json") +
             " --out " + out("excite.csv") + " > /dev/null") == 0,
         "excite exit");
  expect(slurp(work / "excite.csv").find("dispersion_residual") != std::string::npos,
         "excite CSV header");

  // rsos sweep
  expect(run(bin + " rsos --max-sum 8 --max-sbar2 5 --out " + out("rsos.csv") + " > " +
             out("rsos.txt")) == 0,
         "rsos exit");
  expect(slurp(work / "rsos.txt").find("all MATCH") != std::string::npos, "rsos all match");

  // smatrix phases, including a solved new-string context
  expect(run(bin + " smatrix --spec " + out("alt.json") + " --ctx " + out("ctx.json") +
             " --out " + out("sm.csv") + " --spectra-out " + out("sm.json") +
             " > /dev/null") == 0,
         "smatrix exit");
  expect(slurp(work / "sm.csv").find("MISMATCH") == std::string::npos,
         "smatrix consistency");
  expect(slurp(work / "sm.json").find("conjectured_spectrum") != std::string::npos,
         "smatrix spectra JSON");
  expect(run(bin + " smatrix --spec " + out("one.json") + " --ctx " +
             out("ctx_strings.json") + " --out " + out("sm2.csv") + " > /dev/null") == 0,
         "smatrix with strings exit");

  std::printf("test_cli: %d checks, %d failed\n", checks, failed);
  return failed == 0 ? 0 : 1;
}
