#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "rankone/json_io.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  std::string cmd = "\"" RANKONE_CLI "\" " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  int status = pclose(p);
  if (WIFEXITED(status)) r.code = WEXITSTATUS(status);
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "rankone_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(cli("scheme parse --scheme chacon3").code == 0);
  CHECK(cli("--no-such-flag").code == 1);
  CHECK(cli("scan --A 'level(2,7)' --from 1 --to 2").code == 1);
  CHECK(cli("scan --A 'interval(0,' --from 1 --to 2").code == 1);
  CHECK(cli("scheme parse --scheme no-such-preset-or-file").code == 1);
  CHECK(cli("scan --stage-cap 3 --A 'interval(1/3,5/6)' --eps 1/1000000000 --from 1 --to 40").code == 3);
}

TEST_CASE("scan output is deterministic") {
  auto a = cli("scan --A 'base(2)' --B 'base(2)' --from 1 --to 30");
  auto b = cli("scan --A 'base(2)' --B 'base(2)' --from 1 --to 30");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("# rankone-report/1", 0) == 0);
}

TEST_CASE("verify accepts saved artifacts and refutes tampered ones") {
  auto path = scratch("thm4.json");
  REQUIRE(cli("demo thm4 --height 2 --to 20 --format json --out '" + path.string() + "'").code == 0);
  CHECK(cli("verify '" + path.string() + "'").code == 0);

  rankone::Json doc;
  {
    std::ifstream in(path);
    doc = rankone::Json::parse(in);
  }
  auto& art = doc.contains("artifact") ? doc["artifact"] : doc;
  art["D"] = art["C"];
  auto bad = scratch("thm4_bad.json");
  {
    std::ofstream out(bad);
    out << art.dump(2);
  }
  auto r = cli("verify '" + bad.string() + "'");
  CHECK(r.code == 2);
  CHECK(r.out.find("REFUTED") != std::string::npos);

  auto junk = scratch("junk.json");
  {
    std::ofstream out(junk);
    out << "{not json";
  }
  CHECK(cli("verify '" + junk.string() + "'").code == 1);
}
