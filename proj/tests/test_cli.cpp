#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qstar/cli.hpp"

using namespace qstar;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json parse_json(const std::string& text) {
  return nlohmann::json::parse(text);
}

}  // namespace

TEST_CASE("q text parsing") {
  bool dec = false;
  REQUIRE(detail::parse_q_text("1/2", dec) == GaussianRational(BigRat(1, 2)));
  REQUIRE_FALSE(dec);
  REQUIRE(detail::parse_q_text("-1/2", dec) == GaussianRational(BigRat(-1, 2)));
  REQUIRE(detail::parse_q_text("0", dec) == GaussianRational());
  REQUIRE(detail::parse_q_text("i", dec) == GaussianRational(BigRat(0), BigRat(1)));
  REQUIRE(detail::parse_q_text("-i", dec) == GaussianRational(BigRat(0), BigRat(-1)));
  REQUIRE(detail::parse_q_text("(3+4i)/5", dec) ==
          GaussianRational(BigRat(3, 5), BigRat(4, 5)));
  REQUIRE(detail::parse_q_text("(3-4i)/5", dec) ==
          GaussianRational(BigRat(3, 5), BigRat(-4, 5)));
  REQUIRE(detail::parse_q_text("2-i", dec) == GaussianRational(BigRat(2), BigRat(-1)));
  REQUIRE(detail::parse_q_text(" 3/5 ", dec) == GaussianRational(BigRat(3, 5)));

  dec = false;
  REQUIRE(detail::parse_q_text("0.9", dec) == GaussianRational(BigRat(9, 10)));
  REQUIRE(dec);

  REQUIRE_THROWS_AS(detail::parse_q_text("abc", dec), qstar_error);
  REQUIRE_THROWS_AS(detail::parse_q_text("", dec), qstar_error);
  REQUIRE_THROWS_AS(detail::parse_q_text("1/2/3", dec), qstar_error);
  REQUIRE_THROWS_AS(detail::parse_q_text("(3+4i", dec), qstar_error);
}

TEST_CASE("normal form output is canonical") {
  auto r = run({"normal-form", "--q", "1/2", "--rel", "deformed", "--format", "text",
                "s2* s1 s1* s2"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out == "q^2 s1 s1*\n");

  auto j = run({"normal-form", "--q", "1/2", "--rel", "deformed", "s2* s1 s1* s2"});
  REQUIRE(j.code == 0);
  auto doc = parse_json(j.out);
  REQUIRE(doc["input"] == "s2* s1 s1* s2");
  REQUIRE(doc["normal_form"] == "q^2 s1 s1*");
  REQUIRE(doc["environment"]["q"] == "1/2");
  REQUIRE(doc["environment"]["mode"] == "exact");
  REQUIRE(doc["environment"]["relations"] == "deformed");

  auto ct = run({"normal-form", "--q", "0", "--rel", "cuntz-toeplitz", "--format",
                 "text", "t1* t2 + t2* t2"});
  REQUIRE(ct.code == 0);
  REQUIRE(ct.out == "1\n");
}

TEST_CASE("exit codes") {
  REQUIRE(run({"nonsense"}).code == 2);
  REQUIRE(run({"gram", "--q", "abc"}).code == 2);
  REQUIRE(run({"gram", "--q", "i", "--mode", "exact"}).code == 2);
  REQUIRE(run({"gram", "--q", "2"}).code == 2);
  REQUIRE(run({"gram", "--level", "9"}).code == 2);
  REQUIRE(run({"lemmas", "--order", "13"}).code == 2);
  REQUIRE(run({"normal-form", "--q", "1/2", "--rel", "q-commuting", "x1"}).code == 2);
  REQUIRE(run({"gram", "--q", "1/2", "--level", "2"}).code == 0);

  auto forced = run({"wild-check", "--q", "i", "--level", "2", "--tolerance", "-1"});
  REQUIRE(forced.code == 1);
  auto doc = parse_json(forced.out);
  REQUIRE(doc["pass"] == false);
}

TEST_CASE("mode resolution") {
  auto dec = parse_json(run({"gram", "--q", "0.9", "--level", "2"}).out);
  REQUIRE(dec["environment"]["mode"] == "float");
  REQUIRE(dec["environment"]["q"] == "0.9");

  auto forced = run({"gram", "--q", "0.9", "--level", "2", "--mode", "exact"});
  REQUIRE(forced.code == 0);
  REQUIRE(parse_json(forced.out)["environment"]["mode"] == "exact");

  auto exact = parse_json(run({"gram", "--q", "3/5", "--level", "2"}).out);
  REQUIRE(exact["environment"]["mode"] == "exact");

  auto circle = parse_json(run({"wild-check", "--q", "i", "--level", "2"}).out);
  REQUIRE(circle["environment"]["mode"] == "float");
}

TEST_CASE("report schema") {
  auto r = run({"qcun-check", "--q", "1/2", "--level", "3"});
  REQUIRE(r.code == 0);
  auto doc = parse_json(r.out);
  auto env = doc["environment"];
  REQUIRE(env.contains("q"));
  REQUIRE(env.contains("mode"));
  REQUIRE(env.contains("space"));
  REQUIRE(env.contains("truncation"));
  REQUIRE(env["space"] == "tensor_pair");
  REQUIRE(doc["pass"] == true);
  REQUIRE(doc["items"].is_array());
  REQUIRE_FALSE(doc["items"].empty());
  for (const auto& item : doc["items"]) {
    REQUIRE(item.contains("name"));
    REQUIRE(item.contains("kind"));
    REQUIRE(item.contains("residual"));
    REQUIRE(item.contains("depth"));
    REQUIRE(item.contains("pass"));
    if (item["kind"] == "exact") {
      REQUIRE(item.contains("exact_zero"));
      REQUIRE_FALSE(item.contains("tolerance"));
    } else {
      REQUIRE(item.contains("tolerance"));
      REQUIRE_FALSE(item.contains("exact_zero"));
    }
  }

  auto wild = run({"wild-check", "--q", "1", "--level", "2", "--blocks", "3"});
  REQUIRE(wild.code == 0);
  auto wdoc = parse_json(wild.out);
  bool found_note = false;
  for (const auto& note : wdoc["notes"])
    if (note.get<std::string>().find("complement root") != std::string::npos)
      found_note = true;
  REQUIRE(found_note);
}

TEST_CASE("output is byte stable") {
  std::vector<std::string> cmd = {"intertwine", "--q",    "1/2", "--functor",
                                  "cun",        "--count", "2",   "--seed",
                                  "7"};
  auto a = run(cmd);
  auto b = run(cmd);
  REQUIRE(a.code == 0);
  REQUIRE(a.out == b.out);

  auto c = run({"lemmas", "--q", "-1/2", "--order", "4"});
  auto d = run({"lemmas", "--q", "-1/2", "--order", "4"});
  REQUIRE(c.code == 0);
  REQUIRE(c.out == d.out);
}

TEST_CASE("report can be written to a file") {
  auto path = std::filesystem::temp_directory_path() / "qstar_cli_report.json";
  std::filesystem::remove(path);
  auto r = run({"roundtrip", "--q", "1/2", "--order", "3", "--out", path.string()});
  REQUIRE(r.code == 0);
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  auto doc = parse_json(buf.str());
  REQUIRE(doc["pass"] == true);
  bool found_note = false;
  for (const auto& note : doc["notes"])
    if (note.get<std::string>().find("-q^4 s1^4 s2 s1*^4") != std::string::npos)
      found_note = true;
  REQUIRE(found_note);
  std::filesystem::remove(path);
}

TEST_CASE("help text lists subcommands") {
  auto top = run({"--help"});
  REQUIRE(top.code == 0);
  REQUIRE(top.out.find("normal-form") != std::string::npos);
  REQUIRE(top.out.find("intertwine") != std::string::npos);

  auto sub = run({"gram", "--help"});
  REQUIRE(sub.code == 0);
  REQUIRE(sub.out.find("--level") != std::string::npos);
}
