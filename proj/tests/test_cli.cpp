#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sumlab/cli.hpp"
#include "sumlab/serialize.hpp"

using namespace sumlab;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, std::optional<std::string> config_env = std::nullopt) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err, std::move(config_env));
  return {code, out.str(), err.str()};
}

Json run_json(std::vector<std::string> args) {
  auto r = run(std::move(args));
  REQUIRE(r.code == 0);
  return parse_json(r.out);
}

std::string write_temp(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("sumlab_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

const std::string kSkewCube = R"({"k":2,"entries":["0,0","0,0","0,0","0,1/2"]})";

}  // namespace

TEST_CASE("density command") {
  CHECK(run_json({"density", "periodic:3:0", "intervals:0-27"}).at("estimate") == "1/3");
  // Squares below 16 in a 16-wide window.
  CHECK(run_json({"density", "list:0,1,4,9@16", "intervals:0-16"}).at("estimate") == "1/4");
  auto plain = run({"density", "periodic:3:0", "intervals:0-27", "--format", "plain"});
  CHECK(plain.code == 0);
  CHECK(plain.out.find("estimate: 1/3") != std::string::npos);
  CHECK(run({"density", "bogus", "intervals:0-27"}).code == 2);
  CHECK(run({"density", "list:1,2@10", "intervals:0-20"}).code == 3);
  auto csv = run({"density", "periodic:3:0", "intervals:0-27", "--format", "csv"});
  CHECK(csv.out == "lo,hi,density\n0,27,1/3\n");
  CHECK(run({"orbit", "torus:1:1/8", "0", "1/2", "--eps", "0.1", "--horizon", "16", "--format", "csv"}).code == 2);
}

TEST_CASE("folner-defect and correspond commands") {
  CHECK(run({"folner-defect", "intervals:0-10,0-100", "--t", "1"}).code == 0);
  auto c = run_json({"correspond", "periodic:2:1", "--radius", "8", "--window", "0-8"});
  CHECK(c.at("frequency") == "1/2");
  CHECK(c.at("members") == Json::array({1, 3, 5, 7}));
  auto back = correspondence_from_json(c);
  CHECK(back.point.radius() == 8);
}

TEST_CASE("find-sumset command") {
  auto ok = run_json({"find-sumset", "periodic:2:1", "--k", "2", "--sizes", "3,3"});
  CHECK(ok.at("target_met") == true);
  CHECK(ok.at("checks").at("acceptable") == true);
  CHECK(ok.at("checks").at("all_sums_verified") == true);
  CHECK(sumset_from_json(ok).sets.size() == 2);

  auto none = run_json({"find-sumset", "periodic:2:1", "--k", "2", "--sizes", "1,1", "--variant", "union", "--oracle",
                        "--bound", "50"});
  CHECK(none.at("witness").is_null());

  auto witness = run_json({"find-sumset", "periodic:2:1", "--k", "2", "--sizes", "3,3", "--oracle", "--bound", "50"});
  CHECK(witness.at("witness").size() == 2);
  CHECK(witness.at("checks").at("all_sums_verified") == true);

  CHECK(run({"find-sumset", "periodic:2:1", "--k", "0", "--sizes", "3,3"}).code == 2);
  CHECK(run({"find-sumset", "periodic:2:1", "--k", "2", "--sizes", "3"}).code == 2);
  CHECK(run({"find-sumset", "periodic:2:1", "--k", "2", "--sizes", "1,1", "--variant", "union"}).code == 2);
  CHECK(run({"find-sumset", "periodic:3:0", "--k", "3", "--sizes", "5,5,5", "--oracle", "--bound", "200",
             "--max-search-space", "1e6"})
            .code == 4);
  // Unmet target with the candidate budget spent.
  CHECK(run({"find-sumset", "periodic:3:0", "--k", "3", "--sizes", "5,5,5", "--max-candidates", "3"}).code == 4);
}

TEST_CASE("verify-sumset command") {
  auto ok = run_json({"verify-sumset", "periodic:2:1", "--sets", "2,4;1,3"});
  CHECK(ok.at("ok") == true);
  auto bad = run_json({"verify-sumset", "periodic:2:1", "--sets", "1;1"});
  CHECK(bad.at("ok") == false);
  CHECK(bad.at("violating_sum") == 2);
  CHECK(run({"verify-sumset", "periodic:2:1", "--sets", "3,x;1"}).code == 2);
}

TEST_CASE("cube-verify command") {
  const std::vector<std::string> rec{"--eps", "0.5", "--horizon", "20", "--min-hits", "2"};
  auto with = [&](std::vector<std::string> args) {
    args.insert(args.end(), rec.begin(), rec.end());
    return args;
  };
  auto yes = run_json(with({"cube-verify", "finrot:5:1", R"({"k":2,"entries":["0","1","2","3"]})"}));
  CHECK(yes.at("is_erdos") == true);
  CHECK(erdos_from_json(yes).axes.size() == 2);
  auto no = run_json(with({"cube-verify", "finrot:5:1", R"({"k":2,"entries":["0","1","2","4"]})"}));
  CHECK(no.at("is_erdos") == false);
  CHECK(no.at("axes")[0].at("member") == false);

  auto skew = run_json({"cube-verify", "skew:golden", kSkewCube, "--eps", "0.2", "--horizon", "1000000"});
  CHECK(skew.at("is_erdos") == false);

  // Cube read from a file path.
  auto path = write_temp("cube.json", R"({"k":2,"entries":["0","1","2","3"]})");
  CHECK(run_json(with({"cube-verify", "finrot:5:1", path})).at("is_erdos") == true);

  CHECK(run(with({"cube-verify", "finrot:5:1", R"({"k":2,"entries":["0","1")"})).code == 2);
  CHECK(run(with({"cube-verify", "finrot:5:1", R"({"k":2,"entries":["0","1"]})"})).code == 2);
  // No eps or horizon anywhere.
  CHECK(run({"cube-verify", "finrot:5:1", R"({"k":2,"entries":["0","1","2","3"]})"}).code == 2);
}

TEST_CASE("qk-test and orbit commands") {
  CHECK(run_json({"qk-test", "skew:golden", kSkewCube, "--tol", "1e-12"}).at("member") == true);
  CHECK(run_json({"qk-test", "finrot:5:1", R"({"k":2,"entries":["0","1","2","4"]})"}).at("member") == false);
  auto o = run_json({"orbit", "torus:1:1/8", "0", "1/2", "--eps", "1e-9", "--horizon", "16"});
  CHECK(o.at("witnesses") == Json::array({4, 12}));
  CHECK(run({"orbit", "torus:1:1/8", "0", "1/2", "--eps", "-1", "--horizon", "16"}).code == 2);
}

TEST_CASE("measure command") {
  auto cubic = run_json({"measure", "finrot:5:1", "cubic", "--k", "2"});
  CHECK(cubic.at("atom_count") == 125);
  auto [system, m] = measure_from_json(cubic);
  CHECK(m.size() == 125);

  auto sigma = run_json({"measure", "finrot:5:1", "sigma", "--t", "2", "--k", "1"});
  CHECK(sigma.at("atom_count") == 5);
  for (const auto& atom : sigma.at("atoms")) CHECK(atom.at("point").get<std::string>().rfind("2,", 0) == 0);

  CHECK(run({"measure", "finrot:5:1", "decompose", "--x", "3"}).code == 0);
  CHECK(run({"measure", "finrot:5:1", "cubic", "--k", "3", "--max-atoms", "10"}).code == 4);
  CHECK(run({"measure", "finrot:5:1", "spin"}).code == 2);

  auto plot = std::filesystem::temp_directory_path() / "sumlab_test_trace.csv";
  std::filesystem::remove(plot);
  auto b = run({"measure", "skew:0.6180339887", "birkhoff", "--box", "0,0.25", "--n", "1000000", "--plot",
                plot.string()});
  REQUIRE(b.code == 0);
  CHECK(b.out.rfind("n,average\n", 0) == 0);
  auto last_line = b.out.substr(b.out.find_last_of('\n', b.out.size() - 2) + 1);
  auto comma = last_line.find(',');
  CHECK(std::stoll(last_line.substr(0, comma)) == 1'000'000);
  CHECK(std::stod(last_line.substr(comma + 1)) == doctest::Approx(0.25).epsilon(0.02));
  CHECK(std::filesystem::exists(plot));
}

TEST_CASE("config precedence") {
  const std::string cube = R"({"k":2,"entries":["0","1","2","3"]})";
  auto file = write_temp("ok.conf", "# recurrence\neps = 0.5\nhorizon = 20\nmin_hits = 3\n");
  auto from_file = run({"cube-verify", "finrot:5:1", cube, "--config", file});
  REQUIRE(from_file.code == 0);
  CHECK(parse_json(from_file.out).at("min_hits") == 3);

  auto flag_wins = run({"cube-verify", "finrot:5:1", cube, "--config", file, "--min-hits", "1"});
  CHECK(parse_json(flag_wins.out).at("min_hits") == 1);

  auto env = run({"cube-verify", "finrot:5:1", cube}, file);
  REQUIRE(env.code == 0);
  CHECK(parse_json(env.out).at("horizon") == 20);

  auto unknown = write_temp("bad.conf", "eps = 0.5\ncolour = blue\n");
  CHECK(run({"density", "periodic:3:0", "intervals:0-27", "--config", unknown}).code == 2);
  auto negative = write_temp("neg.conf", "horizon = -4\n");
  CHECK(run({"density", "periodic:3:0", "intervals:0-27", "--config", negative}).code == 2);
  CHECK(run({"density", "periodic:3:0", "intervals:0-27", "--config", "/nonexistent/sumlab.conf"}).code == 2);

  RunConfig cfg;
  cfg.apply_file_text("tol = 0\nformat = plain\n");
  CHECK(cfg.tol == 0);
  CHECK(cfg.format == "plain");
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("commands are deterministic") {
  std::vector<std::string> args{"find-sumset", "periodic:3:0", "--k", "3", "--sizes", "4,4,4"};
  CHECK(run(args).out == run(args).out);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 2);
}
