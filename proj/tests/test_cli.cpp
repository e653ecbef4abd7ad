#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "funcperm/csv.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(FUNCPERM_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("funcperm_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("simulate writes noise-free exponentials", "[cli]") {
  const auto dir = scratch_dir("sim");
  const auto out = dir / "a.csv";
  const auto r = run("simulate --count 3 --sigma 0 --r 1 --x0 1 --grid-points 11 --out " + out.string());
  REQUIRE(r.status == 0);
  const auto record = json::parse(r.out);
  CHECK(record["seed"].is_number_unsigned());
  const auto s = funcperm::load_sample(out.string());
  CHECK(s.count() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t l = 0; l < 11; ++l) CHECK(s(i, l) == Catch::Approx(std::exp(s.grid()[l])).epsilon(1e-14));
}

TEST_CASE("simulate is deterministic and writes the grid header", "[cli][determinism]") {
  const auto dir = scratch_dir("sim2");
  const std::string flags = "simulate --count 4 --grid-points 601 --t-max 2 --seed 5 --out ";
  REQUIRE(run(flags + (dir / "a.csv").string()).status == 0);
  REQUIRE(run(flags + (dir / "b.csv").string()).status == 0);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  const auto s = funcperm::load_sample((dir / "a.csv").string());
  CHECK(s.points() == 601);
  CHECK(s.grid()[0] == 0.0);
  CHECK(s.grid()[1] == Catch::Approx(1.0 / 300).epsilon(1e-14));
  CHECK(s.grid()[600] == 2.0);
}

TEST_CASE("simulate rejects bad flags", "[cli]") {
  const auto dir = scratch_dir("sim3");
  CHECK(run("simulate --count 3 --sigma -1 --out " + (dir / "a.csv").string()).status != 0);
  CHECK(run("simulate --count 3 --out /nonexistent/dir/a.csv").status != 0);
  CHECK(run("simulate --count abc --out " + (dir / "a.csv").string()).status != 0);
}

TEST_CASE("test command prints one JSON record", "[cli]") {
  const auto dir = scratch_dir("test");
  write_file(dir / "x.csv", "0,1,2\n0,0,0\n1,1,1\n");
  write_file(dir / "y.csv", "0,1,2\n10,10,10\n11,11,11\n");

  SECTION("schilling with k = 1 on separated constants") {
    const auto r = run("test --method schilling --k 1 --B 99 --x " + (dir / "x.csv").string() + " --y " +
                       (dir / "y.csv").string());
    REQUIRE(r.status == 0);
    const auto rec = json::parse(r.out);
    CHECK(rec["statistic"] == 1.0);
    CHECK(rec["settings"]["k"] == 1);
    CHECK(rec["settings"]["B"] == 99);
    CHECK(rec["settings"]["seed"].is_number());
    CHECK(rec["m"] == 2);
  }
  SECTION("hk on identical files") {
    write_file(dir / "z.csv", "0,1,2,3\n0,1,0,2\n1,3,1,0\n2,2,5,1\n0,4,2,2\n3,0,1,1\n");
    const auto z = (dir / "z.csv").string();
    const auto r = run("test --method hk --components 2 --x " + z + " --y " + z);
    REQUIRE(r.status == 0);
    const auto rec = json::parse(r.out);
    CHECK(rec["statistic"].get<double>() == Catch::Approx(0.0).margin(1e-20));
    CHECK(rec["p_value"] == 1.0);
    CHECK(rec["reject"] == false);
  }
  SECTION("ma2 echoes both directional p-values") {
    const auto r = run("test --method ma2 --B 49 --x " + (dir / "x.csv").string() + " --y " +
                       (dir / "y.csv").string());
    REQUIRE(r.status == 0);
    const auto rec = json::parse(r.out);
    const double px = rec["details"]["p_x"], py = rec["details"]["p_y"];
    CHECK(rec["p_value"] == std::min(1.0, 2.0 * std::min(px, py)));
  }
  SECTION("rejection does not change the exit status") {
    std::string x = "0,1\n", y = "0,1\n";
    for (int i = 0; i < 12; ++i) {
      x += std::to_string(i * 0.01) + "," + std::to_string(i * 0.01) + "\n";
      y += std::to_string(50 + i) + "," + std::to_string(50 + i) + "\n";
    }
    write_file(dir / "xs.csv", x);
    write_file(dir / "ys.csv", y);
    const auto r = run("test --method schilling --k 3 --B 99 --x " + (dir / "xs.csv").string() + " --y " +
                       (dir / "ys.csv").string());
    REQUIRE(r.status == 0);
    CHECK(json::parse(r.out)["reject"] == true);
  }
  SECTION("the same flags give the same record") {
    const std::string flags =
        "test --method ma1 --B 49 --x " + (dir / "x.csv").string() + " --y " + (dir / "y.csv").string();
    auto a = json::parse(run(flags).out), b = json::parse(run(flags + " --threads 2").out);
    a.erase("duration_ms");
    b.erase("duration_ms");
    CHECK(a == b);
  }
}

TEST_CASE("test command failures exit nonzero", "[cli]") {
  const auto dir = scratch_dir("testerr");
  write_file(dir / "x.csv", "0,1,2\n0,0,0\n1,1,1\n");
  write_file(dir / "g.csv", "0,1,3\n0,0,0\n1,1,1\n");
  write_file(dir / "bad.csv", "0,1,2\n0,x,0\n");
  const auto x = (dir / "x.csv").string();
  CHECK(run("test --method hk --x " + x + " --y " + (dir / "g.csv").string()).status != 0);
  CHECK(run("test --method nope --x " + x + " --y " + x).status != 0);
  CHECK(run("test --method wilcoxon --x " + x + " --y " + (dir / "bad.csv").string()).status != 0);
  CHECK(run("test --method ma1 --B 0 --x " + x + " --y " + x).status != 0);
  CHECK(run("test --method wilcoxon --x " + x).status != 0);
}

TEST_CASE("headerless 24-point files with a known group difference", "[cli][csv]") {
  const auto dir = scratch_dir("hourly");
  std::mt19937_64 rng(24);
  std::normal_distribution<double> noise(0.0, 5.0);
  std::string x, y;
  for (int i = 0; i < 30; ++i) {
    const double level_x = noise(rng), level_y = noise(rng);
    for (int h = 0; h < 24; ++h) {
      const double base = 40 + 15 * std::sin(h * 3.14159 / 12);
      x += (h ? "," : "") + std::to_string(base + level_x + noise(rng));
      y += (h ? "," : "") + std::to_string(base + 12 + level_y + noise(rng));
    }
    x += "\n";
    y += "\n";
  }
  write_file(dir / "x.csv", x);
  write_file(dir / "y.csv", y);
  const std::string files = " --no-header --x " + (dir / "x.csv").string() + " --y " + (dir / "y.csv").string();
  for (const std::string method : {"schilling", "hk", "ma2"}) {
    const auto r = run("test --B 199 --method " + method + files);
    REQUIRE(r.status == 0);
    const auto rec = json::parse(r.out);
    INFO(method);
    CHECK(rec["m"] == 30);
    CHECK(rec["p_value"].get<double>() <= 0.01);
  }
}

TEST_CASE("depth command", "[cli]") {
  const auto dir = scratch_dir("depth");
  write_file(dir / "s.csv", "0,1,2\n1,1,1\n2,2,2\n3,3,3\n");
  const auto in = (dir / "s.csv").string();
  auto rec = json::parse(run("depth --in " + in).out);
  CHECK(rec["values"] == json::array({1.0 / 6, 0.5, 1.0 / 6}));
  rec = json::parse(run("depth --method band --in " + in).out);
  CHECK(rec["values"] == json::array({2.0 / 3, 1.0, 2.0 / 3}));
  CHECK(rec["exact"] == true);
  CHECK(run("depth --method band --r 5 --in " + in).status != 0);
  CHECK(run("depth --method other --in " + in).status != 0);
}

TEST_CASE("power command", "[cli][power]") {
  const auto dir = scratch_dir("power");
  const std::string config = R"([study]
m = 10
n = 10
replications = 1
seed = 3
[reference]
grid_points = 11
[test Wilcoxon]
method = wilcoxon
[test Schilling3]
method = schilling
k = 3
B = 19
[alternative Ys2.00]
sigma = 2
[alternative X]
)";
  write_file(dir / "tiny.ini", config);
  const std::string flags = "power --config " + (dir / "tiny.ini").string() + " --out-dir ";
  REQUIRE(run(flags + (dir / "a").string()).status == 0);
  REQUIRE(run(flags + (dir / "b").string() + " --threads 2").status == 0);
  const auto csv = slurp(dir / "a" / "tiny.csv");
  CHECK(csv == slurp(dir / "b" / "tiny.csv"));
  CHECK(slurp(dir / "a" / "tiny.txt") == slurp(dir / "b" / "tiny.txt"));
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "sample,Wilcoxon,Schilling3");
  while (std::getline(lines, line)) {
    const auto cells = line.substr(line.find(',') + 1);
    CHECK((cells == "0,0" || cells == "0,1" || cells == "1,0" || cells == "1,1"));
  }

  write_file(dir / "bad.ini", "[study]\nreplications = many\n[test W]\nmethod = wilcoxon\n[alternative X]\n");
  const std::string cmd = std::string(FUNCPERM_CLI) + " power --config " + (dir / "bad.ini").string() +
                          " --out-dir " + (dir / "c").string() + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string err;
  char buf[1024];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) err.append(buf, got);
  CHECK(pclose(pipe) != 0);
  CHECK(err.find("study.replications") != std::string::npos);
}

TEST_CASE("shipped configs parse with the table layout", "[cli][power]") {
  for (const std::string name : {"table1_desk", "table1_full"}) {
    std::ifstream in(std::string(FUNCPERM_CONFIG_DIR) + "/" + name + ".ini");
    REQUIRE(in);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(std::count(text.begin(), text.end(), '[') == 2 + 6 + 13);
  }
}
