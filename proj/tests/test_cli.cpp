#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

#include "hegemony/cli.hpp"
#include "hegemony/report.hpp"
#include "hegemony/rng.hpp"
#include "hegemony/simulator.hpp"
#include "support/fixtures.hpp"

using namespace hegemony;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path()
           / ("hegemony_cli_test_" + std::to_string(::getpid()) + "_"
              + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string entries_to_text(const std::vector<RibEntry>& entries) {
  std::ostringstream out;
  render_text(entries, out);
  return out.str();
}

cli::GlobalOptions toy_global(const std::string& input, const std::string& output) {
  cli::GlobalOptions o;
  o.inputs = {input};
  o.output = output;
  o.config = fixtures::toy_config(0.1, false);
  return o;
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(HEGEMONY_CLI_PATH) + " " + args;
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("cmd_global: planted transit core tops the table") {
  TempDir dir;
  HierarchyParams params;
  params.transits = 2;
  params.regionals = 6;
  params.stubs = 30;
  params.viewpoint_stubs = 12;
  params.seed = 13;
  auto topo = two_level_hierarchy(params);
  write_file(dir.file("snap.txt"), entries_to_text(to_rib_entries(topo)));

  auto options = toy_global(dir.file("snap.txt"), dir.file("out.csv"));
  std::ostringstream err;
  CHECK(cli::cmd_global(options, err) == cli::kOk);

  std::ifstream out(dir.file("out.csv"));
  auto rows = parse_scores_csv(out);
  REQUIRE(!rows.empty());
  // transits are ASNs 1 and 2; at least the very top row must be one of them
  CHECK(rows[0].asn <= 2);
  CHECK(fs::exists(dir.file("out.csv.manifest.json")));
}

TEST_CASE("cmd_global: alpha 0 reproduces plain per-AS means") {
  TempDir dir;
  Rng rng(71);
  auto topo = fixtures::random_connected(rng, 25, 8, 9);
  auto entries = to_rib_entries(topo);
  write_file(dir.file("snap.txt"), entries_to_text(entries));

  auto options = toy_global(dir.file("snap.txt"), dir.file("out.csv"));
  options.config.alpha = 0.0;
  std::ostringstream err;
  REQUIRE(cli::cmd_global(options, err) == cli::kOk);

  auto snap = fixtures::build_snapshot(entries, fixtures::toy_config(0.0, false));
  auto expected = compute_hegemony(snap, GraphScope::global_scope());
  std::ifstream out(dir.file("out.csv"));
  for (const auto& row : parse_scores_csv(out))
    CHECK(row.hegemony == format_score(expected.value(row.asn)));
}

TEST_CASE("cmd_global: defaults match the documented operating point") {
  cli::GlobalOptions defaults;
  CHECK(defaults.config.alpha == 0.1);
  CHECK(defaults.config.full_feed_fraction == 0.75);
  CHECK(defaults.config.min_viewpoints == 10);
  CHECK(defaults.config.weighted == WeightedMode::automatic);
  CHECK(defaults.config.full_feed_only);
  CHECK(defaults.config.weighting_enabled()); // auto = on for IPv4
  HegemonyConfig v6 = defaults.config;
  v6.family = AddressFamily::ipv6;
  CHECK(!v6.weighting_enabled()); // auto = off for IPv6
}

TEST_CASE("scores render with nine significant digits") {
  CHECK(format_score(1.0 / 3.0) == "0.333333333");
  CHECK(format_score(1.0) == "1");
  CHECK(format_score(2.0 / 3.0) == "0.666666667");
  CHECK(format_score(0.000123456789123) == "0.000123456789");
}

TEST_CASE("cmd_global: few viewpoints exit 0 with the low-confidence flag set") {
  TempDir dir;
  auto topo = fixtures::tree13(); // 3 viewpoints < default minimum of 10
  write_file(dir.file("snap.txt"), entries_to_text(to_rib_entries(topo)));
  cli::GlobalOptions options;
  options.inputs = {dir.file("snap.txt")};
  options.output = dir.file("out.csv");
  options.config.full_feed_only = false;
  options.config.weighted = WeightedMode::off;
  std::ostringstream err;
  CHECK(cli::cmd_global(options, err) == cli::kOk);
  CHECK(err.str().find("low-confidence") != std::string::npos);
  std::istringstream out(read_file(dir.file("out.csv")));
  auto rows = parse_scores_csv(out);
  REQUIRE(!rows.empty());
  for (const auto& row : rows)
    CHECK(row.rest.substr(row.rest.rfind(',') + 1) == "1");
}

TEST_CASE("cmd_global: unreadable input exits 1, empty result exits 2") {
  TempDir dir;
  std::ostringstream err;
  auto options = toy_global(dir.file("missing.txt"), "-");
  CHECK(cli::cmd_global(options, err) == cli::kInputError);
  CHECK(err.str().find("missing.txt") != std::string::npos);

  write_file(dir.file("empty.txt"), "# nothing but comments\n");
  std::ostringstream err2;
  auto empty = toy_global(dir.file("empty.txt"), dir.file("out.csv"));
  CHECK(cli::cmd_global(empty, err2) == cli::kEmptyResult);
  CHECK(read_file(dir.file("out.csv"))
        == "scope,asn,hegemony,n_viewpoints,n_trimmed,low_confidence\n");
}

TEST_CASE("cmd_global: manifest records policies and balanced counters") {
  TempDir dir;
  write_file(dir.file("snap.txt"),
             "c|10.0.0.1|100|192.0.2.0/24|100 200 300|1500000000\n"
             "c|10.0.0.1|100|198.51.100.0/24|100 200 100|1500000000\n" // loop
             "c|10.0.0.1|100|203.0.113.0/24|100 {300,400}|1500000000\n" // as-set
             "garbage\n"
             "c|10.0.0.2|101|192.0.2.0/24|101 300|1500000001\n");
  auto options = toy_global(dir.file("snap.txt"), dir.file("out.csv"));
  std::ostringstream err;
  REQUIRE(cli::cmd_global(options, err) == cli::kOk);

  auto manifest = nlohmann::json::parse(read_file(dir.file("out.csv.manifest.json")));
  CHECK(manifest["policies"]["as_set"] == "reject");
  CHECK(manifest["policies"]["reserved_asn_filter"] == true);
  CHECK(manifest["policies"]["prepending"] == "collapse");
  CHECK(manifest["config"]["alpha"] == 0.1);
  CHECK(manifest["parse_counters"]["text_bad_lines"] == 1);
  CHECK(manifest["snapshot"]["date"] == "2017-07-14");

  const auto& c = manifest["counters"];
  auto rejected = c["rejected"]["as_set"].get<std::uint64_t>()
                  + c["rejected"]["loop"].get<std::uint64_t>()
                  + c["rejected"]["reserved_asn"].get<std::uint64_t>()
                  + c["rejected"]["empty"].get<std::uint64_t>();
  CHECK(c["rejected"]["loop"] == 1);
  CHECK(c["rejected"]["as_set"] == 1);
  // every parsed entry is accounted for exactly once
  CHECK(c["entries_added"].get<std::uint64_t>()
        == c["clean_routes"].get<std::uint64_t>() + rejected
               + c["other_family"].get<std::uint64_t>()
               + c["duplicates_replaced"].get<std::uint64_t>()
               + c["default_routes"].get<std::uint64_t>());
}

TEST_CASE("cmd_local: single-homed origin shows its upstream at 1") {
  TempDir dir;
  ToyTopology topo;
  topo.add_edge(50, 40);
  topo.add_edge(40, 10);
  for (Asn leaf : {11, 12, 13})
    topo.add_edge(10, leaf);
  topo.viewpoints = {11, 12, 13};
  write_file(dir.file("snap.txt"), entries_to_text(to_rib_entries(topo)));

  cli::LocalOptions options;
  options.inputs = {dir.file("snap.txt")};
  options.output = dir.file("out.csv");
  options.config = fixtures::toy_config(0.1, false);
  options.origins = {50};
  std::ostringstream err;
  REQUIRE(cli::cmd_local(options, err) == cli::kOk);

  auto text = read_file(dir.file("out.csv"));
  CHECK(text.find("50,40,1,") != std::string::npos);
  CHECK(text.find("\n50,50,") == std::string::npos); // origin row omitted
}

TEST_CASE("cmd_local: --all matches origin-by-origin runs") {
  TempDir dir;
  Rng rng(17);
  auto topo = fixtures::random_connected(rng, 12, 4, 5);
  write_file(dir.file("snap.txt"), entries_to_text(to_rib_entries(topo)));

  cli::LocalOptions all;
  all.inputs = {dir.file("snap.txt")};
  all.output = dir.file("all.csv");
  all.config = fixtures::toy_config(0.1, false);
  all.all = true;
  std::ostringstream err;
  REQUIRE(cli::cmd_local(all, err) == cli::kOk);
  auto all_text = read_file(dir.file("all.csv"));

  cli::LocalOptions each = all;
  each.all = false;
  each.output = dir.file("each.csv");
  each.origins.assign(topo.nodes.begin(), topo.nodes.end());
  REQUIRE(cli::cmd_local(each, err) == cli::kOk);
  CHECK(read_file(dir.file("each.csv")) == all_text);

  std::set<std::string> origins;
  std::istringstream lines(all_text);
  std::string line;
  std::getline(lines, line); // header
  while (std::getline(lines, line))
    origins.insert(line.substr(0, line.find(',')));
  CHECK(origins.size() == topo.nodes.size()); // one group per origin
}

TEST_CASE("cmd_local: summary counts equal a recount of the long CSV") {
  TempDir dir;
  Rng rng(23);
  auto topo = fixtures::random_connected(rng, 15, 5, 6);
  write_file(dir.file("snap.txt"), entries_to_text(to_rib_entries(topo)));

  cli::LocalOptions options;
  options.inputs = {dir.file("snap.txt")};
  options.output = dir.file("long.csv");
  options.summary_output = dir.file("summary.csv");
  options.config = fixtures::toy_config(0.1, false);
  options.all = true;
  std::ostringstream err;
  REQUIRE(cli::cmd_local(options, err) == cli::kOk);

  // independent recount from the long CSV
  std::map<std::string, std::pair<int, int>> recount; // origin -> {nodes, above}
  std::istringstream lines(read_file(dir.file("long.csv")));
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    auto c1 = line.find(',');
    auto c2 = line.find(',', c1 + 1);
    auto c3 = line.find(',', c2 + 1);
    std::string origin = line.substr(0, c1);
    double h = std::stod(line.substr(c2 + 1, c3 - c2 - 1));
    ++recount[origin].first;
    if (h > 0.01)
      ++recount[origin].second;
  }
  std::istringstream summary(read_file(dir.file("summary.csv")));
  std::getline(summary, line);
  CHECK(line == "origin_asn,nodes,zero_hegemony,above_threshold");
  while (std::getline(summary, line)) {
    auto c1 = line.find(',');
    auto c2 = line.find(',', c1 + 1);
    auto c3 = line.find(',', c2 + 1);
    std::string origin = line.substr(0, c1);
    int nodes = std::stoi(line.substr(c1 + 1, c2 - c1 - 1));
    int above = std::stoi(line.substr(c3 + 1));
    CHECK(nodes == recount[origin].first);
    CHECK(above == recount[origin].second);
  }
}

TEST_CASE("cmd_timeseries: two snapshots form two date groups") {
  TempDir dir;
  ToyTopology topo1; // origin 50 behind upstream 40
  topo1.add_edge(50, 40);
  topo1.add_edge(40, 10);
  for (Asn leaf : {11, 12, 13})
    topo1.add_edge(10, leaf);
  topo1.viewpoints = {11, 12, 13};
  ToyTopology topo2; // upstream switched to 41
  topo2.add_edge(50, 41);
  topo2.add_edge(41, 10);
  for (Asn leaf : {11, 12, 13})
    topo2.add_edge(10, leaf);
  topo2.viewpoints = {11, 12, 13};

  std::ostringstream err;
  for (int i = 0; i < 2; ++i) {
    write_file(dir.file("snap" + std::to_string(i) + ".txt"),
               entries_to_text(to_rib_entries(i == 0 ? topo1 : topo2)));
    cli::LocalOptions options;
    options.inputs = {dir.file("snap" + std::to_string(i) + ".txt")};
    options.output = dir.file("out" + std::to_string(i) + ".csv");
    options.config = fixtures::toy_config(0.1, false);
    options.origins = {50};
    options.date = i == 0 ? "2017-01-15" : "2017-02-15";
    REQUIRE(cli::cmd_local(options, err) == cli::kOk);
  }

  cli::TimeseriesOptions ts;
  ts.inputs = {dir.file("out0.csv"), dir.file("out1.csv")};
  ts.output = dir.file("series.csv");
  REQUIRE(cli::cmd_timeseries(ts, err) == cli::kOk);
  auto series = read_file(dir.file("series.csv"));
  CHECK(series.find("2017-01-15,local:50,40,1") != std::string::npos);
  CHECK(series.find("2017-02-15,local:50,41,1") != std::string::npos);
  // the dependency moved: upstream 40 carries no row in the second snapshot
  CHECK(series.find("2017-02-15,local:50,40") == std::string::npos);
}

TEST_CASE("cmd_timeseries: mismatched alpha refuses without --force") {
  TempDir dir;
  ToyTopology topo;
  topo.add_edge(1, 2);
  topo.add_edge(1, 3);
  topo.viewpoints = {2, 3};
  write_file(dir.file("snap.txt"), entries_to_text(to_rib_entries(topo)));
  std::ostringstream err;
  for (int i = 0; i < 2; ++i) {
    cli::GlobalOptions options = toy_global(dir.file("snap.txt"),
                                            dir.file("out" + std::to_string(i) + ".csv"));
    options.config.alpha = i == 0 ? 0.1 : 0.2;
    options.date = "2017-0" + std::to_string(i + 1) + "-15";
    REQUIRE(cli::cmd_global(options, err) == cli::kOk);
  }
  cli::TimeseriesOptions ts;
  ts.inputs = {dir.file("out0.csv"), dir.file("out1.csv")};
  ts.output = dir.file("series.csv");
  CHECK(cli::cmd_timeseries(ts, err) == cli::kInputError);
  ts.force = true;
  CHECK(cli::cmd_timeseries(ts, err) == cli::kOk);
}

TEST_CASE("cmd_robustness: KL table over a topology file") {
  TempDir dir;
  std::ostringstream topo_text;
  auto topo = fixtures::hierarchy13();
  for (auto [a, b] : topo.edges)
    topo_text << a << ' ' << b << '\n';
  for (Asn vp : topo.viewpoints)
    topo_text << "viewpoint " << vp << '\n';
  write_file(dir.file("topo.txt"), topo_text.str());

  cli::RobustnessOptions options;
  options.topology = dir.file("topo.txt");
  options.output = dir.file("kl.csv");
  options.config = fixtures::toy_config(0.1, false);
  options.ks = {2, 3, 50};
  options.trials = 5;
  std::ostringstream err;
  REQUIRE(cli::cmd_robustness(options, err) == cli::kOk);
  CHECK(err.str().find("k=50") != std::string::npos); // oversized k warned

  auto text = read_file(dir.file("kl.csv"));
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "metric,k,trial,kl");
  int bc_rows = 0, heg_rows = 0;
  while (std::getline(lines, line)) {
    if (line.rfind("bc,", 0) == 0)
      ++bc_rows;
    if (line.rfind("hegemony,", 0) == 0)
      ++heg_rows;
  }
  CHECK(bc_rows == 10); // 2 ks x 5 trials
  CHECK(heg_rows == 10);
}

TEST_CASE("cli binary: end-to-end run with env override") {
  TempDir dir;
  auto topo = fixtures::tree13();
  write_file(dir.file("snap.txt"), entries_to_text(to_rib_entries(topo)));

  int rc = run_cli("global " + dir.file("snap.txt") + " -o " + dir.file("a.csv")
                   + " --alpha 0 --min-viewpoints 1 --include-partial-feeds"
                   + " 2>/dev/null");
  REQUIRE(rc == 0);

  ::setenv("HEGEMONY_ALPHA", "0", 1);
  int rc_env = run_cli("global " + dir.file("snap.txt") + " -o " + dir.file("b.csv")
                       + " --min-viewpoints 1 --include-partial-feeds 2>/dev/null");
  ::unsetenv("HEGEMONY_ALPHA");
  REQUIRE(rc_env == 0);
  CHECK(read_file(dir.file("a.csv")) == read_file(dir.file("b.csv")));

  CHECK(run_cli("global /does/not/exist.txt 2>/dev/null") == 1);
  CHECK(run_cli("local " + dir.file("snap.txt") + " 2>/dev/null") == 1);
  CHECK(run_cli("--version > /dev/null 2>&1") == 0);
}
