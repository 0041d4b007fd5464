#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

using nlohmann::ordered_json;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

// Runs the built binary (path via LINDLEY_CLI_PATH) with stderr discarded.
CliResult run_cli(const std::string& args) {
  const char* path = std::getenv("LINDLEY_CLI_PATH");
  REQUIRE(path != nullptr);
  const std::string cmd = std::string(path) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::string line;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string::npos) {
      out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

const char* kCoinNht =
    "nht --n 104490000 --successes 52263471 --theta0 0.5 --alpha 0.01 "
    "--confidence 0.99";

}  // namespace

TEST_CASE("cli nht reproduces the coin example") {
  const CliResult r = run_cli(kCoinNht);
  REQUIRE(r.exit_code == 0);
  const ordered_json j = ordered_json::parse(r.out);
  CHECK(std::fabs(j["estimate"].get<double>() - 0.5001768) < 5e-8);
  CHECK(std::fabs(j["std_error"].get<double>() - 0.00004891394) < 1e-11);
  CHECK(std::fabs(j["ci_lower"].get<double>() - 0.5000508) < 1e-7);
  CHECK(std::fabs(j["ci_upper"].get<double>() - 0.5003028) < 1e-7);
  CHECK(j["t_stat"].get<double>() > 3.612);
  CHECK(j["t_stat"].get<double>() < 3.617);
  CHECK(j["reject"].get<bool>());
}

TEST_CASE("cli nht z-test trivial case") {
  const CliResult r = run_cli("nht --n 100 --mean 0 --sigma 1 --theta0 0");
  REQUIRE(r.exit_code == 0);
  const ordered_json j = ordered_json::parse(r.out);
  CHECK(j["p_value"].get<double>() == 1.0);
  CHECK_FALSE(j["reject"].get<bool>());
}

TEST_CASE("cli nht contract violations exit 2") {
  CHECK(run_cli("nht --n 100 --mean 0 --sigma 1").exit_code == 2);  // no theta0
  CHECK(run_cli("nht --n 100 --theta0 0").exit_code == 2);          // no data
  CHECK(run_cli("nht --n 100 --mean 0 --sigma 1 --successes 5 --theta0 0").exit_code ==
        2);
  CHECK(run_cli("nht --n 100 --mean 0 --theta0 0").exit_code == 2);  // no sigma
  CHECK(run_cli("nht --n 100 --successes 50 --theta0 0.5 --alpha 1.5").exit_code == 2);
  CHECK(run_cli("nht --n 20 --successes 0 --theta0 0.5").exit_code == 2);
  CHECK(run_cli("bogus --n 1").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("nht --help").exit_code == 0);
}

TEST_CASE("cli bht matches the closed form") {
  const CliResult r =
      run_cli("bht --n 104490000 --mean 0.5001768 --sigma 0.5 --theta0 0.5");
  REQUIRE(r.exit_code == 0);
  const ordered_json j = ordered_json::parse(r.out);
  CHECK(j["bayes_factor"].get<double>() == Catch::Approx(14.879047832508970).epsilon(1e-9));
  CHECK(j["posterior_h0"].get<double>() == Catch::Approx(0.9370239317528402).epsilon(1e-9));
  CHECK(j["prior_sd"].get<double>() == 0.5);  // defaulted to sigma

  const CliResult trivial = run_cli("bht --n 99 --mean 0.5 --sigma 1 --theta0 0.5");
  const ordered_json jt = ordered_json::parse(trivial.out);
  // output is rounded to 10 significant digits by default
  CHECK(jt["bayes_factor"].get<double>() == Catch::Approx(10.0).epsilon(1e-9));
  CHECK(jt["posterior_h0"].get<double>() == Catch::Approx(10.0 / 11.0).epsilon(1e-9));

  CHECK(run_cli("bht --n 99 --mean 0.5 --sigma 1 --theta0 0.5 --pi0 1.0").exit_code ==
        2);
}

TEST_CASE("cli bht explicit prior-sd equals the default when they coincide") {
  const CliResult a =
      run_cli("bht --n 1000 --mean 0.52 --sigma 0.5 --theta0 0.5");
  const CliResult b =
      run_cli("bht --n 1000 --mean 0.52 --sigma 0.5 --theta0 0.5 --prior-sd 0.5");
  CHECK(a.out == b.out);
  const CliResult c =
      run_cli("bht --n 1000 --mean 0.52 --sigma 0.5 --theta0 0.5 --prior-sd 2.5");
  CHECK(a.out != c.out);
}

TEST_CASE("cli adjust decisions") {
  const std::string coin(kCoinNht + 4);  // strip "nht "
  const CliResult accept =
      run_cli("adjust " + coin + " --range-lower 0.4995 --range-upper 0.5005");
  REQUIRE(accept.exit_code == 0);
  const ordered_json ja = ordered_json::parse(accept.out);
  CHECK(ja["decision"] == "accept_h0");
  CHECK(ja["overridden"].get<bool>());

  const CliResult disjoint =
      run_cli("adjust " + coin + " --range-lower 0.52 --range-upper 0.53");
  const ordered_json jd = ordered_json::parse(disjoint.out);
  CHECK(jd["decision"] == "reject_h0");
  CHECK_FALSE(jd["overridden"].get<bool>());

  const CliResult degenerate =
      run_cli("adjust " + coin + " --range-lower 0.5 --range-upper 0.5");
  const ordered_json jg = ordered_json::parse(degenerate.out);
  CHECK(jg["decision"] == "reject_h0");  // 0.5 is outside the 99% CI

  const CliResult delta = run_cli("adjust " + coin + " --delta 0.001");
  const ordered_json jl = ordered_json::parse(delta.out);
  CHECK(jl["decision"] == "accept_h0");
  CHECK(jl["range_delta"].get<double>() == 0.001);

  CHECK(run_cli("adjust " + coin + " --delta 0").exit_code == 2);
  CHECK(run_cli("adjust " + coin).exit_code == 2);  // no range at all
  CHECK(run_cli("adjust " + coin + " --delta 0.001 --range-lower 0.4 --range-upper 0.6")
            .exit_code == 2);
  CHECK(run_cli("adjust " + coin + " --range-lower 0.4995").exit_code == 2);
  // relative range around theta0 = 0 is degenerate
  CHECK(run_cli("adjust --n 100 --mean 0.1 --sigma 1 --theta0 0 --delta 0.05")
            .exit_code == 2);
}

TEST_CASE("cli inflate") {
  const ordered_json a =
      ordered_json::parse(run_cli("inflate --p-observed 0.04 --prob-assumptions 0.8").out);
  CHECK(a["p_inflated"].get<double>() == Catch::Approx(0.05).epsilon(1e-12));
  const ordered_json b =
      ordered_json::parse(run_cli("inflate --p-observed 0.04 --prob-assumptions 1").out);
  CHECK(b["p_inflated"].get<double>() == 0.04);
  const ordered_json c =
      ordered_json::parse(run_cli("inflate --p-observed 0.9 --prob-assumptions 0.5").out);
  CHECK(c["p_inflated"].get<double>() == 1.0);
  CHECK(run_cli("inflate --p-observed 0.9 --prob-assumptions 0").exit_code == 2);
  CHECK(run_cli("inflate --p-observed 0.9 --prob-assumptions 1.5").exit_code == 2);
  CHECK(run_cli("inflate --p-observed -0.1 --prob-assumptions 0.5").exit_code == 2);
}

TEST_CASE("cli sweep covers the paradox regime") {
  const CliResult r = run_cli(
      "sweep --t 2.576 --n-start 10 --n-end 1000000000 --n-factor 2 --alpha 0.01 "
      "--format csv");
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() >= 4);
  CHECK(lines[0] ==
        "n,t,p_value,bayes_factor,log_bayes_factor,posterior_h0,nht_reject,"
        "bht_favors_h0");
  // grid lands exactly on n-end and the posterior has converged
  const std::string& last_row = lines[lines.size() - 2];
  CHECK(last_row.rfind("1000000000,", 0) == 0);
  CHECK(lines.back().rfind("# crossover_n=", 0) == 0);
  CHECK(lines.back().find("crossover_n=none") == std::string::npos);

  const ordered_json j = ordered_json::parse(
      run_cli("sweep --t 2.576 --n-start 10 --n-end 1000000000 --n-factor 2 "
              "--alpha 0.01")
          .out);
  const auto& rows = j["rows"];
  REQUIRE(rows.size() >= 2);
  CHECK(rows.back()["n"].get<long long>() == 1000000000);
  CHECK(rows.back()["posterior_h0"].get<double>() > 0.999);
  for (const auto& row : rows) {
    CHECK(row["p_value"].get<double>() == rows[0]["p_value"].get<double>());
    CHECK(row["nht_reject"].get<bool>());
  }
  CHECK(j["crossover_n"].is_number_integer());
  CHECK(j["limit_check"].get<bool>());
}

TEST_CASE("cli sweep without rejection reports no crossover") {
  const CliResult r =
      run_cli("sweep --t 0 --n-start 10 --n-end 1000 --n-factor 2 --format csv");
  REQUIRE(r.exit_code == 0);
  CHECK(lines_of(r.out).back().rfind("# crossover_n=none", 0) == 0);
  const ordered_json j =
      ordered_json::parse(run_cli("sweep --t 0 --n-start 10 --n-end 1000").out);
  CHECK(j["crossover_n"].is_null());
}

TEST_CASE("cli sweep unit grid crossover") {
  const ordered_json j = ordered_json::parse(
      run_cli("sweep --t 1.96 --n-start 1 --n-end 100 --n-factor 1 "
              "--posterior-threshold 0.5")
          .out);
  CHECK(j["crossover_n"].get<long long>() == 42);
  CHECK(j["rows"].size() == 100);
}

TEST_CASE("cli sweep contract violations exit 2") {
  CHECK(run_cli("sweep --t 2 --n-start 100 --n-end 100").exit_code == 2);
  CHECK(run_cli("sweep --t 2 --n-start 200 --n-end 100").exit_code == 2);
  CHECK(run_cli("sweep --t 2 --n-start 10 --n-end 100 --n-factor 0.5").exit_code == 2);
  CHECK(run_cli("sweep --t -1 --n-start 10 --n-end 100").exit_code == 2);
}

TEST_CASE("cli simulate is calibrated and byte-stable") {
  const std::string flags =
      "simulate --theta-true 0 --theta0 0 --sigma 1 --n 100 --alpha 0.05 "
      "--reps 100000 --seed 31415926";
  const CliResult a = run_cli(flags);
  REQUIRE(a.exit_code == 0);
  const CliResult b = run_cli(flags);
  CHECK(a.out == b.out);

  const ordered_json j = ordered_json::parse(a.out);
  CHECK(std::fabs(j["reject_rate"].get<double>() - 0.05) <= 0.0021);
  CHECK(std::fabs(j["coverage_rate"].get<double>() - 0.95) <= 0.0021);
  CHECK(j["replications"].get<long long>() == 100000);
  CHECK(j["seed"].get<long long>() == 31415926);

  const CliResult other = run_cli(
      "simulate --theta-true 0 --theta0 0 --sigma 1 --n 100 --alpha 0.05 "
      "--reps 100000 --seed 27182818");
  CHECK(a.out != other.out);

  CHECK(run_cli("simulate --theta-true 0 --theta0 0 --sigma 1 --n 100 --reps 0 "
                "--seed 1")
            .exit_code == 2);
}

TEST_CASE("cli format and precision handling") {
  CHECK(run_cli(std::string(kCoinNht) + " --format xml").exit_code == 2);
  CHECK(run_cli(std::string(kCoinNht) + " --precision 5").exit_code == 2);
  CHECK(run_cli(std::string(kCoinNht) + " --precision 18").exit_code == 2);

  // JSON and CSV carry identical values
  const ordered_json j =
      ordered_json::parse(run_cli(std::string(kCoinNht) + " --precision 12").out);
  const auto csv =
      lines_of(run_cli(std::string(kCoinNht) + " --precision 12 --format csv").out);
  REQUIRE(csv.size() == 2);
  std::vector<std::string> header, cells;
  {
    std::string tok;
    for (char ch : csv[0] + ",") {
      if (ch == ',') {
        header.push_back(tok);
        tok.clear();
      } else {
        tok += ch;
      }
    }
    for (char ch : csv[1] + ",") {
      if (ch == ',') {
        cells.push_back(tok);
        tok.clear();
      } else {
        tok += ch;
      }
    }
  }
  REQUIRE(header.size() == cells.size());
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto& v = j.at(header[i]);
    if (v.is_boolean()) {
      CHECK(cells[i] == (v.get<bool>() ? "true" : "false"));
    } else {
      CHECK(std::strtod(cells[i].c_str(), nullptr) == v.get<double>());
    }
  }

  // higher precision refines the estimate field
  const ordered_json p6 =
      ordered_json::parse(run_cli(std::string(kCoinNht) + " --precision 6").out);
  CHECK(p6["estimate"].get<double>() == 0.500177);
}
