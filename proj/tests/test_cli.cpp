#include <doctest.h>
#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>



#include "fracmoc/cli.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace fracmoc::cli;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("fracmoc_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(path));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (;;) {
            const auto comma = line.find(',', start);
            cells.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        rows.push_back(cells);
    }
    return rows;
}

double summary_max_abs(const std::string& out) {
    const auto pos = out.find("max_abs=");
    REQUIRE(pos != std::string::npos);
    return std::stod(out.substr(pos + 8));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("solve writes the classical transport grid") {
    TempDir tmp;
    const auto path = tmp.file("o.csv");
    const auto r = invoke({"solve", "--preset", "transport", "--alpha", "1", "--beta", "1", "--speed", "1", "--phi",
                           "sin(x)", "--domain", "0:3,0:1", "--nx", "4", "--nt", "2", "--out", path});
    REQUIRE(r.code == kOk);
    const auto rows = read_csv(path);
    REQUIRE(rows.size() == 9);
    CHECK(rows[0] == std::vector<std::string>{"x", "t", "u"});
    // rows ordered by t, then x
    CHECK(rows[1][0] == "0");
    CHECK(rows[1][1] == "0");
    CHECK(rows[4][0] == "3");
    CHECK(rows[5][1] == "1");
    CHECK(rows[8][0] == "3");
    CHECK(rows[8][1] == "1");
    CHECK(std::abs(std::stod(rows[8][2]) - std::sin(2.0)) < 1e-12);
    // (0, 1) traces back to x < 0 and is written as an empty cell
    CHECK(rows[5][2].empty());
    CHECK(rows[6][2] == "0");
    CHECK(std::stod(rows[3][2]) == std::sin(2.0));
}

TEST_CASE("solve with the fractional transport example") {
    TempDir tmp;
    for (const char* mode : {"closed", "traced"}) {
        CAPTURE(mode);
        const auto path = tmp.file(std::string("ex1_") + mode + ".csv");
        const auto r = invoke({"solve", "--preset", "transport", "--alpha", "1", "--beta", "0.5", "--speed", "2",
                               "--phi", "x", "--domain", "0:4,0:1", "--nx", "5", "--nt", "2", "--mode", mode, "--out",
                               path});
        REQUIRE(r.code == kOk);
        const auto rows = read_csv(path);
        REQUIRE(rows.size() == 11);
        REQUIRE(rows[10][0] == "4");
        REQUIRE(rows[10][1] == "1");
        const double want = std::pow(2.0 - 2.0 * oracle::gamma(1.5), 2);
        CHECK(std::abs(std::stod(rows[10][2]) - want) < 1e-9);
        CHECK(std::abs(std::stod(rows[10][2]) - 0.0517772) < 1e-7);
    }
}

TEST_CASE("solve with free-form coefficients and the similarity preset") {
    TempDir tmp;
    const auto path = tmp.file("free.csv");
    const auto r = invoke({"solve", "--alpha", "1", "--beta", "1", "--a", "1", "--b", "1", "--c", "t", "--phi", "x^2",
                           "--domain", "1:2,0:1", "--nx", "3", "--nt", "3", "--out", path});
    REQUIRE(r.code == kOk);
    const auto rows = read_csv(tmp.file("free.csv"));
    REQUIRE(rows.size() == 10);
    // (2, 1): (x - t)^2 + t^2/2 = 1.5 ... traced back to x0 = 1 inside the domain
    CHECK(std::abs(std::stod(rows[9][2]) - 1.5) < 1e-9);

    const auto sim = tmp.file("sim.csv");
    const auto s = invoke({"solve", "--preset", "similarity", "--alpha", "1", "--beta", "0.5", "--profile-f", "z^2",
                           "--domain", "1:2,1:2", "--nx", "2", "--nt", "2", "--out", sim});
    REQUIRE(s.code == kOk);
    const auto srows = read_csv(sim);
    REQUIRE(srows.size() == 5);
    CHECK(std::abs(std::stod(srows[3][2]) - std::pow(1.0 / oracle::gamma(1.5) / 2.0, 2)) < 1e-12);
}

TEST_CASE("solve is deterministic") {
    TempDir tmp;
    std::vector<std::string> args{"solve", "--preset", "transport", "--alpha", "0.6", "--beta", "0.8", "--speed",
                                  "0.5", "--phi", "exp(-x)", "--domain", "0:2,0:1", "--nx", "7", "--nt", "5",
                                  "--mode", "traced", "--out", tmp.file("a.csv")};
    REQUIRE(invoke(args).code == kOk);
    args.back() = tmp.file("b.csv");
    REQUIRE(invoke(args).code == kOk);
    CHECK(slurp(tmp.file("a.csv")) == slurp(tmp.file("b.csv")));
    CHECK_FALSE(slurp(tmp.file("a.csv")).empty());
}

TEST_CASE("usage errors exit 2 and name the problem") {
    TempDir tmp;
    const auto missing_alpha = invoke({"solve", "--preset", "transport", "--beta", "1", "--phi", "x", "--domain",
                                       "0:1,0:1", "--nx", "2", "--nt", "2", "--out", tmp.file("x.csv")});
    CHECK(missing_alpha.code == kUsage);
    CHECK(missing_alpha.err.find("--alpha") != std::string::npos);
    CHECK_FALSE(fs::exists(tmp.file("x.csv")));

    const auto bad_order = invoke({"frderiv", "--alpha", "1.5", "--expr", "x", "--at", "1"});
    CHECK(bad_order.code == kUsage);
    CHECK(bad_order.err.find("--alpha") != std::string::npos);

    const auto bad_expr = invoke({"frderiv", "--alpha", "0.5", "--expr", "x^", "--at", "1"});
    CHECK(bad_expr.code == kUsage);
    CHECK(bad_expr.err.find("offset 2") != std::string::npos);

    CHECK(invoke({}).code == kUsage);
    CHECK(invoke({"bogus"}).code == kUsage);
    CHECK(invoke({"solve", "--nope"}).code == kUsage);
    CHECK(invoke({"verify", "--check", "nonsense"}).code == kUsage);
    CHECK(invoke({"solve", "--alpha", "1", "--beta", "1", "--phi", "x", "--domain", "0:1", "--nx", "2", "--nt", "2",
                  "--out", tmp.file("y.csv"), "--preset", "transport"})
              .code == kUsage);
    CHECK(invoke({"--help"}).code == kOk);
    CHECK(invoke({"frderiv", "--help"}).code == kOk);
}

TEST_CASE("runtime failures exit 3") {
    const auto r = invoke({"frderiv", "--alpha", "0.5", "--expr", "ln(x)", "--at", "1"});
    CHECK(r.code == kRuntime);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("frderiv examples") {
    auto value = [](std::vector<std::string> args) {
        args.insert(args.begin(), "frderiv");
        const auto r = invoke(args);
        REQUIRE(r.code == kOk);
        return r.out;
    };
    CHECK(value({"--alpha", "0.5", "--expr", "x", "--var", "x", "--at", "1", "--method", "quad"}) == "1.12837916710\n");
    CHECK(value({"--alpha", "1", "--expr", "x^2", "--var", "x", "--at", "3"}) == "6.00000000000\n");
    CHECK(std::stod(value({"--alpha", "0.5", "--expr", "7", "--var", "x", "--at", "1"})) == 0.0);
    const double gl = std::stod(value({"--alpha", "0.5", "--expr", "t^2", "--var", "t", "--at", "1", "--method", "gl",
                                       "--h", "1e-4"}));
    CHECK(std::abs(gl - oracle::power_rule(2.0, 0.5)) < 1e-3);
}

TEST_CASE("verify examples and tolerance gate") {
    TempDir tmp;
    const auto transformed = invoke({"verify", "--check", "transformed", "--preset", "similarity", "--alpha", "0.5",
                                     "--beta", "0.5", "--profile-f", "z^2", "--domain", "1:2,1:2", "--nx", "64", "--nt",
                                     "64", "--tol", "1e-3", "--out", tmp.file("tr.csv")});
    CHECK(transformed.code == kOk);
    CHECK(summary_max_abs(transformed.out) <= 1e-3);
    const auto rows = read_csv(tmp.file("tr.csv"));
    REQUIRE(rows.size() == 64 * 64 + 1);
    CHECK(rows[0] == std::vector<std::string>{"X", "T", "residual"});

    const auto fundamental = invoke({"verify", "--check", "fundamental", "--alpha", "0.5", "--expr", "sin(x)",
                                     "--points", "0.5,1", "--panels", "1024", "--tol", "1e-4"});
    CHECK(fundamental.code == kOk);

    const auto strict = invoke({"verify", "--check", "fundamental", "--alpha", "0.5", "--expr", "sin(x)", "--points",
                                "1", "--panels", "256", "--tol", "1e-30"});
    CHECK(strict.code == kToleranceFail);

    const auto compare = invoke({"verify", "--check", "compare", "--alpha", "0.5", "--expr", "x^2", "--points", "1",
                                 "--out", tmp.file("cmp.csv")});
    CHECK(compare.code == kOk);
    CHECK(read_csv(tmp.file("cmp.csv"))[0] == std::vector<std::string>{"x", "quadrature", "gl", "gap", "order"});
    CHECK(summary_max_abs(compare.out) <= 1e-2);

    const auto parts = invoke({"verify", "--check", "parts", "--alpha", "1", "--expr", "1", "--v", "x^2", "--upper",
                               "1.5", "--panels", "512", "--tol", "1e-8"});
    CHECK(parts.code == kOk);

    const auto residual = invoke({"verify", "--check", "residual", "--preset", "transport", "--alpha", "1", "--beta",
                                  "1", "--speed", "1", "--phi", "sin(x)", "--domain", "1:3,0:1", "--nx", "4", "--nt",
                                  "3", "--tol", "1e-6"});
    CHECK(residual.code == kOk);
    CHECK(residual.out.find("skipped=0") != std::string::npos);

    CHECK(invoke({"verify", "--check", "parts", "--alpha", "0.5", "--expr", "x"}).code == kUsage);
    CHECK(invoke({"verify", "--check", "compare", "--alpha", "0.5", "--expr", "x", "--hs", "1e-3,1e-2"}).code ==
          kUsage);
}

}  // TEST_SUITE
