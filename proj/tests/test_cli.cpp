#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "parlp/gfa.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("parlp_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args) {
    const std::string cmd = std::string(PARLP_CLI_BIN) + " " + args;
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("validate: inadmissible matrix exits 2 and cites admissibility") {
    TempDir tmp;
    write_file(tmp.path / "bad.json", R"({"matrix": [0.5, 0, 0, 1], "grid": {"n": 2}})");
    const int code = run("--config " + (tmp.path / "bad.json").string() + " --out " +
                         (tmp.path / "out").string() + " validate 2> " +
                         (tmp.path / "err.txt").string());
    CHECK(code == 2);
    const std::string err = read_file(tmp.path / "err.txt");
    CHECK(err.find("admissibility") != std::string::npos);
}

TEST_CASE("validate: admissible matrix exits 0 and writes a report") {
    TempDir tmp;
    write_file(tmp.path / "ok.json", R"({"matrix": [1, 0, 0, 2], "grid": {"n": 2}})");
    const int code = run("--config " + (tmp.path / "ok.json").string() + " --out " +
                         (tmp.path / "out").string() + " validate > /dev/null");
    CHECK(code == 0);
    CHECK(fs::exists(tmp.path / "out" / "validate.json"));
    CHECK(fs::exists(tmp.path / "out" / "manifest.json"));
    const std::string rep = read_file(tmp.path / "out" / "validate.json");
    CHECK(rep.find("\"gamma\": 3.0") != std::string::npos);
}

TEST_CASE("unknown config keys are rejected with exit 2") {
    TempDir tmp;
    write_file(tmp.path / "weird.json", R"({"matrix": [1,0,0,1], "grid": {"n":2}, "blorp": 5})");
    const int code = run("--config " + (tmp.path / "weird.json").string() + " --out " +
                         (tmp.path / "out").string() + " validate 2> /dev/null");
    CHECK(code == 2);
}

TEST_CASE("rho-table emits the closed-form value for diag(1,2) at (3,4)") {
    TempDir tmp;
    write_file(tmp.path / "cfg.json",
               R"({"matrix": [1, 0, 0, 2], "grid": {"n": 2}, "points": [[3, 4]]})");
    const int code = run("--config " + (tmp.path / "cfg.json").string() + " --out " +
                         (tmp.path / "out").string() + " rho-table > /dev/null");
    REQUIRE(code == 0);
    std::ifstream csv(tmp.path / "out" / "rho_table.csv");
    std::string header, row;
    std::getline(csv, header);
    CHECK(header == "x1,x2,rho,rho_star");
    std::getline(csv, row);
    double x1, x2, r, rs;
    char c;
    std::stringstream ss(row);
    ss >> x1 >> c >> x2 >> c >> r >> c >> rs;
    CHECK(x1 == 3.0);
    CHECK(r == doctest::Approx(std::sqrt((9.0 + std::sqrt(145.0)) / 2.0)).epsilon(1e-9));
    CHECK(r == doctest::Approx(3.2436).epsilon(1e-4));
}

TEST_CASE("equivalence: fixed seed gives byte-identical CSV across runs") {
    TempDir tmp;
    write_file(tmp.path / "cfg.json", R"({
        "matrix": [1, 0, 0, 2],
        "grid": {"n": 2, "L": 16.0, "N": 64},
        "symbol": {"id": "heat"},
        "window": {"j_min": -4, "j_max": 2, "K": 2},
        "exponents": {"p": 1.0, "q": 2.0},
        "seed": 9,
        "count": 6
    })");
    const int c1 = run("--config " + (tmp.path / "cfg.json").string() + " --out " +
                       (tmp.path / "a").string() + " equivalence > /dev/null");
    const int c2 = run("--config " + (tmp.path / "cfg.json").string() + " --out " +
                       (tmp.path / "b").string() + " equivalence > /dev/null");
    REQUIRE(c1 == 0);
    REQUIRE(c2 == 0);
    CHECK(read_file(tmp.path / "a" / "equivalence.csv") ==
          read_file(tmp.path / "b" / "equivalence.csv"));
    CHECK(read_file(tmp.path / "a" / "equivalence.csv").find("band_0") != std::string::npos);
}

TEST_CASE("transform/reconstruct/partition/constants pipelines succeed") {
    TempDir tmp;
    write_file(tmp.path / "cfg.json", R"({
        "matrix": [1, 0, 0, 2],
        "grid": {"n": 2, "L": 16.0, "N": 128},
        "symbol": {"id": "heat"},
        "seed": 4
    })");
    const std::string base = "--config " + (tmp.path / "cfg.json").string() + " --out ";

    CHECK(run(base + (tmp.path / "t").string() + " transform > /dev/null") == 0);
    const parlp::GridFunction f =
        parlp::read_gfa((tmp.path / "t" / "physical.gfa").string(), parlp::Side::physical);
    CHECK(f.grid.samples == 128);
    CHECK(parlp::max_abs(f) > 0.0);

    CHECK(run(base + (tmp.path / "r").string() + " reconstruct > /dev/null") == 0);
    CHECK(fs::exists(tmp.path / "r" / "reconstruct.csv"));

    CHECK(run(base + (tmp.path / "p").string() + " partition > /dev/null") == 0);
    CHECK(fs::exists(tmp.path / "p" / "eta_hat.gfa"));
    CHECK(fs::exists(tmp.path / "p" / "partition.json"));

    write_file(tmp.path / "cfg64.json", R"({
        "matrix": [1, 0, 0, 2],
        "grid": {"n": 2, "L": 16.0, "N": 64},
        "symbol": {"id": "heat"},
        "seed": 4
    })");
    CHECK(run("--config " + (tmp.path / "cfg64.json").string() + " --out " +
              (tmp.path / "c").string() + " constants > /dev/null") == 0);
    const std::string ccsv = read_file(tmp.path / "c" / "constants.csv");
    CHECK(ccsv.find("j,C_psi_j_L,b_pow_neg_j,product") != std::string::npos);
}

TEST_CASE("gfunc and atoms commands") {
    TempDir tmp;
    write_file(tmp.path / "cfg.json", R"({
        "matrix": [1, 0, 0, 2],
        "grid": {"n": 2, "L": 16.0, "N": 64},
        "symbol": {"id": "heat"},
        "window": {"j_min": -4, "j_max": 2, "K": 4},
        "seed": 6,
        "count": 5
    })");
    const std::string base = "--config " + (tmp.path / "cfg.json").string() + " --out ";
    CHECK(run(base + (tmp.path / "g").string() + " gfunc > /dev/null") == 0);
    const std::string gcsv = read_file(tmp.path / "g" / "gfunc.csv");
    CHECK(gcsv.find("point,g_discrete,g_continuous") != std::string::npos);

    CHECK(run(base + (tmp.path / "a").string() + " atoms > /dev/null") == 0);
    const std::string acsv = read_file(tmp.path / "a" / "atoms.csv");
    CHECK(acsv.find("pass") != std::string::npos);
}

TEST_CASE("seed override changes outputs; threads flag does not") {
    TempDir tmp;
    write_file(tmp.path / "cfg.json", R"({
        "matrix": [1, 0, 0, 2],
        "grid": {"n": 2, "L": 16.0, "N": 64},
        "points": [],
        "seed": 1
    })");
    const std::string base = "--config " + (tmp.path / "cfg.json").string();
    CHECK(run(base + " --out " + (tmp.path / "s1").string() + " rho-table > /dev/null") == 0);
    CHECK(run(base + " --seed 2 --out " + (tmp.path / "s2").string() +
              " rho-table > /dev/null") == 0);
    CHECK(read_file(tmp.path / "s1" / "rho_table.csv") !=
          read_file(tmp.path / "s2" / "rho_table.csv"));

    CHECK(run(base + " --threads 1 --out " + (tmp.path / "t1").string() +
              " rho-table > /dev/null") == 0);
    CHECK(run(base + " --threads 2 --out " + (tmp.path / "t2").string() +
              " rho-table > /dev/null") == 0);
    CHECK(read_file(tmp.path / "t1" / "rho_table.csv") ==
          read_file(tmp.path / "t2" / "rho_table.csv"));

    // the FFT/convolution pipelines must also be thread-count independent
    write_file(tmp.path / "gcfg.json", R"({
        "matrix": [1, 0, 0, 2],
        "grid": {"n": 2, "L": 16.0, "N": 64},
        "symbol": {"id": "heat"},
        "window": {"j_min": -4, "j_max": 2, "K": 2},
        "seed": 12
    })");
    const std::string gbase = "--config " + (tmp.path / "gcfg.json").string();
    CHECK(run(gbase + " --threads 1 --out " + (tmp.path / "g1").string() +
              " gfunc > /dev/null") == 0);
    CHECK(run(gbase + " --threads 4 --out " + (tmp.path / "g2").string() +
              " gfunc > /dev/null") == 0);
    CHECK(read_file(tmp.path / "g1" / "gfunc.csv") == read_file(tmp.path / "g2" / "gfunc.csv"));
}
