#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <dkp_h3/cli.hpp>

#include "oracles.hpp"

using namespace dkp_h3;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string &s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line))
        out.push_back(line);
    return out;
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep))
        out.push_back(item);
    return out;
}

std::filesystem::path temp_path(const std::string &name) {
    return std::filesystem::temp_directory_path() / ("dkp_h3_test_" + name);
}

} // namespace

TEST_CASE("specfun prints value and derivative", "[cli]") {
    const auto r = run({"specfun", "--fn", "J", "--order", "0", "--arg", "0"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() >= 2);
    CHECK(ls[ls.size() - 2] == "value,derivative");
    const auto cols = split(ls.back(), ',');
    REQUIRE(cols.size() == 2);
    CHECK(std::stod(cols[0]) == 1.0);
    CHECK(std::stod(cols[1]) == 0.0);

    const auto k = run({"specfun", "--fn", "Kimag", "--order", "1", "--arg", "1", "--format", "json"});
    REQUIRE(k.code == 0);
    const auto j = nlohmann::json::parse(k.out);
    CHECK(std::stod(j["value"].get<std::string>()) == Catch::Approx(0.28942803702599207).epsilon(1e-12));
}

TEST_CASE("geometry-check passes every row", "[cli]") {
    const auto r = run({"geometry-check"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("gamma_311") != std::string::npos);
}

TEST_CASE("usage errors exit with 2", "[cli]") {
    CHECK(run({}).code == 2);
    CHECK(run({"specfun", "--bogus", "1"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"mode", "--family", "vector"}).code == 2);
    CHECK(run({"dispersion", "--kappa-range", "2:0:5"}).code == 2);
    CHECK(run({"dispersion", "--kappa-range", "0:2"}).code == 2);
    CHECK(run({"mode", "--r-min", "0"}).code == 2);
    CHECK(run({"mode", "--n-z", "3"}).code == 2);
    CHECK(run({"specfun", "--fn", "Y", "--order", "0", "--arg", "0"}).code == 2);
    CHECK(run({"mode", "--family", "sigma0", "--eps", "1", "--mass", "1"}).code == 2);
}

TEST_CASE("mode writes one CSV row per grid point", "[cli]") {
    const auto r = run({"mode", "--family", "sigma", "--n-r", "5", "--n-z", "4"});
    REQUIRE(r.code == 0);
    std::vector<std::string> data;
    std::string header;
    for (const auto &l : lines(r.out)) {
        if (l.rfind("#", 0) == 0)
            continue;
        if (header.empty())
            header = l;
        else
            data.push_back(l);
    }
    CHECK(header == io::csv_header());
    CHECK(split(header, ',').size() == 22);
    CHECK(header.rfind("r,z,Re(Phi0),Im(Phi0),Re(Phi1)", 0) == 0);
    REQUIRE(data.size() == 20);
    // row-major in r then z
    CHECK(std::stod(split(data[0], ',')[0]) == 0.5);
    CHECK(std::stod(split(data[3], ',')[0]) == 0.5);
    CHECK(std::stod(split(data[4], ',')[0]) > 0.5);
    CHECK(std::stod(split(data[1], ',')[1]) > std::stod(split(data[0], ',')[1]));
    CHECK(r.out.find("# family=sigma") != std::string::npos);
}

TEST_CASE("verify reports pass and fail with exit codes", "[cli]") {
    const auto ok = run({"verify", "--family", "sigma", "--system", "full", "--n-r", "6", "--n-z", "6"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("# system=full-9") != std::string::npos);

    const auto bad = run({"verify", "--family", "sigma", "--kappa", "1.1", "--system", "full", "--n-r", "6",
                          "--n-z", "6"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("equation,max_abs") != std::string::npos);

    const auto diag = run({"verify", "--family", "massless", "--system", "helicity", "--n-r", "6", "--n-z", "6"});
    CHECK(diag.code == 0);
    CHECK(diag.out.find("# diagnostic=true") != std::string::npos);

    const auto js = run({"verify", "--family", "sigma0", "--system", "sigma0", "--n-r", "5", "--n-z", "5",
                         "--format", "json"});
    REQUIRE(js.code == 0);
    const auto j = nlohmann::json::parse(js.out);
    CHECK(j["report"]["system"] == "sigma0-21");
    CHECK(j["report"]["equations"].size() == 10);
    CHECK(j["report"]["extrapolated"] == true);
}

TEST_CASE("dispersion scan locates the closure", "[cli]") {
    const auto r = run({"dispersion", "--eps", "1.4142135", "--mass", "1", "--kappa-range", "0:2:41", "--n-r", "5",
                        "--n-z", "5"});
    REQUIRE(r.code == 0);
    double best_k = -1, best_v = 1e300;
    double best_oracle_k = -1, best_oracle = 1e300;
    int rows = 0;
    bool header = false;
    for (const auto &l : lines(r.out)) {
        if (l.rfind("#", 0) == 0)
            continue;
        if (!header) {
            CHECK(l == "kappa,dispersion_residual,full_residual");
            header = true;
            continue;
        }
        const auto c = split(l, ',');
        REQUIRE(c.size() == 3);
        ++rows;
        const double k = std::stod(c[0]);
        const double full = c[2] == "nan" ? 1e300 : std::stod(c[2]);
        if (full < best_v) {
            best_v = full;
            best_k = k;
        }
        const double o = oracle::closure_residual(1.4142135, cplx(0.0, k), 1.0);
        if (o < best_oracle) {
            best_oracle = o;
            best_oracle_k = k;
        }
        CHECK(std::stod(c[1]) == Catch::Approx(o).margin(1e-14));
    }
    CHECK(rows == 41);
    CHECK(best_k == Catch::Approx(1.0).margin(0.025));
    CHECK(best_oracle_k == Catch::Approx(1.0).margin(0.025));
    CHECK(r.out.find("# min_dispersion_kappa=1.0000000000000000e+00") != std::string::npos);
}

TEST_CASE("config file values are overridden by flags", "[cli]") {
    const auto path = temp_path("config.txt");
    {
        std::ofstream f(path);
        f << "# comment\nfn = K\norder=1\narg=2\n";
    }
    const auto from_file = run({"specfun", "--config", path.string()});
    REQUIRE(from_file.code == 0);
    CHECK(from_file.out.find("# fn=K") != std::string::npos);
    const auto overridden = run({"specfun", "--config", path.string(), "--arg", "3"});
    REQUIRE(overridden.code == 0);
    CHECK(overridden.out.find("# arg=3.0000000000000000e+00") != std::string::npos);
    CHECK(overridden.out.find("# fn=K") != std::string::npos);
    std::filesystem::remove(path);
    CHECK(run({"specfun", "--config", path.string()}).code == 2);
}

TEST_CASE("output is byte-identical across runs and thread counts", "[cli]") {
    const std::vector<std::vector<std::string>> cmds{
        {"geometry-check"},
        {"specfun", "--fn", "Kimag", "--order", "1.5", "--arg", "0.7"},
        {"mode", "--family", "sigma0", "--n-r", "6", "--n-z", "5"},
        {"mode", "--family", "massless", "--format", "json", "--n-r", "4", "--n-z", "4"},
        {"verify", "--family", "sigma", "--system", "helicity", "--n-r", "5", "--n-z", "5", "--format", "json"},
        {"dispersion", "--kappa-range", "0.5:1.5:5", "--n-r", "4", "--n-z", "4"},
    };
    for (const auto &cmd : cmds) {
        const auto a = run(cmd);
        setenv("DKP_H3_THREADS", "1", 1);
        const auto b = run(cmd);
        unsetenv("DKP_H3_THREADS");
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("output file option writes the same bytes as stdout", "[cli]") {
    const auto path = temp_path("mode.csv");
    const auto to_stdout = run({"mode", "--n-r", "4", "--n-z", "4"});
    const auto to_file = run({"mode", "--n-r", "4", "--n-z", "4", "--output", path.string()});
    REQUIRE(to_file.code == 0);
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == to_stdout.out);
    std::filesystem::remove(path);
}
