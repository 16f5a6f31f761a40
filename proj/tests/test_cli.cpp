#include "doctest.h"

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCp = R"({"family":"constant_product","params":{"c":1}})";
const std::string kNonConvex =
    R"({"family":"tabulated","params":{"x":[0.25,0.5,1,2,4,8],"y":[4,2,1.2,1.0,0.3,0.125]}})";

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

std::string quote(const std::string& s) {
    std::string q = "'";
    for (char c : s) {
        if (c == '\'') {
            q += "'\\''";
        } else {
            q += c;
        }
    }
    return q + "'";
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Run run(const std::vector<std::string>& args, const std::string& env = "") {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path();
    const fs::path out = dir / ("ammcalc_cli_out_" + std::to_string(++counter));
    const fs::path err = dir / ("ammcalc_cli_err_" + std::to_string(counter));
    std::string cmd = env + " " + quote(AMMCALC_CLI_PATH);
    for (const auto& a : args) {
        cmd += " " + quote(a);
    }
    cmd += " >" + quote(out.string()) + " 2>" + quote(err.string());
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    fs::remove(out);
    fs::remove(err);
    return r;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) {
        out.push_back(l);
    }
    return out;
}

}  // namespace

TEST_CASE("measure grid") {
    const auto r = run({"--curve", kCp, "measure", "--grid", "9"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 82);
    CHECK(ls[0] == "v,v2,divloss,linslip_x,linslip_y,angslip,load_x,load_y");
    bool found = false;
    for (const auto& l : ls) {
        if (l.rfind("0.5,0.2,", 0) == 0) {
            found = true;
            CHECK(l == "0.5,0.2,0.2,0.4,,0.540419500271,0.08,");
        }
    }
    CHECK(found);
    const auto again = run({"--curve", kCp, "measure", "--grid", "9"});
    CHECK(again.out == r.out);
}

TEST_CASE("measure json and --out") {
    const fs::path p = fs::temp_directory_path() / "ammcalc_cli_measure.json";
    const auto r = run({"--curve", kCp, "--format", "json", "--out", p.string(), "measure", "--v",
                        "0.5", "--v2", "0.2"});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    const auto j = json::parse(slurp(p));
    fs::remove(p);
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 1);
    CHECK(j[0]["divloss"].get<double>() == doctest::Approx(0.2));
    CHECK(j[0]["load_x"].get<double>() == doctest::Approx(0.08));
}

TEST_CASE("verify") {
    const auto ok = run({"--curve", kCp, "verify"});
    CHECK(ok.code == 0);
    const auto j = json::parse(ok.out);
    bool quarter = false;
    for (const auto& law : j["laws"]) {
        CHECK_MESSAGE(law["pass"].get<bool>(), law["name"].get<std::string>());
        if (law["name"] == "angslip_quarter_turn") {
            quarter = true;
            CHECK(law["value"].get<double>() == doctest::Approx(1.5707943).epsilon(1e-7));
        }
    }
    CHECK(quarter);

    const auto bad = run({"--curve", kNonConvex, "verify"});
    CHECK(bad.code == 1);
    const auto jb = json::parse(bad.out);
    CHECK_FALSE(jb["axioms"]["convexity_ok"].get<bool>());
    CHECK(bad.out.find("\"convexity\"") != std::string::npos);

    const auto s1 = run({"--curve", kCp, "--seed", "5", "verify", "--samples", "50"});
    const auto s2 = run({"--curve", kCp, "--seed", "5", "verify", "--samples", "50"});
    CHECK(s1.out == s2.out);
}

TEST_CASE("expect") {
    const auto r = run({"--curve", kCp, "expect", "--v0", "0.5", "--alphas", "1", "2", "3", "4"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 17);
    CHECK(ls[0] == "alpha1,alpha2,expected_load");
    const auto par = run({"--curve", kCp, "--jobs", "4", "expect", "--v0", "0.5", "--alphas", "1",
                          "2", "3", "4"});
    CHECK(par.out == r.out);
    const auto cap = run({"--curve", kCp, "--format", "json", "expect", "--dist", "uniform",
                          "--capitalization"});
    REQUIRE(cap.code == 0);
    CHECK(cap.out.find("0.785398163") != std::string::npos);
}

TEST_CASE("compose") {
    const auto r = run({"--curve", kCp, "compose", "--op", "seq", "--a", "1", "--b", "1",
                        "--query", "1"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["queries"][0]["h"].get<double>() == doctest::Approx(1.0));
    CHECK(j["queries"][0]["dh"].get<double>() == doctest::Approx(-1.0));
    CHECK(j["pass"].get<bool>());
    const auto p = run({"--curve", kCp, "compose", "--op", "par", "--a", "1", "--b", "1", "--v",
                        "0.5", "--v2", "0.2"});
    REQUIRE(p.code == 0);
    CHECK(json::parse(p.out)["pass"].get<bool>());
}

TEST_CASE("adjust") {
    const auto r = run({"--curve", kCp, "adjust", "--x", "1", "--v", "0.8"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["dx"].get<double>() == doctest::Approx(0.5));
    CHECK(j["dy"].get<double>() == doctest::Approx(1.0));
    CHECK(j["inaccessible_x"].get<double>() == doctest::Approx(0.5));
    CHECK(j["profit_after"].get<double>() < 1e-9);
}

TEST_CASE("partition") {
    const auto r = run({"--curve", kCp, "partition", "--conservation"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["l_x"].get<double>() == doctest::Approx(0.441546501782).epsilon(1e-9));
    CHECK(j["sum"].get<double>() == doctest::Approx(0.883093003565).epsilon(1e-9));
    CHECK(j["target"].get<double>() == doctest::Approx(2.0));
    CHECK_FALSE(j["conserved"].get<bool>());
}

TEST_CASE("config file and precedence") {
    const fs::path p = fs::temp_directory_path() / "ammcalc_cli.toml";
    {
        std::ofstream out(p);
        out << "curve = '" << kCp << "'\nformat = \"json\"\n";
    }
    const auto r = run({"--config", p.string(), "measure", "--v", "0.5", "--v2", "0.2"});
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)[0]["divloss"].get<double>() == doctest::Approx(0.2));
    const auto csv = run({"--config", p.string(), "--format", "csv", "measure", "--v", "0.5",
                          "--v2", "0.2"});
    CHECK(csv.out.rfind("v,v2,", 0) == 0);
    fs::remove(p);
}

TEST_CASE("logging goes to stderr") {
    const auto quiet = run({"--curve", kCp, "measure", "--grid", "3"});
    const auto loud = run({"--curve", kCp, "measure", "--grid", "3"}, "AMMCALC_LOG=debug");
    CHECK(loud.code == 0);
    CHECK(loud.out == quiet.out);
}

TEST_CASE("exit codes") {
    CHECK(run({"measure", "--grid", "3"}).code == 2);
    CHECK(run({"--curve", R"({"family":"nope"})", "measure"}).code == 2);
    CHECK(run({"--curve", "{broken", "measure"}).code == 2);
    CHECK(run({"--curve", kCp, "measure", "--v", "1.5", "--v2", "0.5"}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    const std::string shifted =
        R"({"family":"shifted","dx":0.5,"dy":1,"base":{"family":"constant_product","params":{"c":1}}})";
    const auto invalid = run({"--curve", shifted, "measure", "--v", "0.9", "--v2", "0.8"});
    CHECK(invalid.code == 2);
    CHECK(invalid.err.find("expressivity") != std::string::npos);
    const auto numeric =
        run({"--skip-validate", "--curve", shifted, "measure", "--v", "0.01", "--v2", "0.5"});
    CHECK(numeric.code == 3);
    CHECK_FALSE(numeric.err.empty());
}
