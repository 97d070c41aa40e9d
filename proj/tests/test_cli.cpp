#include <catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <primc/cli.hpp>

using namespace primc;
using nlohmann::json;

namespace {

struct Result {
    int status;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "primc");
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int st = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {st, out.str(), err.str()};
}

json run_json(std::vector<std::string> args) {
    auto r = run(std::move(args));
    INFO(r.err);
    REQUIRE(r.status == 0);
    return json::parse(r.out);
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    auto p = std::filesystem::temp_directory_path() / ("primc_test_" + name);
    std::ofstream(p) << content;
    return p;
}

// runs the real binary through the shell
Result shell(const std::string& args) {
    const std::string errfile = (std::filesystem::temp_directory_path() / "primc_test_stderr").string();
    std::string cmd = std::string(PRIMC_TOOL_PATH) + " " + args + " 2>" + errfile;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t k;
    while ((k = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), k);
    int st = pclose(p);
    std::ifstream ef(errfile);
    std::stringstream es;
    es << ef.rdbuf();
    return {WEXITSTATUS(st), out, es.str()};
}

}  // namespace

TEST_CASE("energy command", "[cli]") {
    auto r = run({"energy", "--n", "2", "--format", "csv"});
    REQUIRE(r.status == 0);
    CHECK(r.out ==
          "earlier\\later,a0b0,a0b1,a1b0,a1b1\n"
          "a0b0,0,1,1,1\n"
          "a0b1,1,2,0,0\n"
          "a1b0,1,2,2,2\n"
          "a1b1,1,2,0,0\n");
    auto j = run_json({"energy", "--n", "3"});
    CHECK(j["tool-version"] == cli::kToolVersion);
    CHECK(j["command"] == "energy");
    CHECK(j["params"]["n"] == 3);
    CHECK(j["result"]["colours"].size() == 9);
    CHECK(j["result"]["matrix"][0][0] == 0);
    CHECK(j["result"]["equals-minimal-difference"] == true);
    CHECK(run({"energy", "--n", "1"}).status == 1);
    CHECK(run({"energy", "--n", "2", "--format", "dot"}).status == 2);
    CHECK(run({"energy"}).status == 2);
}

TEST_CASE("graph command", "[cli]") {
    auto r = run({"graph", "--n", "2", "--format", "dot"});
    REQUIRE(r.status == 0);
    CHECK(r.out.rfind("digraph", 0) == 0);
    CHECK(r.out.find("connected") != std::string::npos);
    CHECK(r.out == run({"graph", "--n", "2"}).out);
    auto j = run_json({"graph", "--n", "2", "--format", "json"});
    CHECK(j["result"]["vertices"].size() == 16);
    CHECK(j["result"]["connected"] == true);
    CHECK(j["result"]["components"] == 1);
    CHECK(j["result"]["edges"].size() == std::count(r.out.begin(), r.out.end(), '>'));
}

TEST_CASE("enumerate command", "[cli]") {
    auto j = run_json({"enumerate", "--n", "2", "--level", "0", "--max-weight", "7", "--minimal", "--format", "json"});
    CHECK(j["params"]["minimal"] == true);
    json example = json::parse(
        R"([{"size":3,"colour":"a1b1"},{"size":3,"colour":"a1b0"},{"size":1,"colour":"a0b1"},{"size":0,"colour":"a0b0"}])");
    const auto& parts = j["result"]["partitions"];
    CHECK(std::find(parts.begin(), parts.end(), example) != parts.end());
    CHECK(j["result"]["count"] == parts.size());
    auto all = run_json({"enumerate", "--n", "3", "--level", "2", "--max-weight", "4"});
    CHECK(all["result"]["count"] ==
          partitions::enumerate_grounded(3, 2, 4, false).size());
    auto t = run({"enumerate", "--n", "2", "--max-weight", "0", "--format", "text"});
    CHECK(t.out == "0 (0_a0b0)\n");
    CHECK(run({"enumerate", "--n", "2", "--level", "2", "--max-weight", "3"}).status == 1);
    CHECK(run({"enumerate", "--n", "2", "--max-weight", "-1"}).status == 2);
}

TEST_CASE("capparelli command", "[cli]") {
    auto spec = temp_file("spec2.json", capparelli::spec_to_json(capparelli::make_spec(2, capparelli::Choice::largest)).dump());
    auto j = run_json({"capparelli", "--spec", spec.string(), "--max-weight", "6"});
    CHECK(j["result"]["spec"]["delta"]["a1b0"] == 1);
    CHECK(j["result"]["count"] ==
          capparelli::enumerate_capparelli(capparelli::make_spec(2, capparelli::Choice::largest), 6).size());
    CHECK(j["params"]["n"] == 2);
    auto t = run({"capparelli", "--n", "2", "--spec", spec.string(), "--max-weight", "1", "--format", "text"});
    CHECK(t.status == 0);
    CHECK(t.out.rfind("0 ()\n", 0) == 0);
    CHECK(run({"capparelli", "--n", "3", "--spec", spec.string(), "--max-weight", "2"}).status == 2);
    CHECK(run({"capparelli", "--spec", "/nonexistent/spec.json", "--max-weight", "2"}).status == 2);
    auto bad = temp_file("bad.json", R"({"n": 2, "delta": {"a0b1": 0, "a1b0": 1}})");
    auto rb = run({"capparelli", "--spec", bad.string(), "--max-weight", "2"});
    CHECK(rb.status == 1);
    CHECK(rb.err.find("Condition 1") != std::string::npos);
    auto garbage = temp_file("garbage.json", "{not json");
    CHECK(run({"capparelli", "--spec", garbage.string(), "--max-weight", "2"}).status == 2);
    CHECK(run({"capparelli", "--max-weight", "2"}).status == 2);
}

TEST_CASE("gf command", "[cli]") {
    for (std::string f : {"ct", "lattice", "theta", "grounded"}) {
        auto j = run_json({"gf", "--n", "2", "--trunc", "6", "--formula", f});
        CHECK(series_from_json(j["result"]) == characters::gp_ct(2, 6));
    }
    auto m = run_json({"gf", "--n", "3", "--level", "1", "--trunc", "5", "--formula", "grounded", "--minimal"});
    CHECK(series_from_json(m["result"]) == characters::char_kp(3, 1, 5));
    auto s = run_json({"gf", "--n", "3", "--level", "2", "--trunc", "5", "--formula", "ct"});
    CHECK(series_from_json(s["result"]) == characters::gp_shifted(3, 2, 5));
    auto t = run({"gf", "--n", "2", "--trunc", "1", "--formula", "lattice", "--format", "text"});
    CHECK(t.out == "1 + b0^-1*b1*q + 2*q + b0*b1^-1*q + O(q^2)\n");
    CHECK(run({"gf", "--n", "2", "--trunc", "3", "--formula", "theta", "--level", "1"}).status == 2);
    CHECK(run({"gf", "--n", "2", "--trunc", "3", "--formula", "ct", "--minimal"}).status == 2);
    CHECK(run({"gf", "--n", "2", "--trunc", "3", "--formula", "nope"}).status == 2);
    CHECK(run({"gf", "--n", "2", "--formula", "ct"}).status == 2);
}

TEST_CASE("character command", "[cli]") {
    for (std::string f : {"kp", "positive", "gp"}) {
        auto j = run_json({"character", "--n", "3", "--level", "1", "--trunc", "6", "--formula", f});
        CHECK(series_from_json(j["result"]) == characters::char_kp(3, 1, 6));
        auto a = run_json({"character", "--n", "3", "--level", "1", "--trunc", "6", "--formula", f, "--basis", "alpha"});
        CHECK(a["result"]["positive"] == true);
        CHECK(a["result"]["terms"].size() == characters::char_kp(3, 1, 6).size());
    }
    auto t = run({"character", "--n", "2", "--trunc", "1", "--formula", "kp", "--basis", "alpha", "--format", "text"});
    // q^1 of (q;q) G^P: 1 + b0 b1^-1 + b0^-1 b1, i.e. e^{-a0}, e^{-a0-a1}, e^{-a0-2a1}
    CHECK(t.out == "1\n1 a0^1\n1 a0^1 a1^1\n1 a0^1 a1^2\n");
    auto q = run({"character", "--n", "2", "--trunc", "1", "--formula", "kp", "--basis", "qb", "--format", "text"});
    CHECK(q.out == "1 + b0^-1*b1*q + q + b0*b1^-1*q + O(q^2)\n");
    CHECK(run({"character", "--n", "2", "--trunc", "1", "--formula", "kp", "--basis", "x"}).status == 2);
    CHECK(run({"character", "--n", "2", "--level", "5", "--trunc", "1", "--formula", "kp"}).status == 1);
}

TEST_CASE("verify command", "[cli]") {
    auto r = run({"verify", "--n", "3", "--level", "0", "--trunc", "10"});
    CHECK(r.status == 0);
    CHECK(r.out.find("7/7 checks passed") != std::string::npos);
    auto j = run_json({"verify", "--n", "2", "--level", "1", "--trunc", "8", "--report", "json"});
    CHECK(j["result"]["passed"] == true);
    CHECK(j["result"]["checks"].size() == 4);
    auto spec = temp_file("spec3.json", capparelli::spec_to_json(capparelli::make_spec(3, capparelli::Choice::smallest)).dump());
    auto c = run_json({"verify", "--n", "3", "--trunc", "6", "--spec", spec.string(), "--report", "json"});
    CHECK(c["result"]["checks"].back()["name"] == "Capparelli partitions = character");
    CHECK(c["result"]["checks"].back()["passed"] == true);
    auto p = run({"verify", "--n", "4", "--trunc", "12", "--principal"});
    CHECK(p.status == 0);
    CHECK(p.out.find("2/2 checks passed") != std::string::npos);
    CHECK(run({"verify", "--n", "4", "--trunc", "12", "--principal", "--level", "1"}).status == 2);
    CHECK(run({"verify", "--n", "2", "--trunc", "3", "--spec", spec.string()}).status == 1);
    CHECK(run({"verify", "--n", "2", "--trunc", "3", "--report", "csv"}).status == 2);
    CHECK(run({"verify", "--n", "1", "--trunc", "3"}).status == 1);
}

TEST_CASE("help, version and output files", "[cli]") {
    auto h = run({"--help"});
    CHECK(h.status == 0);
    CHECK(h.out.find("verify") != std::string::npos);
    CHECK(run({"--version"}).out == std::string(cli::kToolVersion) + "\n");
    CHECK(run({}).status == 2);
    CHECK(run({"frobnicate"}).status == 2);
    auto out = std::filesystem::temp_directory_path() / "primc_test_out.csv";
    std::filesystem::remove(out);
    auto r = run({"energy", "--n", "2", "--format", "csv", "-o", out.string()});
    CHECK(r.status == 0);
    CHECK(r.out.empty());
    std::ifstream f(out);
    std::stringstream s;
    s << f.rdbuf();
    CHECK(s.str() == run({"energy", "--n", "2", "--format", "csv"}).out);
    CHECK(run({"energy", "--n", "2", "-o", "/nonexistent/dir/x"}).status == 2);
}

TEST_CASE("binary end to end", "[cli][e2e]") {
    auto a = shell("energy --n 2 --format csv");
    CHECK(a.status == 0);
    CHECK(a.out == run({"energy", "--n", "2", "--format", "csv"}).out);
    auto v = shell("verify --n 3 --level 0 --trunc 10");
    CHECK(v.status == 0);
    auto g = shell("graph --n 2 --format dot");
    CHECK(g.status == 0);
    CHECK(g.out.find("16 vertices") != std::string::npos);
    CHECK(g.out.find("connected") != std::string::npos);
    auto e = shell("energy --n 0");
    CHECK(e.status == 1);
    CHECK(e.err.find("error") != std::string::npos);
    CHECK(shell("energy --format json").status == 2);
}

TEST_CASE("output is deterministic", "[cli][e2e]") {
    for (std::string args : {"energy --n 3", "graph --n 3 --format json", "enumerate --n 3 --level 1 --max-weight 5",
                             "gf --n 3 --trunc 6 --formula theta", "character --n 3 --level 2 --trunc 6 --formula positive --basis alpha",
                             "verify --n 2 --trunc 8 --report json"}) {
        auto x = shell(args), y = shell(args);
        INFO(args);
        CHECK(x.status == 0);
        CHECK(x.out == y.out);
        CHECK_FALSE(x.out.empty());
    }
}
