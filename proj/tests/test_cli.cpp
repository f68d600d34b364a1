#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string bin() {
    const char* b = std::getenv("REORG_BIN");
    REQUIRE_MESSAGE(b != nullptr, "REORG_BIN must point at the reorg binary");
    return b;
}

struct RunResult {
    int status = -1;
    std::string out;
};

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

RunResult run(const std::string& args) {
    const std::string out_path = "/tmp/reorg_cli_out.txt";
    const std::string cmd = bin() + " " + args + " > " + out_path + " 2>/tmp/reorg_cli_err.txt";
    RunResult r;
    const int rc = std::system(cmd.c_str());
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out_path);
    return r;
}

}  // namespace

TEST_CASE("estimate: enum emits a json line with the analytic value") {
    const RunResult r =
        run("estimate --alpha 0.30 --length 1 --method enum --seed 1");
    CHECK(r.status == 0);
    CHECK(r.out.find("\"method\":\"enum\"") != std::string::npos);
    CHECK(r.out.find("0.08115") != std::string::npos);
    CHECK(r.out.find("\"truncated_mass\":") != std::string::npos);
}

TEST_CASE("estimate: rejects alpha out of range with exit 2") {
    const RunResult r = run("estimate --alpha 0.6 --length 1 --method mc --samples 10 --seed 1");
    CHECK(r.status == 2);
}

TEST_CASE("estimate: rejects unknown flags with exit 2") {
    const RunResult r = run("estimate --alpha 0.3 --length 1 --bogus 7");
    CHECK(r.status == 2);
}

TEST_CASE("usage error for --params out of range") {
    const RunResult r = run("estimate --alpha 0.3 --length 1 --params 40,8,40 --samples 10");
    CHECK(r.status == 2);
}

TEST_CASE("estimate: identical flags give byte-identical output across --threads") {
    const RunResult a = run("estimate --alpha 0.3 --length 2 --method mc --samples 300000 "
                            "--seed 9 --threads 1");
    const RunResult b = run("estimate --alpha 0.3 --length 2 --method mc --samples 300000 "
                            "--seed 9 --threads 8");
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("simulate then health: ideal chain scores 40 everywhere") {
    const RunResult s = run("simulate --alpha 0 --blocks 100 --min-attack 2 --seed 1 "
                            "--out /tmp/reorg_cli_chain.jsonl");
    CHECK(s.status == 0);
    const RunResult h = run("health --chain /tmp/reorg_cli_chain.jsonl --window 40");
    CHECK(h.status == 0);
    std::istringstream lines(h.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "slot,health");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        CHECK(line.substr(line.find(',') + 1) == "40");
    }
    CHECK(rows == 99);  // health starts at the second record
}

TEST_CASE("simulate writes events and a manifest sidecar") {
    const RunResult s = run("simulate --alpha 0.375 --blocks 400 --min-attack 8 --seed 4 "
                            "--out /tmp/reorg_cli_chain2.jsonl --events /tmp/reorg_cli_ev.jsonl");
    CHECK(s.status == 0);
    CHECK(slurp("/tmp/reorg_cli_chain2.jsonl").find("\"slot\": 1,") != std::string::npos);
    CHECK(!slurp("/tmp/reorg_cli_chain2.jsonl.manifest.json").empty());
}

TEST_CASE("sweep and compare round trip") {
    const RunResult s = run("sweep --alpha 0.45 --beta 0.5 --n1 3 --n2 3 "
                            "--grid ei=16:24:8,de=8:8:1,dp=40:40:1 --samples 20000 --seed 2 "
                            "--out /tmp/reorg_cli_sweep.csv");
    CHECK(s.status == 0);
    const std::string csv = slurp("/tmp/reorg_cli_sweep.csv");
    CHECK(csv.rfind("ei,de,dp,o1,o1_lo,o1_hi,o2,o2_lo,o2_hi,objective\n", 0) == 0);
    const RunResult c = run("compare --from /tmp/reorg_cli_sweep.csv --candidates \"23,8,40\" "
                            "--beta-list 0.2:0.4:0.1");
    CHECK(c.status == 2);  // 23,8,40 is not in that grid: explicit error
    const RunResult c2 = run("compare --from /tmp/reorg_cli_sweep.csv --candidates \"16,8,40\" "
                             "--beta-list 0.2:0.4:0.1");
    CHECK(c2.status == 0);
    CHECK(c2.out.rfind("beta,candidate,ratio\n", 0) == 0);
    CHECK(c2.out.find("\"16,8,40\"") != std::string::npos);
}

TEST_CASE("sweep with smoothing adds the smoothed column") {
    const RunResult s = run("sweep --alpha 0.45 --beta 0.5 --n1 3 --n2 3 "
                            "--grid ei=16:24:4,de=8:8:1,dp=40:40:1 --samples 5000 --seed 2 "
                            "--smooth 1.0");
    CHECK(s.status == 0);
    CHECK(s.out.rfind("ei,de,dp,o1,o1_lo,o1_hi,o2,o2_lo,o2_hi,objective,smoothed\n", 0) == 0);
}
