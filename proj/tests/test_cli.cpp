#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ntgaps/io.hpp"

using namespace ntg;

namespace {

std::string bin() {
    const char* b = std::getenv("NTGAPS_BIN");
    REQUIRE(b != nullptr);
    return b;
}

struct CmdResult {
    int status = -1;
    std::string out;
    std::string err;
};

CmdResult run(const std::string& args) {
    static int counter = 0;
    std::string tag = std::to_string(++counter);
    std::string out_path = "cli_out_" + tag + ".txt";
    std::string err_path = "cli_err_" + tag + ".txt";
    int rc = std::system((bin() + " " + args + " > " + out_path + " 2> " + err_path).c_str());
    CmdResult r;
    r.status = WEXITSTATUS(rc);
    auto slurp = [](const std::string& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::filesystem::remove(out_path);
    std::filesystem::remove(err_path);
    return r;
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string l;
    while (std::getline(ss, l)) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("construct subcommands emit the frozen classes") {
    CmdResult r = run("construct --q 2,3,5");
    CHECK(r.status == 0);
    ojson j = ojson::parse(r.out);
    CHECK(j["u"] == 53);
    CHECK(j["v"] == 240);
    CHECK(j["T"] == 4);
    CHECK(j["p0"] == 53);

    ojson f = ojson::parse(run("construct-field --quadratic 5").out);
    CHECK(f["u"] == 23);
    CHECK(f["v"] == 2160);

    ojson g = ojson::parse(run("construct-field --quadratic -4").out);
    CHECK(g["u"] == 11);
    CHECK(g["v"] == 432);
}

TEST_CASE("report subcommands") {
    ojson c = ojson::parse(run("conductor --q 2,3,5").out);
    CHECK(c["conductor"] == 120);

    ojson s = ojson::parse(run("star-check --q 6,-2").out);
    CHECK(s["holds"] == false);
    CHECK(s["witness"] == ojson::array({1, 1, 1}));

    ojson i = ojson::parse(run("indep --q 4,8").out);
    CHECK(i["independent"] == false);
    CHECK(i["relation"] == ojson::array({3, -2}));

    ojson n = ojson::parse(run("census --q 2 --y 10 --limit 1000000").out);
    CHECK(n["primes"] == ojson::array({3, 5, 7, 11, 17, 31, 73, 127}));
}

TEST_CASE("admissible subcommand matches the frozen family") {
    ojson j = ojson::parse(run("admissible --q 2 --kappa 2 --limit 100").out);
    CHECK(j["v"] == 16);
    CHECK(j["T"] == 4);
    CHECK(j["a_values"] == ojson::array({5, 53}));
    CHECK(j["window"] == 48);
    REQUIRE(j["functions"].size() == 4);
    CHECK(j["functions"][0]["slope"] == 16);
    CHECK(j["functions"][0]["intercept"] == 5);
    CHECK(j["functions"][3]["slope"] == 4);
    CHECK(j["functions"][3]["intercept"] == 13);
}

TEST_CASE("verify-class reports no counterexamples") {
    ojson j = ojson::parse(run("verify-class --q 2,3,5 --limit 100000").out);
    CHECK(j["counterexample"].is_null());
    CHECK(j["primes_checked"].get<int>() > 0);

    ojson f = ojson::parse(run("verify-class --quadratic -4 --limit 100000").out);
    CHECK(f["counterexample"].is_null());
}

TEST_CASE("ecstruct and duke") {
    CmdResult r = run("ecstruct --curve 1,0 --lo 5 --hi 7");
    auto ls = lines_of(r.out);
    REQUIRE(ls.size() == 2);
    ojson p5 = ojson::parse(ls[0]);
    CHECK(p5["p"] == 5);
    CHECK(p5["d"] == 2);
    ojson p7 = ojson::parse(ls[1]);
    CHECK(p7["N"] == 8);
    CHECK(p7["a"] == 0);

    ojson d = ojson::parse(run("duke --curve 1,0 --hi 1000 --n 2").out);
    CHECK(d["count"].get<int>() > 0);
}

TEST_CASE("prscan emits verifiable JSON lines plus a summary") {
    CmdResult r = run("prscan --q 2 --m 2 --lo 3 --hi 100");
    CHECK(r.status == 0);
    auto ls = lines_of(r.out);
    REQUIRE(ls.size() >= 3);
    ojson first = ojson::parse(ls.front());
    CHECK(first["primes"] == ojson::array({3, 5}));
    ojson last = ojson::parse(ls.back());
    CHECK(last["summary"] == true);
    CHECK(last["min_gap"] == 2);
    for (std::size_t i = 0; i + 1 < ls.size(); ++i) {
        RunRecord rec = record_from_json(ojson::parse(ls[i]));
        for (std::size_t k = 0; k < rec.primes.size(); ++k) {
            const auto& pc = std::get<PrCert>(rec.certificates[k]);
            CHECK(mult_order(pc.q, rec.primes[k]) == rec.primes[k] - 1);
        }
    }
}

TEST_CASE("csv and json record sets agree") {
    CmdResult js = run("prscan --q 2 --m 2 --lo 3 --hi 500 --format json");
    CmdResult cs = run("prscan --q 2 --m 2 --lo 3 --hi 500 --format csv");
    auto jl = lines_of(js.out);
    auto cl = lines_of(cs.out);
    REQUIRE(jl.size() + 1 == cl.size());  // csv adds a header row
    CHECK(cl.front() == csv_header());
    std::vector<RunRecord> from_json, from_csv;
    for (std::size_t i = 0; i + 1 < jl.size(); ++i) from_json.push_back(record_from_json(ojson::parse(jl[i])));
    for (std::size_t i = 1; i + 1 < cl.size(); ++i) from_csv.push_back(record_from_csv(cl[i]));
    CHECK(from_json == from_csv);
}

TEST_CASE("exit codes follow the error contract") {
    CHECK(run("apscan --q 4 --u 2 --m 1 --hi 50").status == 2);          // gcd > 1
    CHECK(run("construct --q 6,-2").status == 2);                        // (*) fails
    CHECK(run("construct --q 2,3,5 --limit 7").status == 3);             // p0 out of reach
    CHECK(run("prscan --q 2 --m 2").status == 2);                        // missing --hi
    CHECK(run("ecstruct --curve 1,0 --hi 100000 --lo 65537").status == 3);  // tier refused
    CmdResult bad = run("apscan --q 4 --u 2 --m 1 --hi 50");
    ojson e = ojson::parse(bad.err);
    CHECK(e["error"] == "domain");
}

TEST_CASE("interrupted scans resume byte-for-byte") {
    std::string cp = "cli_cp_test.json";
    std::filesystem::remove(cp);
    CmdResult fresh = run("prscan --q 2 --m 2 --lo 3 --hi 3000");
    CmdResult part1 =
        run("prscan --q 2 --m 2 --lo 3 --hi 3000 --checkpoint " + cp + " --stop-after 1200");
    CHECK(part1.status == 0);
    CmdResult part2 = run("prscan --q 2 --m 2 --lo 3 --hi 3000 --checkpoint " + cp);
    CHECK(part2.status == 0);
    CHECK(part1.out + part2.out == fresh.out);

    // altered m refuses to resume
    CmdResult wrong = run("prscan --q 2 --m 3 --lo 3 --hi 3000 --checkpoint " + cp);
    CHECK(wrong.status == 2);
    // resume may extend the range
    CmdResult extended = run("prscan --q 2 --m 2 --lo 3 --hi 4000 --checkpoint " + cp);
    CHECK(extended.status == 0);
    std::filesystem::remove(cp);

    CmdResult io_fail = run("prscan --q 2 --m 2 --hi 100 --checkpoint no_such_dir/cp.json");
    CHECK(io_fail.status == 3);
    CHECK(io_fail.out.empty());
}

TEST_CASE("worker count leaves scan output unchanged") {
    CmdResult w1 = run("ecscan --curve 1,0 --m 2 --hi 3000 --workers 1");
    CmdResult w4 = run("ecscan --curve 1,0 --m 2 --hi 3000 --workers 4");
    CHECK(w1.out == w4.out);
    CHECK(w1.status == 0);
}

TEST_CASE("sscyclic with a cubic descriptor parses") {
    CmdResult r = run("sscyclic --curve 0,2 --cm-disc -3 --cubic 7:6 --m 1 --lo 5 --hi 200");
    CHECK(r.status == 0);
    auto ls = lines_of(r.out);
    REQUIRE(!ls.empty());
    ojson last = ojson::parse(ls.back());
    CHECK(last["summary"] == true);
    CHECK(last["modulus"] == 21);  // 3 * 7
}
