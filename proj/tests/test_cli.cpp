#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

using json = nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string out_path = "cli_test_stdout.txt";
    const std::string cmd = std::string(DSYM_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(rc);
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

}  // namespace

TEST_CASE("surface-info basics", "[cli]") {
    auto degenerate = run_cli("surface-info --d 3 --twist 3,0");
    CHECK(degenerate.exit_code == 0);
    CHECK(degenerate.out.find("degenerate         true") != std::string::npos);

    auto fib = run_cli("surface-info --d 4 --twist 0.3,1.7");
    CHECK(fib.exit_code == 0);
    CHECK(fib.out.find("fiber cylinder     C_1") != std::string::npos);

    auto marked = run_cli("surface-info --d 1 --twist 1/2,0 --exact");
    CHECK(marked.exit_code == 0);
    CHECK(marked.out.find("orbit size         3") != std::string::npos);
    CHECK(marked.out.find("genus              1") != std::string::npos);

    CHECK(run_cli("surface-info --d 2 --twist nonsense").exit_code != 0);
    CHECK(run_cli("surface-info --d 2 --twist 1/2,0.25").exit_code != 0);  // mixed modes
}

TEST_CASE("decompose subcommand", "[cli]") {
    auto dec = run_cli("decompose --d 4 --twist 0.3,1.7 --dir 1,0");
    CHECK(dec.exit_code == 0);
    CHECK(dec.out.find("1 x (width 4") != std::string::npos);
    CHECK(dec.out.find("2 x (width 2") != std::string::npos);

    auto both = run_cli("decompose --d 3 --twist 1/2,1/2 --dir 1,1 --oracle both");
    CHECK(both.exit_code == 0);
    CHECK(both.out.find("MATCH") != std::string::npos);

    CHECK(run_cli("decompose --d 3 --twist 3,0 --dir 1,0").exit_code != 0);  // degenerate
    CHECK(run_cli("decompose --d 3 --twist 1/2,0 --dir 2,4").exit_code != 0);  // non-primitive
}

TEST_CASE("constants subcommands print exact values", "[cli]") {
    auto gen = run_cli("constants generic --d 2");
    CHECK(gen.exit_code == 0);
    CHECK(gen.out.find("9/4") != std::string::npos);

    auto tor = run_cli("constants torsion --d 2 --n 3");
    CHECK(tor.exit_code == 0);
    CHECK(tor.out.find("35/16") != std::string::npos);

    auto cusps = run_cli("constants cusps --n 5");
    CHECK(cusps.exit_code == 0);
    CHECK(cusps.out.find("4") != std::string::npos);

    CHECK(run_cli("constants torsion --d 2").exit_code != 0);  // missing --n
}

TEST_CASE("count emits csv and json matching the schema", "[cli]") {
    const char* csv_path = "cli_test_counts.csv";
    const char* json_path = "cli_test_counts.json";
    std::remove(csv_path);
    std::remove(json_path);
    auto r = run_cli(std::string("count cylinders --d 2 --twist 2/3,0 --T-list 20,40 --csv ") +
                     csv_path + " --json " + json_path);
    REQUIRE(r.exit_code == 0);

    std::ifstream csv(csv_path);
    REQUIRE(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header == "T,N,N_over_T2,predicted,rel_error");
    int rows = 0;
    std::string line;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 4);
    }
    CHECK(rows == 2);

    std::ifstream jf(json_path);
    REQUIRE(jf.good());
    json doc = json::parse(jf);
    // structural validation against the shipped schema's requirements
    std::ifstream sf(std::string(DSYM_SCHEMA_DIR) + "/growth_report.schema.json");
    REQUIRE(sf.good());
    json schema = json::parse(sf);
    for (auto& key : schema["required"]) CHECK(doc.contains(key.get<std::string>()));
    for (auto& key : schema["properties"]["results"]["required"])
        CHECK(doc["results"].contains(key.get<std::string>()));
    CHECK(doc["results"]["rows"].size() == 2);
    for (auto& row : doc["results"]["rows"])
        for (auto& key : schema["properties"]["results"]["properties"]["rows"]["items"]["required"])
            CHECK(row.contains(key.get<std::string>()));

    // decimal value of the constant agrees with the exact coefficient to 15
    // significant digits (35/16 here)
    double decimal = doc["results"]["constant"]["decimal"].get<double>();
    char printed[40], expected[40];
    std::snprintf(printed, sizeof printed, "%.15g", decimal);
    std::snprintf(expected, sizeof expected, "%.15g", 35.0 / 16.0);
    CHECK(std::string(printed) == expected);
}

TEST_CASE("worker count leaves the N column unchanged", "[cli]") {
    const char* a = "cli_w1.csv";
    const char* b = "cli_w8.csv";
    auto r1 = run_cli(std::string("count cylinders --d 2 --twist 0.52,1.71 --T-list 60 --workers 1 --csv ") + a);
    auto r8 = run_cli(std::string("count cylinders --d 2 --twist 0.52,1.71 --T-list 60 --workers 8 --csv ") + b);
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r8.exit_code == 0);
    std::ifstream fa(a), fb(b);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    CHECK(sa.str() == sb.str());
}

TEST_CASE("convergence table", "[cli]") {
    auto r = run_cli("convergence --max-n 12 --part s1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("odd") != std::string::npos);
    CHECK(r.out.find("4|n") != std::string::npos);
    CHECK(run_cli("convergence --d 3 --max-n 10").exit_code != 0);
}
