#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

using Catch::Matchers::ContainsSubstring;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* p = std::getenv("TVREG_CLI");
    REQUIRE(p != nullptr);
    return p;
}

std::string fixtures_dir() {
    const char* p = std::getenv("TVREG_FIXTURES");
    REQUIRE(p != nullptr);
    return p;
}

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "tvreg_cli_tests";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " >" + (work_dir() / "stdout.txt").string() +
                            " 2>" + (work_dir() / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
    CHECK(run("definitely-not-a-subcommand") == 2);
    CHECK(run("") == 2);
    CHECK(run("theta --beta") == 2);
    CHECK(run("--help") == 0);
}

TEST_CASE("theta subcommand prints json") {
    CHECK(run("theta --beta 10 --s 4 --m 0 --c 1 --mode prob") == 0);
    const std::string out = slurp(work_dir() / "stdout.txt");
    CHECK_THAT(out, ContainsSubstring("0.31707317073170732"));
    CHECK_THAT(out, ContainsSubstring("\"admissible\":true"));
    CHECK(run("theta --mode as --s 4") == 4);
}

TEST_CASE("malformed inputs exit with code 3") {
    const std::string fx = fixtures_dir();
    for (const std::string name :
         {"ragged.csv", "nan_value.csv", "gap_month.csv", "missing_value.csv", "bad_number.csv"}) {
        const int code =
            run("--output " + (work_dir() / "bad_run").string() + " pipeline --input " + fx + "/" + name);
        INFO(name);
        CHECK(code == 3);
    }
    CHECK(run("--output " + (work_dir() / "bad_run2").string() + " pipeline --input " + fx +
              "/does_not_exist.csv") == 3);
}

TEST_CASE("numerical contract violations exit with code 4") {
    const std::string fx = fixtures_dir();
    const int code = run("--output " + (work_dir() / "num_run").string() + " pipeline --input " + fx +
                         "/synthetic_t383.csv --mode fixed --h 0.2 --v 0.3 --b 0.25");
    CHECK(code == 4);
}

TEST_CASE("pipeline runs byte-identically on the bundled fixture") {
    const std::string fx = fixtures_dir();
    const fs::path a = work_dir() / "det_a";
    const fs::path b = work_dir() / "det_b";
    const std::string common = " pipeline --input " + fx +
                               "/synthetic_t383.csv --deseasonalize --harmonics 12 6 --units mm";
    REQUIRE(run("--output " + a.string() + common) == 0);
    REQUIRE(run("--output " + b.string() + common) == 0);
    CHECK(slurp(a / "curves.csv") == slurp(b / "curves.csv"));
    CHECK(slurp(a / "diagnostics.json") == slurp(b / "diagnostics.json"));
    CHECK(fs::exists(a / "series.svg"));
    CHECK(fs::exists(a / "phi.svg"));
}

TEST_CASE("simulate then fit round trip") {
    const fs::path dir = work_dir() / "roundtrip";
    REQUIRE(run("--output " + dir.string() + " --seed 9 simulate --T 300 --phi-const 0.7") == 0);
    REQUIRE(run("--output " + dir.string() + " fit --input " + (dir / "simulated.csv").string() +
                " --h 0.2") == 0);
    CHECK(fs::exists(dir / "curves.csv"));
    CHECK(fs::exists(dir / "diagnostics.json"));

    REQUIRE(run("--output " + dir.string() + " cv --input " + (dir / "simulated.csv").string()) == 0);
    const std::string cv_out = slurp(dir / "cv.json");
    CHECK_THAT(cv_out, ContainsSubstring("selected_h"));

    REQUIRE(run("--output " + dir.string() + " diagnose --input " + (dir / "simulated.csv").string() +
                " --max-lag 20 --lags 5 10") == 0);
    CHECK_THAT(slurp(dir / "diagnostics.json"), ContainsSubstring("ljung_box"));
}

TEST_CASE("mc-table1 and rate-check emit reports") {
    const fs::path dir = work_dir() / "harness";
    REQUIRE(run("--output " + dir.string() +
                " mc-table1 --T-list 100 --sigma2-list 1 --n-reps 3 --fixed --h 0.25 --v 0.2") == 0);
    CHECK_THAT(slurp(dir / "mase.csv"), ContainsSubstring("T,sigma2,n_reps,mase_g"));
    CHECK(fs::exists(dir / "mase.json"));

    REQUIRE(run("--output " + dir.string() +
                " rate-check --process iid --T-list 500 1000 2000 --n-reps 8 --seed 3") == 0);
    CHECK_THAT(slurp(dir / "rate_check.json"), ContainsSubstring("slope"));
}
