#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int run(const std::string& args, const std::string& log = "/tmp/dworkcli_test.log") {
    std::string cmd = std::string(DWORKCLI_PATH) + " " + args + " > " + log + " 2>&1";
    int st = std::system(cmd.c_str());
    REQUIRE(st != -1);
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

}  // namespace

TEST_CASE("reports are byte-identical across runs and thread counts") {
    std::string base = "frobenius --poly " FIXTURE_DIR "/fermat3 -p 5 -N 4";
    CHECK(run(base + " --threads 1 --out /tmp/cli_a.txt") == 0);
    CHECK(run(base + " --threads 1 --out /tmp/cli_b.txt") == 0);
    CHECK(run(base + " --threads 3 --out /tmp/cli_c.txt") == 0);

    std::string a = slurp("/tmp/cli_a.txt");
    CHECK(!a.empty());
    CHECK(a == slurp("/tmp/cli_b.txt"));
    CHECK(a == slurp("/tmp/cli_c.txt"));
    std::string aj = slurp("/tmp/cli_a.txt.json");
    CHECK(!aj.empty());
    CHECK(aj == slurp("/tmp/cli_b.txt.json"));
    CHECK(aj == slurp("/tmp/cli_c.txt.json"));
    CHECK(a.find("status = match") != std::string::npos);
}

TEST_CASE("exit codes separate input errors from verification failures") {
    // singular fiber: the parameter hits bad reduction -> input error
    CHECK(run("frobenius --poly " FIXTURE_DIR "/family --param 1 -p 7 -N 4") == 2);
    // zero parameter rejected up front
    CHECK(run("frobenius --poly " FIXTURE_DIR "/family --param 0 -p 7") == 2);
    // coefficient that is not fixed by x -> x^p
    CHECK(run("frobenius --poly \"x^3 + y^3 + 2*z^3\" -p 5") == 2);
    // unparsable polynomial
    CHECK(run("basis --poly \"x^3 + (\"") == 2);
    // corrupted splitting coefficient must break the intertwining check
    CHECK(run("keylemma -p 3 -N 4 --amax 2 --imax 1 --perturb 2") == 1);
    // fixed truncation too short to certify the target -> verification failure
    CHECK(run("formula3 -p 5 -N 6 --b 2 --M 12") == 1);
}

TEST_CASE("basis and zeta answers on the shipped fixtures") {
    CHECK(run("basis --poly " FIXTURE_DIR "/quartic3 --out /tmp/cli_d.txt") == 0);
    std::string d = slurp("/tmp/cli_d.txt");
    CHECK(d.find("dim = 21") != std::string::npos);
    CHECK(d.find("matches_smooth_dimensions = true") != std::string::npos);

    CHECK(run("zeta --poly " FIXTURE_DIR "/fermat3 -p 5 --out /tmp/cli_e.txt") == 0);
    std::string e = slurp("/tmp/cli_e.txt");
    CHECK(e.find("points_f_p = 6") != std::string::npos);
    CHECK(e.find("a = 0") != std::string::npos);

    CHECK(run("spectrum --imax 8 --out /tmp/cli_f.txt") == 0);
    CHECK(slurp("/tmp/cli_f.txt").find("matches_closed_forms = true") != std::string::npos);
}
