#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "test_util.hpp"

namespace {

int run_cli(const std::string& args, const std::string& env = "") {
    std::string cmd = env + " " + std::string(RULLS_CLI_PATH) + " " + args +
                      " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const std::string kSmall =
    "--iterations 3 --landmarks 20 --nearest 3 --k-eps 15";

}  // namespace

TEST_CASE("cli featurize writes a sparse matrix and a report, deterministically") {
    testutil::TempFile out_a("cli_feat_a"), out_b("cli_feat_b");
    std::string base = "featurize --input " + testutil::data_path("iris.csv") +
                       " --label-col -1 " + kSmall + " --seed 9 --output ";
    REQUIRE(run_cli(base + out_a.path()) == 0);
    REQUIRE(run_cli(base + out_b.path()) == 0);

    std::string ta = out_a.read();
    CHECK(ta == out_b.read());
    CHECK(ta.substr(0, ta.find('\n')) == "150 60 1350");  // N, T*l_p, N*T*l_k

    std::ifstream rep(out_a.path() + ".report");
    REQUIRE(rep.good());
    std::string line;
    std::getline(rep, line);
    CHECK(line.rfind("sparsity\t", 0) == 0);
    std::getline(rep, line);
    CHECK(line.rfind("sparsity_ratio\t0.15", 0) == 0);  // l_k / l_p = 3/20
    std::remove((out_a.path() + ".report").c_str());
    std::remove((out_b.path() + ".report").c_str());
}

TEST_CASE("cli seed falls back to the RULLS_SEED environment variable") {
    testutil::TempFile flag_out("cli_seed_flag"), env_out("cli_seed_env");
    std::string base = "featurize --input " + testutil::data_path("iris.csv") +
                       " --label-col -1 " + kSmall;
    REQUIRE(run_cli(base + " --seed 77 --output " + flag_out.path()) == 0);
    REQUIRE(run_cli(base + " --output " + env_out.path(), "RULLS_SEED=77") == 0);
    CHECK(flag_out.read() == env_out.read());
    std::remove((flag_out.path() + ".report").c_str());
    std::remove((env_out.path() + ".report").c_str());
}

TEST_CASE("cli evaluate reports paired classification metrics") {
    testutil::TempFile out("cli_eval");
    std::string cmd = "evaluate --input " + testutil::data_path("iris.csv") +
                      " --label-col -1 " + kSmall +
                      " --task classify --epochs 10 --seed 3 --output " + out.path();
    REQUIRE(run_cli(cmd) == 0);
    std::string report = out.read();
    CHECK(report.find("accuracy_raw\t") != std::string::npos);
    CHECK(report.find("accuracy_rulls\t") != std::string::npos);
    CHECK(report.find("sparsity\t") != std::string::npos);
    CHECK(report.find("sparsity_ratio\t") != std::string::npos);
}

TEST_CASE("cli noise-eval reports clean, noisy and delta metrics") {
    testutil::TempFile out("cli_noise");
    std::string cmd = "noise-eval --input " + testutil::data_path("iris.csv") +
                      " --label-col -1 " + kSmall +
                      " --task classify --epochs 10 --noise-axis rows"
                      " --noise-fraction 0.1 --seed 3 --output " + out.path();
    REQUIRE(run_cli(cmd) == 0);
    std::string report = out.read();
    CHECK(report.find("accuracy_raw_clean\t") != std::string::npos);
    CHECK(report.find("accuracy_raw_noisy\t") != std::string::npos);
    CHECK(report.find("delta_accuracy_raw\t") != std::string::npos);
    CHECK(report.find("delta_accuracy_rulls\t") != std::string::npos);
}

TEST_CASE("cli visualize renders a PGM image from a saved matrix") {
    testutil::TempFile mat("cli_vis_mat"), img("cli_vis_img");
    std::string feat = "featurize --input " + testutil::data_path("iris.csv") +
                       " --label-col -1 " + kSmall + " --seed 9 --output " + mat.path();
    REQUIRE(run_cli(feat) == 0);
    REQUIRE(run_cli("visualize --input " + mat.path() + " --output " + img.path()) == 0);
    std::string pgm = img.read();
    CHECK(pgm.rfind("P5\n60 150\n255\n", 0) == 0);
    CHECK(pgm.size() == std::string("P5\n60 150\n255\n").size() + 60 * 150);
    std::remove((mat.path() + ".report").c_str());
}

TEST_CASE("cli exit codes distinguish config, data and usage errors") {
    // unreadable input -> data error (2)
    CHECK(run_cli("featurize --input /nonexistent.csv --output /tmp/rulls_x") == 2);
    // invalid hyperparameter -> config error (1)
    CHECK(run_cli("featurize --input " + testutil::data_path("iris.csv") +
                  " --label-col -1 --iterations 0 --output /tmp/rulls_x") == 1);
    // unknown method rejected at parse time (1)
    CHECK(run_cli("featurize --input " + testutil::data_path("iris.csv") +
                  " --method nope --output /tmp/rulls_x") == 1);
    // missing subcommand (1)
    CHECK(run_cli("") == 1);
}
