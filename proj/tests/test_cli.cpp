#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
    int code;
    std::string out;
};

Run fusionctl(const std::string& args) {
    std::string cmd = std::string(FUSIONCTL_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    std::string out;
    char buf[4096];
    for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) out.append(buf, n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

bool has(const std::string& text, const std::string& part) { return text.find(part) != std::string::npos; }

}  // namespace

TEST_SUITE("fusionctl") {

TEST_CASE("build") {
    auto r = fusionctl("build --a 2,2");
    CHECK(r.code == 0);
    CHECK(has(r.out, "dim       4"));
    CHECK(has(r.out, "1 + u + u*q + u^2"));
    CHECK(has(fusionctl("build --a 1").out, "dim       1"));

    auto j = fusionctl("character --a 2,3,4 --format json");
    CHECK(j.code == 0);
    CHECK(nlohmann::json::parse(j.out)["dim"] == 24);
}

TEST_CASE("usage errors exit 2") {
    auto r = fusionctl("build --a 2,1");
    CHECK(r.code == 2);
    CHECK(has(r.out, "composition must be nondecreasing"));
    CHECK(fusionctl("build").code == 2);
    CHECK(fusionctl("verify nope").code == 2);
    CHECK(fusionctl("filtration --a 2,2,3 --i 3").code == 2);
    CHECK(fusionctl("invert --a 0,1").code == 2);
    CHECK(fusionctl("cohomology --a 3,1").code == 2);
    CHECK(fusionctl("frobnicate").code == 2);
}

TEST_CASE("filtration chains") {
    auto r = fusionctl("filtration --a 4,5,6,9 --i 3 --format json");
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["steps"].size() == 5);
    CHECK(j["steps"][0]["module"] == std::vector<int>{4, 8});
    CHECK(j["steps"][4]["module"] == std::vector<int>{4, 5, 5, 10});
    auto t = fusionctl("filtration --a 4,5,6,9 --i 3");
    CHECK(has(t.out, "total 1080"));

    auto s = fusionctl("filtration --a 2,2,3 --i 1 --format json");
    CHECK(s.code == 0);
    CHECK(nlohmann::json::parse(s.out)["steps"][0]["dim"] == 3);
}

TEST_CASE("submodule, invert, cohomology") {
    auto s = fusionctl("submodule --a 2,3,4 --i 2 --format json");
    CHECK(s.code == 0);
    CHECK(nlohmann::json::parse(s.out)["dim"] == 4);

    auto inv = fusionctl("invert --a 1,1,0");
    CHECK(inv.code == 0);
    CHECK(has(inv.out, "[1,-1,1]"));

    auto c = fusionctl("cohomology --a 2,3,4");
    CHECK(c.code == 0);
    CHECK(has(c.out, "dim H^0 = 60"));
}

TEST_CASE("verify suites") {
    CHECK(fusionctl("verify cohomology --max-n 4 --max-entry 4").code == 0);
    CHECK(fusionctl("verify dims --max-n 2 --max-entry 3").code == 0);
    auto sp = fusionctl("verify splitting --n 3 --format json");
    CHECK(sp.code == 0);
    // E_4 is reported with its computed type and a failing status
    auto s4 = fusionctl("splitting --n 4 --format json");
    CHECK(s4.code == 1);
    CHECK(nlohmann::json::parse(s4.out)["splitting"] == std::vector<int>{2, 1, 1, 0, 0, 0, 0, 0, -1, -1, -2});
}

TEST_CASE("cache directory from the environment") {
    auto dir = std::filesystem::temp_directory_path() / "fusionctl-env-cache";
    std::filesystem::remove_all(dir);
    auto r = fusionctl("build --a 3,3");
    CHECK(r.code == 0);
    std::string cmd = "FUSION_CACHE_DIR=" + dir.string() + " " + std::string(FUSIONCTL_PATH) + " build --a 3,3 > /dev/null";
    CHECK(std::system(cmd.c_str()) == 0);
    std::size_t files = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir)) files += e.path().extension() == ".fm";
    CHECK(files == 1);
    std::filesystem::remove_all(dir);
}

}
