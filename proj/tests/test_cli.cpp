#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "csw/cli.hpp"
#include "csw/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = csw::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path dir() {
    static const fs::path d = [] {
        auto p = fs::temp_directory_path() / "csw_cli_test";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return d;
}

std::string path(const std::string& name) { return (dir() / name).string(); }

std::string slurp(const std::string& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("type validate") {
    CHECK(run({"type", "validate", "--m", "1,2,4,10", "--n", "2,3,4", "--r", "0,1,2"}).code == 0);
    const auto bad = run({"type", "validate", "--m", "1,3", "--n", "2", "--r", "0"});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("m_k = n_k(m_{k-1}-r_k)+r_k") != std::string::npos);
    const auto small = run({"type", "validate", "--m", "1,2", "--n", "1", "--r", "0"});
    CHECK(small.code == 1);
    CHECK(small.out.find("n_k > k") != std::string::npos);
    CHECK(run({"type", "validate", "--type", "1,2;2;0"}).code == 0);
    CHECK(run({"type", "validate", "--m", "1,x", "--n", "2", "--r", "0"}).code == 2);
}

TEST_CASE("scheme build and check") {
    {
        std::ofstream t(path("t.json"));
        t << R"({"m":[1,2,4,10],"n":[2,3,4],"r":[0,1,2]})";
    }
    CHECK(run({"scheme", "build", "--type", path("t.json"), "--out", path("s.json")}).code == 0);
    const auto ok = run({"scheme", "check", path("s.json")});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("FAIL") == std::string::npos);

    auto j = csw::io::read_json(path("s.json"));
    j["levels"][1][0] = {0, 5};
    csw::io::write_atomic(path("bad.json"), j.dump());
    const auto bad = run({"scheme", "check", path("bad.json")});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("FAIL  decomposition") != std::string::npos);

    CHECK(run({"scheme", "build", "--type", "1;;", "--out", path("s0.json")}).code == 0);
    CHECK(run({"scheme", "check", path("s0.json")}).code == 0);
    CHECK(run({"scheme", "check", path("nope.json")}).code == 3);
    csw::io::write_atomic(path("garbage.json"), "{");
    CHECK(run({"scheme", "check", path("garbage.json")}).code == 3);
}

TEST_CASE("norming build and norm eval") {
    CHECK(run({"norming", "build", "--type", "1,2;2;0", "--space", "k", "--param", "2", "--out", path("k.json")}).code == 0);
    CHECK(run({"norm", "eval", "--family", path("k.json"), "--vec", "0:1"}).out == "1\n");
    CHECK(run({"norm", "eval", "--family", path("k.json"), "--vec", "0:1,1:-1"}).out == "1\n");
    CHECK(run({"norm", "eval", "--family", path("k.json"), "--vec", ""}).out == "0\n");
    CHECK(run({"norm", "eval", "--family", path("k.json"), "--vec", "0:"}).code == 2);
    CHECK(run({"norming", "build", "--type", "1,2;2;0", "--space", "eps", "--param", "3/2"}).code == 2);
    CHECK(run({"norming", "build", "--type", "1,2;2;0", "--space", "q", "--param", "1/2"}).code == 2);
}

TEST_CASE("norm modes differ on the alternating vector") {
    CHECK(run({"norming", "build", "--type", "1,6;6;0", "--space", "eps", "--param", "1/2", "--out", path("e.json")})
              .code == 0);
    const std::string w = "0:1,1:-1,2:-1/2,3:1/2,4:-1/2,5:1/2";
    CHECK(run({"norm", "eval", "--family", path("e.json"), "--vec", w}).out == "1/2\n");
    CHECK(run({"norm", "eval", "--family", path("e.json"), "--vec", w, "--norm-mode", "local"}).out == "1/2\n");
    CHECK(run({"norm", "eval", "--family", path("e.json"), "--vec", w, "--norm-mode", "all"}).out == "1\n");
}

TEST_CASE("analysis commands write CSV") {
    CHECK(run({"norming", "build", "--type", "1,2,4;2,3;0,1", "--space", "eps", "--param", "2/3", "--out",
               path("e2.json")})
              .code == 0);
    const auto b = run({"analyze", "biorth", "--family", path("e2.json"), "--csv", path("b.csv")});
    CHECK(b.code == 0);
    const auto csv = slurp(path("b.csv"));
    CHECK(csv.rfind("name,lhs,relation,rhs,pass,witness\n", 0) == 0);
    CHECK(csv.find("off-diagonal max <= eps,2/3,<=,2/3,true") != std::string::npos);

    CHECK(run({"analyze", "coherence", "--family", path("e2.json"), "--seed", "3"}).code == 0);
    CHECK(run({"norming", "build", "--type", "1,8;8;0", "--space", "k", "--param", "2", "--scale-cap", "1", "--out",
               path("k8.json")})
              .code == 0);
    const auto c = run({"analyze", "basis-constant", "--family", path("k8.json"), "--samples", "20", "--json",
                        path("bc.json")});
    CHECK(c.code == 0);
    CHECK(csw::io::read_json(path("bc.json"))["norms"]["basis_constant"] == "2");
    CHECK(run({"analyze", "coherence", "--family", path("k8.json"), "--samples", "20"}).code == 0);
}

TEST_CASE("experiments") {
    const auto e = run({"experiment", "eps", "--eps", "1/2", "--n", "2", "--type", "1,6;6;0"});
    CHECK(e.code == 0);
    CHECK(e.out.find("norm w = 1/2\n") != std::string::npos);
    const auto k = run({"experiment", "kbasis", "--k", "2", "--n", "4", "--L", "5/4", "--type", "1,8;8;0"});
    CHECK(k.code == 0);
    CHECK(k.out.find("norm ratio = 2\n") != std::string::npos);
    const auto bad = run({"experiment", "kbasis", "--k", "2", "--n", "4", "--L", "3/2", "--type", "1,8;8;0"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("ConfigInvalid") != std::string::npos);
    CHECK(run({"experiment", "eps", "--eps", "1/2", "--n", "2", "--m", "3", "--type", "1,6;6;0"}).code == 2);
    CHECK(run({"experiment", "eps", "--eps", "1/2", "--n", "3", "--type", "1,6;6;0"}).code == 2);
}

TEST_CASE("reports are deterministic and honour the output directory") {
    ::setenv("CSW_OUT_DIR", dir().c_str(), 1);
    const std::vector<std::string> args{"experiment", "kbasis", "--k",     "2",      "--n",    "4",
                                        "--L",        "5/4",    "--type",  "1,8;8;0", "--json", "k1.json"};
    CHECK(run(args).code == 0);
    const auto first = slurp(path("k1.json"));
    CHECK(run(args).code == 0);
    CHECK(slurp(path("k1.json")) == first);
    CHECK(first.find('.') == std::string::npos);
    ::unsetenv("CSW_OUT_DIR");
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}
