#include "ringqed/experiments.hpp"
#include "ringqed/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ringqed;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("ringqed_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("git blob hashes") {
    CHECK(content_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
    CHECK(content_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.3333333333333333");
    CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_number(std::size_t{42}) == "42");
}

TEST_CASE("csv tables") {
    CsvTable t;
    t.columns = {"a", "b"};
    t.add_row({"1", "2"});
    CHECK(t.str() == "a,b\n1,2\n");
    CHECK_THROWS(t.add_row({"1"}));
}

TEST_CASE("array map output is byte-identical across runs") {
    ArrayMapSpec spec;
    spec.spacings = {0.1, 0.2, 0.3, 0.4, 0.5};
    spec.n_effs = {1.0, 1.2, 1.4, 1.6, 1.8};
    const std::string a = sweep_table(sweep_array_map(spec)).str();
    const std::string b = sweep_table(sweep_array_map(spec)).str();
    CHECK(a == b);
    CHECK(content_hash(a) == content_hash(b));
    CHECK(std::count(a.begin(), a.end(), '\n') == 26);
}

TEST_CASE("sidecar contents") {
    const fs::path dir = scratch_dir("sidecar");
    write_text(dir / "x.csv", "a\n1\n");
    Sidecar s;
    s.experiment = "array-map";
    s.config = {{"seed", 4}};
    s.seed = 4;
    s.outputs = {dir / "x.csv"};
    s.exclusions = {{"defective", 2}};
    const auto j = sidecar_json(s, dir);
    CHECK(j.at("status") == "complete");
    CHECK(j.at("seed") == 4);
    CHECK(j.at("exclusions").at("defective") == 2);
    CHECK(j.dump().find(content_hash("a\n1\n")) != std::string::npos);
    CHECK(j.contains("timestamp"));
    Sidecar p = s;
    p.partial = true;
    CHECK(sidecar_json(p, dir).at("status") == "partial");
    CHECK(input_hash(s) == input_hash(p));
    Sidecar q = s;
    q.seed = 5;
    CHECK(input_hash(q) != input_hash(s));
    write_sidecar(s, dir / "x.json");
    CHECK(nlohmann::json::parse(slurp(dir / "x.json")).at("experiment") == "array-map");
    fs::remove_all(dir);
}

TEST_CASE("gnuplot script references the csv") {
    CsvTable t;
    t.columns = {"n_atoms", "gamma_f_line", "gamma_f_ring"};
    const std::string gp = gnuplot_script("ring_vs_line.csv", t, {"gamma_f_line", "gamma_f_ring"}, true);
    CHECK(gp.find("ring_vs_line.csv") != std::string::npos);
    CHECK(gp.find("logscale y") != std::string::npos);
}
