#include "support.hpp"

#include "kramers/config.hpp"
#include "kramers/errors.hpp"
#include "kramers/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace kramers;

namespace {

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InvalidConfig& e) {
    return e.what();
  }
  return "";
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "kramers-unit";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("defaults validate and every key has documentation") {
  const Config cfg;
  CHECK_NOTHROW(cfg.validate());
  for (const auto& k : config_schema()) {
    CHECK(cfg.has(k.name));
    CHECK(!k.doc.empty());
  }
  CHECK(cfg.integer("modes") == 32);
  CHECK(cfg.real_list("mu_grid") == std::vector<double>{0.1, 0.03, 0.01, 0.003, 0.001});
}

TEST_CASE("parsing files with comments") {
  const Config cfg = Config::from_string("# sweep\nmodes = 16   # fewer\n\nmu_grid = 0.1, 0.01\nwrite_snapshots = yes\n");
  CHECK(cfg.integer("modes") == 16);
  CHECK(cfg.real_list("mu_grid") == std::vector<double>{0.1, 0.01});
  CHECK(cfg.boolean("write_snapshots"));
}

TEST_CASE("errors name the offending key and line") {
  CHECK(message_of([] { Config::from_string("modes = 16\nmodes = sixteen\n", "a.cfg"); }).find("a.cfg:2") == 0);
  CHECK(message_of([] { Config().set("modes", "1.5"); }).find("'modes'") != std::string::npos);
  CHECK(message_of([] { Config().set("no_such_key", "1"); }).find("no_such_key") != std::string::npos);
  CHECK(message_of([] { Config::from_string("just words\n"); }).find("key = value") != std::string::npos);
  CHECK(message_of([] { Config().set("mu_grid", "0.1,,0.2"); }).find("mu_grid") != std::string::npos);
}

TEST_CASE("cross-key validation") {
  auto fails = [](const std::string& key, const std::string& value) {
    Config c;
    c.set(key, value);
    return message_of([&] { c.validate(); }).find("'" + key + "'") != std::string::npos;
  };
  CHECK(fails("p_exponent", "4"));         // p (vartheta - 1) = 2
  CHECK(fails("vartheta", "2"));
  CHECK(fails("varrho", "0.97"));          // above the cutoff exponent
  CHECK(fails("mu_grid", "0.01,0.1"));     // must decrease
  CHECK(fails("mu_grid", "0.1,0.1"));
  CHECK(fails("replicas", "0"));
  CHECK(fails("drift_method", "monte_carlo"));
  CHECK(fails("quadrature_horizon", "20"));
  CHECK(fails("delta", "0.5"));
}

TEST_CASE("hash ignores output placement but tracks every numerical key") {
  Config a, b;
  b.set("output_dir", "/elsewhere");
  b.set("threads", "4");
  CHECK(a.hash() == b.hash());
  b.set("seed", "1");
  CHECK(a.hash() != b.hash());
  CHECK(a.hash().size() == 16);
  CHECK(Config::from_string(a.canonical()).canonical() == a.canonical());
}

TEST_CASE("field files round trip bit for bit") {
  const auto s = kt::space(9, 2);
  const Field u = kt::field(s, 4, 1.0, 0.5);
  const auto path = scratch("u.field").string();
  write_field(path, u);
  CHECK(read_field(path, s).coeffs() == u.coeffs());
  CHECK_THROWS_AS(read_field(path, kt::space(8, 2)), InvalidConfig);
  CHECK_THROWS_AS(read_field(scratch("missing.field").string(), s), InvalidConfig);
}

TEST_CASE("snapshot tables") {
  const auto s = kt::space(2, 2);
  const Field u = kt::field(s, 1), v = kt::field(s, 2);
  const auto path = scratch("snap.csv").string();
  write_snapshots(path, {"abc", 7, 0.01, 2, 2}, {{0.0, &u, &v}, {0.5, &u, &v}});
  std::ifstream in(path);
  std::string header, cols, row;
  std::getline(in, header);
  std::getline(in, cols);
  std::getline(in, row);
  CHECK(header.find("config_hash=abc") != std::string::npos);
  CHECK(cols == "t,u[0:1],u[1:1],u[0:2],u[1:2],v[0:1],v[1:1],v[0:2],v[1:2]");
  CHECK(std::count(row.begin(), row.end(), ',') == 8);
  CHECK(std::stod(row.substr(row.find(',') + 1)) == u(0, 0));
}

TEST_CASE("reals print with round-trip precision") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_real(x)) == x);
  CHECK(csv_line({"a", "b"}) == "a,b\n");
}
