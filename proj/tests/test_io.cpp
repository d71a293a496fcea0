#include "doctest.h"

#include "regrom/io.hpp"

#include <filesystem>
#include <fstream>

using namespace regrom;

namespace {
std::filesystem::path tmp(const std::string& name) { return std::filesystem::temp_directory_path() / name; }
}  // namespace

TEST_CASE("key=value parsing") {
  const auto kv = KeyValueConfig::parse("# comment\nequation = ks\nviscosity=0.5  # trailing\n\nn_values = 4, 6,8\n");
  CHECK(kv.get_string("equation", "") == "ks");
  CHECK(kv.get_double("viscosity", 0.0) == 0.5);
  CHECK(kv.get_longs("n_values", {}) == std::vector<long>{4, 6, 8});
  CHECK(kv.get_double("missing", 3.0) == 3.0);
  CHECK_THROWS_AS(KeyValueConfig::parse("a=1\na=2\n"), Error);
  CHECK_THROWS_AS(KeyValueConfig::parse("novalue\n"), Error);
  CHECK_THROWS_AS(KeyValueConfig::parse("x=abc\n").get_double("x", 0.0), Error);
}

TEST_CASE("FOM config text round-trips") {
  FomConfig c;
  c.equation = Equation::kuramoto_sivashinsky;
  c.viscosity = 0.1;
  c.dt = 0.003;
  c.n_steps = 9000;
  c.snapshot_stride = 30;
  c.seed = 42;
  c.forcing_amplitude = 0.25;
  GridSpec g{96, 7.5};
  const auto [c2, g2] = fom_config_from(KeyValueConfig::parse(format_fom_config(c, g)));
  CHECK(c2.viscosity == c.viscosity);
  CHECK(c2.dt == c.dt);
  CHECK(c2.seed == 42);
  CHECK(c2.forcing_amplitude == 0.25);
  CHECK(g2 == g);
  CHECK_THROWS_AS(fom_config_from(KeyValueConfig::parse("bogus=1\n")), Error);
}

TEST_CASE("run container round-trip") {
  RunResult run;
  run.coefficient_history = Matrix::Random(5, 3);
  run.times = {0.0, 0.1, 0.2, 0.3, 0.4};
  run.diverged = true;
  run.diverged_step = 77;
  run.startup_rows = 1;
  run.filter_solves = 12;
  write_run(tmp("regrom_run.bin"), run);
  const RunResult r = read_run(tmp("regrom_run.bin"));
  CHECK(r.coefficient_history == run.coefficient_history);
  CHECK(r.times == run.times);
  CHECK(r.diverged);
  CHECK(r.diverged_step == 77);
  CHECK(r.startup_rows == 1);
  CHECK(r.filter_solves == 12);
}

TEST_CASE("wrong magic and truncation are rejected") {
  {
    std::ofstream out(tmp("regrom_bad.bin"), std::ios::binary);
    out << "NOTMAGIC1234";
  }
  CHECK_THROWS_AS(read_snapshots(tmp("regrom_bad.bin")), Error);
  {
    std::ofstream out(tmp("regrom_short.bin"), std::ios::binary);
    out.write("REGROM1\0", 8);
    out << "abc";
  }
  CHECK_THROWS_AS(read_snapshots(tmp("regrom_short.bin")), Error);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 0.3367, 1e-300, 12345.678}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}
