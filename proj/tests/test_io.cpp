#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "cdinn/csv.hpp"
#include "cdinn/dataset.hpp"
#include "cdinn/model_io.hpp"
#include "cdinn/recurrent.hpp"

using namespace cdinn;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path p = fs::temp_directory_path() / "cdinn_io_test";
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("model save/load reproduces outputs bit-for-bit") {
  NetworkSpec spec;
  spec.kind = NetKind::cdinn1;
  spec.input_dim = 3;
  spec.hidden_widths = {7, 5};
  spec.passthrough_enabled = true;
  spec.rng_seed = 404;
  ModelFile m;
  m.net = build(spec);
  m.input_scaler = AffineScaler::from_range({-2.0, -3.0, 0.0}, {2.0, 3.0, 10.0});
  m.output_scaler = AffineScaler::from_range({-1.0}, {42.0});
  m.provenance = {{"seed", 404}, {"epochs", 0}, {"final_mse", 0.0}};

  const fs::path path = temp_dir() / "model.json";
  save_model(path, m);
  const ModelFile r = load_model(path);

  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    Vector x(3);
    for (double& v : x) v = rng.uniform(-1.5, 1.5);
    const double a = forward(m.net, x);
    const double b = forward(r.net, x);
    REQUIRE(a == b);  // bit-identical
  }
  REQUIRE(r.input_scaler.mins == m.input_scaler.mins);
  REQUIRE(r.output_scaler.maxs == m.output_scaler.maxs);
}

TEST_CASE("recurrent models survive the round-trip too") {
  const NetworkParams net = delay_construct(3);
  ModelFile m;
  m.net = net;
  m.input_scaler = AffineScaler::from_range({-1.0}, {1.0});
  m.output_scaler = AffineScaler::from_range({-1.0}, {1.0});
  const fs::path path = temp_dir() / "rec_model.json";
  save_model(path, m);
  const ModelFile r = load_model(path);
  Rng rng(2);
  Vector u(8);
  for (double& v : u) v = rng.uniform(-1.0, 1.0);
  REQUIRE(recurrent_forward(m.net, u) == recurrent_forward(r.net, u));
}

TEST_CASE("unknown format versions are rejected") {
  const fs::path path = temp_dir() / "bad_version.json";
  json j = json::parse(read_file(temp_dir() / "model.json"));
  j["format_version"] = 999;
  write_file_atomic(path, j.dump());
  REQUIRE_THROWS_AS(load_model(path), std::runtime_error);
}

TEST_CASE("csv writer and reader round-trip quoting") {
  Table t;
  t.name = "demo";
  t.columns = {"name", "value"};
  t.add_row({"plain", "1.5"});
  t.add_row({"with,comma", "2"});
  t.add_row({"with\"quote", "3"});
  const fs::path path = temp_dir() / "demo.csv";
  write_csv(path, t);
  const Table r = read_csv(path);
  REQUIRE(r.columns == t.columns);
  REQUIRE(r.rows == t.rows);
}

TEST_CASE("dataset csv table matches the dataset") {
  const Dataset ds = regression_1d("cubic", 17, 5);
  const Table t = dataset_to_table(ds.inputs, ds.targets, ds.sequences);
  REQUIRE(t.columns == std::vector<std::string>{"x0", "y"});
  REQUIRE(t.rows.size() == 17);
  REQUIRE(t.rows[0][0] == fmt_g(ds.inputs(0, 0)));
}

TEST_CASE("provenance sidecar and manifest round-trip") {
  const Dataset ds = classify_2d("circles", 24, 0.1, 17);
  const fs::path prov_path = temp_dir() / "ds.prov.json";
  save_provenance(prov_path, ds.provenance);
  const Provenance prov = load_provenance(prov_path);
  const Dataset again = regenerate(prov);
  REQUIRE(again.inputs.data == ds.inputs.data);

  RunManifest m;
  m.experiment = "table1";
  m.config = {{"seed", 1}};
  m.outputs = {"table1.csv"};
  m.timestamp = "2026-01-01T00:00:00Z";
  const fs::path man_path = temp_dir() / "manifest.json";
  save_manifest(man_path, m);
  const RunManifest r = load_manifest(man_path);
  REQUIRE(r.experiment == m.experiment);
  REQUIRE(r.outputs == m.outputs);
  REQUIRE(r.config == m.config);
}
