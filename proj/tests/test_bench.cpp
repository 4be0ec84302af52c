#include "kklink/experiment.hpp"
#include "kklink/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace kklink;

namespace {

ExperimentConfig small_kk_sweep() {
  ExperimentConfig cfg;
  cfg.format = ModemFormat::kk;
  cfg.kk.amplitude_a = 20.0;
  cfg.kk.symbol_rate = 1e9;
  cfg.kk.samples_per_symbol = 4;
  cfg.channel.f3db_hz = 1e9;
  cfg.equalizer = {10, 6, 1e-3, 200, 2};
  cfg.frame_symbols = 700;
  cfg.frames = 2;
  cfg.seed = 5;
  cfg.axis = SweepAxis::osnr_db;
  cfg.grid = {10.0, 14.0};
  return cfg;
}

}  // namespace

TEST_CASE("sweeps are deterministic byte for byte") {
  const ExperimentConfig cfg = small_kk_sweep();
  const std::string a = report_csv(run_sweep(cfg));
  const std::string b = report_csv(run_sweep(cfg));
  CHECK(a == b);

  ExperimentConfig other = cfg;
  other.seed = 6;
  CHECK(report_csv(run_sweep(other)) != a);
}

TEST_CASE("emitted CSV re-parses to the exact report values") {
  const BerReport report = run_sweep(small_kk_sweep());
  const auto parsed = parse_report_csv(report_csv(report));
  REQUIRE(parsed.size() == report.points.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    CHECK(parsed[i].grid_value == report.points[i].grid_value);
    CHECK(parsed[i].ber == report.points[i].ber);
    CHECK(parsed[i].bits == report.points[i].bits);
    CHECK(parsed[i].errors == report.points[i].errors);
    CHECK(parsed[i].evm_pct == report.points[i].evm_pct);
    CHECK(parsed[i].ser == report.points[i].ser);
    CHECK(parsed[i].min_phase_rate == report.points[i].min_phase_rate);
    CHECK(parsed[i].clamped_samples == report.points[i].clamped_samples);
  }
  CHECK_THROWS_AS(parse_report_csv("bad,header\n1,2\n"), std::runtime_error);
}

TEST_CASE("run_point is deterministic and reports the min-phase rate") {
  ExperimentConfig cfg = small_kk_sweep();
  const PointRecord a = run_point(cfg, 12.0);
  const PointRecord b = run_point(cfg, 12.0);
  CHECK(a.ber == b.ber);
  CHECK(a.errors == b.errors);
  CHECK(a.evm_pct == b.evm_pct);
  CHECK(a.min_phase_rate == 1.0);

  cfg.axis = SweepAxis::amplitude_a;
  const PointRecord fail = run_point(cfg, 0.0);
  CHECK(fail.min_phase_rate == 0.0);
  CHECK(fail.ber > 0.2);
}

TEST_CASE("sensitivity interpolation: unique crossing") {
  const std::vector<double> grid = {1.0, 2.0};
  const std::vector<double> ber = {1e-2, 1e-3};
  const std::vector<long long> bits = {1000000, 1000000};
  const auto s = interpolate_sensitivity(grid, ber, bits);
  REQUIRE(s.has_value());
  CHECK_FALSE(s->flagged);
  // log-linear: 1 + (log10(3.8e-3) - log10(1e-2)) / (log10(1e-3) - log10(1e-2))
  CHECK(s->value == doctest::Approx(1.4202164).epsilon(1e-6));
}

TEST_CASE("sensitivity interpolation: flagged conservative crossing on wiggly curves") {
  const std::vector<double> grid = {1.0, 2.0, 3.0, 4.0};
  const std::vector<double> ber = {1e-2, 1e-3, 1e-2, 1e-4};
  const std::vector<long long> bits(4, 1000000);
  const auto s = interpolate_sensitivity(grid, ber, bits);
  REQUIRE(s.has_value());
  CHECK(s->flagged);
  CHECK(s->value > 3.0);  // the crossing after which the curve stays compliant
  CHECK(s->value < 4.0);
}

TEST_CASE("sensitivity interpolation: unbracketed and zero-count cases") {
  const std::vector<long long> bits(3, 100000);
  CHECK_FALSE(interpolate_sensitivity({1, 2, 3}, {0.1, 0.05, 0.01}, bits).has_value());
  CHECK_FALSE(interpolate_sensitivity({1, 2, 3}, {1e-4, 1e-5, 0.0}, bits).has_value());
  // an exact zero is floored at 0.25/bits, still a valid crossing endpoint
  const auto s = interpolate_sensitivity({1, 2}, {1e-2, 0.0}, {100000, 100000});
  REQUIRE(s.has_value());
  CHECK(s->value > 1.0);
  CHECK(s->value < 2.0);
}

TEST_CASE("full-chain BER is monotone non-increasing in OSNR" * doctest::timeout(120)) {
  ExperimentConfig cfg;
  cfg.format = ModemFormat::kk;
  cfg.kk.amplitude_a = 20.0;
  cfg.kk.symbol_rate = 1e9;
  cfg.kk.samples_per_symbol = 8;
  cfg.channel.f3db_hz = 1e9;
  cfg.equalizer = {10, 6, 1e-3, 600, 2};
  cfg.frame_symbols = 3000;
  cfg.frames = 10;
  cfg.seed = 1;
  cfg.axis = SweepAxis::osnr_db;
  double prev = 1.0;
  for (double osnr : {6.0, 8.0, 10.0, 12.0, 14.0}) {
    const double ber = run_point(cfg, osnr).ber;
    CHECK(ber <= prev);
    prev = ber;
  }
}

TEST_CASE("clean channel point: zero errors, sub-percent EVM") {
  ExperimentConfig cfg = small_kk_sweep();
  cfg.channel = ChannelConfig{};  // unlimited bandwidth, noiseless
  cfg.kk.samples_per_symbol = 8;
  cfg.frame_symbols = 2000;
  const PointRecord p = run_point(cfg, cfg.channel.osnr_db);
  CHECK(p.errors == 0);
  CHECK(p.ber == 0.0);
  CHECK(p.evm_pct < 1.0);
  CHECK(p.min_phase_rate == 1.0);
}

TEST_CASE("A-sweep ordering: the 20/25 curves overlap and beat A=8" * doctest::timeout(120)) {
  ExperimentConfig cfg;
  cfg.format = ModemFormat::kk;
  cfg.kk.symbol_rate = 1e9;
  cfg.kk.samples_per_symbol = 8;
  cfg.channel.f3db_hz = 1e9;
  cfg.channel.osnr_db = 6.0;
  cfg.equalizer = {10, 6, 1e-3, 600, 2};
  cfg.frame_symbols = 3000;
  cfg.frames = 10;
  cfg.seed = 1;
  cfg.axis = SweepAxis::amplitude_a;
  const double b8 = run_point(cfg, 8.0).ber;
  const double b20 = run_point(cfg, 20.0).ber;
  const double b25 = run_point(cfg, 25.0).ber;
  CHECK(b20 < b8);
  CHECK(b25 < b8);
  REQUIRE(b20 > 0.0);
  CHECK(std::max(b20 / b25, b25 / b20) < 2.0);
}

TEST_CASE("noiseless bandlimited EVM is non-increasing in A" * doctest::timeout(120)) {
  ExperimentConfig cfg;
  cfg.format = ModemFormat::kk;
  cfg.kk.symbol_rate = 1e9;
  cfg.kk.samples_per_symbol = 8;
  cfg.channel.f3db_hz = 1e9;
  cfg.equalizer = {10, 6, 1e-3, 600, 2};
  cfg.frame_symbols = 3000;
  cfg.frames = 4;
  cfg.seed = 1;
  cfg.axis = SweepAxis::amplitude_a;
  double prev = std::numeric_limits<double>::infinity();
  for (double a : {3.0, 5.0, 8.0, 10.0, 20.0, 30.0}) {
    const double evm = run_point(cfg, a).evm_pct;
    CHECK(evm <= prev);
    prev = evm;
  }
}

TEST_CASE("bit-error counting tracks a known flip probability") {
  Rng flip(99);
  const double p = 0.01;
  const long long n = 200000;
  long long errors = 0;
  for (long long i = 0; i < n; ++i) errors += flip.uniform() < p;
  const double measured = static_cast<double>(errors) / static_cast<double>(n);
  const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  CHECK(std::abs(measured - p) < 3.0 * sigma);
}

TEST_CASE("compare_formats reports the DAC budget table and sensitivity sweeps") {
  CompareConfig cfg;
  cfg.channel.f3db_hz = 1e9;
  cfg.channel.osnr_db = 22.0;
  cfg.equalizer = {10, 6, 1e-3, 200, 2};
  cfg.power_grid = {0.4, 1.0, 2.0};
  cfg.frame_symbols = 700;
  cfg.frames = 2;
  cfg.seed = 3;
  const FormatComparison cmp = compare_formats(cfg);

  REQUIRE(cmp.entries.size() == 3);
  CHECK(cmp.entries[0].format == "kk");
  CHECK(cmp.entries[0].samples_per_symbol == 4);
  CHECK(cmp.entries[0].symbol_rate == doctest::Approx(625e6));
  CHECK(cmp.entries[1].format == "pam4");
  CHECK(cmp.entries[1].samples_per_symbol == 2);
  CHECK(cmp.entries[1].symbol_rate == doctest::Approx(1.25e9));
  for (const auto& e : cmp.entries) CHECK(e.bit_rate == doctest::Approx(2.5e9));

  REQUIRE(cmp.dac_budget.size() == 3);
  for (const auto& row : cmp.dac_budget) {
    CHECK(row.samples_per_symbol == 2);
    CHECK(row.max_symbol_rate == doctest::Approx(1.25e9));
    if (row.format == "pam4") CHECK(row.max_bit_rate == doctest::Approx(2.5e9));
    if (row.format == "kk") CHECK(row.max_bit_rate == doctest::Approx(5e9));
  }
  CHECK_FALSE(cmp.reference_note.empty());

  const std::string budget = dac_budget_csv(cmp);
  CHECK(budget.find("pam4,2.5e+09,2,1.25e+09,2,2.5e+09") != std::string::npos);
  CHECK(budget.find("kk,2.5e+09,2,1.25e+09,4,5e+09") != std::string::npos);
}

TEST_CASE("experiment config JSON round trip") {
  ExperimentConfig cfg = small_kk_sweep();
  cfg.format = ModemFormat::cap16;
  cfg.cap.symbol_rate = 625e6;
  cfg.dump_constellations = true;
  const ExperimentConfig back = experiment_config_from_json(experiment_config_to_json(cfg));
  CHECK(back.format == ModemFormat::cap16);
  CHECK(back.cap.symbol_rate == cfg.cap.symbol_rate);
  CHECK(back.kk.amplitude_a == cfg.kk.amplitude_a);
  CHECK(back.channel.f3db_hz == cfg.channel.f3db_hz);
  CHECK(std::isinf(back.channel.osnr_db));
  CHECK(back.equalizer.training_symbols == cfg.equalizer.training_symbols);
  CHECK(back.frames == cfg.frames);
  CHECK(back.seed == cfg.seed);
  CHECK(back.axis == cfg.axis);
  CHECK(back.grid == cfg.grid);
  CHECK(back.dump_constellations);
}

TEST_CASE("invalid experiment configs are rejected") {
  ExperimentConfig cfg = small_kk_sweep();
  cfg.grid.clear();
  CHECK_THROWS_AS(run_sweep(cfg), std::invalid_argument);
  cfg = small_kk_sweep();
  cfg.frames = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK_THROWS_AS(sweep_axis_from_string("bogus"), std::invalid_argument);
  CHECK_THROWS_AS(modem_format_from_string("qam"), std::invalid_argument);

  CompareConfig cc;
  cc.power_grid.clear();
  CHECK_THROWS_AS(compare_formats(cc), std::invalid_argument);
}
