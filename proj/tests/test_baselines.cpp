#include "kklink/cap16.hpp"
#include "kklink/channel.hpp"
#include "kklink/kk_modem.hpp"
#include "kklink/pam4.hpp"
#include "kklink/pulse_shape.hpp"
#include "kklink/rng.hpp"

#include <doctest.h>

#include <unsupported/Eigen/FFT>

using namespace kklink;

TEST_CASE("pam4: constant 00 pattern yields the bottom level times the shaping gain") {
  PamConfig cfg;
  cfg.samples_per_symbol = 4;
  const Index n = 400;
  const RealWaveform w = pam4_modulate(std::vector<int>(2 * n, 0), cfg);

  // steady state: every polyphase branch of the zero-stuffed chain sums to
  // taps.sum()/sps (the pulse spectrum vanishes at the symbol-rate harmonics),
  // with a small truncation ripple on top
  const PulseShape p = rrc_taps(cfg.rolloff, cfg.span_symbols, cfg.samples_per_symbol);
  const double want = -3.0 * p.taps.sum() / (p.center_tap() * cfg.samples_per_symbol);
  const Index guard = (cfg.span_symbols + 1) * cfg.samples_per_symbol;
  for (Index k = guard; k < w.size() - guard; ++k) CHECK(w.samples[k] == doctest::Approx(want).epsilon(0.01));
}

TEST_CASE("pam4: noiseless wideband round trip is error free") {
  PamConfig cfg;
  cfg.samples_per_symbol = 2;
  const Index n = 10000;
  Rng rng(41);
  const auto bits = rng.bits(2 * n);
  const RealWaveform w = pam4_modulate(bits, cfg);

  const RealArray tx_symbols = gray_map_rail(bits, 4);
  const EqualizerConfig eq{10, 0, 1e-3, 400, 2};
  const PamDemodResult d = pam4_demodulate(w, cfg, eq, tx_symbols.head(400));

  const Index guard = std::max<Index>(cfg.span_symbols, 400);
  long long errors = 0;
  for (Index k = guard; k < n - cfg.span_symbols; ++k) {
    errors += d.bits[static_cast<std::size_t>(2 * k)] != bits[static_cast<std::size_t>(2 * k)];
    errors += d.bits[static_cast<std::size_t>(2 * k + 1)] != bits[static_cast<std::size_t>(2 * k + 1)];
  }
  CHECK(errors == 0);
}

TEST_CASE("pam4: input validation") {
  PamConfig cfg;
  CHECK_THROWS_AS(pam4_modulate({1, 0, 1}, cfg), std::invalid_argument);
  CHECK_THROWS_AS(pam4_modulate({}, cfg), std::invalid_argument);
}

TEST_CASE("cap filter pair: equal energy and symbol-lag orthogonality") {
  // well-resolved pulse; the shipped short pulse leaves a truncation floor
  CapConfig cfg;
  cfg.symbol_rate = 1e9;
  cfg.rolloff = 0.25;
  cfg.span_symbols = 48;
  cfg.samples_per_symbol = 8;
  const CapFilterPair f = cap_filters(cfg);

  CHECK(std::abs(std::sqrt(f.f_i.square().sum()) - std::sqrt(f.f_q.square().sum())) < 1e-6);

  const double peak = f.f_i.square().sum();
  for (int sps : {4, 8}) {
    CapConfig c2 = cfg;
    c2.samples_per_symbol = sps;
    if (sps == 4) c2.rolloff = 0.2;
    const CapFilterPair g = cap_filters(c2);
    const double gpeak = g.f_i.square().sum();
    double worst = 0.0;
    for (int lag = -c2.span_symbols + 1; lag < c2.span_symbols; ++lag) {
      const Index off = static_cast<Index>(lag) * c2.samples_per_symbol;
      double acc = 0.0;
      for (Index k = 0; k < g.f_i.size(); ++k) {
        const Index j = k + off;
        if (j >= 0 && j < g.f_q.size()) acc += g.f_i[k] * g.f_q[j];
      }
      worst = std::max(worst, std::abs(acc));
    }
    CHECK(worst / gpeak < 1e-3);
  }
  CHECK(peak > 0.0);
}

TEST_CASE("cap16: noiseless wideband round trip is error free at sps 4") {
  CapConfig cfg;
  cfg.symbol_rate = 625e6;
  cfg.samples_per_symbol = 4;
  const Index n = 10000;
  Rng rng(42);
  const auto bits = rng.bits(4 * n);
  const RealWaveform w = cap16_modulate(bits, cfg);

  const SymbolFrame tx = map_bits(bits, 4);
  const EqualizerConfig eq{10, 6, 1e-3, 400, 2};
  const SymbolFrame training{tx.i_symbols.head(400), tx.q_symbols.head(400), 4};
  const CapDemodResult d = cap16_demodulate(w, cfg, eq, training);

  const Index guard = std::max<Index>(cfg.span_symbols, 400);
  long long errors = 0;
  for (Index k = guard; k < n - cfg.span_symbols; ++k)
    for (int b = 0; b < 4; ++b)
      errors += d.bits[static_cast<std::size_t>(4 * k + b)] != bits[static_cast<std::size_t>(4 * k + b)];
  CHECK(errors == 0);
}

TEST_CASE("cap16: halving the oversampling ratio wrecks the quadrature rail") {
  const Index n = 4000;
  Rng rng(5);
  const auto bits = rng.bits(4 * n);
  const SymbolFrame tx = map_bits(bits, 4);

  auto q_rail_evm = [&](int sps) {
    CapConfig cfg;
    cfg.symbol_rate = 1.25e9;
    cfg.samples_per_symbol = sps;
    const RealWaveform w = cap16_modulate(bits, cfg);
    ChannelConfig ch;
    ch.f3db_hz = 1e9;
    const RealWaveform rx = apply_channel(w, ch);
    const EqualizerConfig eq{10, 6, 1e-3, 600, 2};
    const SymbolFrame training{tx.i_symbols.head(600), tx.q_symbols.head(600), 4};
    const CapDemodResult d = cap16_demodulate(rx, cfg, eq, training);
    const Index g = 600;
    return evm_percent_rail(d.soft.q_symbols.segment(g, n - g - cfg.span_symbols),
                            tx.q_symbols.segment(g, n - g - cfg.span_symbols));
  };

  const double evm_sps2 = q_rail_evm(2);
  const double evm_sps4 = q_rail_evm(4);
  MESSAGE("Q-rail EVM: sps=2 ", evm_sps2, "% vs sps=4 ", evm_sps4, "%");
  CHECK(evm_sps2 > 1.5 * evm_sps4);
}

TEST_CASE("cap16 and kk occupy the same passband") {
  const Index n = 4096;
  Rng rng(9);
  const auto bits = rng.bits(4 * n);

  KkConfig kc;
  kc.symbol_rate = 1e9;
  kc.samples_per_symbol = 8;
  const RealWaveform kk_wave = kk_modulate(map_bits(bits, 4), kc).waveform;

  CapConfig cc;
  cc.symbol_rate = 1e9;
  cc.samples_per_symbol = 8;
  const RealWaveform cap_wave = cap16_modulate(bits, cc);

  auto bw99 = [](const RealWaveform& w) {
    Eigen::FFT<double> fft;
    Eigen::VectorXcd spec;
    Eigen::VectorXd x = w.samples.matrix();
    fft.fwd(spec, x);
    const Index half = w.size() / 2;
    RealArray p(half);
    for (Index i = 0; i < half; ++i) p[i] = std::norm(spec[i]);
    const double total = p.sum();
    double acc = 0.0;
    for (Index i = 0; i < half; ++i) {
      acc += p[i];
      if (acc >= 0.99 * total) return static_cast<double>(i) / static_cast<double>(w.size()) * w.sample_rate;
    }
    return w.sample_rate / 2.0;
  };

  const double nominal = kc.symbol_rate * (1.0 + kc.rolloff);
  const double kk_bw = bw99(kk_wave), cap_bw = bw99(cap_wave);
  MESSAGE("99% bandwidth: kk ", kk_bw, " cap ", cap_bw, " nominal ", nominal);
  CHECK(std::abs(kk_bw - nominal) / nominal < 0.05);
  CHECK(std::abs(cap_bw - nominal) / nominal < 0.05);
  CHECK(std::abs(kk_bw - cap_bw) / nominal < 0.05);
}

TEST_CASE("cap16: input validation") {
  CapConfig cfg;
  CHECK_THROWS_AS(cap16_modulate({1, 0, 1}, cfg), std::invalid_argument);
  cfg.samples_per_symbol = 2;
  cfg.center_frequency = 0.7e9;  // above Nyquist at 625 MBd x 2
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
