#include "kklink/equalizer.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kklink {

void EqualizerConfig::validate() const {
  if (main_taps < 1) throw std::invalid_argument("EqualizerConfig: main_taps must be >= 1");
  if (cross_taps < 0) throw std::invalid_argument("EqualizerConfig: cross_taps must be >= 0");
  if (!(step_size > 0.0 && step_size < 1.0)) throw std::invalid_argument("EqualizerConfig: step_size must be in (0, 1)");
  if (training_symbols < 0) throw std::invalid_argument("EqualizerConfig: training_symbols must be >= 0");
  if (passes < 1) throw std::invalid_argument("EqualizerConfig: passes must be >= 1");
}

EqualizerState make_center_spike_state(const EqualizerConfig& cfg) {
  cfg.validate();
  EqualizerState s;
  s.w_i = RealArray::Zero(cfg.main_taps);
  s.w_q = RealArray::Zero(cfg.main_taps);
  s.w_i[cfg.decision_delay()] = 1.0;
  s.w_q[cfg.decision_delay()] = 1.0;
  s.w_iq = RealArray::Zero(cfg.cross_taps);
  s.w_qi = RealArray::Zero(cfg.cross_taps);
  s.config = cfg;
  return s;
}

namespace {

// sum_{k=0}^{len(w)-1} x[n-base-k] w[k] with zero history before x[0]
inline double dot_causal(const RealArray& x, const RealArray& w, Index n, Index base = 0) {
  double acc = 0.0;
  for (Index k = 0; k < w.size(); ++k) {
    const Index j = n - base - k;
    if (j < 0) break;
    acc += x[j] * w[k];
  }
  return acc;
}

void check_state(const EqualizerState& state) {
  if (state.w_i.size() != state.config.main_taps || state.w_q.size() != state.config.main_taps ||
      state.w_iq.size() != state.config.cross_taps || state.w_qi.size() != state.config.cross_taps)
    throw std::invalid_argument("equalizer: tap vector lengths do not match config");
}

}  // namespace

EqualizedPair equalize(const RealArray& x_i, const RealArray& x_q, const EqualizerState& state) {
  check_state(state);
  const Index n = x_i.size();
  if (x_q.size() != n) throw std::invalid_argument("equalize: rail length mismatch");
  if (n < state.config.main_taps) throw std::invalid_argument("equalize: input shorter than main filter");

  const Index dc = state.config.cross_delay();
  EqualizedPair out;
  out.r_i = RealArray(n);
  out.r_q = RealArray(n);
  out.warm_up =
      std::max<Index>(state.config.main_taps, state.config.cross_taps > 0 ? dc + state.config.cross_taps : 1) - 1;
  for (Index k = 0; k < n; ++k) {
    out.r_i[k] = dot_causal(x_i, state.w_i, k) + dot_causal(x_q, state.w_iq, k, dc);
    out.r_q[k] = dot_causal(x_q, state.w_q, k) + dot_causal(x_i, state.w_qi, k, dc);
  }
  return out;
}

EqualizedPair equalize_aligned(const RealArray& x_i, const RealArray& x_q, const EqualizerState& state) {
  check_state(state);
  const Index n = x_i.size();
  const Index d = state.config.decision_delay();
  RealArray xi_ext = RealArray::Zero(n + d);
  RealArray xq_ext = RealArray::Zero(n + d);
  xi_ext.head(n) = x_i;
  xq_ext.head(n) = x_q;
  EqualizedPair raw = equalize(xi_ext, xq_ext, state);
  EqualizedPair out;
  out.r_i = raw.r_i.tail(n);
  out.r_q = raw.r_q.tail(n);
  out.warm_up = std::max<Index>(0, raw.warm_up - d);
  return out;
}

EqualizerState train_lms(const RealArray& x_i, const RealArray& x_q, const RealArray& ref_i,
                         const RealArray& ref_q, const EqualizerConfig& cfg) {
  cfg.validate();
  const Index n = x_i.size();
  if (x_q.size() != n || ref_i.size() != n || ref_q.size() != n)
    throw std::invalid_argument("train_lms: sequence length mismatch");
  if (n < cfg.main_taps) throw std::invalid_argument("train_lms: input shorter than main filter");

  EqualizerState state = make_center_spike_state(cfg);
  const Index d = cfg.decision_delay();
  const Index train_end = std::min<Index>(n, d + cfg.training_symbols);
  if (train_end <= d) {
    state.converged_mse = 0.0;
    return state;  // nothing to train on; center spike passes through
  }

  const double mu = cfg.step_size;
  const Index dc = cfg.cross_delay();
  double first_epoch_mse = 0.0;
  for (int pass = 0; pass < cfg.passes; ++pass) {
    double sq = 0.0;
    for (Index k = d; k < train_end; ++k) {
      const double r_i = dot_causal(x_i, state.w_i, k) + dot_causal(x_q, state.w_iq, k, dc);
      const double r_q = dot_causal(x_q, state.w_q, k) + dot_causal(x_i, state.w_qi, k, dc);
      const double e_i = ref_i[k - d] - r_i;
      const double e_q = ref_q[k - d] - r_q;
      sq += 0.5 * (e_i * e_i + e_q * e_q);

      const Index m_max = std::min<Index>(cfg.main_taps - 1, k);
      for (Index m = 0; m <= m_max; ++m) {
        state.w_i[m] += mu * e_i * x_i[k - m];
        state.w_q[m] += mu * e_q * x_q[k - m];
      }
      const Index l_max = std::min<Index>(cfg.cross_taps - 1, k - dc);
      for (Index l = 0; l <= l_max; ++l) {
        state.w_iq[l] += mu * e_i * x_q[k - dc - l];
        state.w_qi[l] += mu * e_q * x_i[k - dc - l];
      }
    }
    const double mse = sq / static_cast<double>(train_end - d);
    if (pass == 0) first_epoch_mse = mse;
    if (!std::isfinite(mse) || (first_epoch_mse > 0.0 && mse > 10.0 * first_epoch_mse))
      throw std::runtime_error("train_lms: diverged (epoch MSE above 10x initial)");
    state.converged_mse = mse;
  }
  return state;
}

std::string equalizer_state_to_json(const EqualizerState& state) {
  check_state(state);
  nlohmann::ordered_json j;
  j["main_taps"] = state.config.main_taps;
  j["cross_taps"] = state.config.cross_taps;
  j["step_size"] = state.config.step_size;
  j["training_symbols"] = state.config.training_symbols;
  j["passes"] = state.config.passes;
  auto dump = [](const RealArray& w) {
    std::vector<double> v(w.data(), w.data() + w.size());
    return v;
  };
  j["w_i"] = dump(state.w_i);
  j["w_iq"] = dump(state.w_iq);
  j["w_q"] = dump(state.w_q);
  j["w_qi"] = dump(state.w_qi);
  j["converged_mse"] = state.converged_mse;
  return j.dump(2);
}

EqualizerState equalizer_state_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  EqualizerState s;
  s.config.main_taps = j.at("main_taps").get<int>();
  s.config.cross_taps = j.at("cross_taps").get<int>();
  s.config.step_size = j.at("step_size").get<double>();
  s.config.training_symbols = j.at("training_symbols").get<Index>();
  s.config.passes = j.at("passes").get<int>();
  auto load = [&](const char* key) {
    const auto v = j.at(key).get<std::vector<double>>();
    return Eigen::Map<const RealArray>(v.data(), static_cast<Index>(v.size())).eval();
  };
  s.w_i = load("w_i");
  s.w_iq = load("w_iq");
  s.w_q = load("w_q");
  s.w_qi = load("w_qi");
  s.converged_mse = j.at("converged_mse").get<double>();
  check_state(s);
  return s;
}

}  // namespace kklink
