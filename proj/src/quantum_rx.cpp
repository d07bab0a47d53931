#include "risread/quantum_rx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace risread {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Interference bracket via the dot product; exactly zero for lo == symbol at
// visibility 1 (see optics.cpp).
double bracket(double abs2_sym, double re_sym, double im_sym,
               std::complex<double> lo, double visibility, double abs2_lo) {
  const double dot = re_sym * lo.real() + im_sym * lo.imag();
  return std::max(0.0, abs2_sym + abs2_lo - 2.0 * visibility * dot);
}

// Normalize log weights in place; returns false when all weights vanish.
bool log_normalize(std::vector<double>& lw) {
  double mx = kNegInf;
  for (double v : lw) mx = std::max(mx, v);
  if (mx == kNegInf) return false;
  double sum = 0;
  for (double v : lw) sum += std::exp(v - mx);
  const double lse = mx + std::log(sum);
  for (double& v : lw) v -= lse;
  return true;
}

std::vector<double> to_linear(const std::vector<double>& lw) {
  std::vector<double> p(lw.size());
  double sum = 0;
  for (size_t i = 0; i < lw.size(); ++i) {
    p[i] = std::exp(lw[i]);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

size_t argmax(const std::vector<double>& v) {
  size_t best = 0;
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

struct SymbolTable {
  std::vector<double> abs2, re, im;
  explicit SymbolTable(const Constellation& c) {
    const size_t m = c.symbols.size();
    abs2.resize(m);
    re.resize(m);
    im.resize(m);
    for (size_t i = 0; i < m; ++i) {
      re[i] = c.symbols[i].real();
      im[i] = c.symbols[i].imag();
      abs2[i] = re[i] * re[i] + im[i] * im[i];
    }
  }
};

void validate(const Constellation& c, const std::vector<ModeSpec>& modes,
              const ReceiverParams& params, size_t stream_count) {
  if (c.symbols.empty()) throw std::invalid_argument("empty constellation");
  if (modes.empty()) throw std::invalid_argument("no modes");
  if (modes.size() != stream_count)
    throw std::invalid_argument("one detector stream per mode required");
  if (params.symbol_duration <= 0)
    throw std::invalid_argument("symbol duration must be positive");
  if (params.visibility < 0 || params.visibility > 1)
    throw std::invalid_argument("visibility must lie in [0,1]");
  if (params.max_steps < 1)
    throw std::invalid_argument("max_steps must be at least 1");
  if (params.feedback_delay < 0)
    throw std::invalid_argument("feedback delay must be nonnegative");
  if (params.accel_threshold <= 0 || params.accel_threshold > 1)
    throw std::invalid_argument("accel threshold must lie in (0,1]");
  for (const auto& m : modes)
    if (m.efficiency <= 0 || m.efficiency > 1)
      throw std::invalid_argument("efficiency must lie in (0,1]");
}

}  // namespace

std::optional<double> sample_first_click(double rate, double window,
                                         rng::Stream& stream) {
  if (window < 0) throw std::invalid_argument("window must be nonnegative");
  if (rate < 0) throw std::invalid_argument("rate must be nonnegative");
  if (rate == 0) return std::nullopt;
  const double tau = stream.exponential(rate);
  if (tau <= window) return tau;
  return std::nullopt;
}

double click_likelihood(std::complex<double> candidate,
                        std::complex<double> lo, const ModeSpec& mode,
                        const DetectionEvent& event,
                        const ReceiverParams& params) {
  const double rate = displaced_rate(candidate, lo, params.visibility,
                                     mode.efficiency, params.symbol_duration);
  if (event.clicked) {
    if (rate <= 0) return 0.0;
    return rate * std::exp(-rate * event.click_time);
  }
  return std::exp(-rate * event.window);
}

std::vector<double> posterior_update(const std::vector<double>& prior,
                                     const std::vector<double>& likelihoods) {
  if (prior.size() != likelihoods.size() || prior.empty())
    throw std::invalid_argument("prior/likelihood size mismatch");
  std::vector<double> lw(prior.size());
  for (size_t i = 0; i < prior.size(); ++i) {
    if (prior[i] < 0 || likelihoods[i] < 0)
      throw std::invalid_argument("negative prior or likelihood");
    lw[i] = std::log(prior[i]) + std::log(likelihoods[i]);
  }
  if (!log_normalize(lw))
    throw degenerate_evidence_error(
        "all hypotheses have zero posterior weight");
  return to_linear(lw);
}

LoChoice select_lo(const std::vector<std::vector<double>>& per_mode,
                   const Constellation& c) {
  if (per_mode.empty()) throw std::invalid_argument("no per-mode posteriors");
  size_t best_mode = 0;
  size_t best_symbol = argmax(per_mode[0]);
  for (size_t s = 1; s < per_mode.size(); ++s) {
    const size_t m = argmax(per_mode[s]);
    if (per_mode[s][m] > per_mode[best_mode][best_symbol]) {
      best_mode = s;
      best_symbol = m;
    }
  }
  LoChoice out;
  out.symbol_index = static_cast<int>(best_symbol);
  out.mode_index = static_cast<int>(best_mode);
  out.lo = c.symbols.at(best_symbol);
  out.retained = per_mode[best_mode];
  return out;
}

TrialRecord run_symbol(int true_index, const Constellation& c,
                       const std::vector<ModeSpec>& modes,
                       const ReceiverParams& params,
                       std::span<rng::Stream> mode_streams,
                       bool keep_trajectory) {
  validate(c, modes, params, mode_streams.size());
  const int m_count = static_cast<int>(c.symbols.size());
  if (true_index < 0 || true_index >= m_count)
    throw std::invalid_argument("true symbol index out of range");

  const int s_count = static_cast<int>(modes.size());
  const double t_total = params.symbol_duration;
  const double tau_bar = params.resolved_time_bin();
  const double vis = params.visibility;
  const SymbolTable table(c);

  // Log-domain per-mode posteriors and the retained prior.
  const double log_uniform = -std::log(static_cast<double>(m_count));
  std::vector<double> retained_log(m_count, log_uniform);
  std::vector<std::vector<double>> mode_log(
      s_count, std::vector<double>(m_count, log_uniform));

  int lo_index = 0;  // uniform prior: lowest-index tie-break
  std::complex<double> lo = c.symbols[0];

  std::vector<double> tau(s_count);
  std::vector<char> hit(s_count);
  std::vector<double> brk(m_count);

  TrialRecord rec;
  rec.true_index = true_index;

  double t = 0;
  int step = 0;
  // The loop tolerates one ulp of accumulated drift at the end of the slot.
  const double t_end = t_total * (1.0 - 1e-12);
  while (t < t_end && step < params.max_steps) {
    const bool accel = t > params.accel_threshold * t_total;
    const double window = std::min(tau_bar, t_total - t);

    // True first-click time per mode under the current displacement.
    const double true_brk =
        bracket(table.abs2[true_index], table.re[true_index],
                table.im[true_index], lo, vis,
                lo.real() * lo.real() + lo.imag() * lo.imag());
    bool any = false;
    for (int s = 0; s < s_count; ++s) {
      const double rate = modes[s].efficiency / t_total * true_brk;
      const auto click = sample_first_click(rate, window, mode_streams[s]);
      hit[s] = click.has_value();
      tau[s] = click.value_or(0.0);
      any = any || hit[s];
    }

    // Observation span of this shot: latest click in normal operation,
    // earliest click once the accelerated tail is active, else the window.
    double span = window;
    if (any) {
      span = accel ? std::numeric_limits<double>::infinity() : 0.0;
      for (int s = 0; s < s_count; ++s)
        if (hit[s]) span = accel ? std::min(span, tau[s]) : std::max(span, tau[s]);
      if (accel)
        for (int s = 0; s < s_count; ++s)
          if (hit[s] && tau[s] > span) hit[s] = 0;  // first photon only
    }

    const double abs2_lo = lo.real() * lo.real() + lo.imag() * lo.imag();
    for (int m = 0; m < m_count; ++m)
      brk[m] = bracket(table.abs2[m], table.re[m], table.im[m], lo, vis, abs2_lo);

    int clicks_this_shot = 0;
    for (int s = 0; s < s_count; ++s) {
      const double scale = modes[s].efficiency / t_total;
      auto& lw = mode_log[s];
      if (hit[s]) {
        ++clicks_this_shot;
        ++rec.total_clicks;
        if (keep_trajectory)
          rec.clicks.push_back({step, modes[s].mode_index, tau[s]});
        for (int m = 0; m < m_count; ++m) {
          const double rate = scale * brk[m];
          lw[m] = rate > 0 ? retained_log[m] + std::log(rate) - rate * tau[s]
                           : kNegInf;
        }
      } else {
        for (int m = 0; m < m_count; ++m)
          lw[m] = retained_log[m] - scale * brk[m] * span;
      }
      rec.likelihood_evals += m_count;
      if (!log_normalize(lw))
        throw degenerate_evidence_error(
            "all hypotheses have zero posterior weight");
    }

    // MAP symbol within each mode, then the best mode across them.
    int best_mode = 0;
    int best_symbol = 0;
    for (int s = 0; s < s_count; ++s) {
      int m_best = 0;
      for (int m = 1; m < m_count; ++m)
        if (mode_log[s][m] > mode_log[s][m_best]) m_best = m;
      if (s == 0 || mode_log[s][m_best] > mode_log[best_mode][best_symbol]) {
        best_mode = s;
        best_symbol = m_best;
      }
    }
    lo_index = best_symbol;
    lo = c.symbols[lo_index];

    if (params.retention == Retention::WholePosterior) {
      retained_log = mode_log[best_mode];
    } else {
      for (int m = 0; m < m_count; ++m) {
        double mx = mode_log[0][m];
        for (int s = 1; s < s_count; ++s) mx = std::max(mx, mode_log[s][m]);
        retained_log[m] = mx;
      }
      log_normalize(retained_log);
    }

    t += span + params.feedback_delay;
    ++step;

    if (keep_trajectory) {
      StepLog log;
      log.t = std::min(t, t_total);
      log.lo_index = lo_index;
      double best = retained_log[0];
      for (int m = 1; m < m_count; ++m) best = std::max(best, retained_log[m]);
      log.max_pr = std::exp(best);
      log.true_pr = std::exp(retained_log[true_index]);
      log.deviation = deviation_metric(c.symbols[true_index], lo, vis, s_count,
                                       t_total);
      log.shot_elapsed = span + params.feedback_delay;
      log.clicks = clicks_this_shot;
      rec.steps.push_back(log);
    }
  }

  rec.steps_used = step;
  rec.decision = static_cast<int>(argmax(retained_log));
  rec.correct = rec.decision == true_index;
  rec.final_posterior = to_linear(retained_log);
  return rec;
}

double log_bin_probability(double rate, int bin, int bins, double window) {
  if (bins < 1 || window <= 0 || bin < 0 || bin > bins)
    throw std::invalid_argument("bad bin spec");
  if (rate < 0) throw std::invalid_argument("rate must be nonnegative");
  if (bin == 0) return -rate * window;  // survived the whole window
  if (rate == 0) return kNegInf;
  const double h = window / bins;
  // exp(-rate (bin-1) h) - exp(-rate bin h), in log form
  return -rate * (bin - 1) * h + std::log(-std::expm1(-rate * h));
}

ScheduledResult run_symbol_scheduled(int true_index, const Constellation& c,
                                     const ModeSpec& mode,
                                     const FixedSchedule& schedule,
                                     double visibility, double symbol_duration,
                                     rng::Stream& stream) {
  if (schedule.window <= 0)
    throw std::invalid_argument("window must be positive");
  const int m_count = static_cast<int>(c.symbols.size());
  if (true_index < 0 || true_index >= m_count)
    throw std::invalid_argument("true symbol index out of range");

  const double w = schedule.window;
  const int bins = schedule.quantize_bins;
  std::vector<double> lw(m_count, -std::log(static_cast<double>(m_count)));

  ScheduledResult out;
  out.outcomes.reserve(schedule.lo_indices.size());
  for (int lo_idx : schedule.lo_indices) {
    const std::complex<double> lo = c.symbols.at(lo_idx);
    const double true_rate = displaced_rate(c.symbols[true_index], lo,
                                            visibility, mode.efficiency,
                                            symbol_duration);
    const auto click = sample_first_click(true_rate, w, stream);

    int outcome = 0;
    if (click) {
      outcome = bins > 0
                    ? std::min(bins, static_cast<int>(std::ceil(*click * bins / w)))
                    : -1;
    }
    out.outcomes.push_back(outcome);

    for (int m = 0; m < m_count; ++m) {
      const double rate = displaced_rate(c.symbols[m], lo, visibility,
                                         mode.efficiency, symbol_duration);
      double ll;
      if (!click) {
        ll = -rate * w;
      } else if (bins > 0) {
        ll = log_bin_probability(rate, outcome, bins, w);
      } else {
        ll = rate > 0 ? std::log(rate) - rate * *click : kNegInf;
      }
      lw[m] += ll;
    }
    if (!log_normalize(lw))
      throw degenerate_evidence_error(
          "all hypotheses have zero posterior weight");
  }
  out.posterior = to_linear(lw);
  return out;
}

}  // namespace risread
