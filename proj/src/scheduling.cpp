#include "pbsi/scheduling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pbsi {

double weighted_update_gain(const SensorSnapshot& snap) {
  // With an empty inferred level the battery has been charging since the
  // level was last pinned: d slots when a failure pinned it, otherwise the
  // full age of the report (aoibl).  Using the raw failure age alone would
  // leave never-commanded sensors at zero gain forever and starve them once
  // the update budget is scarce.
  const double window = aoibl(snap.aocsi, snap.aofbl);
  const double delivery =
      snap.b_hat > 0 ? 1.0 : 1.0 - std::pow(1.0 - snap.p1, window);
  const double aged = static_cast<double>(
      std::min(snap.aocsi + 1, static_cast<long long>(snap.max_aocsi)));
  return snap.weight * snap.xi * delivery * (aged - 1.0);
}

namespace {

std::vector<std::int32_t> top_by_key(const std::vector<std::int32_t>& candidates,
                                     const std::vector<double>& keys, int budget) {
  std::vector<std::int32_t> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = static_cast<std::int32_t>(i);
  std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
    if (keys[static_cast<std::size_t>(a)] != keys[static_cast<std::size_t>(b)])
      return keys[static_cast<std::size_t>(a)] > keys[static_cast<std::size_t>(b)];
    return candidates[static_cast<std::size_t>(a)] < candidates[static_cast<std::size_t>(b)];
  });
  std::vector<std::int32_t> out;
  out.reserve(static_cast<std::size_t>(budget));
  for (int i = 0; i < budget; ++i)
    out.push_back(candidates[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<std::int32_t> wugc_select(const std::vector<SensorSnapshot>& snaps,
                                      const std::vector<std::int8_t>& cn_decisions,
                                      int budget) {
  if (cn_decisions.size() != snaps.size())
    throw std::invalid_argument("one CN decision per sensor is required");
  std::vector<std::int32_t> candidates;
  std::vector<double> gains;
  for (std::size_t k = 0; k < snaps.size(); ++k)
    if (snaps[k].request && cn_decisions[k]) {
      candidates.push_back(snaps[k].id);
      gains.push_back(weighted_update_gain(snaps[k]));
    }
  if (static_cast<int>(candidates.size()) <= budget) return candidates;
  return top_by_key(candidates, gains, budget);
}

std::vector<std::int32_t> maf_select(const std::vector<SensorSnapshot>& snaps,
                                     int budget) {
  std::vector<std::int32_t> candidates;
  std::vector<double> ages;
  for (const SensorSnapshot& s : snaps)
    if (s.request) {
      candidates.push_back(s.id);
      ages.push_back(static_cast<double>(
          std::min(s.aocsi, static_cast<long long>(s.max_aocsi))));
    }
  if (static_cast<int>(candidates.size()) <= budget) return candidates;
  return top_by_key(candidates, ages, budget);
}

std::vector<std::int32_t> random_cn_select(const std::vector<SensorSnapshot>& snaps,
                                           const std::vector<std::int8_t>& cn_decisions,
                                           int budget, RngStream& rng) {
  if (cn_decisions.size() != snaps.size())
    throw std::invalid_argument("one CN decision per sensor is required");
  std::vector<std::int32_t> candidates;
  for (std::size_t k = 0; k < snaps.size(); ++k)
    if (snaps[k].request && cn_decisions[k]) candidates.push_back(snaps[k].id);
  if (static_cast<int>(candidates.size()) <= budget) return candidates;
  for (int i = 0; i < budget; ++i) {
    const std::size_t j =
        static_cast<std::size_t>(i) +
        static_cast<std::size_t>(rng.below(candidates.size() - static_cast<std::size_t>(i)));
    std::swap(candidates[static_cast<std::size_t>(i)], candidates[j]);
  }
  candidates.resize(static_cast<std::size_t>(budget));
  std::sort(candidates.begin(), candidates.end());
  return candidates;
}

OftSearchResult oft_search(const SensorParams& params, std::uint64_t seed,
                           long long eval_slots, RviBackend backend, int threads) {
  params.validate();
  if (eval_slots < 1) throw std::invalid_argument("eval_slots must be positive");
  const int B = params.battery_capacity;
  const int A = params.max_aocsi;
  const std::size_t T = static_cast<std::size_t>(eval_slots);

  // Common random numbers: one shared draw sequence scores every pair.
  std::vector<std::uint8_t> req(T), chan(T);
  std::vector<std::int16_t> energy(T);
  {
    RngStream rq(derive_substream(seed, 0, 0, StreamKind::Request));
    RngStream rc(derive_substream(seed, 0, 0, StreamKind::Channel));
    RngStream re(derive_substream(seed, 0, 0, StreamKind::Energy));
    for (std::size_t t = 0; t < T; ++t) {
      req[t] = static_cast<std::uint8_t>(rq.bernoulli(params.request_prob));
      chan[t] = static_cast<std::uint8_t>(rc.bernoulli(params.channel_success));
      energy[t] = static_cast<std::int16_t>(sample_energy(params.energy, re));
    }
  }

  const int range = A + 1;  // thresholds 1 .. A, plus A + 1 = never
  OftSearchResult res;
  res.threshold_range = range;
  res.cost_table.assign(static_cast<std::size_t>(range) * range, 0.0);

  auto evaluate = [&](int thr_req, int thr_idle) {
    double cost = 0.0;
    int battery = 0;
    int age = 1;  // clamped at A; thresholds above A then never fire
    for (std::size_t t = 0; t < T; ++t) {
      const int r = req[t];
      const int thr = r ? thr_req : thr_idle;
      const int m = age >= thr && battery >= 1 ? 1 : 0;
      const int h = m && chan[t] ? 1 : 0;
      const int age_next = h ? 1 : std::min(age + 1, A);
      cost += params.weight * static_cast<double>(r * age_next);
      battery = std::min(battery - m + energy[t], B);
      age = age_next;
    }
    return cost / static_cast<double>(eval_slots);
  };

  const long long pairs = static_cast<long long>(range) * range;
  if (backend == RviBackend::Serial) {
    for (long long p = 0; p < pairs; ++p)
      res.cost_table[static_cast<std::size_t>(p)] =
          evaluate(1 + static_cast<int>(p / range), 1 + static_cast<int>(p % range));
  } else {
#ifdef _OPENMP
    if (threads > 0) {
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
      for (long long p = 0; p < pairs; ++p)
        res.cost_table[static_cast<std::size_t>(p)] = evaluate(
            1 + static_cast<int>(p / range), 1 + static_cast<int>(p % range));
    } else {
#pragma omp parallel for schedule(dynamic, 8)
      for (long long p = 0; p < pairs; ++p)
        res.cost_table[static_cast<std::size_t>(p)] = evaluate(
            1 + static_cast<int>(p / range), 1 + static_cast<int>(p % range));
    }
#else
    (void)threads;
    for (long long p = 0; p < pairs; ++p)
      res.cost_table[static_cast<std::size_t>(p)] =
          evaluate(1 + static_cast<int>(p / range), 1 + static_cast<int>(p % range));
#endif
  }

  // Deterministic argmin: lexicographically first strictly-best pair.
  std::size_t best = 0;
  for (std::size_t p = 1; p < res.cost_table.size(); ++p)
    if (res.cost_table[p] < res.cost_table[best]) best = p;
  res.best.with_request = 1 + static_cast<int>(best / static_cast<std::size_t>(range));
  res.best.without_request = 1 + static_cast<int>(best % static_cast<std::size_t>(range));
  res.best_cost = res.cost_table[best];
  return res;
}

}  // namespace pbsi
