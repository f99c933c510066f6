#include "combworks/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "combworks/rng.hpp"

namespace combworks {

namespace {

struct SimplexPoint {
  Eigen::VectorXd x;
  double f;
};

// Standard Nelder-Mead on -f (we maximize). Returns best point found.
RestartOutcome nelder_mead(const Objective& f, const Eigen::VectorXd& x0,
                           const OptimizerConfig& cfg, int index, bool from_seed) {
  const int n = static_cast<int>(x0.size());
  auto eval = [&](const Eigen::VectorXd& x) {
    const double v = f(x);
    return std::isfinite(v) ? v : -1e300;
  };

  std::vector<SimplexPoint> s;
  s.reserve(n + 1);
  s.push_back({x0, eval(x0)});
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd xi = x0;
    xi(i) += cfg.step;
    s.push_back({xi, eval(xi)});
  }
  auto by_value_desc = [](const SimplexPoint& a, const SimplexPoint& b) { return a.f > b.f; };

  bool converged = false;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    std::sort(s.begin(), s.end(), by_value_desc);
    if (std::abs(s.front().f - s.back().f) < cfg.tol) {
      converged = true;
      break;
    }
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) centroid += s[i].x;
    centroid /= n;
    SimplexPoint& worst = s.back();

    const Eigen::VectorXd xr = centroid + (centroid - worst.x);
    const double fr = eval(xr);
    if (fr > s[0].f) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - worst.x);
      const double fe = eval(xe);
      if (fe > fr)
        worst = {xe, fe};
      else
        worst = {xr, fr};
      continue;
    }
    if (fr > s[n - 1].f) {
      worst = {xr, fr};
      continue;
    }
    const Eigen::VectorXd xc = centroid + 0.5 * (worst.x - centroid);
    const double fc = eval(xc);
    if (fc > worst.f) {
      worst = {xc, fc};
      continue;
    }
    for (int i = 1; i <= n; ++i) {
      s[i].x = s[0].x + 0.5 * (s[i].x - s[0].x);
      s[i].f = eval(s[i].x);
    }
  }
  std::sort(s.begin(), s.end(), by_value_desc);
  return RestartOutcome{s.front().x, s.front().f, index, converged, from_seed};
}

}  // namespace

int effective_thread_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("COMBWORKS_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && cap < static_cast<long>(hw)) hw = static_cast<unsigned>(cap);
  }
  return static_cast<int>(hw);
}

void parallel_for_index(int count, const std::function<void(int)>& fn) {
  const int workers = std::min(effective_thread_count(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : pool) t.join();
}

SearchOutcome maximize_multistart(const Objective& f, int dim, const OptimizerConfig& config,
                                  const std::vector<Eigen::VectorXd>& seeds) {
  const int restarts = std::max(config.restarts, static_cast<int>(seeds.size()));

  // Pre-draw every starting point so the stream is independent of scheduling
  // and a longer run extends (never reshuffles) a shorter one.
  std::vector<Eigen::VectorXd> starts;
  starts.reserve(restarts);
  for (const auto& s : seeds) starts.push_back(s);
  Rng rng(config.seed);
  while (static_cast<int>(starts.size()) < restarts) {
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x(i) = rng.gaussian();
    starts.push_back(x);
  }

  std::vector<RestartOutcome> results(restarts);
  parallel_for_index(restarts, [&](int i) {
    const bool from_seed = i < static_cast<int>(seeds.size());
    results[i] = nelder_mead(f, starts[i], config, i, from_seed);
    if (from_seed) {
      // A seed is also an exact candidate: never let local search lose it,
      // and keep the seed point itself on flat landscapes.
      const double fv = f(starts[i]);
      if (std::isfinite(fv) && fv >= results[i].value) {
        results[i].value = fv;
        results[i].x = starts[i];
      }
    }
  });

  SearchOutcome out;
  out.all = results;
  out.restarts_used = restarts;
  int best = 0;
  for (int i = 1; i < restarts; ++i)
    if (results[i].value > results[best].value) best = i;
  out.best = results[best];
  out.converged = results[best].converged;
  return out;
}

}  // namespace combworks
