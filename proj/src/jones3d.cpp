#include "pjones/jones3d.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "pjones/error.hpp"

namespace pjones {

namespace {

std::string format_direction(const Vec3& xi) {
  std::ostringstream os;
  os.precision(17);
  os << "direction (" << xi.x() << ", " << xi.y() << ", " << xi.z() << ")";
  return os.str();
}

LaurentPoly evaluate(const Diagram& d, const Vec3& xi, const BracketOptions& opt) {
  try {
    return jones_of_diagram(d, opt);
  } catch (const StateSumTooLarge& e) {
    throw StateSumTooLarge(e.crossings(), e.cap(), format_direction(xi));
  }
}

class DiagramCache {
 public:
  std::optional<LaurentPoly> find(const std::string& key) {
    std::lock_guard lock(mu_);
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }
  void insert(const std::string& key, const LaurentPoly& v) {
    std::lock_guard lock(mu_);
    map_.emplace(key, v);
  }

 private:
  std::mutex mu_;
  std::unordered_map<std::string, LaurentPoly> map_;
};

}  // namespace

Vec3 reference_direction() { return Vec3(0.2319, 0.4137, 0.8806).normalized(); }

LaurentPoly jones_single_direction(const CurveCollection& c, const Vec3& xi, double tol,
                                   const BracketOptions& opt) {
  return evaluate(project(c, xi, tol), xi, opt);
}

LaurentPoly jones(const CurveCollection& c, const SamplingConfig& cfg, JonesStats* stats) {
  if (cfg.directions < 1) throw Error("sampling: directions must be positive");
  JonesStats local;
  JonesStats& st = stats ? *stats : local;
  st = JonesStats{};
  if (c.empty()) {
    st.exact = true;
    return LaurentPoly::constant(1);
  }
  if (c.all_closed()) {
    const auto g = find_generic_direction(c, reference_direction(), cfg.tol);
    const Diagram d = project(c, g.xi, cfg.tol);
    st.exact = true;
    st.directions = 1;
    st.retries = g.retries;
    st.max_crossings = int(d.crossing_count());
    return evaluate(d, g.xi, cfg.bracket);
  }

  const std::vector<Vec3> dirs = sample_directions(cfg.directions, cfg.mode, cfg.seed);
  std::vector<LaurentPoly> values(dirs.size());
  std::vector<int> retries(dirs.size(), 0), crossings(dirs.size(), 0);
  std::vector<std::string> keys(dirs.size());
  DiagramCache cache;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= dirs.size()) return;
      try {
        const auto g = find_generic_direction(c, dirs[i], cfg.tol);
        const Diagram d = project(c, g.xi, cfg.tol);
        retries[i] = g.retries;
        crossings[i] = int(d.crossing_count());
        const std::string& key = keys[i] = canonical_key(d);
        if (auto v = cache.find(key)) {
          values[i] = *v;
        } else {
          values[i] = evaluate(d, g.xi, cfg.bracket);
          cache.insert(key, values[i]);
        }
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = dirs.size();
        return;
      }
    }
  };
  const int workers = std::max(1, std::min<int>(cfg.workers, int(dirs.size())));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Exact sum in direction order, then one division.
  LaurentPoly sum;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    sum += values[i];
    st.retries += retries[i];
    st.max_crossings = std::max(st.max_crossings, crossings[i]);
  }
  std::sort(keys.begin(), keys.end());
  const auto distinct = std::unique(keys.begin(), keys.end()) - keys.begin();
  st.cache_hits = int(dirs.size() - distinct);
  st.directions = int(dirs.size());
  return sum.scaled(Rational(1, int(dirs.size()))).to_float();
}

}  // namespace pjones
