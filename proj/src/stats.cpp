#include "rulediff/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace rulediff {
namespace stats {

namespace {

constexpr double kEps = 1e-15;
constexpr int kMaxIterations = 500;

// series expansion of P(a, x), converges fast for x < a + 1
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double term = sum;
  for (int i = 0; i < kMaxIterations; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// continued fraction for Q(a, x), converges fast for x >= a + 1
double gamma_q_fraction(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIterations; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) return 1.0;
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double chi_squared_sf(double x, int dof) {
  if (x <= 0.0) return 1.0;
  return gamma_q(static_cast<double>(dof) / 2.0, x / 2.0);
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

namespace {

struct RankedData {
  std::vector<std::vector<double>> ranks;  // per group, mid-ranks
  double n_total = 0.0;
  double tie_sum = 0.0;  // sum of t^3 - t over tie groups
};

RankedData rank_groups(const std::vector<SampleGroup>& groups) {
  struct Tagged {
    double value;
    std::size_t group;
  };
  std::vector<Tagged> all;
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (double v : groups[g].values) all.push_back({v, g});
  std::stable_sort(all.begin(), all.end(),
                   [](const Tagged& a, const Tagged& b) { return a.value < b.value; });

  RankedData out;
  out.ranks.resize(groups.size());
  out.n_total = static_cast<double>(all.size());

  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    while (j < all.size() && all[j].value == all[i].value) ++j;
    double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    double ties = static_cast<double>(j - i);
    if (ties > 1.0) out.tie_sum += ties * ties * ties - ties;
    for (std::size_t k = i; k < j; ++k)
      out.ranks[all[k].group].push_back(mid_rank);
    i = j;
  }
  return out;
}

void require_groups(const std::vector<SampleGroup>& groups) {
  if (groups.size() < 2)
    throw ConfigError("statistical comparison needs at least two groups");
  for (const auto& g : groups)
    if (g.values.empty())
      throw ConfigError("group '" + g.label + "' has no observations");
}

}  // namespace

KruskalResult kruskal_wallis(const std::vector<SampleGroup>& groups) {
  require_groups(groups);
  RankedData ranked = rank_groups(groups);
  double n = ranked.n_total;

  double correction = 1.0 - ranked.tie_sum / (n * n * n - n);
  if (correction <= 0.0) return {0.0, 1.0};  // all observations identical

  double sum = 0.0;
  for (const auto& group_ranks : ranked.ranks) {
    double rank_sum = std::accumulate(group_ranks.begin(), group_ranks.end(), 0.0);
    sum += rank_sum * rank_sum / static_cast<double>(group_ranks.size());
  }
  double h = (12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0)) / correction;
  if (h < 0.0) h = 0.0;
  int dof = static_cast<int>(groups.size()) - 1;
  return {h, chi_squared_sf(h, dof)};
}

std::vector<double> benjamini_yekutieli(const std::vector<double>& raw_p) {
  std::size_t m = raw_p.size();
  if (m == 0) return {};
  double c = 0.0;
  for (std::size_t i = 1; i <= m; ++i) c += 1.0 / static_cast<double>(i);

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return raw_p[a] < raw_p[b]; });

  std::vector<double> adjusted(m);
  double running_min = 1.0;
  for (std::size_t k = m; k-- > 0;) {
    double rank = static_cast<double>(k + 1);
    double candidate = raw_p[order[k]] * static_cast<double>(m) * c / rank;
    running_min = std::min(running_min, candidate);
    adjusted[order[k]] = std::min(1.0, running_min);
  }
  return adjusted;
}

std::vector<PairwiseComparison> dunn_posthoc(const std::vector<SampleGroup>& groups) {
  require_groups(groups);
  RankedData ranked = rank_groups(groups);
  double n = ranked.n_total;

  std::vector<double> mean_rank(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    double sum = std::accumulate(ranked.ranks[g].begin(), ranked.ranks[g].end(), 0.0);
    mean_rank[g] = sum / static_cast<double>(ranked.ranks[g].size());
  }

  double base_variance =
      n * (n + 1.0) / 12.0 - ranked.tie_sum / (12.0 * (n - 1.0));

  std::vector<PairwiseComparison> pairs;
  std::vector<double> raw_p;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (std::size_t j = i + 1; j < groups.size(); ++j) {
      PairwiseComparison pair;
      pair.group1 = groups[i].label;
      pair.group2 = groups[j].label;
      double variance =
          base_variance * (1.0 / static_cast<double>(groups[i].values.size()) +
                           1.0 / static_cast<double>(groups[j].values.size()));
      if (variance <= 0.0) {
        pair.z = 0.0;
        pair.p_raw = 1.0;
      } else {
        pair.z = (mean_rank[i] - mean_rank[j]) / std::sqrt(variance);
        pair.p_raw = 2.0 * normal_sf(std::abs(pair.z));
        if (pair.p_raw > 1.0) pair.p_raw = 1.0;
      }
      raw_p.push_back(pair.p_raw);
      pairs.push_back(std::move(pair));
    }
  }

  std::vector<double> adjusted = benjamini_yekutieli(raw_p);
  for (std::size_t k = 0; k < pairs.size(); ++k) pairs[k].p_adjusted = adjusted[k];
  return pairs;
}

std::string to_string(Magnitude m) {
  switch (m) {
    case Magnitude::Negligible: return "negligible";
    case Magnitude::Small: return "small";
    case Magnitude::Medium: return "medium";
    case Magnitude::Large: return "large";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Better: return "better";
    case Verdict::Worse: return "worse";
    case Verdict::Equal: return "equal";
  }
  return "?";
}

Magnitude classify_magnitude(double a12) {
  double scaled = std::abs((a12 - 0.5) * 2.0);
  if (scaled < 0.147) return Magnitude::Negligible;
  if (scaled < 0.33) return Magnitude::Small;
  if (scaled < 0.474) return Magnitude::Medium;
  return Magnitude::Large;
}

VdaResult vda(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty())
    throw ConfigError("effect size needs non-empty samples");
  double wins = 0.0;
  for (double x : a) {
    for (double y : b) {
      if (x > y) wins += 1.0;
      else if (x == y) wins += 0.5;
    }
  }
  VdaResult out;
  out.a12 = wins / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
  out.scaled = (out.a12 - 0.5) * 2.0;
  out.magnitude = classify_magnitude(out.a12);
  return out;
}

ComparisonReport compare_all(const std::vector<SampleGroup>& groups, double alpha,
                             bool higher_is_better) {
  ComparisonReport report;
  report.alpha = alpha;
  report.omnibus = kruskal_wallis(groups);
  if (report.omnibus.p >= alpha) return report;

  report.pairwise_run = true;
  report.pairs = dunn_posthoc(groups);
  std::size_t k = 0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (std::size_t j = i + 1; j < groups.size(); ++j, ++k) {
      auto& pair = report.pairs[k];
      VdaResult effect = vda(groups[i].values, groups[j].values);
      pair.a12 = effect.a12;
      pair.a12_scaled = effect.scaled;
      pair.magnitude = effect.magnitude;
      bool significant =
          pair.p_adjusted < alpha && pair.magnitude != Magnitude::Negligible;
      if (!significant) {
        pair.verdict = Verdict::Equal;
      } else {
        bool first_stochastically_greater = pair.a12 > 0.5;
        pair.verdict = first_stochastically_greater == higher_is_better
                           ? Verdict::Better
                           : Verdict::Worse;
      }
    }
  }
  return report;
}

std::string report_to_csv(const ComparisonReport& report,
                          const std::string& metric_name) {
  std::ostringstream out;
  out << "metric,model1,model2,comparison,p,A12,magnitude\n";
  char buf[64];
  for (const auto& pair : report.pairs) {
    out << metric_name << "," << pair.group1 << "," << pair.group2 << ","
        << to_string(pair.verdict) << ",";
    std::snprintf(buf, sizeof(buf), "%.6g", pair.p_adjusted);
    out << buf << ",";
    std::snprintf(buf, sizeof(buf), "%.6g", pair.a12);
    out << buf << "," << to_string(pair.magnitude) << "\n";
  }
  return out.str();
}

}  // namespace stats
}  // namespace rulediff
