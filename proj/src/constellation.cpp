#include "mubforge/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mubforge {

const char* to_string(SpecKind k) {
  switch (k) {
    case SpecKind::Underdetermined: return "underdetermined";
    case SpecKind::Critical: return "critical";
    case SpecKind::Overdetermined: return "overdetermined";
  }
  return "?";
}

namespace constellation {

ConstellationSpec make_spec(int d, std::vector<int> counts) {
  if (d < 2 || d > kMaxDim) throw std::invalid_argument("spec: dimension out of range [2,16]");
  for (int x : counts) {
    if (x < 0 || x > d - 1)
      throw std::invalid_argument("spec: group size must lie in [0, d-1]");
  }
  std::erase(counts, 0);
  if (counts.empty()) throw std::invalid_argument("spec: no nonzero group");
  if (counts.size() > static_cast<size_t>(d + 1))
    throw std::invalid_argument("spec: more than d+1 groups");
  std::sort(counts.begin(), counts.end(), std::greater<>());
  return ConstellationSpec{d, std::move(counts)};
}

ConstellationSpec parse_spec(const std::string& text) {
  // "d=6:5,4,4,2" or "d=6:5,4^2,2"
  const auto fail = [&](const char* why) {
    throw std::invalid_argument("spec '" + text + "': " + why);
  };
  if (text.rfind("d=", 0) != 0) fail("expected leading \"d=\"");
  const size_t colon = text.find(':');
  if (colon == std::string::npos) fail("expected \"d=<dim>:<counts>\"");
  int d = 0;
  try {
    size_t used = 0;
    d = std::stoi(text.substr(2, colon - 2), &used);
    if (used != colon - 2) fail("bad dimension");
  } catch (const std::logic_error&) {
    fail("bad dimension");
  }
  std::vector<int> counts;
  std::stringstream ss(text.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) fail("empty count");
    int value = 0, repeat = 1;
    const size_t caret = item.find('^');
    try {
      size_t used = 0;
      value = std::stoi(item.substr(0, caret), &used);
      if (used != (caret == std::string::npos ? item.size() : caret)) fail("bad count");
      if (caret != std::string::npos) {
        repeat = std::stoi(item.substr(caret + 1), &used);
        if (used != item.size() - caret - 1) fail("bad exponent");
      }
    } catch (const std::logic_error&) {
      fail("bad count");
    }
    if (repeat < 1 || repeat > kMaxDim + 1) fail("bad exponent");
    counts.insert(counts.end(), repeat, value);
  }
  if (counts.empty()) fail("no counts");
  return make_spec(d, std::move(counts));
}

std::string format_spec(const ConstellationSpec& spec) {
  std::string out = "d=" + std::to_string(spec.d) + ":";
  for (size_t i = 0; i < spec.counts.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(spec.counts[i]);
  }
  return out;
}

std::string display_spec(const ConstellationSpec& spec) {
  std::string out = "{";
  for (size_t i = 0; i < spec.counts.size();) {
    size_t j = i;
    while (j < spec.counts.size() && spec.counts[j] == spec.counts[i]) ++j;
    if (i) out += ',';
    out += std::to_string(spec.counts[i]);
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  out += "}_" + std::to_string(spec.d);
  return out;
}

SpecCounts classify(const ConstellationSpec& spec) {
  if (!spec.restricted())
    throw std::invalid_argument("classify: spec must be restricted (first group d-1, >=1 more)");
  const int s = std::accumulate(spec.counts.begin() + 1, spec.counts.end(), 0);
  SpecCounts out;
  out.free_states = s;
  out.total_states = spec.d - 1 + s;
  out.parameters = (spec.d - 1) * (s - 1);
  out.constraints = s * (s - 1) / 2;
  if (out.parameters == out.constraints)
    out.kind = SpecKind::Critical;
  else if (out.constraints > out.parameters)
    out.kind = SpecKind::Overdetermined;
  else
    out.kind = SpecKind::Underdetermined;
  return out;
}

bool leq(const ConstellationSpec& a, const ConstellationSpec& b) {
  if (a.d != b.d) throw std::invalid_argument("leq: dimension mismatch");
  // Canonical counts are sorted decreasing, so the optimal injective matching
  // is position-wise comparison with zero padding.
  for (size_t i = 0; i < a.counts.size(); ++i) {
    const int y = i < b.counts.size() ? b.counts[i] : 0;
    if (a.counts[i] > y) return false;
  }
  return true;
}

int parameter_count(const ConstellationSpec& spec) { return classify(spec).parameters; }

StateSet realize(const ParameterPoint& point) {
  const ConstellationSpec& spec = point.spec;
  const SpecCounts counts = classify(spec);
  if (static_cast<int>(point.angles.size()) != counts.parameters)
    throw std::invalid_argument("realize: angle count does not match spec");

  const int d = spec.d;
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  StateSet out;
  out.d = d;
  out.groups.resize(spec.counts.size());

  out.groups[0].reserve(d - 1);
  for (int k = 0; k < d - 1; ++k) out.groups[0].push_back(CVec::basis(d, k));

  size_t next = 0;
  for (size_t g = 1; g < spec.counts.size(); ++g) {
    for (int j = 0; j < spec.counts[g]; ++j) {
      CVec v(d);
      v.re[0] = amp;
      if (g == 1 && j == 0) {
        for (int k = 1; k < d; ++k) v.re[k] = amp;  // the anchor
      } else {
        for (int k = 1; k < d; ++k) {
          const double a = point.angles[next++];
          v.re[k] = std::cos(a) * amp;
          v.im[k] = std::sin(a) * amp;
        }
      }
      out.groups[g].push_back(v);
    }
  }
  return out;
}

std::vector<ConstellationSpec> enumerate_subspecs(const ConstellationSpec& top) {
  if (!top.restricted()) throw std::invalid_argument("enumerate_subspecs: top must be restricted");
  const int k = top.extra_groups();
  std::vector<ConstellationSpec> out;
  std::vector<int> counts(static_cast<size_t>(k) + 1);
  counts[0] = top.d - 1;

  // Decreasing tuples (x_1 >= ... >= x_k >= 1) under top's sorted counts.
  const auto recurse = [&](auto&& self, int pos, int hi) -> void {
    if (pos > k) {
      out.push_back(ConstellationSpec{top.d, counts});
      return;
    }
    const int cap = std::min(hi, top.counts[pos]);
    for (int x = 1; x <= cap; ++x) {
      counts[pos] = x;
      self(self, pos + 1, x);
    }
  };
  recurse(recurse, 1, top.d - 1);

  std::sort(out.begin(), out.end(), [](const ConstellationSpec& a, const ConstellationSpec& b) {
    const int sa = std::accumulate(a.counts.begin() + 1, a.counts.end(), 0);
    const int sb = std::accumulate(b.counts.begin() + 1, b.counts.end(), 0);
    if (sa != sb) return sa < sb;
    return a.counts < b.counts;
  });
  return out;
}

}  // namespace constellation

}  // namespace mubforge
