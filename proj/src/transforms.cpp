// Copyright 2026 The semicoarse authors
// SPDX-License-Identifier: Apache-2.0

#include "sce/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

namespace sce {

namespace {
constexpr double kEqTol = 1e-10;
constexpr double kNonnegTol = 1e-12;
}  // namespace

Mat Mat::identity(int size) {
  Mat out(size);
  for (int i = 0; i < size; ++i) out(i, i) = 1.0;
  return out;
}

std::vector<double> TransformMatrix::apply(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != P.m)
    throw PreconditionError("transform/vector dimension mismatch");
  std::vector<double> y(P.m, 0.0);
  for (int c = 0; c < P.m; ++c) {
    if (x[c] == 0) continue;
    for (int r = 0; r < P.m; ++r) y[r] += P(r, c) * x[c];
  }
  return y;
}

ValidationReport validate_generator(const GeneratorPair& pair) {
  ValidationReport rep;
  int m = pair.Q.m;
  if (static_cast<int>(pair.q.size()) != m)
    throw PreconditionError("generator Q/q dimension mismatch");
  auto flag = [&](const std::string& what, double v) {
    if (v > 0) rep.violations.push_back({what, v});
  };
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      flag("symmetry(" + std::to_string(a) + "," + std::to_string(b) + ")",
           std::abs(pair.Q(a, b) - pair.Q(b, a)) - kNonnegTol);
  for (int a = 0; a < m; ++a) {
    double s = 0;
    for (int b = 0; b < m; ++b) s += pair.Q(b, a) + pair.q[b];
    flag("conservation(" + std::to_string(a) + ")", std::abs(s) - kEqTol);
  }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (a != b)
        flag("tangency(" + std::to_string(b) + "," + std::to_string(a) + ")",
             -(pair.Q(b, a) + pair.q[b]) - kNonnegTol);
  rep.pass = rep.violations.empty();
  return rep;
}

void validate_transform(const TransformMatrix& t) {
  int m = t.P.m;
  if (m < 1 || t.P.d.size() != static_cast<std::size_t>(m) * m)
    throw PreconditionError("malformed transform matrix");
  for (int c = 0; c < m; ++c) {
    double s = 0;
    for (int r = 0; r < m; ++r) {
      if (t.P(r, c) < -kNonnegTol) throw PreconditionError("negative transform entry");
      s += t.P(r, c);
    }
    if (std::abs(s - 1.0) > kEqTol) throw PreconditionError("transform column sum != 1");
  }
}

std::pair<TransformMatrix, double> to_stochastic(const GeneratorPair& pair) {
  ValidationReport rep = validate_generator(pair);
  if (!rep.pass) throw PreconditionError("generator pair fails (7)-(9)");
  int m = pair.Q.m;
  double Delta = 0;
  for (int a = 0; a < m; ++a) {
    double s = 0;
    for (int b = 0; b < m; ++b)
      if (b != a) s += pair.Q(b, a) + pair.q[b];
    Delta = std::max(Delta, s);
  }
  double delta = Delta > 0 ? 1.0 / Delta : 1.0;
  TransformMatrix t;
  t.P = Mat(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      t.P(b, a) = (b == a ? 1.0 : 0.0) + delta * (pair.Q(b, a) + pair.q[b]);
  t.name = "from_generator";
  validate_transform(t);
  return {t, delta};
}

namespace {

std::string set_name(const char* prefix, const std::vector<int>& v) {
  std::string s = prefix;
  s += "{";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  s += "}";
  return s;
}

}  // namespace

TransformMatrix subset_transform(int m, const std::vector<int>& S) {
  std::vector<int> w(m, 1);
  return weighted_subset_transform(m, S, w);
}

TransformMatrix weighted_subset_transform(int m, const std::vector<int>& S,
                                          const std::vector<int>& w) {
  if (static_cast<int>(w.size()) != m) throw PreconditionError("weight dimension mismatch");
  for (int x : w)
    if (x < 1) throw PreconditionError("weights must be positive integers");
  std::vector<bool> in_set(m, false);
  for (int a : S) {
    if (a < 0 || a >= m) throw PreconditionError("subset element out of range");
    in_set[a] = true;
  }
  double comp_weight = 0;
  for (int a = 0; a < m; ++a)
    if (!in_set[a]) comp_weight += w[a];
  if (comp_weight == 0) throw PreconditionError("subset complement is empty");

  TransformMatrix t;
  t.P = Mat(m);
  for (int a = 0; a < m; ++a) {
    if (in_set[a]) {
      for (int b = 0; b < m; ++b)
        if (!in_set[b]) t.P(b, a) = w[b] / comp_weight;
    } else {
      t.P(a, a) = 1.0;
    }
  }
  bool uniform = std::all_of(w.begin(), w.end(), [&](int x) { return x == w[0]; });
  t.name = set_name(uniform ? "subset" : "wsubset", S);
  return t;
}

TransformMatrix cycle_transform(int m, const std::vector<int>& C) {
  std::vector<int> w(m, 1);
  return weighted_cycle_transform(m, C, w);
}

TransformMatrix weighted_cycle_transform(int m, const std::vector<int>& C,
                                         const std::vector<int>& w) {
  if (static_cast<int>(w.size()) != m) throw PreconditionError("weight dimension mismatch");
  for (int x : w)
    if (x < 1) throw PreconditionError("weights must be positive integers");
  int k = static_cast<int>(C.size());
  if (k < 2) throw PreconditionError("cycle needs at least 2 actions");
  std::vector<bool> seen(m, false);
  for (int a : C) {
    if (a < 0 || a >= m) throw PreconditionError("cycle element out of range");
    if (seen[a]) throw PreconditionError("repeated action in cycle");
    seen[a] = true;
  }
  double delta = w[C[0]];
  for (int a : C) delta = std::min(delta, static_cast<double>(w[a]));

  TransformMatrix t;
  t.P = Mat::identity(m);
  for (int l = 0; l < k; ++l) {
    int a = C[l];
    int prev = C[(l + k - 1) % k];
    int next = C[(l + 1) % k];
    t.P(a, a) = 1.0 - delta / w[a];
    t.P(prev, a) += delta / (2.0 * w[a]);
    t.P(next, a) += delta / (2.0 * w[a]);
  }
  bool uniform = true;
  for (int a : C) uniform = uniform && (w[a] == w[C[0]]);
  t.name = set_name(uniform ? "cycle" : "wcycle", C);
  return t;
}

TripletCheck is_semicoarse_transform(const TransformMatrix& t) {
  validate_transform(t);
  int m = t.P.m;
  TripletCheck chk;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      for (int c = b + 1; c < m; ++c) {
        double fwd = t.P(a, b) + t.P(b, c) + t.P(c, a);
        double rev = t.P(a, c) + t.P(c, b) + t.P(b, a);
        if (std::abs(fwd - rev) > kEqTol) {
          chk.ok = false;
          chk.witness = {a, b, c};
          chk.defect = fwd - rev;
          return chk;
        }
      }
  return chk;
}

GeneratorPair generator_from_transform(const TransformMatrix& t) {
  TripletCheck chk = is_semicoarse_transform(t);
  if (!chk.ok) throw PreconditionError("transform is not semicoarse (triplet condition fails)");
  int m = t.P.m;
  GeneratorPair pair;
  pair.Q = Mat(m);
  pair.q.assign(m, 0.0);
  for (int b = 0; b < m; ++b) pair.q[b] = t.P(b, 0) - t.P(0, b);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      pair.Q(b, a) = t.P(b, a) - (b == a ? 1.0 : 0.0) - pair.q[b];
  ValidationReport rep = validate_generator(pair);
  if (!rep.pass) throw PreconditionError("reconstructed generator fails validation");
  return pair;
}

std::size_t count_canonical(int m, int max_cycle_len) {
  if (max_cycle_len == 0) max_cycle_len = m;  // 0 = no cap
  std::size_t total = (std::size_t{1} << m) - 2;  // subsets
  for (int k = 2; k <= max_cycle_len; ++k) {
    // C(m,k)
    std::size_t comb = 1;
    for (int i = 0; i < k; ++i) comb = comb * (m - i) / (i + 1);
    std::size_t orders = 1;  // (k-1)!/2 for k >= 3, 1 for k = 2
    if (k >= 3) {
      for (int i = 2; i < k; ++i) orders *= i;
      orders /= 2;
    }
    total += comb * orders;
  }
  return total;
}

std::vector<TransformMatrix> enumerate_canonical(int m, int max_cycle_len) {
  if (m < 2) throw PreconditionError("need at least 2 actions");
  if (max_cycle_len == 0) max_cycle_len = m;  // 0 = no cap
  if (max_cycle_len < 2 || max_cycle_len > m)
    throw PreconditionError("max_cycle_len out of range");
  if (m > 20) throw PreconditionError("enumeration budget exceeded (2^m > 2^20)");

  std::vector<TransformMatrix> out;
  // subsets: every S with nonempty complement, excluding the empty set
  for (unsigned mask = 1; mask + 1 < (1u << m); ++mask) {
    std::vector<int> S;
    for (int a = 0; a < m; ++a)
      if (mask & (1u << a)) S.push_back(a);
    out.push_back(subset_transform(m, S));
  }
  // cycles: canonical form has the minimum element first; orientation fixed by
  // second element < last element (reversals coincide for k = 2)
  std::vector<int> members(m);
  std::iota(members.begin(), members.end(), 0);
  for (int k = 2; k <= max_cycle_len; ++k) {
    std::vector<int> comb(k);
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      for (int i = 0; i < k; ++i) comb[i] = idx[i];
      // permute the tail, keep canonical orientations
      std::vector<int> tail(comb.begin() + 1, comb.end());
      std::sort(tail.begin(), tail.end());
      do {
        if (k >= 3 && tail.front() > tail.back()) continue;
        std::vector<int> C;
        C.push_back(comb[0]);
        C.insert(C.end(), tail.begin(), tail.end());
        out.push_back(cycle_transform(m, C));
      } while (std::next_permutation(tail.begin(), tail.end()));
      // next combination
      int i = k - 1;
      while (i >= 0 && idx[i] == m - k + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

std::string transform_to_json(const TransformMatrix& t) {
  nlohmann::json j;
  j["name"] = t.name;
  j["m"] = t.P.m;
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < t.P.m; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < t.P.m; ++c) row.push_back(t.P(r, c));
    rows.push_back(row);
  }
  j["P"] = rows;
  return j.dump(2);
}

std::string generator_to_json(const GeneratorPair& p) {
  nlohmann::json j;
  j["m"] = p.Q.m;
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < p.Q.m; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < p.Q.m; ++c) row.push_back(p.Q(r, c));
    rows.push_back(row);
  }
  j["Q"] = rows;
  j["q"] = p.q;
  return j.dump(2);
}

GeneratorPair generator_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  int m = j.at("m").get<int>();
  GeneratorPair p;
  p.Q = Mat(m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) p.Q(r, c) = j.at("Q").at(r).at(c).get<double>();
  p.q = j.at("q").get<std::vector<double>>();
  return p;
}

}  // namespace sce
