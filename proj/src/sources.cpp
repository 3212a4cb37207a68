#include "bintree/sources.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "bintree/error.hpp"
#include "bintree/grammar.hpp"

namespace bintree {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using SplitTable = std::map<std::uint64_t, std::vector<Split>>;

// Groups rows by n, drops zero-probability rows and checks normalization.
SplitTable build_table(const std::vector<TableRow>& rows, bool depth_centric) {
  SplitTable table;
  std::map<std::uint64_t, double> sums;
  std::set<std::pair<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>>> seen;
  for (const TableRow& r : rows) {
    const std::string where = "row (" + std::to_string(r.n) + " " + std::to_string(r.i) + " " +
                              std::to_string(r.j) + ")";
    if (!(r.p >= 0.0 && r.p <= 1.0)) fail(ErrorCode::kBadModel, where + ": p outside [0, 1]");
    if (depth_centric) {
      if (r.n < 1 || std::max(r.i, r.j) != r.n - 1) {
        fail(ErrorCode::kBadModel, where + ": depth-centric rows need max(i, j) = n - 1");
      }
    } else if (r.i < 1 || r.j < 1 || r.i + r.j != r.n) {
      fail(ErrorCode::kBadModel, where + ": leaf-centric rows need i, j >= 1 and i + j = n");
    }
    if (!seen.insert({r.n, {r.i, r.j}}).second) fail(ErrorCode::kBadModel, where + ": duplicate");
    sums[r.n] += r.p;
    if (r.p > 0.0) table[r.n].push_back({r.i, r.j, r.p});
  }
  for (const auto& [n, sum] : sums) {
    if (std::abs(sum - 1.0) > kNormalizationTolerance) {
      std::ostringstream msg;
      msg << "probabilities for n=" << n << " sum to " << sum;
      fail(ErrorCode::kBadModel, msg.str());
    }
  }
  for (auto& [n, splits] : table) {
    std::sort(splits.begin(), splits.end(),
              [](const Split& a, const Split& b) { return a.left < b.left; });
  }
  return table;
}

double table_sigma(const SplitTable& table, std::uint64_t n, std::uint64_t i, std::uint64_t j) {
  const auto it = table.find(n);
  if (it == table.end()) return 0.0;
  for (const Split& s : it->second) {
    if (s.left == i && s.right == j) return s.probability;
  }
  return 0.0;
}

const Split& draw_from(const std::vector<Split>& splits, const PathRng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (const Split& s : splits) {
    acc += s.probability;
    if (u < acc) return s;
  }
  return splits.back();
}

std::string format_decimal(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

std::vector<TableRow> read_model_table(std::istream& in) {
  std::vector<TableRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    TableRow r;
    if (!(fields >> r.n)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      fail(ErrorCode::kBadModel, "table line " + std::to_string(line_no) + ": expected 'n i j p'");
    }
    std::string extra;
    if (!(fields >> r.i >> r.j >> r.p) || (fields >> extra)) {
      fail(ErrorCode::kBadModel, "table line " + std::to_string(line_no) + ": expected 'n i j p'");
    }
    rows.push_back(r);
  }
  return rows;
}

// ---- leaf-centric ---------------------------------------------------------

LeafCentricModel LeafCentricModel::bisection() { return LeafCentricModel(); }

LeafCentricModel LeafCentricModel::uniform_split(double a) {
  if (!(a > 0.0 && a <= 0.5)) {
    fail(ErrorCode::kBadModel, "uniform-split needs 0 < a <= 1/2, got " + format_decimal(a));
  }
  LeafCentricModel m;
  m.kind_ = Kind::kUniformSplit;
  m.a_ = a;
  return m;
}

LeafCentricModel LeafCentricModel::table(const std::vector<TableRow>& rows) {
  LeafCentricModel m;
  m.kind_ = Kind::kTable;
  m.table_ = build_table(rows, false);
  return m;
}

std::string LeafCentricModel::spec() const {
  switch (kind_) {
    case Kind::kBisection: return "bisection";
    case Kind::kUniformSplit: return "uniform-split,a=" + format_decimal(a_);
    case Kind::kTable: return "table";
  }
  return {};
}

std::uint64_t LeafCentricModel::uniform_lo(std::uint64_t n) const {
  // a * n is computed in floating point; the slack keeps exact products such
  // as 0.1 * 30 from rounding up past an integer.
  const double raw = std::ceil(a_ * static_cast<double>(n) - 1e-9);
  const std::uint64_t lo = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(raw));
  // With a close to 1/2 and n odd the interval would be empty; fall back to
  // the most balanced split.
  return std::min(lo, n / 2);
}

double LeafCentricModel::sigma(std::uint64_t i, std::uint64_t j) const {
  if (i < 1 || j < 1) return 0.0;
  const std::uint64_t n = i + j;
  switch (kind_) {
    case Kind::kBisection:
      if (n % 2 == 0) return i == j ? 1.0 : 0.0;
      return (i == n / 2 || j == n / 2) ? 0.5 : 0.0;
    case Kind::kUniformSplit: {
      const std::uint64_t lo = uniform_lo(n);
      if (i < lo || i > n - lo) return 0.0;
      return 1.0 / static_cast<double>(n - 2 * lo + 1);
    }
    case Kind::kTable:
      return table_sigma(table_, n, i, j);
  }
  return 0.0;
}

std::vector<Split> LeafCentricModel::support(std::uint64_t n) const {
  std::vector<Split> out;
  if (n < 2) return out;
  switch (kind_) {
    case Kind::kBisection:
      if (n % 2 == 0) {
        out.push_back({n / 2, n / 2, 1.0});
      } else {
        out.push_back({n / 2, n - n / 2, 0.5});
        out.push_back({n - n / 2, n / 2, 0.5});
      }
      break;
    case Kind::kUniformSplit: {
      const std::uint64_t lo = uniform_lo(n);
      const double p = 1.0 / static_cast<double>(n - 2 * lo + 1);
      for (std::uint64_t i = lo; i <= n - lo; ++i) out.push_back({i, n - i, p});
      break;
    }
    case Kind::kTable:
      if (const auto it = table_.find(n); it != table_.end()) out = it->second;
      break;
  }
  return out;
}

std::uint64_t LeafCentricModel::max_size() const {
  if (kind_ == Kind::kTable) return table_.empty() ? 0 : table_.rbegin()->first;
  return std::numeric_limits<std::uint64_t>::max();
}

std::uint64_t LeafCentricModel::draw_left(std::uint64_t n, const PathRng& rng) const {
  switch (kind_) {
    case Kind::kBisection:
      if (n % 2 == 0) return n / 2;
      return rng.below(2) == 0 ? n / 2 : n - n / 2;
    case Kind::kUniformSplit: {
      const std::uint64_t lo = uniform_lo(n);
      return lo + rng.below(n - 2 * lo + 1);
    }
    case Kind::kTable: {
      const auto it = table_.find(n);
      if (it == table_.end() || it->second.empty()) {
        fail(ErrorCode::kDeadEnd, "table has no split for n=" + std::to_string(n));
      }
      return draw_from(it->second, rng).left;
    }
  }
  return n / 2;
}

// ---- depth-centric --------------------------------------------------------

DepthCentricModel DepthCentricModel::gap(std::uint64_t m) {
  if (m < 1) fail(ErrorCode::kBadModel, "depth-gap needs m >= 1");
  DepthCentricModel model;
  model.m_ = m;
  return model;
}

DepthCentricModel DepthCentricModel::table(const std::vector<TableRow>& rows) {
  DepthCentricModel model;
  model.kind_ = Kind::kTable;
  model.table_ = build_table(rows, true);
  return model;
}

std::string DepthCentricModel::spec() const {
  if (kind_ == Kind::kGap) return "depth-gap,m=" + std::to_string(m_);
  return "table,kind=depth";
}

std::vector<Split> DepthCentricModel::support(std::uint64_t level) const {
  std::vector<Split> out;
  if (level < 1) return out;
  if (kind_ == Kind::kTable) {
    if (const auto it = table_.find(level); it != table_.end()) out = it->second;
    return out;
  }
  const std::uint64_t deep = level - 1;
  const std::uint64_t shallow = deep - std::min(m_, deep);
  if (shallow == deep) {
    out.push_back({deep, deep, 1.0});
  } else {
    out.push_back({shallow, deep, 0.5});
    out.push_back({deep, shallow, 0.5});
  }
  return out;
}

double DepthCentricModel::sigma(std::uint64_t i, std::uint64_t j) const {
  const std::uint64_t level = std::max(i, j) + 1;
  if (kind_ == Kind::kTable) return table_sigma(table_, level, i, j);
  for (const Split& s : support(level)) {
    if (s.left == i && s.right == j) return s.probability;
  }
  return 0.0;
}

std::uint64_t DepthCentricModel::max_level() const {
  if (kind_ == Kind::kTable) return table_.empty() ? 0 : table_.rbegin()->first;
  return std::numeric_limits<std::uint64_t>::max();
}

Split DepthCentricModel::draw(std::uint64_t level, const PathRng& rng) const {
  const std::vector<Split> splits = support(level);
  if (splits.empty()) {
    fail(ErrorCode::kDeadEnd, "no split defined for depth " + std::to_string(level));
  }
  return draw_from(splits, rng);
}

// ---- model specs ----------------------------------------------------------

SourceModel parse_model_spec(std::string_view spec) {
  std::vector<std::string> tokens;
  {
    std::string token;
    std::istringstream in{std::string(spec)};
    while (std::getline(in, token, ',')) {
      const auto first = token.find_first_not_of(" \t");
      const auto last = token.find_last_not_of(" \t");
      tokens.push_back(first == std::string::npos ? "" : token.substr(first, last - first + 1));
    }
  }
  if (tokens.empty()) fail(ErrorCode::kBadModel, "empty model spec");
  const std::string& name = tokens[0];
  std::map<std::string, std::string> params;
  for (std::size_t k = 1; k < tokens.size(); ++k) {
    const auto eq = tokens[k].find('=');
    if (eq == std::string::npos || eq == 0) {
      fail(ErrorCode::kBadModel, "expected key=value in model spec, got '" + tokens[k] + "'");
    }
    params[tokens[k].substr(0, eq)] = tokens[k].substr(eq + 1);
  }
  auto require_only = [&](std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : params) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail(ErrorCode::kBadModel, "unknown parameter '" + key + "' for model " + name);
      }
    }
  };
  auto param = [&](const std::string& key) -> const std::string& {
    const auto it = params.find(key);
    if (it == params.end()) fail(ErrorCode::kBadModel, "model " + name + " needs " + key + "=");
    return it->second;
  };

  if (name == "bisection") {
    require_only({});
    return LeafCentricModel::bisection();
  }
  if (name == "uniform-split") {
    require_only({"a"});
    const std::string& text = param("a");
    char* end = nullptr;
    const double a = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size()) {
      fail(ErrorCode::kBadModel, "a must be a decimal, got '" + text + "'");
    }
    return LeafCentricModel::uniform_split(a);
  }
  if (name == "depth-gap") {
    require_only({"m"});
    const std::string& text = param("m");
    std::uint64_t m = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), m);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      fail(ErrorCode::kBadModel, "m must be a positive integer, got '" + text + "'");
    }
    return DepthCentricModel::gap(m);
  }
  if (name == "table") {
    require_only({"file", "kind"});
    const std::string& path = param("file");
    const std::string kind = params.count("kind") != 0 ? params["kind"] : "leaf";
    if (kind != "leaf" && kind != "depth") {
      fail(ErrorCode::kBadModel, "table kind must be leaf or depth, got '" + kind + "'");
    }
    std::ifstream in(path);
    if (!in) fail(ErrorCode::kIo, "cannot open model table '" + path + "'");
    const auto rows = read_model_table(in);
    if (kind == "depth") return DepthCentricModel::table(rows);
    return LeafCentricModel::table(rows);
  }
  fail(ErrorCode::kBadModel, "unknown model '" + name + "'");
}

std::string model_spec(const SourceModel& model) {
  return std::visit([](const auto& m) { return m.spec(); }, model);
}

bool is_depth_centric(const SourceModel& model) {
  return std::holds_alternative<DepthCentricModel>(model);
}

// ---- probabilities --------------------------------------------------------

double log2_prob_leaf_centric(const LeafCentricModel& model, const BinaryTree& t) {
  if (t.is_leaf()) fail(ErrorCode::kTrivialTree, "P(t) is defined for trees with >= 2 leaves");
  double sum = 0.0;
  for (std::size_t v = 0; v < t.num_vertices(); ++v) {
    if (!t.is_internal(v)) continue;
    const double p = model.sigma(t.leaves_below(t.left_child(v)), t.leaves_below(t.right_child(v)));
    if (p <= 0.0) return kNegInf;
    sum += std::log2(p);
  }
  return sum;
}

double log2_prob_depth_centric(const DepthCentricModel& model, const BinaryTree& t) {
  if (t.is_leaf()) fail(ErrorCode::kTrivialTree, "P(t) is defined for trees with >= 2 leaves");
  const auto depths = subtree_depths(t);
  double sum = 0.0;
  for (std::size_t v = 0; v < t.num_vertices(); ++v) {
    if (!t.is_internal(v)) continue;
    const double p = model.sigma(depths[t.left_child(v)], depths[t.right_child(v)]);
    if (p <= 0.0) return kNegInf;
    sum += std::log2(p);
  }
  return sum;
}

double log2_prob(const SourceModel& model, const BinaryTree& t) {
  if (const auto* leaf = std::get_if<LeafCentricModel>(&model)) {
    return log2_prob_leaf_centric(*leaf, t);
  }
  return log2_prob_depth_centric(std::get<DepthCentricModel>(model), t);
}

// ---- sampling -------------------------------------------------------------

BinaryTree sample_leaf_centric(const LeafCentricModel& model, std::uint64_t n, std::uint64_t seed) {
  if (n < 2) fail(ErrorCode::kInvalidArgument, "sampling needs n >= 2");
  std::vector<std::uint8_t> shape;
  shape.reserve(2 * n - 1);
  struct Pending {
    std::uint64_t leaves;
    PathRng rng;
  };
  std::vector<Pending> stack{{n, PathRng::root(seed)}};
  while (!stack.empty()) {
    const Pending top = stack.back();
    stack.pop_back();
    if (top.leaves == 1) {
      shape.push_back(0);
      continue;
    }
    shape.push_back(1);
    const std::uint64_t left = model.draw_left(top.leaves, top.rng);
    if (left < 1 || left >= top.leaves) {
      fail(ErrorCode::kDeadEnd, "split leaves an empty side at n=" + std::to_string(top.leaves));
    }
    stack.push_back({top.leaves - left, top.rng.child(Step::kRight)});
    stack.push_back({left, top.rng.child(Step::kLeft)});
  }
  return BinaryTree::from_preorder(std::move(shape));
}

BinaryTree sample_depth_centric(const DepthCentricModel& model, std::uint64_t d,
                                std::uint64_t seed) {
  if (d < 1) fail(ErrorCode::kInvalidArgument, "sampling needs depth >= 1");
  std::vector<std::uint8_t> shape;
  struct Pending {
    std::uint64_t depth;
    PathRng rng;
  };
  std::vector<Pending> stack{{d, PathRng::root(seed)}};
  while (!stack.empty()) {
    const Pending top = stack.back();
    stack.pop_back();
    if (top.depth == 0) {
      shape.push_back(0);
      continue;
    }
    if (shape.size() >= kDefaultMaxVertices) {
      fail(ErrorCode::kSizeLimit, "sampled tree exceeds the vertex limit");
    }
    shape.push_back(1);
    const Split s = model.draw(top.depth, top.rng);
    stack.push_back({s.right, top.rng.child(Step::kRight)});
    stack.push_back({s.left, top.rng.child(Step::kLeft)});
  }
  return BinaryTree::from_preorder(std::move(shape));
}

BinaryTree sample(const SourceModel& model, std::uint64_t size, std::uint64_t seed) {
  if (const auto* leaf = std::get_if<LeafCentricModel>(&model)) {
    return sample_leaf_centric(*leaf, size, seed);
  }
  return sample_depth_centric(std::get<DepthCentricModel>(model), size, seed);
}

mpz_class leaf_count_by_depth(const DepthCentricModel& model, std::uint64_t d) {
  std::vector<mpz_class> x{1};
  x.reserve(d + 1);
  for (std::uint64_t level = 1; level <= d; ++level) {
    const auto splits = model.support(level);
    if (splits.empty()) {
      fail(ErrorCode::kNotSigma2Star, "no split defined at depth " + std::to_string(level));
    }
    const std::uint64_t shallow = std::min(splits.front().left, splits.front().right);
    for (const Split& s : splits) {
      if (std::min(s.left, s.right) != shallow) {
        fail(ErrorCode::kNotSigma2Star,
             "depth " + std::to_string(level) + " has more than one gap value");
      }
    }
    x.push_back(x[level - 1] + x[shallow]);
  }
  return x[d];
}

// ---- class membership -----------------------------------------------------

Sigma1StarReport check_sigma1_star(const LeafCentricModel& model, std::uint64_t n_max) {
  Sigma1StarReport report;
  if (model.kind() == LeafCentricModel::Kind::kUniformSplit) {
    // min(i, j) >= ceil(a n) gives ratio <= 1/a; when a > 1/3 the balanced
    // fallback for odd n is what binds, worst at n = 3.
    report.ratio_bound = model.a() > 1.0 / 3.0 ? 3.0 : std::ceil(1.0 / model.a() - 1e-9);
    report.satisfied = true;
    report.analytic = true;
    return report;
  }
  const std::uint64_t top = std::min(n_max, model.max_size());
  const std::uint64_t half = std::max<std::uint64_t>(2, top / 2);
  double lower_max = 0.0;
  for (std::uint64_t n = 2; n <= top; ++n) {
    for (const Split& s : model.support(n)) {
      const double ratio =
          static_cast<double>(n) / static_cast<double>(std::min(s.left, s.right));
      report.ratio_bound = std::max(report.ratio_bound, ratio);
    }
    if (n == half) lower_max = report.ratio_bound;
  }
  report.satisfied = report.ratio_bound <= lower_max;
  return report;
}

Sigma2StarReport check_sigma2_star(const DepthCentricModel& model, std::uint64_t n_max) {
  Sigma2StarReport report;
  const std::uint64_t top = std::min(n_max, model.max_level());
  for (std::uint64_t level = 1; level <= top; ++level) {
    std::set<std::uint64_t> gaps;
    for (const Split& s : model.support(level)) {
      gaps.insert(std::max(s.left, s.right) - std::min(s.left, s.right));
    }
    if (gaps.size() > 1) report.single_gap = false;
    if (gaps.empty() && model.kind() == DepthCentricModel::Kind::kTable) report.single_gap = false;
    if (!gaps.empty()) report.gap_bound = std::max(report.gap_bound, *gaps.rbegin());
  }
  return report;
}

}  // namespace bintree
