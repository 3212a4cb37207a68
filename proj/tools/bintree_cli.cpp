// Command-line front end over the bintree C API.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bintree/bintree.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct CommandError {
  int exit_code;
  std::string message;
};

struct TreeDeleter {
  void operator()(bt_tree* t) const { bt_tree_free(t); }
};
struct BitsDeleter {
  void operator()(bt_bits* b) const { bt_bits_free(b); }
};
struct ModelDeleter {
  void operator()(bt_model* m) const { bt_model_free(m); }
};
struct StringDeleter {
  void operator()(char* s) const { bt_string_free(s); }
};

using TreePtr = std::unique_ptr<bt_tree, TreeDeleter>;
using BitsPtr = std::unique_ptr<bt_bits, BitsDeleter>;
using ModelPtr = std::unique_ptr<bt_model, ModelDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

void check(bt_status status, const std::string& context) {
  if (status == BT_OK) return;
  const int code = status == BT_ERR_BAD_MODEL || status == BT_ERR_INVALID_ARGUMENT ? kExitUsage
                                                                                   : kExitData;
  std::string message = context.empty() ? "" : context + ": ";
  message += std::string(bt_status_name(status)) + ": " + bt_last_error();
  throw CommandError{code, message};
}

struct Config {
  std::string in;
  std::string out;
  bool packed = false;
  std::string model;
  std::uint64_t n = 0;
  std::uint64_t depth = 0;
  std::uint64_t count = 1;
  std::vector<std::uint64_t> sizes;
  std::uint64_t samples = 200;
  std::uint64_t seed = 0;
  std::size_t cap = 12;
};

// Input and output default to the standard streams.
class Io {
 public:
  explicit Io(const Config& cfg, bool binary_in = false, bool binary_out = false) {
    if (!cfg.in.empty()) {
      file_in_.open(cfg.in, binary_in ? std::ios::binary : std::ios::in);
      if (!file_in_) throw CommandError{kExitData, "cannot open '" + cfg.in + "'"};
    }
    if (!cfg.out.empty()) {
      file_out_.open(cfg.out, binary_out ? std::ios::binary | std::ios::out : std::ios::out);
      if (!file_out_) throw CommandError{kExitData, "cannot write '" + cfg.out + "'"};
    }
  }

  std::istream& in() { return file_in_.is_open() ? file_in_ : std::cin; }
  std::ostream& out() { return file_out_.is_open() ? static_cast<std::ostream&>(file_out_) : std::cout; }

 private:
  std::ifstream file_in_;
  std::ofstream file_out_;
};

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::string trimmed(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  const auto last = line.find_last_not_of(" \t\r");
  return line.substr(first, last - first + 1);
}

std::string serialize(const bt_tree* t) {
  char* raw = nullptr;
  check(bt_tree_serialize(t, &raw), "");
  return StringPtr(raw).get();
}

ModelPtr parse_model(const std::string& spec) {
  bt_model* raw = nullptr;
  check(bt_model_parse(spec.c_str(), &raw), "model '" + spec + "'");
  return ModelPtr(raw);
}

// Reads the tree file, calling visit(tree, line_no) for each tree.
template <typename Visit>
void for_each_tree(std::istream& in, Visit&& visit) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    bt_tree* raw = nullptr;
    check(bt_tree_parse(line.data(), line.size(), &raw), "line " + std::to_string(line_no));
    visit(TreePtr(raw), line_no);
  }
}

int cmd_encode(const Config& cfg) {
  Io io(cfg, false, cfg.packed);
  for_each_tree(io.in(), [&](TreePtr tree, std::size_t line_no) {
    bt_bits* raw = nullptr;
    check(bt_encode(tree.get(), &raw), "line " + std::to_string(line_no));
    BitsPtr bits(raw);
    if (cfg.packed) {
      bt_buffer buffer{};
      check(bt_bits_to_packed_record(bits.get(), &buffer), "");
      io.out().write(reinterpret_cast<const char*>(buffer.data),
                     static_cast<std::streamsize>(buffer.size));
      bt_buffer_free(&buffer);
    } else {
      char* text = nullptr;
      check(bt_bits_to_text(bits.get(), &text), "");
      io.out() << StringPtr(text).get() << '\n';
    }
  });
  return 0;
}

void decode_one(const bt_bits* bits, std::ostream& out, const std::string& where) {
  bt_tree* raw = nullptr;
  std::size_t consumed = 0;
  check(bt_decode(bits, 0, &raw, &consumed), where);
  TreePtr tree(raw);
  if (consumed != bt_bits_length(bits)) {
    throw CommandError{kExitData, where + ": " + std::to_string(bt_bits_length(bits) - consumed) +
                                      " trailing bits after codeword"};
  }
  out << serialize(tree.get()) << '\n';
}

int cmd_decode(const Config& cfg) {
  Io io(cfg, cfg.packed, false);
  if (cfg.packed) {
    const std::string data((std::istreambuf_iterator<char>(io.in())),
                           std::istreambuf_iterator<char>());
    std::size_t offset = 0;
    std::size_t record = 0;
    while (offset < data.size()) {
      ++record;
      bt_bits* raw = nullptr;
      std::size_t used = 0;
      const std::string where = "record " + std::to_string(record);
      check(bt_bits_from_packed_record(reinterpret_cast<const std::uint8_t*>(data.data()) + offset,
                                       data.size() - offset, &raw, &used),
            where);
      BitsPtr bits(raw);
      decode_one(bits.get(), io.out(), where);
      offset += used;
    }
    return 0;
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(io.in(), line)) {
    ++line_no;
    if (blank(line)) continue;
    const std::string text = trimmed(line);
    const std::string where = "line " + std::to_string(line_no);
    bt_bits* raw = nullptr;
    check(bt_bits_from_text(text.data(), text.size(), &raw), where);
    BitsPtr bits(raw);
    decode_one(bits.get(), io.out(), where);
  }
  return 0;
}

int cmd_gen(const Config& cfg) {
  ModelPtr model = parse_model(cfg.model);
  const bool depth_centric = bt_model_is_depth_centric(model.get()) != 0;
  const std::uint64_t size = depth_centric ? cfg.depth : cfg.n;
  if (size == 0) {
    throw CommandError{kExitUsage, depth_centric ? "depth-centric models need --depth >= 1"
                                                 : "leaf-centric models need --n >= 2"};
  }
  Io io(cfg);
  for (std::uint64_t k = 0; k < cfg.count; ++k) {
    bt_tree* raw = nullptr;
    check(bt_model_sample(model.get(), size, bt_trial_seed(cfg.seed, size, k), &raw),
          "sample " + std::to_string(k));
    io.out() << serialize(TreePtr(raw).get()) << '\n';
  }
  return 0;
}

int visit_print(const bt_tree* tree, void* user) {
  auto* out = static_cast<std::ostream*>(user);
  *out << serialize(tree) << '\n';
  return 0;
}

int cmd_enumerate(const Config& cfg) {
  if (cfg.n == 0) throw CommandError{kExitUsage, "enumerate needs --n >= 1"};
  Io io(cfg);
  std::ostream& out = io.out();
  check(bt_enumerate(cfg.n, cfg.cap, &visit_print, &out), "enumerate");
  return 0;
}

int cmd_bench(const Config& cfg) {
  if (cfg.sizes.empty()) throw CommandError{kExitUsage, "bench needs a nonempty --sizes list"};
  ModelPtr model = parse_model(cfg.model);
  std::vector<bt_bench_record> records(cfg.sizes.size());
  check(bt_bench(model.get(), cfg.sizes.data(), cfg.sizes.size(), cfg.samples, cfg.seed, 0,
                 records.data()),
        "bench");
  char* csv = nullptr;
  check(bt_bench_csv(records.data(), records.size(), &csv), "");
  Io io(cfg);
  io.out() << StringPtr(csv).get();
  return 0;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int cmd_stats(const Config& cfg) {
  ModelPtr model;
  if (!cfg.model.empty()) model = parse_model(cfg.model);
  Io io(cfg);
  io.out() << "leaves,depth,n_vars,repr_ratio,codeword_bits,theorem1_bound"
           << (model ? ",neg_log2_prob" : "") << '\n';
  for_each_tree(io.in(), [&](TreePtr tree, std::size_t line_no) {
    const std::string where = "line " + std::to_string(line_no);
    bt_tree_stats s{};
    check(bt_tree_stats_compute(tree.get(), &s), where);
    io.out() << s.leaves << ',' << s.depth << ',' << s.distinct_subtrees << ','
             << format_number(s.representation_ratio) << ',' << s.codeword_bits << ','
             << format_number(s.theorem1_bound);
    if (model) {
      double lp = 0.0;
      check(bt_model_log2_prob(model.get(), tree.get(), &lp), where);
      io.out() << ',' << (std::isinf(lp) ? std::string("inf") : format_number(lp == 0.0 ? 0.0 : -lp));
    }
    io.out() << '\n';
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grammar-based compression of full binary trees"};
  app.require_subcommand(1);
  Config cfg;

  auto add_in = [&](CLI::App* sub) { sub->add_option("--in", cfg.in, "Input file (default stdin)"); };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "Output file (default stdout)");
  };

  auto* encode = app.add_subcommand("encode", "Encode a tree file into codewords");
  add_in(encode);
  add_out(encode);
  encode->add_flag("--packed", cfg.packed, "Write length-prefixed packed records");

  auto* decode = app.add_subcommand("decode", "Decode codewords into a tree file");
  add_in(decode);
  add_out(decode);
  decode->add_flag("--packed", cfg.packed, "Read length-prefixed packed records");

  auto* gen = app.add_subcommand("gen", "Sample trees from a source model");
  gen->add_option("--model", cfg.model, "Model spec")->required();
  gen->add_option("--n", cfg.n, "Leaf count (leaf-centric models)");
  gen->add_option("--depth", cfg.depth, "Depth (depth-centric models)");
  gen->add_option("--count", cfg.count, "Number of trees")->capture_default_str();
  gen->add_option("--seed", cfg.seed, "Seed")->capture_default_str();
  add_out(gen);

  auto* enumerate = app.add_subcommand("enumerate", "List every tree with n leaves");
  enumerate->add_option("--n", cfg.n, "Leaf count")->required();
  enumerate->add_option("--cap", cfg.cap, "Enumeration cap")->capture_default_str();
  add_out(enumerate);

  auto* bench = app.add_subcommand("bench", "Monte-Carlo redundancy benchmark");
  bench->add_option("--model", cfg.model, "Model spec")->required();
  bench->add_option("--sizes", cfg.sizes, "Comma-separated sizes (leaves or depths)")
      ->delimiter(',')
      ->required();
  bench->add_option("--samples", cfg.samples, "Samples per size")->capture_default_str();
  bench->add_option("--seed", cfg.seed, "Seed")->capture_default_str();
  add_out(bench);

  auto* stats = app.add_subcommand("stats", "Per-tree statistics");
  add_in(stats);
  stats->add_option("--model", cfg.model, "Optional model spec for -log2 P(t)");
  add_out(stats);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*encode) return cmd_encode(cfg);
    if (*decode) return cmd_decode(cfg);
    if (*gen) return cmd_gen(cfg);
    if (*enumerate) return cmd_enumerate(cfg);
    if (*bench) return cmd_bench(cfg);
    if (*stats) return cmd_stats(cfg);
  } catch (const CommandError& e) {
    std::cerr << "bintree: " << e.message << '\n';
    return e.exit_code;
  }
  return kExitUsage;
}
