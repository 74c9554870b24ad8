#include "doclab/config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace doclab {

namespace {

struct KeyValues {
  std::map<std::string, std::string> values;
  std::map<std::string, int> lines;
  mutable std::vector<std::string> used;

  const std::string* find(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) return nullptr;
    used.push_back(key);
    return &it->second;
  }
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

KeyValues parse_key_values(std::istream& in, const std::string& origin,
                           std::vector<std::string>& errors) {
  KeyValues kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << origin << ':' << line_no << ": expected `key = value`, got `" << line << "`";
      errors.push_back(os.str());
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      std::ostringstream os;
      os << origin << ':' << line_no << ": empty key";
      errors.push_back(os.str());
      continue;
    }
    if (kv.values.count(key)) {
      std::ostringstream os;
      os << origin << ':' << line_no << ": duplicate key `" << key << "` (first at line "
         << kv.lines[key] << ")";
      errors.push_back(os.str());
      continue;
    }
    kv.values[key] = value;
    kv.lines[key] = line_no;
  }
  return kv;
}

class Reader {
 public:
  Reader(const KeyValues& kv, std::vector<std::string>& errors)
      : kv_(kv), errors_(errors) {}

  template <typename T, typename Parse>
  void get(const std::string& key, T& out, Parse parse, bool required) {
    const std::string* raw = kv_.find(key);
    if (raw == nullptr) {
      if (required) fail(key, "is required");
      return;
    }
    if (!parse(*raw, out)) fail(key, "has invalid value `" + *raw + "`");
  }

  void get_string(const std::string& key, std::string& out, bool required = false) {
    get(key, out, [](const std::string& s, std::string& v) { v = s; return !s.empty(); },
        required);
  }
  void get_i64(const std::string& key, std::int64_t& out, bool required = false) {
    get(key, out, parse_i64, required);
  }
  void get_int(const std::string& key, int& out, bool required = false) {
    std::int64_t v = out;
    get(key, v, parse_i64, required);
    out = static_cast<int>(v);
  }
  void get_u64(const std::string& key, std::uint64_t& out, bool required = false) {
    get(key, out, [](const std::string& s, std::uint64_t& v) {
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      return res.ec == std::errc{} && res.ptr == s.data() + s.size();
    }, required);
  }
  void get_double(const std::string& key, double& out, bool required = false) {
    get(key, out, parse_double, required);
  }
  void get_bool(const std::string& key, bool& out, bool required = false) {
    get(key, out, [](const std::string& s, bool& v) {
      if (s == "true") { v = true; return true; }
      if (s == "false") { v = false; return true; }
      return false;
    }, required);
  }
  void get_int_list(const std::string& key, std::vector<int>& out, bool required = false) {
    get(key, out, [](const std::string& s, std::vector<int>& v) {
      return parse_list<int>(s, v, [](const std::string& item, int& x) {
        std::int64_t big;
        if (!parse_i64(item, big)) return false;
        x = static_cast<int>(big);
        return true;
      });
    }, required);
  }
  void get_double_list(const std::string& key, std::vector<double>& out,
                       bool required = false) {
    get(key, out, [](const std::string& s, std::vector<double>& v) {
      return parse_list<double>(s, v, parse_double);
    }, required);
  }

  void fail(const std::string& key, const std::string& why) {
    errors_.push_back("config: `" + key + "` " + why);
  }

 private:
  static bool parse_i64(const std::string& s, std::int64_t& v) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
  }
  static bool parse_double(const std::string& s, double& v) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
  }
  template <typename T, typename Item>
  static bool parse_list(const std::string& s, std::vector<T>& out, Item item_parse) {
    out.clear();
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, ',')) {
      cur = trim(cur);
      T v;
      if (cur.empty() || !item_parse(cur, v)) return false;
      out.push_back(v);
    }
    return !out.empty();
  }

  const KeyValues& kv_;
  std::vector<std::string>& errors_;
};

void validate_semantics(ExperimentConfig& cfg, std::vector<std::string>& errors) {
  auto require = [&](bool ok, const std::string& message) {
    if (!ok) errors.push_back("config: " + message);
  };

  if (!cfg.arch.layer_widths.empty()) {
    try {
      cfg.arch.validate();
    } catch (const std::exception& e) {
      errors.push_back(std::string("config: `arch.layer_widths`: ") + e.what());
    }
  }

  if (cfg.kind == ExperimentConfig::ProblemKind::kGaussian) {
    require(cfg.gaussian.dim >= 1, "`problem.dim` must be >= 1");
    require(cfg.gaussian.class_std > 0.0, "`problem.class_std` must be > 0");
    require(cfg.test_samples >= 1, "`problem.test_samples` must be >= 1");
    if (!cfg.arch.layer_widths.empty())
      require(cfg.arch.input_dim() == cfg.gaussian.dim,
              "`arch.layer_widths` input width must equal `problem.dim`");
  } else {
    for (const auto& [key, path] :
         {std::pair<const char*, const std::string&>{"problem.train_images", cfg.mnist.train_images},
          {"problem.train_labels", cfg.mnist.train_labels},
          {"problem.test_images", cfg.mnist.test_images},
          {"problem.test_labels", cfg.mnist.test_labels}}) {
      if (path.empty())
        errors.push_back(std::string("config: `") + key + "` is required for mnist problems");
      else if (!std::filesystem::exists(path))
        errors.push_back(std::string("config: `") + key + "`: file not found: " + path);
    }
    require(cfg.mnist.class_a >= 0 && cfg.mnist.class_a <= 9 &&
            cfg.mnist.class_b >= 0 && cfg.mnist.class_b <= 9 &&
            cfg.mnist.class_a != cfg.mnist.class_b,
            "`problem.class_a`/`problem.class_b` must be distinct digits 0..9");
    require(cfg.mnist.train_per_class >= 1, "`problem.train_per_class` must be >= 1");
    require(cfg.mnist.test_per_class >= 1, "`problem.test_per_class` must be >= 1");
    require(!cfg.random_labels, "`problem.random_labels` is only supported for gaussian problems");
  }

  require(cfg.doc.samples >= 1, "`doc.samples` must be >= 1");
  require(cfg.doc.bins >= 2, "`doc.bins` must be >= 2");

  require(std::is_sorted(cfg.qn.n_values.begin(), cfg.qn.n_values.end()) &&
              std::adjacent_find(cfg.qn.n_values.begin(), cfg.qn.n_values.end()) ==
                  cfg.qn.n_values.end(),
          "`qn.n_values` must be strictly ascending");
  for (int n : cfg.qn.n_values)
    require(n >= 0, "`qn.n_values` entries must be >= 0");
  require(cfg.qn.trials_per_n >= 1, "`qn.trials_per_n` must be >= 1");
  require(cfg.qn.max_trials_each >= 1, "`qn.max_trials_each` must be >= 1");

  if (cfg.volumes.training_sets > 0) {
    require(cfg.volumes.probes >= 1, "`volumes.probes` must be >= 1");
    require(cfg.volumes.n >= 0, "`volumes.n` must be >= 0");
    require(!cfg.volumes.epsilons.empty(), "`volumes.epsilons` must be non-empty");
  }

  require(!cfg.bounds.epsilons.empty(), "`bounds.epsilons` must be non-empty");
  for (double e : cfg.bounds.epsilons)
    require(e > 0.0 && e < 1.0, "`bounds.epsilons` entries must lie in (0, 1)");
  for (double a : cfg.bounds.a_values)
    require(a > 1.0, "`bounds.a_values` entries must be > 1");
  for (double g : cfg.bounds.gammas)
    require(g > 0.0, "`bounds.gammas` entries must be > 0");

  require(cfg.workers >= 0, "`workers` must be >= 0");
}

}  // namespace

ConfigValidation validate_config_text(const std::string& text,
                                      const std::string& origin) {
  ConfigValidation result;
  std::istringstream in(text);
  KeyValues kv = parse_key_values(in, origin, result.violations);

  ExperimentConfig cfg;
  Reader r(kv, result.violations);

  r.get_string("name", cfg.name, true);

  std::string kind = "gaussian";
  r.get_string("problem.kind", kind);
  if (kind == "gaussian") {
    cfg.kind = ExperimentConfig::ProblemKind::kGaussian;
  } else if (kind == "mnist") {
    cfg.kind = ExperimentConfig::ProblemKind::kMnist;
  } else {
    r.fail("problem.kind", "must be `gaussian` or `mnist`, got `" + kind + "`");
  }

  r.get_int("problem.dim", cfg.gaussian.dim);
  r.get_double("problem.center_offset", cfg.gaussian.center_offset);
  r.get_double("problem.class_std", cfg.gaussian.class_std);
  r.get_bool("problem.random_labels", cfg.random_labels);
  r.get_i64("problem.test_samples", cfg.test_samples);

  r.get_string("problem.train_images", cfg.mnist.train_images);
  r.get_string("problem.train_labels", cfg.mnist.train_labels);
  r.get_string("problem.test_images", cfg.mnist.test_images);
  r.get_string("problem.test_labels", cfg.mnist.test_labels);
  r.get_int("problem.class_a", cfg.mnist.class_a);
  r.get_int("problem.class_b", cfg.mnist.class_b);
  r.get_i64("problem.train_per_class", cfg.mnist.train_per_class);
  r.get_i64("problem.test_per_class", cfg.mnist.test_per_class);

  r.get_int_list("arch.layer_widths", cfg.arch.layer_widths, true);
  r.get_double("arch.leakiness", cfg.arch.leakiness);

  r.get_i64("doc.samples", cfg.doc.samples);
  r.get_int("doc.bins", cfg.doc.bins);

  r.get_int_list("qn.n_values", cfg.qn.n_values, true);
  r.get_i64("qn.trials_per_n", cfg.qn.trials_per_n);
  r.get_i64("qn.max_trials_each", cfg.qn.max_trials_each);

  r.get_i64("volumes.training_sets", cfg.volumes.training_sets);
  r.get_i64("volumes.probes", cfg.volumes.probes);
  r.get_int("volumes.n", cfg.volumes.n);
  r.get_double_list("volumes.epsilons", cfg.volumes.epsilons);

  r.get_double_list("bounds.epsilons", cfg.bounds.epsilons);
  r.get_double_list("bounds.a_values", cfg.bounds.a_values);
  r.get_double_list("bounds.gammas", cfg.bounds.gammas);

  r.get_u64("seed", cfg.seed);
  r.get_int("workers", cfg.workers);

  for (const auto& [key, value] : kv.values) {
    (void)value;
    if (std::find(kv.used.begin(), kv.used.end(), key) == kv.used.end())
      result.violations.push_back("config: unknown key `" + key + "`");
  }

  validate_semantics(cfg, result.violations);

  if (result.violations.empty()) result.config = std::move(cfg);
  return result;
}

ConfigValidation validate_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ConfigValidation result;
    result.violations.push_back("config: cannot open file: " + path);
    return result;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return validate_config_text(buffer.str(), path);
}

}  // namespace doclab
