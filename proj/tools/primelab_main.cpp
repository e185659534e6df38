// primelab: Mertens-type prime product verification toolkit.
//
// Subcommands: constants, product, scan, delta, avg-gap, coverage,
// coverage-scan. Output is JSON or CSV (--output) with numbers at 17
// significant digits; all randomness flows from --seed.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "primelab/constants.hpp"
#include "primelab/coverage.hpp"
#include "primelab/products.hpp"
#include "primelab/sieve.hpp"
#include "primelab/telescope.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(std::uint64_t v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(unsigned v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

/// Ordered key/value record; values are stored pre-rendered as JSON tokens
/// so one record renders as either a JSON object or a CSV row.
class Record {
 public:
  template <typename T>
  Record& field(const std::string& key, const T& v) {
    keys_.push_back(key);
    values_.push_back(fmt(v));
    return *this;
  }
  Record& field(const std::string& key, const std::string& v) {
    keys_.push_back(key);
    values_.push_back("\"" + v + "\"");
    return *this;
  }
  Record& raw(const std::string& key, const std::string& json_value) {
    keys_.push_back(key);
    values_.push_back(json_value);
    return *this;
  }

  std::string json() const {
    std::string out = "{";
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      if (i) out += ",";
      out += "\"" + keys_[i] + "\":" + values_[i];
    }
    return out + "}";
  }

  std::string csv_header() const {
    std::string out;
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      if (i) out += ",";
      out += keys_[i];
    }
    return out;
  }

  std::string csv_row() const {
    std::string out;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (i) out += ",";
      out += csv_cell(values_[i]);
    }
    return out;
  }

 private:
  static std::string csv_cell(const std::string& json_value) {
    std::string v = json_value;
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
      v = v.substr(1, v.size() - 2);  // bare strings in CSV
    }
    if (v.find(',') == std::string::npos && v.find('"') == std::string::npos) {
      return v;
    }
    std::string quoted = "\"";
    for (char ch : v) {
      if (ch == '"') quoted += '"';
      quoted += ch;
    }
    return quoted + "\"";
  }

  std::vector<std::string> keys_;
  std::vector<std::string> values_;
};

struct OutputOptions {
  std::string format;  // "json", "csv", or "" = subcommand default
  std::string out_path;
  bool manifest = false;
};

std::string render(const OutputOptions& opt, const std::string& default_format,
                   const std::vector<Record>& rows,
                   const std::string& manifest_body, bool scalar) {
  const std::string format = opt.format.empty() ? default_format : opt.format;
  std::string body;
  if (format == "json") {
    std::string payload;
    if (scalar && rows.size() == 1) {
      payload = rows.front().json();
    } else {
      payload = "[";
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i) payload += ",";
        payload += rows[i].json();
      }
      payload += "]";
    }
    if (opt.manifest) {
      body = "{\"manifest\":" + manifest_body + ",\"result\":" + payload + "}";
    } else {
      body = payload;
    }
    body += "\n";
  } else {
    if (opt.manifest) body += "# manifest: " + manifest_body + "\n";
    if (!rows.empty()) {
      body += rows.front().csv_header() + "\n";
      for (const auto& r : rows) body += r.csv_row() + "\n";
    }
  }
  return body;
}

void emit(const OutputOptions& opt, const std::string& body) {
  if (opt.out_path.empty()) {
    std::cout << body;
  } else {
    std::ofstream f(opt.out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + opt.out_path);
    f << body;
  }
}

std::string manifest_json(
    const std::string& subcommand,
    const std::vector<std::pair<std::string, std::string>>& params) {
  Record p;
  for (const auto& [k, v] : params) p.raw(k, v);
  Record m;
  m.field("tool", std::string("primelab"));
  m.field("version", std::string(kVersion));
  m.field("subcommand", subcommand);
  m.raw("params", p.json());
  return m.json();
}

std::vector<double> parse_real_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

std::vector<std::string> parse_name_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

std::vector<std::uint64_t> parse_int_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const auto& t : parse_name_list(s)) out.push_back(std::stoull(t));
  return out;
}

std::string json_int_array(const std::vector<std::uint64_t>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out + "]";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mertens-type prime product and residue coverage toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  OutputOptions out;
  unsigned threads = 1;
  std::uint64_t seed = 0;
  app.add_option("--output", out.format, "Output format (default per subcommand)")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", out.out_path, "Write output to a file");
  app.add_option("--threads", threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  app.add_option("--seed", seed, "Seed for randomized strategies")
      ->capture_default_str();
  app.add_flag("--manifest", out.manifest, "Emit run metadata with the result");

  // Global flags may trail the subcommand, e.g. `product --x 11 --out r.json`.
  auto sub = [&app](const std::string& name, const std::string& desc) {
    auto* cmd = app.add_subcommand(name, desc);
    cmd->fallthrough();
    return cmd;
  };

  // constants
  auto* cmd_constants = sub("constants", "Compute M1, S, C2~");
  std::uint64_t truncation = primelab::kDefaultConstantTruncation;
  cmd_constants->add_option("--truncation", truncation,
                            "Prime sum truncation bound")
      ->capture_default_str();

  // product
  auto* cmd_product = sub("product", "Evaluate prod (1 - c/p)");
  double px = 0.0, pc = 2.0;
  bool inclusive = false;
  cmd_product->add_option("--x", px, "Truncation point")->required();
  cmd_product->add_option("--c", pc, "Numerator constant")->capture_default_str();
  cmd_product->add_flag("--inclusive", inclusive,
                        "Include a prime equal to x (default strict p < x)");

  // scan
  auto* cmd_scan = sub("scan", "Ratio scan P(x)(ln x)^c / C");
  std::string scan_xs;
  double scan_c = 2.0, scan_C = -1.0;
  cmd_scan->add_option("--xs", scan_xs, "Comma list of truncation points")
      ->required();
  cmd_scan->add_option("--c", scan_c, "Numerator constant")->capture_default_str();
  cmd_scan->add_option("--C", scan_C,
                       "Asymptotic scale; omit to fit from the largest x");

  // delta
  auto* cmd_delta = sub("delta", "Fixed-gap telescoping scan");
  cmd_delta->set_help_flag("--help", "Print help");  // frees -h for the gap
  std::uint64_t delta_limit = 0;
  std::int64_t delta_h = 2;
  double delta_c2 = 0.0;
  std::uint64_t delta_c2_truncation = 100'000'000;
  cmd_delta->add_option("--limit", delta_limit, "Bound on p_hi^2")->required();
  cmd_delta->add_option("--h", delta_h, "Prime gap")->capture_default_str();
  cmd_delta->add_option("--c2", delta_c2,
                        "C2~ override; omit to compute it first");
  cmd_delta->add_option("--c2-truncation", delta_c2_truncation,
                        "Truncation used when computing C2~")
      ->capture_default_str();

  // avg-gap
  auto* cmd_avg = sub("avg-gap", "Unrestricted-gap comparison");
  std::uint64_t avg_limit = 0;
  double avg_c2 = 0.0;
  cmd_avg->add_option("--limit", avg_limit, "Bound on p_hi^2")->required();
  cmd_avg->add_option("--c2", avg_c2, "C2~ override; omit to compute it first");

  // coverage
  auto* cmd_cov = sub("coverage", "Single-pair residue coverage");
  std::uint64_t cov_pk = 0;
  std::string cov_strategy = "greedy";
  std::string cov_parity = "all";
  bool cov_include_two = false;
  std::uint64_t cov_budget = 1'000'000;
  cmd_cov->add_option("--pk", cov_pk, "Lower prime of the pair")->required();
  cmd_cov->add_option("--strategy", cov_strategy, "Residue strategy")
      ->check(CLI::IsMember({"greedy", "random", "fixed", "exhaustive"}))
      ->capture_default_str();
  cmd_cov->add_option("--parity", cov_parity, "Count all or odd integers")
      ->check(CLI::IsMember({"all", "odd"}))
      ->capture_default_str();
  cmd_cov->add_flag("--include-two", cov_include_two,
                    "Add p = 2 with a single residue class");
  cmd_cov->add_option("--budget", cov_budget,
                      "Combination budget for the exhaustive strategy")
      ->capture_default_str();

  // coverage-scan
  auto* cmd_cscan = sub("coverage-scan", "Coverage scan over consecutive pairs");
  std::uint64_t cscan_limit = 0;
  std::string cscan_strategies = "greedy";
  std::string cscan_seeds = "1";
  std::string cscan_parity = "all";
  cmd_cscan->add_option("--limit", cscan_limit, "Bound on p_hi^2")->required();
  cmd_cscan->add_option("--strategies", cscan_strategies,
                        "Comma list: greedy,random,fixed")
      ->capture_default_str();
  cmd_cscan->add_option("--seeds", cscan_seeds, "Comma list of seeds for random")
      ->capture_default_str();
  cmd_cscan->add_option("--parity", cscan_parity, "Count all or odd integers")
      ->check(CLI::IsMember({"all", "odd"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  primelab::FoldOptions fold{threads, primelab::kDefaultSegmentSize};

  try {
    std::string body;

    if (*cmd_constants) {
      auto bundle = primelab::c2_tilde(truncation, fold);
      Record r;
      r.field("m1", bundle.m1)
          .field("s", bundle.s)
          .field("c2_tilde", bundle.c2_tilde)
          .field("digits", bundle.digits);
      body = render(out, "json", {r},
                    manifest_json("constants",
                                  {{"truncation", fmt(truncation)},
                                   {"threads", fmt(threads)}}),
                    true);
    } else if (*cmd_product) {
      const double xs[] = {px};
      auto acc = primelab::product_log_scan(xs, pc, inclusive, fold).front();
      Record r;
      r.field("value", std::exp(acc.log_value))
          .field("log_value", acc.log_value)
          .field("terms", acc.terms);
      body = render(out, "json", {r},
                    manifest_json("product", {{"x", fmt(px)},
                                              {"c", fmt(pc)},
                                              {"inclusive", fmt(inclusive)}}),
                    true);
    } else if (*cmd_scan) {
      auto xs = parse_real_list(scan_xs);
      auto fit = primelab::asymptotic_ratio_scan(xs, scan_c, scan_C, fold);
      std::vector<Record> rows;
      for (std::size_t i = 0; i < fit.xs.size(); ++i) {
        Record r;
        r.field("x", fit.xs[i])
            .field("value", fit.values[i])
            .field("ratio", fit.ratios[i])
            .field("ln_x", std::log(fit.xs[i]));
        rows.push_back(r);
      }
      body = render(out, "csv", rows,
                    manifest_json("scan", {{"c", fmt(scan_c)},
                                           {"C", fmt(fit.scale)},
                                           {"residual_slope", fmt(fit.residual_slope)},
                                           {"xs", "\"" + scan_xs + "\""}}),
                    false);
    } else if (*cmd_delta) {
      const double c2 =
          delta_c2 > 0.0
              ? delta_c2
              : primelab::c2_tilde(delta_c2_truncation, fold).c2_tilde;
      auto records = primelab::delta_scan(delta_limit, delta_h, c2, fold);
      std::vector<Record> rows;
      for (const auto& rec : records) {
        Record r;
        r.field("p_lo", rec.pair.p_lo)
            .field("p_hi", rec.pair.p_hi)
            .field("delta_exact", rec.delta_exact)
            .field("main_term", rec.main_term)
            .field("ratio", rec.ratio);
        rows.push_back(r);
      }
      body = render(out, "csv", rows,
                    manifest_json("delta", {{"limit", fmt(delta_limit)},
                                            {"h", std::to_string(delta_h)},
                                            {"c2", fmt(c2)}}),
                    false);
    } else if (*cmd_avg) {
      const double c2 = avg_c2 > 0.0
                            ? avg_c2
                            : primelab::c2_tilde(100'000'000, fold).c2_tilde;
      auto s = primelab::average_gap_comparison(avg_limit, c2, fold);
      Record r;
      r.field("pairs", s.pairs)
          .field("mean_delta_log_over_p", s.mean_delta_log_over_p)
          .field("mean_delta_log2_over_p", s.mean_delta_log2_over_p)
          .field("mean_gap_over_log_top_decade", s.mean_gap_over_log_top_decade);
      body = render(out, "json", {r},
                    manifest_json("avg-gap", {{"limit", fmt(avg_limit)},
                                              {"c2", fmt(c2)}}),
                    true);
    } else if (*cmd_cov) {
      // pair (pk, next prime)
      auto primes = primelab::primes_up_to(2 * cov_pk + 200);
      primelab::GapPair pair{};
      for (std::size_t i = 0; i + 1 < primes.size(); ++i) {
        if (primes[i] == cov_pk) {
          pair = {primes[i], primes[i + 1], primes[i + 1] - primes[i]};
          break;
        }
      }
      if (pair.p_lo == 0) throw std::invalid_argument("--pk must be prime");
      const auto parity = cov_parity == "odd" ? primelab::Parity::odd_only
                                              : primelab::Parity::all;
      primelab::CoverageExperiment e;
      std::optional<std::uint64_t> exhaustive_min;
      if (cov_strategy == "greedy") {
        e = primelab::greedy_adversary(pair, parity, cov_include_two);
      } else if (cov_strategy == "random") {
        e = primelab::random_choices(pair, parity, seed, cov_include_two);
      } else if (cov_strategy == "fixed") {
        e = primelab::fixed_choices(pair, parity, 0, 1, cov_include_two);
      } else {
        auto [mn, witness] = primelab::exhaustive_min_uncovered(
            pair, parity, cov_budget, cov_include_two);
        exhaustive_min = mn;
        e = witness;
      }
      auto result = primelab::survivors(e);
      Record r;
      r.field("p_lo", pair.p_lo).field("p_hi", pair.p_hi);
      r.field("lo", e.lo).field("hi", e.hi);
      r.field("strategy", cov_strategy).field("parity", cov_parity);
      r.field("uncovered_count", result.uncovered_count);
      r.field("covered_fraction", result.covered_fraction);
      r.field("predicted_fraction", result.predicted_fraction);
      r.field("predicted_count", result.predicted_count);
      if (exhaustive_min) r.field("min_uncovered", *exhaustive_min);
      r.raw("uncovered", json_int_array(result.uncovered));
      std::string choices = "[";
      for (std::size_t i = 0; i < e.choices.size(); ++i) {
        if (i) choices += ",";
        choices += Record()
                       .field("p", e.choices[i].p)
                       .field("r1", e.choices[i].r1)
                       .field("r2", e.choices[i].r2)
                       .json();
      }
      choices += "]";
      r.raw("choices", choices);
      body = render(out, "json", {r},
                    manifest_json("coverage",
                                  {{"pk", fmt(cov_pk)},
                                   {"strategy", "\"" + cov_strategy + "\""},
                                   {"seed", fmt(seed)}}),
                    true);
    } else if (*cmd_cscan) {
      const auto parity = cscan_parity == "odd" ? primelab::Parity::odd_only
                                                : primelab::Parity::all;
      auto scan_rows = primelab::existence_scan(
          cscan_limit, parse_name_list(cscan_strategies),
          parse_int_list(cscan_seeds), parity);
      std::vector<Record> rows;
      for (const auto& row : scan_rows) {
        Record r;
        r.field("p_lo", row.p_lo)
            .field("p_hi", row.p_hi)
            .field("strategy", row.strategy)
            .field("seed", row.seed)
            .field("uncovered", row.uncovered)
            .field("predicted", row.predicted)
            .raw("flagged", row.flagged ? "1" : "0");
        rows.push_back(r);
      }
      body = render(out, "csv", rows,
                    manifest_json("coverage-scan",
                                  {{"limit", fmt(cscan_limit)},
                                   {"strategies", "\"" + cscan_strategies + "\""},
                                   {"seeds", "\"" + cscan_seeds + "\""}}),
                    false);
    }

    emit(out, body);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
