#include "specdec/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "specdec/errors.hpp"
#include "specdec/session.hpp"
#include "specdec/tree.hpp"

namespace specdec {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void config_fail(const std::string& where, const std::string& what) {
  throw ConfigError("config: " + where + ": " + what);
}

json require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    config_fail(where, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

std::filesystem::path resolve(const std::filesystem::path& p,
                              const std::filesystem::path& base) {
  return p.is_absolute() ? p : base / p;
}

ModelSpec parse_model(const json& j, const std::string& where) {
  ModelSpec spec;
  const std::string kind = require(j, "kind", where).get<std::string>();
  if (kind == "kgram") {
    spec.kind = ModelSpec::Kind::kKgram;
    spec.corpus = require(j, "corpus", where).get<std::string>();
    spec.k = j.value("k", spec.k);
    spec.lambda = j.value("lambda", spec.lambda);
  } else if (kind == "kgram_snapshot") {
    spec.kind = ModelSpec::Kind::kKgramSnapshot;
    spec.snapshot = require(j, "path", where).get<std::string>();
  } else if (kind == "oracle") {
    spec.kind = ModelSpec::Kind::kOracle;
    spec.oracle_seed = require(j, "oracle_seed", where).get<std::uint64_t>();
    spec.concentration = j.value("concentration", spec.concentration);
  } else {
    config_fail(where, "unknown model kind '" + kind + "'");
  }
  return spec;
}

TransformParams parse_transform_params(const json& j) {
  TransformParams params;
  params.separator = j.value("separator", params.separator);
  params.summary_len = j.value("summary_len", params.summary_len);
  params.pool_stride = j.value("pool_stride", params.pool_stride);
  return params;
}

WeightPolicy parse_policy(const json& j, const std::string& where) {
  const std::string kind = require(j, "kind", where).get<std::string>();
  if (kind == "grid") return WeightPolicy::grid(j.value("n", 10));
  if (kind == "softmax") return WeightPolicy::softmax(j.value("tau", 1.0));
  if (kind == "adaboost") return WeightPolicy::adaboost(j.value("c", 1.0));
  if (kind == "fixed") {
    const auto w = require(j, "weights", where).get<std::vector<double>>();
    return WeightPolicy::fixed(WeightVector(w));
  }
  config_fail(where, "unknown policy kind '" + kind + "'");
}

SelectionCriterion parse_criterion(const std::string& name, const std::string& where) {
  if (name == "soft_kl") return SelectionCriterion::kSoftKl;
  if (name == "soft_tvd") return SelectionCriterion::kSoftTvd;
  if (name == "hard_match") return SelectionCriterion::kHardMatch;
  config_fail(where, "unknown criterion '" + name + "'");
}

std::size_t parse_window(const json& j, const std::string& where) {
  if (j.is_string()) {
    if (j.get<std::string>() == "all") return kWindowAll;
    config_fail(where, "window must be a positive integer or \"all\"");
  }
  const auto w = j.get<long long>();
  if (w < 1) config_fail(where, "window must be >= 1");
  return static_cast<std::size_t>(w);
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: not valid JSON: ") + e.what());
  }
  try {
    ExperimentConfig cfg;
    cfg.base_dir = base_dir;
    const int version = j.value("schema_version", 1);
    if (version != 1) {
      config_fail("schema_version", "unsupported version " + std::to_string(version));
    }
    cfg.scenario = require(j, "scenario", "top level").get<std::string>();
    cfg.method = require(j, "method", "top level").get<std::string>();
    cfg.seed = require(j, "seed", "top level").get<std::uint64_t>();
    cfg.vocab_size = require(j, "vocab_size", "top level").get<int>();
    if (cfg.vocab_size < 1) config_fail("vocab_size", "must be >= 1");

    cfg.target = parse_model(require(j, "target", "top level"), "target");

    const json sources = require(j, "sources", "top level");
    if (!sources.is_array() || sources.empty()) {
      config_fail("sources", "must be a non-empty array");
    }
    for (const json& js : sources) {
      SourceSpec src;
      src.name = require(js, "name", "sources[]").get<std::string>();
      src.model = parse_model(require(js, "model", "sources[]"), "sources[].model");
      if (js.contains("transform")) {
        const json jt = js.at("transform");
        src.transform = transform_kind_from_string(
            require(jt, "kind", "sources[].transform").get<std::string>());
        src.transform_params = parse_transform_params(jt);
      }
      cfg.sources.push_back(std::move(src));
    }

    const json jd = require(j, "drafting", "top level");
    const std::string dtype = require(jd, "type", "drafting").get<std::string>();
    if (dtype == "single") {
      cfg.drafting.type = DraftingSpec::Type::kSingle;
      cfg.drafting.source = require(jd, "source", "drafting").get<std::string>();
      const bool known =
          std::any_of(cfg.sources.begin(), cfg.sources.end(),
                      [&](const SourceSpec& s) { return s.name == cfg.drafting.source; });
      if (!known) config_fail("drafting.source", "no source named '" + cfg.drafting.source + "'");
    } else if (dtype == "tabed") {
      cfg.drafting.type = DraftingSpec::Type::kTabed;
      cfg.drafting.policy = parse_policy(require(jd, "policy", "drafting"), "drafting.policy");
      if (jd.contains("criterion")) {
        cfg.drafting.criterion =
            parse_criterion(jd.at("criterion").get<std::string>(), "drafting.criterion");
      }
      if (jd.contains("window")) {
        cfg.drafting.window = parse_window(jd.at("window"), "drafting.window");
      }
      if (cfg.drafting.policy.kind == WeightPolicy::Kind::kGrid && cfg.sources.size() != 2) {
        config_fail("drafting", "grid policy needs exactly 2 sources");
      }
    } else {
      config_fail("drafting.type", "must be 'single' or 'tabed'");
    }

    if (j.contains("verification")) {
      const json jv = j.at("verification");
      const std::string vkind = require(jv, "kind", "verification").get<std::string>();
      if (vkind == "linear") {
        cfg.verification.kind = VerificationSpec::Kind::kLinear;
      } else if (vkind == "tree") {
        cfg.verification.kind = VerificationSpec::Kind::kTree;
        cfg.verification.tree_width = jv.value("width", 2);
        if (cfg.verification.tree_width < 1) config_fail("verification.width", "must be >= 1");
      } else {
        config_fail("verification.kind", "must be 'linear' or 'tree'");
      }
    }

    if (j.contains("decode")) {
      const json jdec = j.at("decode");
      cfg.decode.gamma = jdec.value("gamma", cfg.decode.gamma);
      cfg.decode.max_new_tokens = jdec.value("max_new_tokens", cfg.decode.max_new_tokens);
      if (jdec.contains("mode")) {
        const std::string mode = jdec.at("mode").get<std::string>();
        if (mode == "greedy") {
          cfg.decode.mode = DecodeMode::kGreedy;
        } else if (mode == "stochastic") {
          cfg.decode.mode = DecodeMode::kStochastic;
        } else {
          config_fail("decode.mode", "must be 'greedy' or 'stochastic'");
        }
      }
      if (jdec.contains("eos_token") && !jdec.at("eos_token").is_null()) {
        cfg.decode.eos_token = jdec.at("eos_token").get<TokenId>();
      }
      if (cfg.decode.gamma < 1) config_fail("decode.gamma", "must be >= 1");
      if (cfg.decode.max_new_tokens < 1) config_fail("decode.max_new_tokens", "must be >= 1");
    }
    if (cfg.verification.kind == VerificationSpec::Kind::kTree &&
        cfg.decode.mode != DecodeMode::kGreedy) {
      config_fail("verification", "tree verification requires greedy decode mode");
    }

    if (j.contains("prompts")) {
      const json jp = j.at("prompts");
      const std::string pkind = require(jp, "kind", "prompts").get<std::string>();
      if (pkind == "corpus_lines") {
        cfg.prompts.kind = PromptSpec::Kind::kCorpusLines;
        cfg.prompts.path = require(jp, "path", "prompts").get<std::string>();
        cfg.prompts.prefix_tokens = jp.value("prefix_tokens", cfg.prompts.prefix_tokens);
        if (cfg.prompts.prefix_tokens < 1) config_fail("prompts.prefix_tokens", "must be >= 1");
      } else if (pkind == "random") {
        cfg.prompts.kind = PromptSpec::Kind::kRandom;
        cfg.prompts.text_length = jp.value("text_length", cfg.prompts.text_length);
        if (cfg.prompts.text_length < 0) config_fail("prompts.text_length", "must be >= 0");
      } else {
        config_fail("prompts.kind", "must be 'corpus_lines' or 'random'");
      }
      cfg.prompts.count = jp.value("count", cfg.prompts.count);
      cfg.prompts.visual_length = jp.value("visual_length", cfg.prompts.visual_length);
      if (cfg.prompts.count < 1) config_fail("prompts.count", "must be >= 1");
      if (cfg.prompts.visual_length < 0) config_fail("prompts.visual_length", "must be >= 0");
    }

    if (j.contains("latency")) {
      const json jl = j.at("latency");
      if (jl.contains("ratio")) {
        cfg.latency_ratio = jl.at("ratio").get<double>();
        if (!(cfg.latency_ratio > 0.0)) config_fail("latency.ratio", "must be > 0");
      } else if (jl.contains("preset")) {
        const auto pair = jl.at("preset").get<std::vector<std::string>>();
        if (pair.size() != 2) config_fail("latency.preset", "expected [target, draft]");
        cfg.latency_ratio = LatencyModel::preset(pair[0], pair[1]).ratio;
      } else {
        config_fail("latency", "expected 'ratio' or 'preset'");
      }
    }

    if (j.contains("output")) {
      const json jo = j.at("output");
      cfg.summary_filename = jo.value("summary", cfg.summary_filename);
      cfg.weights_filename = jo.value("weights_csv", cfg.weights_filename);
    }
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str(), path.parent_path());
}

std::shared_ptr<const SequenceModel> build_model(const ModelSpec& spec, int vocab_size,
                                                 const std::filesystem::path& base_dir) {
  switch (spec.kind) {
    case ModelSpec::Kind::kKgram: {
      const auto corpus = load_corpus(resolve(spec.corpus, base_dir));
      return std::make_shared<KgramModel>(
          train_kgram(corpus, spec.k, spec.lambda, vocab_size));
    }
    case ModelSpec::Kind::kKgramSnapshot: {
      auto model = std::make_shared<KgramModel>(
          KgramModel::load(resolve(spec.snapshot, base_dir)));
      if (model->vocab_size() != vocab_size) {
        throw ConfigError("snapshot vocab_size " + std::to_string(model->vocab_size()) +
                          " does not match experiment vocab_size " +
                          std::to_string(vocab_size));
      }
      return model;
    }
    case ModelSpec::Kind::kOracle:
      return std::make_shared<SyntheticOracle>(spec.oracle_seed, spec.concentration,
                                               vocab_size);
  }
  throw ConfigError("unknown model kind");
}

std::vector<Context> build_prompts(const PromptSpec& spec, int vocab_size,
                                   std::uint64_t seed,
                                   const std::filesystem::path& base_dir) {
  std::vector<Context> prompts;
  const Rng root(seed);
  auto random_tokens = [&](Rng& rng, int n) {
    std::vector<TokenId> tokens;
    tokens.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      tokens.push_back(static_cast<TokenId>(rng.next_u64() %
                                            static_cast<std::uint64_t>(vocab_size)));
    }
    return tokens;
  };

  if (spec.kind == PromptSpec::Kind::kCorpusLines) {
    const auto docs = load_corpus(resolve(spec.path, base_dir));
    std::vector<std::vector<TokenId>> usable;
    for (const auto& doc : docs) {
      if (!doc.empty()) usable.push_back(doc);
    }
    if (static_cast<int>(usable.size()) < spec.count) {
      throw ConfigError("prompt corpus has " + std::to_string(usable.size()) +
                        " non-empty lines, need " + std::to_string(spec.count));
    }
    for (int i = 0; i < spec.count; ++i) {
      std::vector<TokenId> text = usable[static_cast<std::size_t>(i)];
      if (static_cast<int>(text.size()) > spec.prefix_tokens) {
        text.resize(static_cast<std::size_t>(spec.prefix_tokens));
      }
      for (TokenId t : text) {
        if (t >= vocab_size) {
          throw ConfigError("prompt token " + std::to_string(t) +
                            " outside vocab of size " + std::to_string(vocab_size));
        }
      }
      Context ctx;
      if (spec.visual_length > 0) {
        Rng rng = root.fork(0x5eedu + static_cast<std::uint64_t>(i));
        ctx.segments.push_back({SegmentTag::kVisual, random_tokens(rng, spec.visual_length)});
      }
      ctx.segments.push_back({SegmentTag::kText, std::move(text)});
      prompts.push_back(std::move(ctx));
    }
    return prompts;
  }

  for (int i = 0; i < spec.count; ++i) {
    Rng rng = root.fork(0x5eedu + static_cast<std::uint64_t>(i));
    Context ctx;
    if (spec.visual_length > 0) {
      ctx.segments.push_back({SegmentTag::kVisual, random_tokens(rng, spec.visual_length)});
    }
    ctx.segments.push_back({SegmentTag::kText, random_tokens(rng, spec.text_length)});
    prompts.push_back(std::move(ctx));
  }
  return prompts;
}

RunReport run_experiment(const ExperimentConfig& cfg) {
  const auto target = build_model(cfg.target, cfg.vocab_size, cfg.base_dir);

  std::vector<DraftSource> sources;
  sources.reserve(cfg.sources.size());
  for (const SourceSpec& spec : cfg.sources) {
    sources.push_back(DraftSource{
        spec.name, build_model(spec.model, cfg.vocab_size, cfg.base_dir),
        make_transform(spec.transform, spec.transform_params)});
  }

  const std::vector<Context> prompts =
      build_prompts(cfg.prompts, cfg.vocab_size, cfg.seed, cfg.base_dir);

  RunReport report;
  report.scenario = cfg.scenario;
  report.method = cfg.method;
  report.gamma = cfg.decode.gamma;
  report.verification =
      cfg.verification.kind == VerificationSpec::Kind::kTree ? "tree" : "linear";
  report.tree_width =
      cfg.verification.kind == VerificationSpec::Kind::kTree ? cfg.verification.tree_width : 1;
  report.seed = cfg.seed;
  report.latency_ratio = cfg.latency_ratio;

  std::vector<RunRecords> all_records;
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    DecodeConfig dc = cfg.decode;
    dc.seed = hash_combine(cfg.seed, 0xb10c0000u + static_cast<std::uint64_t>(i));

    DecodeResult result = [&] {
      if (cfg.drafting.type == DraftingSpec::Type::kSingle) {
        const auto it = std::find_if(
            sources.begin(), sources.end(),
            [&](const DraftSource& s) { return s.name == cfg.drafting.source; });
        if (cfg.verification.kind == VerificationSpec::Kind::kLinear) {
          return decode_session(*target, *it, prompts[i], dc);
        }
        TreeSessionOptions topts;
        topts.width = cfg.verification.tree_width;
        return tree_session(*target, {*it}, prompts[i], dc, topts);
      }
      TabedOptions opts;
      opts.policy = cfg.drafting.policy;
      opts.criterion = cfg.drafting.criterion;
      opts.window = cfg.drafting.window;
      if (cfg.verification.kind == VerificationSpec::Kind::kLinear) {
        return tabed_session(*target, sources, prompts[i], dc, opts);
      }
      TreeSessionOptions topts;
      topts.width = cfg.verification.tree_width;
      topts.tabed = opts;
      return tree_session(*target, sources, prompts[i], dc, topts);
    }();

    PromptReport pr;
    pr.prompt_index = static_cast<int>(i);
    pr.tokens_generated = static_cast<int>(result.tokens.size());
    pr.block_efficiency = block_efficiency(result.records);
    pr.records = std::move(result.records);
    all_records.push_back(pr.records);
    report.prompts.push_back(std::move(pr));
  }

  report.block_efficiency = block_efficiency(all_records);
  report.modeled_speedup = expected_speedup(report.block_efficiency, report.gamma,
                                            LatencyModel::from_ratio(report.latency_ratio));
  return report;
}

std::string summary_to_json(const RunReport& report) {
  ordered_json j;
  j["schema_version"] = report.schema_version;
  j["scenario"] = report.scenario;
  j["method"] = report.method;
  j["gamma"] = report.gamma;
  j["verification"] = report.verification;
  j["tree_width"] = report.tree_width;
  j["seed"] = report.seed;
  j["latency_ratio"] = report.latency_ratio;
  j["block_efficiency"] = report.block_efficiency;
  j["modeled_speedup"] = report.modeled_speedup;
  auto& prompts = j["prompts"] = ordered_json::array();
  for (const PromptReport& pr : report.prompts) {
    ordered_json jp;
    jp["prompt_index"] = pr.prompt_index;
    jp["tokens_generated"] = pr.tokens_generated;
    jp["block_efficiency"] = pr.block_efficiency;
    auto& blocks = jp["blocks"] = ordered_json::array();
    for (const BlockRecord& b : pr.records.blocks) {
      ordered_json jb;
      jb["start_position"] = b.start_position;
      jb["accepted_count"] = b.accepted_count;
      jb["tokens_emitted"] = b.tokens_emitted;
      jb["weights"] = b.weight_used.weights();
      blocks.push_back(std::move(jb));
    }
    prompts.push_back(std::move(jp));
  }
  return j.dump(2) + "\n";
}

std::string weights_to_csv(const RunReport& report) {
  int m = 1;
  for (const PromptReport& pr : report.prompts) {
    if (!pr.records.blocks.empty()) {
      m = pr.records.blocks.front().weight_used.m();
      break;
    }
  }
  std::ostringstream os;
  os << "block_index,position";
  for (int i = 0; i < m; ++i) os << ",w_" << i;
  os << ",accepted_count\n";
  int block_index = 0;
  for (const PromptReport& pr : report.prompts) {
    for (const BlockRecord& b : pr.records.blocks) {
      os << block_index++ << ',' << b.start_position;
      for (int i = 0; i < m; ++i) os << ',' << format_double(b.weight_used[i]);
      os << ',' << b.accepted_count << '\n';
    }
  }
  return os.str();
}

void write_run_outputs(const RunReport& report, const ExperimentConfig& cfg,
                       const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output dir " + out_dir.string());
  const auto write_file = [&](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
  };
  write_file(out_dir / cfg.summary_filename, summary_to_json(report));
  write_file(out_dir / cfg.weights_filename, weights_to_csv(report));
}

RunReport load_summary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open summary " + path.string());
  json j;
  try {
    in >> j;
    RunReport report;
    report.schema_version = j.at("schema_version").get<int>();
    if (report.schema_version != 1) {
      throw ConfigError("summary " + path.string() + ": unsupported schema_version");
    }
    report.scenario = j.at("scenario").get<std::string>();
    report.method = j.at("method").get<std::string>();
    report.gamma = j.at("gamma").get<int>();
    report.verification = j.at("verification").get<std::string>();
    report.tree_width = j.at("tree_width").get<int>();
    report.seed = j.at("seed").get<std::uint64_t>();
    report.latency_ratio = j.at("latency_ratio").get<double>();
    report.block_efficiency = j.at("block_efficiency").get<double>();
    report.modeled_speedup = j.at("modeled_speedup").get<double>();
    for (const json& jp : j.at("prompts")) {
      PromptReport pr;
      pr.prompt_index = jp.at("prompt_index").get<int>();
      pr.tokens_generated = jp.at("tokens_generated").get<int>();
      pr.block_efficiency = jp.at("block_efficiency").get<double>();
      pr.records.config.gamma = report.gamma;
      for (const json& jb : jp.at("blocks")) {
        BlockRecord b;
        b.start_position = jb.at("start_position").get<int>();
        b.accepted_count = jb.at("accepted_count").get<int>();
        b.tokens_emitted = jb.at("tokens_emitted").get<int>();
        b.weight_used = WeightVector(jb.at("weights").get<std::vector<double>>());
        pr.records.blocks.push_back(std::move(b));
      }
      report.prompts.push_back(std::move(pr));
    }
    return report;
  } catch (const json::exception& e) {
    throw ConfigError("summary " + path.string() + ": " + e.what());
  }
}

ComparisonTable compare_report(const std::vector<RunReport>& reports) {
  if (reports.empty()) throw ScenarioMismatch("compare_report: no reports");

  std::set<std::string> scenario_set;
  std::map<std::string, std::map<std::string, const RunReport*>> by_method;
  for (const RunReport& r : reports) {
    scenario_set.insert(r.scenario);
    auto& row = by_method[r.method];
    if (!row.emplace(r.scenario, &r).second) {
      throw ScenarioMismatch("compare_report: duplicate entry for method '" + r.method +
                             "' in scenario '" + r.scenario + "'");
    }
  }
  for (const auto& [method, row] : by_method) {
    if (row.size() != scenario_set.size()) {
      throw ScenarioMismatch("compare_report: method '" + method +
                             "' does not cover every scenario");
    }
  }

  ComparisonTable table;
  table.scenarios.assign(scenario_set.begin(), scenario_set.end());
  for (const auto& [method, row] : by_method) table.methods.push_back(method);

  table.cells.resize(table.methods.size());
  for (std::size_t mi = 0; mi < table.methods.size(); ++mi) {
    for (const std::string& scenario : table.scenarios) {
      const RunReport* r = by_method[table.methods[mi]][scenario];
      ComparisonCell cell;
      cell.block_efficiency = r->block_efficiency;
      cell.modeled_speedup = r->modeled_speedup;
      table.cells[mi].push_back(cell);
    }
  }
  // Competition ranking per scenario: 1 + number of strictly better methods;
  // exact ties share a rank.
  for (std::size_t si = 0; si < table.scenarios.size(); ++si) {
    for (std::size_t mi = 0; mi < table.methods.size(); ++mi) {
      int better = 0;
      for (std::size_t mj = 0; mj < table.methods.size(); ++mj) {
        if (table.cells[mj][si].block_efficiency > table.cells[mi][si].block_efficiency) {
          ++better;
        }
      }
      table.cells[mi][si].rank = better + 1;
    }
  }
  return table;
}

std::string comparison_to_text(const ComparisonTable& table) {
  const auto cell_text = [](const ComparisonCell& c) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f (%d)", c.block_efficiency, c.rank);
    return std::string(buf);
  };
  std::size_t method_width = std::string("method").size();
  for (const std::string& m : table.methods) method_width = std::max(method_width, m.size());

  std::vector<std::size_t> col_width(table.scenarios.size());
  for (std::size_t si = 0; si < table.scenarios.size(); ++si) {
    col_width[si] = table.scenarios[si].size();
    for (std::size_t mi = 0; mi < table.methods.size(); ++mi) {
      col_width[si] = std::max(col_width[si], cell_text(table.cells[mi][si]).size());
    }
  }

  std::ostringstream os;
  os << "block efficiency by scenario, rank in parentheses (1 = best)\n";
  os << std::string(method_width, ' ');
  for (std::size_t si = 0; si < table.scenarios.size(); ++si) {
    os << "  " << table.scenarios[si]
       << std::string(col_width[si] - table.scenarios[si].size(), ' ');
  }
  os << '\n';
  for (std::size_t mi = 0; mi < table.methods.size(); ++mi) {
    os << table.methods[mi]
       << std::string(method_width - table.methods[mi].size(), ' ');
    for (std::size_t si = 0; si < table.scenarios.size(); ++si) {
      const std::string cell = cell_text(table.cells[mi][si]);
      os << "  " << cell << std::string(col_width[si] - cell.size(), ' ');
    }
    os << '\n';
  }
  return os.str();
}

std::string comparison_to_csv(const ComparisonTable& table) {
  std::ostringstream os;
  os << "scenario,method,block_efficiency,modeled_speedup,rank\n";
  for (std::size_t si = 0; si < table.scenarios.size(); ++si) {
    for (std::size_t mi = 0; mi < table.methods.size(); ++mi) {
      const ComparisonCell& c = table.cells[mi][si];
      os << table.scenarios[si] << ',' << table.methods[mi] << ','
         << format_double(c.block_efficiency) << ',' << format_double(c.modeled_speedup)
         << ',' << c.rank << '\n';
    }
  }
  return os.str();
}

std::string comparison_to_json(const ComparisonTable& table) {
  ordered_json j;
  j["schema_version"] = 1;
  j["scenarios"] = table.scenarios;
  j["methods"] = table.methods;
  auto& rows = j["cells"] = ordered_json::array();
  for (std::size_t mi = 0; mi < table.methods.size(); ++mi) {
    ordered_json row = ordered_json::array();
    for (std::size_t si = 0; si < table.scenarios.size(); ++si) {
      const ComparisonCell& c = table.cells[mi][si];
      row.push_back({{"block_efficiency", c.block_efficiency},
                     {"modeled_speedup", c.modeled_speedup},
                     {"rank", c.rank}});
    }
    rows.push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

}  // namespace specdec
