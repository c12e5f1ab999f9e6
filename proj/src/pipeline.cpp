#include "gigmine/pipeline.hpp"

#include <chrono>
#include <ctime>
#include <set>

#include "gigmine/error.hpp"
#include "gigmine/parallel.hpp"
#include "gigmine/version.hpp"

namespace gigmine {

namespace {

class Section {
 public:
  Section(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError("config section '" + display() + "' must be an object");
  }

  template <class T>
  void get(const char* key, T& into) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      into = it->template get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("config key '" + path_ + key + "' has the wrong type");
    }
  }

  template <class T>
  void get_optional(const char* key, std::optional<T>& into) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    if (it->is_null()) {
      into.reset();
      return;
    }
    T v{};
    get(key, v);
    into = v;
  }

  const nlohmann::json* child(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string child_path(const char* key) const { return path_ + key + "."; }

  void finish() const {
    for (const auto& [k, _] : j_.items())
      if (!seen_.contains(k)) throw ConfigError("unknown config key '" + path_ + k + "'");
  }

 private:
  std::string display() const { return path_.empty() ? "<root>" : path_.substr(0, path_.size() - 1); }

  const nlohmann::json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

ModelKind parse_model(const std::string& s) {
  for (auto m : {ModelKind::baseline, ModelKind::logreg, ModelKind::logreg_svd})
    if (model_name(m) == s) return m;
  throw ConfigError("config key 'task1.models' has unknown model '" + s + "' (expected Baseline, LR or LR+SVD)");
}

Protocol parse_protocol(const std::string& s) {
  for (auto p : {Protocol::forecasting, Protocol::prediction})
    if (protocol_tag(p) == s) return p;
  throw ConfigError("config key 'task1.protocols' has unknown protocol '" + s + "' (expected FCST or PRED)");
}

void read_task1(const nlohmann::json& j, Task1Config& t) {
  Section s(j, "task1.");
  s.get("c_grid", t.c_grid);
  s.get("k_grid", t.k_grid);
  s.get("splits", t.splits);
  s.get("folds", t.folds);
  s.get("test_fraction", t.test_fraction);
  s.get("threshold", t.threshold);
  s.get("gtol", t.solver.gtol);
  s.get("max_iter", t.solver.max_iter);
  s.get("memory", t.solver.memory);
  std::vector<std::string> models, protocols;
  s.get("models", models);
  s.get("protocols", protocols);
  if (!models.empty()) {
    t.models.clear();
    for (const auto& m : models) t.models.push_back(parse_model(m));
  }
  if (!protocols.empty()) {
    t.protocols.clear();
    for (const auto& p : protocols) t.protocols.push_back(parse_protocol(p));
  }
  s.finish();
}

void read_task2(const nlohmann::json& j, Task2Config& t) {
  Section s(j, "task2.");
  s.get("train_end_year", t.temporal.train_end_year);
  s.get("test_years", t.temporal.test_years);
  s.get("core_k", t.temporal.core_k);
  s.get("hidden_fraction", t.hidden_fraction);
  s.get("random_splits", t.random_splits);
  s.get("svd_k", t.svd_k);
  s.get("walks_per_node", t.walks.walks_per_node);
  s.get("walk_length", t.walks.length);
  s.get("negatives_per_positive", t.negatives_per_positive);
  s.get("min_negatives", t.min_negatives);
  s.get("exhaustive", t.exhaustive);
  s.get("predictors", t.predictors);
  if (const auto* e = s.child("embedding")) {
    Section es(*e, s.child_path("embedding"));
    es.get("dim", t.embedding.dim);
    es.get("window", t.embedding.window);
    es.get("negative", t.embedding.negative);
    es.get("epochs", t.embedding.epochs);
    es.get("learning_rate", t.embedding.learning_rate);
    es.finish();
  }
  static const std::set<std::string> known{"common_neighbors", "jaccard", "preferential_attachment", "svd",
                                           "node_similarity"};
  for (const auto& p : t.predictors)
    if (!known.contains(p)) throw ConfigError("config key 'task2.predictors' has unknown predictor '" + p + "'");
  s.finish();
}

void read_task3(const nlohmann::json& j, Task3Config& t) {
  Section s(j, "task3.");
  s.get("delta", t.delta);
  s.get_optional("ref_year", t.ref_year);
  s.get("count_scaled", t.count_scaled);
  s.get("alpha", t.birank.alpha);
  s.get("beta", t.birank.beta);
  s.get("tol", t.birank.tol);
  s.get("max_iter", t.birank.max_iter);
  s.get("window_years", t.window_years);
  s.get("top_k", t.top_k);
  s.get("bins", t.bins);
  s.finish();
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void RunConfig::propagate() {
  task1.seed = seed;
  task2.seed = seed;
  task2.temporal.seed = seed;
  const auto n = resolve_threads(threads);
  task1.threads = n;
  task2.threads = n;
  task3.threads = n;
}

RunConfig parse_run_config(const nlohmann::json& j) {
  RunConfig cfg;
  Section s(j, "");
  if (const auto* d = s.child("data")) {
    Section ds(*d, "data.");
    ds.get("events", cfg.data.events);
    ds.get("releases", cfg.data.releases);
    ds.get("labels", cfg.data.labels);
    ds.finish();
  }
  s.get("out", cfg.out);
  s.get("threads", cfg.threads);
  s.get("seed", cfg.seed);
  if (const auto* p = s.child("preprocess")) {
    Section ps(*p, "preprocess.");
    ps.get("min_first_year", cfg.preprocess.min_first_year);
    ps.get("min_events", cfg.preprocess.activity.threshold);
    ps.get("iterative", cfg.preprocess.activity.iterative);
    ps.finish();
  }
  if (const auto* t = s.child("task1")) read_task1(*t, cfg.task1);
  if (const auto* t = s.child("task2")) read_task2(*t, cfg.task2);
  if (const auto* t = s.child("task3")) read_task3(*t, cfg.task3);
  if (const auto* r = s.child("routes")) {
    Section rs(*r, "routes.");
    rs.get("n", cfg.routes.n);
    rs.get("top_k", cfg.routes.top_k);
    rs.finish();
  }
  if (const auto* g = s.child("synth")) {
    try {
      cfg.synth = GenSpec::from_json(*g);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("in 'synth': ") + e.what());
    }
  }
  s.finish();
  return cfg;
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json t1 = cfg.task1.to_json();
  nlohmann::json t1_flat = {{"c_grid", t1["c_grid"]},
                            {"k_grid", t1["k_grid"]},
                            {"splits", cfg.task1.splits},
                            {"folds", cfg.task1.folds},
                            {"test_fraction", cfg.task1.test_fraction},
                            {"threshold", cfg.task1.threshold},
                            {"gtol", cfg.task1.solver.gtol},
                            {"max_iter", cfg.task1.solver.max_iter},
                            {"memory", cfg.task1.solver.memory},
                            {"models", t1["models"]},
                            {"protocols", t1["protocols"]}};
  const auto& t2 = cfg.task2;
  nlohmann::json t2j = {{"train_end_year", t2.temporal.train_end_year},
                        {"test_years", t2.temporal.test_years},
                        {"core_k", t2.temporal.core_k},
                        {"hidden_fraction", t2.hidden_fraction},
                        {"random_splits", t2.random_splits},
                        {"svd_k", t2.svd_k},
                        {"walks_per_node", t2.walks.walks_per_node},
                        {"walk_length", t2.walks.length},
                        {"embedding",
                         {{"dim", t2.embedding.dim},
                          {"window", t2.embedding.window},
                          {"negative", t2.embedding.negative},
                          {"epochs", t2.embedding.epochs},
                          {"learning_rate", t2.embedding.learning_rate}}},
                        {"negatives_per_positive", t2.negatives_per_positive},
                        {"min_negatives", t2.min_negatives},
                        {"exhaustive", t2.exhaustive},
                        {"predictors", t2.predictors}};
  return {{"data", {{"events", cfg.data.events}, {"releases", cfg.data.releases}, {"labels", cfg.data.labels}}},
          {"out", cfg.out},
          {"threads", cfg.threads},
          {"seed", cfg.seed},
          {"preprocess",
           {{"min_first_year", cfg.preprocess.min_first_year},
            {"min_events", cfg.preprocess.activity.threshold},
            {"iterative", cfg.preprocess.activity.iterative}}},
          {"task1", t1_flat},
          {"task2", t2j},
          {"task3", cfg.task3.to_json()},
          {"routes", {{"n", cfg.routes.n}, {"top_k", cfg.routes.top_k}}},
          {"synth", cfg.synth.to_json()}};
}

Prepared prepare(const Corpus& raw, LoadReport report, const PreprocessConfig& cfg) {
  Prepared p;
  p.raw_events = raw.event_count();
  p.raw_artists = raw.artist_count();
  p.raw_venues = raw.venue_count();
  FilterStep first, second;
  auto recent = filter_post_2007(raw, cfg.min_first_year, &first);
  const auto closure = major_closure(recent.labels);
  const auto cps = change_points(recent, closure);
  p.corpus = filter_min_activity(recent, cps, cfg.activity, &second);
  p.labels = label_corpus(p.corpus, closure);
  report.filters = {first, second};
  p.report = std::move(report);
  return p;
}

Prepared load_and_prepare(const RunConfig& cfg) {
  auto loaded = parse_corpus(cfg.data.events, cfg.data.releases, cfg.data.labels);
  return prepare(loaded.corpus, std::move(loaded.report), cfg.preprocess);
}

nlohmann::json report_envelope(const RunConfig& cfg, const std::string& command, nlohmann::json payload) {
  return {{"tool", "gigmine"},
          {"version", kVersion},
          {"git_describe", kGitDescribe},
          {"command", command},
          {"config", to_json(cfg)},
          {"result", std::move(payload)},
          {"generated_at", timestamp_utc()}};
}

nlohmann::json corpus_stats(const Corpus& corpus) {
  std::set<std::string> event_ids;
  int lo = 0, hi = 0;
  for (const auto& ev : corpus.events) {
    event_ids.insert(ev.event_id);
    const int y = year_of(ev.date);
    if (lo == 0 || y < lo) lo = y;
    hi = std::max(hi, y);
  }
  std::set<LabelId> used;
  for (const auto& r : corpus.releases) used.insert(r.label);
  const auto closure = major_closure(corpus.labels);
  std::size_t used_major = 0;
  for (const auto& l : used) used_major += closure.contains(l);
  return {{"concerts", corpus.event_count()},
          {"distinct_event_ids", event_ids.size()},
          {"artists", corpus.artist_count()},
          {"venues", corpus.venue_count()},
          {"releases", corpus.releases.size()},
          {"labels", corpus.labels.nodes.size()},
          {"labels_with_releases", used.size()},
          {"major_labels", closure.size()},
          {"major_labels_with_releases", used_major},
          {"first_year", lo},
          {"last_year", hi}};
}

}  // namespace gigmine
