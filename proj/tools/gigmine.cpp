// gigmine command-line entry point.
#include <sys/stat.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gigmine/birank.hpp"
#include "gigmine/error.hpp"
#include "gigmine/pipeline.hpp"
#include "gigmine/routes.hpp"
#include "gigmine/version.hpp"

namespace fs = std::filesystem;
using namespace gigmine;

namespace {

// Raised for problems the user fixes on the command line; exit status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const auto kStart = std::chrono::steady_clock::now();

void log(const std::string& stage, const std::string& msg) {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - kStart).count();
  std::fprintf(stderr, "[gigmine %7.2fs] %-7s %s\n", static_cast<double>(ms) / 1000.0, stage.c_str(), msg.c_str());
}

std::string slurp(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  f << text;
  log("write", path.string());
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

struct Flags {
  std::string config;
  std::optional<std::size_t> threads;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out, events, releases, labels;
};

// A piped or redirected config is read implicitly; terminals, sockets and
// other inherited descriptors are left alone so the tool never blocks on them.
bool stdin_is_pipe_or_file() {
  struct stat st {};
  if (fstat(fileno(stdin), &st) != 0) return false;
  return S_ISFIFO(st.st_mode) || S_ISREG(st.st_mode);
}

RunConfig resolve_config(const Flags& f, bool read_piped_stdin) {
  std::optional<std::string> text;
  if (f.config == "-") {
    text = slurp(std::cin);
  } else if (!f.config.empty()) {
    std::ifstream in(f.config, std::ios::binary);
    if (!in) throw UsageError("config file not found: " + f.config);
    text = slurp(in);
  } else if (read_piped_stdin && stdin_is_pipe_or_file()) {
    text = slurp(std::cin);
    if (text->find_first_not_of(" \t\r\n") == std::string::npos) text.reset();
  }
  RunConfig cfg;
  if (text) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(*text);
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError(std::string("config is not valid JSON: ") + e.what());
    }
    try {
      cfg = parse_run_config(j);
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }
  }
  if (f.threads) cfg.threads = *f.threads;
  if (f.seed) {
    cfg.seed = *f.seed;
    cfg.synth.seed = *f.seed;
  }
  if (f.out) cfg.out = *f.out;
  if (f.events) cfg.data.events = *f.events;
  if (f.releases) cfg.data.releases = *f.releases;
  if (f.labels) cfg.data.labels = *f.labels;
  cfg.propagate();
  return cfg;
}

void require_data(const RunConfig& cfg) {
  const std::pair<const char*, const std::string*> files[] = {
      {"events", &cfg.data.events}, {"releases", &cfg.data.releases}, {"labels", &cfg.data.labels}};
  for (const auto& [what, path] : files) {
    if (path->empty()) throw UsageError(std::string("no ") + what + " file given (use --" + what + " or data." + what + " in the config)");
    if (!fs::is_regular_file(*path)) throw UsageError(std::string(what) + " file not found: " + *path);
  }
}

Prepared load(const RunConfig& cfg) {
  require_data(cfg);
  log("ingest", "reading " + cfg.data.events);
  auto p = load_and_prepare(cfg);
  log("ingest", std::to_string(p.raw_events) + " events, " + std::to_string(p.raw_artists) + " artists -> working set " +
                    std::to_string(p.corpus.event_count()) + " events, " + std::to_string(p.corpus.artist_count()) +
                    " artists, " + std::to_string(p.corpus.venue_count()) + " venues, " +
                    std::to_string(p.labels.report.positives) + " successful");
  return p;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

int cmd_ingest(const RunConfig& cfg) {
  auto loaded = parse_corpus(cfg.data.events, cfg.data.releases, cfg.data.labels);
  const auto raw_stats = corpus_stats(loaded.corpus);
  auto p = prepare(loaded.corpus, loaded.report, cfg.preprocess);
  write_json(fs::path(cfg.out) / "load-report.json",
             report_envelope(cfg, "ingest",
                             {{"load", p.report.to_json()}, {"raw", raw_stats}, {"working", corpus_stats(p.corpus)}}));
  write_json(fs::path(cfg.out) / "labels-report.json", report_envelope(cfg, "ingest", p.labels.report.to_json()));
  log("ingest", "rejected rows: events " + std::to_string(p.report.events.rejected) + ", releases " +
                    std::to_string(p.report.releases.rejected) + ", labels " + std::to_string(p.report.labels.rejected));
  return 0;
}

std::string count_distribution(const std::map<std::uint64_t, std::size_t>& hist, const char* what) {
  std::ostringstream os;
  os << "concerts," << what << "\n";
  for (auto [k, n] : hist) os << k << ',' << n << '\n';
  return os.str();
}

int cmd_stats(const RunConfig& cfg) {
  auto loaded = parse_corpus(cfg.data.events, cfg.data.releases, cfg.data.labels);
  const auto raw_stats = corpus_stats(loaded.corpus);
  auto p = prepare(loaded.corpus, loaded.report, cfg.preprocess);
  const auto working = corpus_stats(p.corpus);
  std::map<std::uint64_t, std::size_t> per_artist, per_venue, per_year;
  for (const auto& [a, rows] : p.corpus.artist_events) ++per_artist[rows.size()];
  for (const auto& [v, rows] : p.corpus.venue_events) ++per_venue[rows.size()];
  for (const auto& ev : p.corpus.events) ++per_year[static_cast<std::uint64_t>(year_of(ev.date))];
  std::ostringstream years;
  years << "year,concerts\n";
  for (auto [y, n] : per_year) years << y << ',' << n << '\n';
  write_json(fs::path(cfg.out) / "stats.json",
             report_envelope(cfg, "stats", {{"raw", raw_stats}, {"working", working}, {"load", p.report.to_json()}}));
  write_text(fs::path(cfg.out) / "stats-artist-concerts.csv", count_distribution(per_artist, "artists"));
  write_text(fs::path(cfg.out) / "stats-venue-concerts.csv", count_distribution(per_venue, "venues"));
  write_text(fs::path(cfg.out) / "stats-concerts-per-year.csv", years.str());
  std::cout << working.dump(2) << std::endl;
  return 0;
}

int cmd_task1(const RunConfig& cfg) {
  auto p = load(cfg);
  log("task1", "running " + std::to_string(cfg.task1.models.size() * cfg.task1.protocols.size()) + " model/protocol rows");
  const auto rows = run_task1(p.corpus, p.labels, cfg.task1);
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    rows_json.push_back(r.to_json());
    log("task1", std::string(protocol_tag(r.mode)) + " " + std::string(model_name(r.model)) + ": P " +
                     fmt(r.mean.precision) + " R " + fmt(r.mean.recall) + " F1 " + fmt(r.mean.f1) + " AUC " +
                     fmt(r.mean.roc_auc));
  }
  write_json(fs::path(cfg.out) / "labels-report.json", report_envelope(cfg, "task1", p.labels.report.to_json()));
  write_json(fs::path(cfg.out) / "task1-report.json",
             report_envelope(cfg, "task1",
                             {{"rows", rows_json}, {"labels", p.labels.report.to_json()}, {"load", p.report.to_json()}}));
  return 0;
}

int cmd_task2(const RunConfig& cfg) {
  auto p = load(cfg);
  log("task2", "temporal split at " + std::to_string(cfg.task2.temporal.train_end_year));
  const auto results = run_task2(p.corpus, cfg.task2);
  nlohmann::json res = nlohmann::json::array();
  for (const auto& r : results) {
    res.push_back(r.to_json());
    for (const auto& row : r.rows) log("task2", r.task + " " + row.predictor + ": AUC " + fmt(row.auc));
  }
  write_json(fs::path(cfg.out) / "task2-report.json", report_envelope(cfg, "task2", {{"tasks", res}}));
  return 0;
}

int cmd_task3(const RunConfig& cfg) {
  auto p = load(cfg);
  const auto out = run_task3(p.corpus, p.labels, cfg.task3);
  for (int y : out.trajectories.skipped_years) log("task3", "window ending " + std::to_string(y) + " has no events; skipped");
  write_json(fs::path(cfg.out) / "task3-report.json", report_envelope(cfg, "task3", out.report));
  write_text(fs::path(cfg.out) / "trajectories.csv", trajectories_csv(out.trajectories));
  return 0;
}

int cmd_routes(const RunConfig& cfg) {
  auto p = load(cfg);
  const auto seqs = city_sequences(p.corpus, cfg.task3.threads);
  const auto routes = mine_routes(seqs, cfg.routes.n, cfg.routes.top_k);
  for (const auto& r : routes) {
    if (r.rank > 3) continue;
    std::string path;
    for (const auto& c : r.route) path += (path.empty() ? "" : (r.bidirectional ? " <-> " : " -> ")) + c.city;
    log("routes", "n=" + std::to_string(r.n) + " #" + std::to_string(r.rank) + " " + path + " (" + std::to_string(r.count) + ")");
  }
  write_text(fs::path(cfg.out) / "routes-report.csv", routes_csv(routes));
  return 0;
}

int cmd_synth(RunConfig cfg) {
  const auto gen = generate(cfg.synth);
  const fs::path dir = fs::absolute(fs::path(cfg.out) / "corpus");
  gen.write(dir);
  log("synth", "wrote " + std::to_string(gen.manifest["counts"]["events"].get<std::size_t>()) + " events to " + dir.string());
  cfg.data = DataPaths{(dir / "events.csv").string(), (dir / "releases.csv").string(), (dir / "labels.csv").string()};
  cfg.out = fs::absolute(cfg.out).string();
  std::cout << to_json(cfg).dump(2) << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gigmine: artist-venue graph mining toolkit"};
  app.set_version_flag("--version", std::string(kVersion) + " (" + kGitDescribe + ")");
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config, "JSON run config; '-' reads stdin");
  app.add_option("--threads", f.threads, "worker threads (default: all logical cores)");
  app.add_option("--seed", f.seed, "random seed");
  app.add_option("--out", f.out, "output directory");
  app.add_option("--events", f.events, "events.csv");
  app.add_option("--releases", f.releases, "releases.csv");
  app.add_option("--labels", f.labels, "labels.csv");

  const std::pair<const char*, const char*> commands[] = {
      {"ingest", "parse and preprocess the corpus, write the load report"},
      {"stats", "dataset statistics and concert-count distributions"},
      {"task1", "success forecasting and prediction (precision, recall, F1, AUC)"},
      {"task2", "link forecasting and prediction (AUC per predictor)"},
      {"task3", "temporal BiRank, score histograms and yearly trajectories"},
      {"routes", "frequent city routes"},
      {"synth", "generate a synthetic corpus and print a config pointing at it"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    const RunConfig cfg = resolve_config(f, command != "synth");
    if (command == "synth") return cmd_synth(cfg);
    require_data(cfg);
    if (command == "ingest") return cmd_ingest(cfg);
    if (command == "stats") return cmd_stats(cfg);
    if (command == "task1") return cmd_task1(cfg);
    if (command == "task2") return cmd_task2(cfg);
    if (command == "task3") return cmd_task3(cfg);
    if (command == "routes") return cmd_routes(cfg);
  } catch (const UsageError& e) {
    std::cerr << "gigmine: error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "gigmine: error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
