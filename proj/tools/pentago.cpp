// Command line front end: census, layout and partition statistics, solving,
// verification, single-position queries, file checks and the HTTP service.

#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"
#include "pentago/census.h"
#include "pentago/engine.h"
#include "pentago/midgame.h"
#include "pentago/partition.h"
#include "pentago/search.h"
#include "pentago/server.h"
#include "pentago/verify.h"

using namespace pentago;
namespace fs = std::filesystem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string ratio(const BigInt& num, const BigInt& den) {
  // six decimals, exact
  const BigInt scaled = (num * 1000000 + den / 2) / den;
  std::string s = scaled.str();
  while (s.size() < 7) s.insert(s.begin(), '0');
  return s.substr(0, s.size() - 6) + "." + s.substr(s.size() - 6);
}

int run_census() {
  const auto start = std::chrono::steady_clock::now();
  std::printf("%3s %28s %24s\n", "n", "raw", "reduced");
  for (int n = 0; n <= 36; n++)
    std::printf("%3d %28s %24s\n", n, raw_count(n).str().c_str(), sym_count(n).str().c_str());
  const BigInt raw = total_raw(), sym = total_sym();
  std::printf("total raw      %s\n", raw.str().c_str());
  std::printf("total reduced  %s\n", sym.str().c_str());
  std::printf("raw/reduced    %s\n", ratio(raw, sym).c_str());
  const Overcount o = overcount_ratio();
  std::printf("overcount      rotation %.6f  section %.6f  combined %.6f\n", o.rotation, o.section, o.combined);
  std::printf("moves(empty)   %zu\n", moves(Board{}).size());
  std::printf("branching      with rotations %.4f  rotations abstracted %.4f\n",
              branching_average(BranchingMode::raw), branching_average(BranchingMode::rotation_abstracted));
  std::printf("seconds        %.2f\n", seconds_since(start));
  return 0;
}

int run_layout_stats() {
  std::printf("%5s %9s %14s %14s %18s\n", "slice", "sections", "blocks", "lines", "supers");
  for (int n = 0; n <= 36; n++) {
    const SliceLayout l(n);
    std::printf("%5d %9zu %14llu %14llu %18llu\n", n, l.sections().size(), (unsigned long long)l.blocks(),
                (unsigned long long)l.lines(), (unsigned long long)l.supers());
  }
  const LayoutTotals t = layout_totals();
  std::printf("total blocks %llu\ntotal lines %llu\ntotal supers %llu\nmax sections %zu at slice %d\n",
              (unsigned long long)t.blocks, (unsigned long long)t.lines, (unsigned long long)t.supers, t.max_sections,
              t.max_sections_slice);
  return 0;
}

int run_partition_stats(int first, int last, int ranks, const std::string& seed_hex) {
  const PartitionSeed seed = seed_hex.empty() ? PartitionSeed::default_seed() : PartitionSeed::parse(seed_hex);
  std::printf("seed %s, %d ranks\n", seed.hex().c_str(), ranks);
  std::printf("%5s", "slice");
  for (const char* name : kBalanceNames) std::printf(" %21s", (std::string(name) + " min/max/ratio").c_str());
  std::printf("\n");
  for (int n = first; n <= last; n++) {
    const BalanceReport r = partition_stats(seed, n, ranks);
    std::printf("%5d", n);
    for (int i = 0; i < 4; i++)
      std::printf(" %8llu/%8llu/%5.3f", (unsigned long long)r.min[i], (unsigned long long)r.max[i], r.ratio(i));
    std::printf("%s\n", r.degenerate ? "  (some rank owns nothing)" : "");
  }
  return 0;
}

// A boundary for search: a slice file, or random:SEED:SLICE.
SearchOptions boundary_options(const std::string& spec) {
  SearchOptions o;
  if (spec.empty()) return o;
  if (spec.rfind("random:", 0) == 0) {
    const size_t colon = spec.find(':', 7);
    if (colon == std::string::npos) throw Error(Errc::invalid_argument, "random boundaries read random:SEED:SLICE");
    const uint64_t seed = std::stoull(spec.substr(7, colon - 7));
    o.boundary_slice = std::stoi(spec.substr(colon + 1));
    o.boundary = [seed](Board b) { return injected_value(seed, b); };
    return o;
  }
  auto slice = std::make_shared<SolvedSlice>(std::make_shared<SliceReader>(open_source(spec)));
  o.boundary_slice = slice->slice();
  o.boundary = [slice](Board b) { return slice->value(b); };
  return o;
}

int run_search(const std::string& board, const std::string& boundary, bool no_cache, bool no_prune) {
  SearchOptions o = boundary_options(boundary);
  o.cache = !no_cache;
  o.prune = !no_prune;
  const Board b = parse_board(board);
  const auto start = std::chrono::steady_clock::now();
  const SearchResult r = perfect_value(b, o);
  std::printf("%s %s (%llu nodes, %.2fs)\n", to_string(b).c_str(), value_name(r.value), (unsigned long long)r.nodes,
              seconds_since(start));
  return 0;
}

int run_midgame(const std::string& board, bool json_out, int threshold) {
  const Board b = parse_board(board);
  MidgameOptions o;
  o.threshold = threshold;
  const MidgameResult r = solve_midgame(b, o);
  if (json_out) {
    nlohmann::json moves = nlohmann::json::array();
    for (const MoveValue& m : r.moves)
      moves.push_back({{"move", to_string(m.move)}, {"child", to_string(m.child)}, {"key", std::to_string(m.child.key())},
                       {"value", value_name(m.value)}});
    const nlohmann::json out = {{"version", kApiVersion}, {"board", to_string(b)}, {"key", std::to_string(b.key())},
                                {"value", value_name(r.value)}, {"source", "midgame"}, {"children", moves},
                                {"boards", r.boards}, {"seconds", r.seconds}};
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::printf("%s %s to move: %s (%llu boards, %.2fs)\n", to_string(b).c_str(), color_name(b.to_move()),
              value_name(r.value), (unsigned long long)r.boards, r.seconds);
  for (const MoveValue& m : r.moves)
    std::printf("  %-26s %s %s\n", to_string(m.move).c_str(), to_string(m.child).c_str(), value_name(m.value));
  return 0;
}

struct SolveFlags {
  int from = 5, to = 0;
  std::string boundary = "random:1";
  int workers = 1, ranks = 1;
  std::string store;
  std::string codec = "zlib";
  std::string seed;
  int in_flight = 5;
  uint64_t memory_mb = 1024;
  int samples = 256;
  double idle_timeout = 300;
};

EngineConfig engine_config(const SolveFlags& f) {
  EngineConfig c;
  c.workers = f.workers;
  c.ranks = f.ranks;
  c.store_dir = f.store;
  c.codec = parse_codec(f.codec);
  if (!f.seed.empty()) c.seed = PartitionSeed::parse(f.seed);
  c.max_in_flight = f.in_flight;
  c.memory_budget = f.memory_mb << 20;
  c.samples = f.samples;
  c.idle_timeout = f.idle_timeout;
  return c;
}

int run_solve(const SolveFlags& f) {
  const BoundarySpec boundary = BoundarySpec::parse(f.boundary);
  const SolveResult r = solve(f.from, f.to, boundary, engine_config(f));
  std::printf("%5s %10s %8s %10s %12s %12s %8s\n", "slice", "lines", "blocks", "messages", "arena", "live", "seconds");
  for (const SliceReport& s : r.reports)
    std::printf("%5d %10llu %8llu %10llu %12llu %12llu %8.2f\n", s.slice, (unsigned long long)s.lines,
                (unsigned long long)s.blocks, (unsigned long long)s.messages, (unsigned long long)s.arena_bytes,
                (unsigned long long)s.live_bytes, s.seconds);
  std::printf("%5s %12s %14s %14s %14s\n", "slice", "supers", "win", "tie", "loss");
  for (const CountsRecord& c : r.counts)
    std::printf("%5d %12llu %14llu %14llu %14llu\n", c.slice, (unsigned long long)c.supers, (unsigned long long)c.win,
                (unsigned long long)c.tie, (unsigned long long)c.loss);
  return 0;
}

int run_verify(int slice, uint64_t seed, const SolveFlags& f) {
  const EquivalenceReport r = check_equivalence(slice, seed, engine_config(f), [](int n, uint64_t count) {
    std::printf("  %d stones: %llu positions compared\n", n, (unsigned long long)count);
    std::fflush(stdout);
  });
  std::printf("slice %d seed %llu: %llu positions, %llu mismatches (solve %.2fs, check %.2fs)\n", r.slice,
              (unsigned long long)r.seed, (unsigned long long)r.checked, (unsigned long long)r.mismatches, r.solve_seconds,
              r.check_seconds);
  for (const std::string& e : r.examples) std::printf("  mismatch %s\n", e.c_str());
  return r.ok() ? 0 : 1;
}

int run_store_verify(const std::string& path) {
  std::vector<std::string> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path))
      if (entry.path().extension() == ".pgo") files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  if (files.empty()) throw Error(Errc::block_not_found, "no slice files under " + path);
  for (const std::string& f : files) {
    const SliceReader reader(open_source(f));
    const size_t blocks = reader.verify();
    std::printf("%s: slice %d, %zu blocks, checksums ok\n", f.c_str(), reader.slice(), blocks);
  }
  return 0;
}

std::atomic<HttpServer*> running_server{nullptr};

int run_serve(const ServiceConfig& config, const std::string& host, int port) {
  Service service(config);
  HttpServer server(service);
  const int bound = server.bind(host, port);
  running_server = &server;
  std::signal(SIGINT, [](int) {
    if (HttpServer* s = running_server.load()) s->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (HttpServer* s = running_server.load()) s->stop();
  });
  std::printf("listening on http://%s:%d\n", host.c_str(), bound);
  std::fflush(stdout);
  server.listen();
  running_server = nullptr;
  return 0;
}

// Positions along random games, each line "board-string key".
int run_vectors(const std::string& out, int count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Board> boards{Board{}};
  while (int(boards.size()) < count) {
    Board b;
    while (!terminal_value(b) && b.stones() < 36) {
      const auto succ = moves(b);
      b = succ[rng() % succ.size()].board;
      boards.push_back(b);
      if (int(boards.size()) == count) break;
    }
  }
  std::ofstream file(out);
  if (!file) throw Error(Errc::io_error, "cannot write " + out);
  for (Board b : boards) file << to_string(b) << " " << b.key() << "\n";
  std::printf("wrote %zu vectors to %s\n", boards.size(), out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pentago retrograde solver"};
  app.require_subcommand(1);

  auto* census = app.add_subcommand("census", "exact position counts, overcounting and branching factors");
  auto* layout = app.add_subcommand("layout-stats", "sections, blocks and lines per slice");

  int pfirst = 20, plast = -1, pranks = 72;
  std::string pseed;
  auto* partition = app.add_subcommand("partition-stats", "per-rank balance of blocks, lines and supers");
  partition->add_option("--slice", pfirst, "slice (first slice of a range with --to)");
  partition->add_option("--to", plast, "last slice of the range");
  partition->add_option("--ranks", pranks, "number of ranks");
  partition->add_option("--seed", pseed, "partition seed in hex (default: leading hex digits of pi)");

  SolveFlags sf;
  auto add_engine_flags = [&](CLI::App* c) {
    c->add_option("--workers", sf.workers, "worker threads");
    c->add_option("--ranks", sf.ranks, "ranks the lines are partitioned over");
    c->add_option("--codec", sf.codec, "identity, zlib or lzma");
    c->add_option("--partition-seed", sf.seed, "partition seed in hex");
    c->add_option("--max-in-flight", sf.in_flight, "lines in flight per worker");
    c->add_option("--memory-mb", sf.memory_mb, "refuse slices needing more uncompressed memory");
    c->add_option("--idle-timeout", sf.idle_timeout, "seconds without messages before reporting a deadlock");
  };
  auto* solve_cmd = app.add_subcommand("solve", "retrograde solve from a boundary slice");
  solve_cmd->add_option("--from", sf.from, "boundary slice (36 for the terminal boundary)");
  solve_cmd->add_option("--to", sf.to, "last slice computed");
  solve_cmd->add_option("--boundary", sf.boundary, "terminal or random:SEED");
  solve_cmd->add_option("--store", sf.store, "directory for slice files, counts and samples");
  solve_cmd->add_option("--samples", sf.samples, "sample boards per slice");
  add_engine_flags(solve_cmd);

  int vslice = 5;
  uint64_t vseed = 1;
  auto* verify = app.add_subcommand("verify", "engine against forward search below an injected slice");
  verify->add_option("--slice", vslice, "injected slice (1..6)");
  verify->add_option("--seed", vseed, "boundary seed");
  add_engine_flags(verify);

  std::string board, boundary;
  bool json_out = false, no_cache = false, no_prune = false;
  int threshold = 17;
  auto* midgame = app.add_subcommand("midgame", "values of every move from a position with many stones");
  midgame->add_option("--board", board, "36-character board or decimal key")->required();
  midgame->add_flag("--json", json_out, "print JSON");
  midgame->add_option("--threshold", threshold, "fewest stones accepted");

  auto* search = app.add_subcommand("search", "forward search value of a position");
  search->add_option("--board", board, "36-character board or decimal key")->required();
  search->add_option("--boundary", boundary, "slice file or URL, or random:SEED:SLICE");
  search->add_flag("--no-cache", no_cache, "disable the transposition cache");
  search->add_flag("--no-prune", no_prune, "search every move");

  std::string store_path;
  auto* store = app.add_subcommand("store", "solution file tools");
  store->require_subcommand(1);
  auto* store_verify = store->add_subcommand("verify", "check every block checksum");
  store_verify->add_option("path", store_path, "slice file, URL or directory")->required();

  ServiceConfig service;
  std::string host = "127.0.0.1";
  int port = 8080;
  uint64_t cache_mb = 64;
  auto* serve = app.add_subcommand("serve", "HTTP JSON service");
  serve->add_option("--port", port, "port (0 picks a free one)");
  serve->add_option("--host", host, "address to bind");
  serve->add_option("--store", service.stores, "directory or http URL of slice files (repeatable)");
  serve->add_option("--midgame-threshold", service.midgame_threshold, "fewest stones solved by the midgame solver");
  serve->add_option("--cache-mb", cache_mb, "decoded block cache size (0 disables)");
  serve->add_option("--search-nodes", service.search_nodes, "largest tree searched forward");

  std::string vout = "board_keys.txt";
  int vcount = 1200;
  uint64_t vgen_seed = 2024;
  auto* vectors = app.add_subcommand("vectors", "write board-string/key test vectors");
  vectors->add_option("--out", vout, "output file");
  vectors->add_option("--count", vcount, "number of lines");
  vectors->add_option("--seed", vgen_seed, "random game seed");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*census) return run_census();
    if (*layout) return run_layout_stats();
    if (*partition) return run_partition_stats(pfirst, plast < 0 ? pfirst : plast, pranks, pseed);
    if (*solve_cmd) return run_solve(sf);
    if (*verify) return run_verify(vslice, vseed, sf);
    if (*midgame) return run_midgame(board, json_out, threshold);
    if (*search) return run_search(board, boundary, no_cache, no_prune);
    if (*store_verify) return run_store_verify(store_path);
    if (*serve) {
      service.cache_bytes = cache_mb << 20;
      return run_serve(service, host, port);
    }
    if (*vectors) return run_vectors(vout, vcount, vgen_seed);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
