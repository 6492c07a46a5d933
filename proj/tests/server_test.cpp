#include <filesystem>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "oracles.h"
#include "pentago/boundary.h"
#include "pentago/engine.h"
#include "pentago/search.h"
#include "pentago/server.h"

using namespace pentago;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

Board random_root(std::mt19937_64& rng, int n) {
  for (;;) {
    const Board b = oracle::random_board(rng, n);
    if (!terminal_value(b)) return b;
  }
}

Value parse_value(const json& v) {
  const std::string s = v.get<std::string>();
  REQUIRE(s != "unknown");
  return s == "win" ? Value::win : s == "tie" ? Value::tie : Value::loss;
}

// Solved slices 0..5 on an injected boundary, shared by the tests below.
const fs::path& injected_store() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / ("pentago-server-test-" + std::to_string(::getpid()));
    fs::remove_all(d);
    EngineConfig config;
    config.store_dir = d.string();
    solve(5, 0, BoundarySpec::random(41), config);
    return d;
  }();
  return dir;
}

SearchOptions injected_search() {
  SearchOptions o;
  o.boundary_slice = 5;
  o.boundary = [](Board b) { return injected_value(41, b); };
  return o;
}

struct Running {
  explicit Running(Service& s) : http(s) {
    port = http.bind("127.0.0.1", 0);
    thread = std::thread([this] { http.listen(); });
    http.wait_until_ready();
  }
  ~Running() {
    http.stop();
    thread.join();
  }
  HttpServer http;
  int port = 0;
  std::thread thread;
};

}  // namespace

TEST_CASE("block cache is a bounded LRU") {
  BlockCache cache(3 * 10 * kSuperBytes);
  auto block = [](size_t n) { return std::make_shared<const std::vector<SuperValue>>(n); };
  const BlockId a{1, 0, {0, 0, 0, 0}}, b{1, 0, {0, 0, 0, 1}}, c{1, 0, {0, 0, 1, 0}}, d{1, 0, {0, 1, 0, 0}};
  cache.put({0, a}, block(10));
  cache.put({0, b}, block(10));
  cache.put({0, c}, block(10));
  CHECK(cache.entries() == 3);
  CHECK(cache.get({0, a}));  // a becomes most recent
  cache.put({0, d}, block(10));
  CHECK(cache.entries() == 3);
  CHECK_FALSE(cache.get({0, b}));
  CHECK(cache.get({0, a}));
  CHECK(cache.bytes() == 30 * kSuperBytes);
  cache.put({1, a}, block(31));  // larger than the whole cache
  CHECK_FALSE(cache.get({1, a}));
  BlockCache off(0);
  off.put({0, a}, block(1));
  CHECK(off.entries() == 0);
}

TEST_CASE("fresh service and malformed boards") {
  Service service({});
  const json h = service.health();
  CHECK(h["version"] == kApiVersion);
  CHECK(h["cache"]["entries"] == 0);
  CHECK(h["midgame"]["solves"] == 0);
  CHECK(h["midgame"]["threshold"] == 17);
  for (const char* bad : {"xyz", "", "1111111111111111111111111111111111111", "111100000000000000000000000000000000"}) {
    try {
      service.value(bad);
      FAIL("expected InvalidArgument for " << bad);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::invalid_argument);
    }
  }
}

TEST_CASE("shallow boards without a database are unknown") {
  Service service({});
  std::mt19937_64 rng(51);
  const Board b = random_root(rng, 10);
  const json r = service.value(to_string(b));
  CHECK(r["value"] == "unknown");
  CHECK(r["reason"] == "outside computed range");
  CHECK(r["children"].size() == moves(b).size());
  for (const json& c : r["children"]) CHECK(c["value"] == "unknown");
}

TEST_CASE("deep boards come from the midgame solver") {
  Service service({});
  std::mt19937_64 rng(52);
  for (int it = 0; it < 5; it++) {
    const Board b = random_root(rng, 35 - it % 3);
    const json r = service.value(std::to_string(b.key()));
    CHECK(r["source"] == "midgame");
    CHECK(r["board"] == to_string(b));
    const auto succ = moves(b);
    REQUIRE(r["children"].size() == succ.size());
    Value best = Value::loss;
    for (size_t i = 0; i < succ.size(); i++) {
      const json& c = r["children"][i];
      CHECK(c["child"] == to_string(succ[i].board));
      CHECK(c["move"] == to_string(succ[i].move));
      const Value want = succ[i].move.rotation ? -perfect_value(succ[i].board).value : Value::win;
      CHECK(parse_value(c["value"]) == want);
      best = std::max(best, want);
    }
    CHECK(parse_value(r["value"]) == best);
  }
  CHECK(service.midgame_solves() == 5);
  CHECK(service.health()["midgame"]["solves"] == 5);
}

TEST_CASE("search answers below the midgame threshold") {
  ServiceConfig config;
  config.midgame_threshold = 36;
  Service service(config);
  std::mt19937_64 rng(53);
  const Board b = random_root(rng, 33);
  const json r = service.value(to_string(b));
  CHECK(r["source"] == "search");
  CHECK(parse_value(r["value"]) == perfect_value(b).value);
}

TEST_CASE("terminal boards") {
  Service service({});
  Board b;
  for (int y = 0; y < 5; y++) {
    b = place(b, {0, y}, Color::black);
    if (y < 4) b = place(b, {5, y}, Color::white);
  }
  const json r = service.value(to_string(b));
  CHECK(r["terminal"] == true);
  CHECK(r["value"] == "loss");  // black has five, white to move
  CHECK(r["children"].empty());
}

TEST_CASE("concurrent identical queries share one midgame solve") {
  Service service({});
  std::mt19937_64 rng(54);
  const std::string board = to_string(random_root(rng, 21));
  std::vector<json> answers(4);
  std::vector<std::thread> threads;
  for (int i = 0; i < 4; i++) threads.emplace_back([&, i] { answers[i] = service.value(board); });
  for (auto& t : threads) t.join();
  CHECK(service.midgame_solves() == 1);
  for (auto& a : answers) CHECK(a == answers[0]);
}

TEST_CASE("database lookups") {
  const fs::path& dir = injected_store();
  ServiceConfig config;
  config.stores = {dir.string()};
  Service cached(config);
  config.cache_bytes = 0;
  Service uncached(config);
  Searcher search(injected_search());
  std::mt19937_64 rng(55);
  for (int it = 0; it < 30; it++) {
    const Board b = oracle::random_board(rng, int(rng() % 5));
    const json r = cached.value(to_string(b));
    CHECK(r == uncached.value(to_string(b)));
    CHECK(r["source"] == "database");
    const auto succ = moves(b);
    for (size_t i = 0; i < succ.size(); i++) {
      const Value want = succ[i].move.rotation ? -search.value(succ[i].board).value : Value::win;
      REQUIRE(parse_value(r["children"][i]["value"]) == want);
    }
    CHECK(parse_value(r["value"]) == search.value(b).value);
  }
  const json h = cached.health();
  CHECK(h["cache"]["entries"] > 0);
  CHECK(h["cache"]["hits"] > 0);
  CHECK(uncached.health()["cache"]["entries"] == 0);
  CHECK(h["stores"][0]["slices_opened"].size() == 5);

  // a 5-stone board has no children on disk but its own value is stored
  const Board five = oracle::random_open_board(rng, 5);
  const json r = cached.value(to_string(five));
  CHECK(r["source"] == "database");
  CHECK(parse_value(r["value"]) == injected_value(41, five));
  CHECK(r["children"][0]["value"] == "unknown");
}

TEST_CASE("HTTP front end") {
  const fs::path& dir = injected_store();

  // the slice files served over HTTP act as a remote store
  httplib::Server files;
  REQUIRE(files.set_mount_point("/store", dir.string()));
  const int file_port = files.bind_to_any_port("127.0.0.1");
  std::thread file_thread([&] { files.listen_after_bind(); });
  files.wait_until_ready();

  ServiceConfig config;
  config.stores = {"http://127.0.0.1:" + std::to_string(file_port) + "/store"};
  Service service(config);
  Running server(service);
  httplib::Client client("127.0.0.1", server.port);

  auto health = client.Get("/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(json::parse(health->body)["status"] == "ok");

  Service local(ServiceConfig{{dir.string()}});
  const Board b = place(place(Board{}, {1, 1}, Color::black), {4, 2}, Color::white);
  auto res = client.Get("/value?board=" + to_string(b));
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->get_header_value("Content-Type") == "application/json");
  CHECK(json::parse(res->body) == local.value(to_string(b)));

  res = client.Get("/value?board=xyz");
  REQUIRE(res);
  CHECK(res->status == 400);
  CHECK(json::parse(res->body)["error"].get<std::string>().find("xyz") != std::string::npos);
  res = client.Get("/value");
  REQUIRE(res);
  CHECK(res->status == 400);

  files.stop();
  file_thread.join();
  // a slice not opened yet cannot be reached any more
  res = client.Get("/value?board=" + to_string(place(Board{}, {0, 0}, Color::black)));
  REQUIRE(res);
  CHECK(res->status == 503);
}
