#include "pentago/server.h"

#include <filesystem>

#include "httplib.h"
#include "pentago/layout.h"
#include "pentago/search.h"

namespace pentago {
namespace {

using nlohmann::json;

json value_json(const std::optional<Value>& v) { return v ? json(value_name(*v)) : json("unknown"); }

json move_json(const Successor& s, const std::optional<Value>& v) {
  json rotation = nullptr;
  if (s.move.rotation)
    rotation = {{"quadrant", s.move.rotation->quadrant}, {"direction", s.move.rotation->direction > 0 ? "left" : "right"}};
  return {{"move", to_string(s.move)},
          {"cell", {s.move.cell.x, s.move.cell.y}},
          {"rotation", rotation},
          {"child", to_string(s.board)},
          {"key", std::to_string(s.board.key())},
          {"value", value_json(v)}};
}

std::string join(const std::string& location, const std::string& name) {
  if (location.rfind("http://", 0) == 0) return location.back() == '/' ? location + name : location + "/" + name;
  return (std::filesystem::path(location) / name).string();
}

}  // namespace

BlockCache::Block BlockCache::get(const Key& key) {
  std::lock_guard lock(mutex_);
  auto it = slots_.find(key);
  if (it == slots_.end()) {
    misses_++;
    return nullptr;
  }
  hits_++;
  order_.splice(order_.begin(), order_, it->second.at);
  return it->second.block;
}

void BlockCache::put(const Key& key, Block block) {
  const uint64_t size = block->size() * kSuperBytes;
  if (size > capacity_) return;
  std::lock_guard lock(mutex_);
  if (slots_.count(key)) return;
  order_.push_front(key);
  slots_.emplace(key, Slot{std::move(block), order_.begin()});
  bytes_ += size;
  while (bytes_ > capacity_) {
    auto victim = slots_.find(order_.back());
    bytes_ -= victim->second.block->size() * kSuperBytes;
    slots_.erase(victim);
    order_.pop_back();
  }
}

size_t BlockCache::entries() const {
  std::lock_guard lock(mutex_);
  return slots_.size();
}

uint64_t BlockCache::bytes() const {
  std::lock_guard lock(mutex_);
  return bytes_;
}

Service::Service(ServiceConfig config) : config_(std::move(config)), cache_(config_.cache_bytes), slots_(config_.stores.size()) {}

std::shared_ptr<SliceReader> Service::reader(int store, int slice) {
  {
    std::lock_guard lock(mutex_);
    const Slot& s = slots_[store][slice];
    if (s.probed) return s.reader;
  }
  const std::string& location = config_.stores[store];
  const std::string path = join(location, slice_file_name(slice));
  std::shared_ptr<SliceReader> r;
  const bool remote = location.rfind("http://", 0) == 0;
  if (remote || std::filesystem::exists(path)) {
    try {
      r = std::make_shared<SliceReader>(open_source(path));
    } catch (const Error& e) {
      if (e.code() != Errc::block_not_found) throw;
    }
  } else if (!std::filesystem::is_directory(location)) {
    throw Error(Errc::unavailable, "store " + location + " is not a directory");
  }
  std::lock_guard lock(mutex_);
  Slot& s = slots_[store][slice];
  if (!s.probed) s = Slot{true, r};
  return s.reader;
}

std::optional<SuperValue> Service::stored_super(Board b) {
  const int slice = b.stones();
  const Located l = locate(b);
  const int section = section_index(l.section);
  const BlockId id{slice, section, {l.index[0] / kBlockSize, l.index[1] / kBlockSize, l.index[2] / kBlockSize,
                                    l.index[3] / kBlockSize}};
  for (int store = 0; store < int(config_.stores.size()); store++) {
    auto r = reader(store, slice);
    if (!r || !r->has(id)) continue;
    const BlockCache::Key key{store, id};
    BlockCache::Block block = cache_.get(key);
    if (!block) {
      block = std::make_shared<const std::vector<SuperValue>>(r->read_block(id));
      block_reads_++;
      cache_.put(key, block);
    }
    const Index4 shape = section_shape(l.section);
    size_t off = 0;
    for (int i = 0; i < 4; i++) off = off * size_t(block_extent(shape[i], id.block[i])) + size_t(l.index[i] % kBlockSize);
    return transform_super(inverse(l.g), block->at(off));
  }
  return std::nullopt;
}

std::optional<Service::Answer> Service::from_database(Board b, const std::vector<Successor>& moves) {
  if (config_.stores.empty() || b.stones() >= 35) return std::nullopt;
  const Color c = b.to_move();
  Answer a;
  a.source = "database";
  bool all = true;
  std::map<uint64_t, std::optional<SuperValue>> placed;  // by placed board
  for (const Successor& s : moves) {
    if (!s.move.rotation) {
      a.children.push_back(Value::win);
      continue;
    }
    const Board c0 = place(b, s.move.cell, c);
    auto it = placed.find(c0.key());
    if (it == placed.end()) it = placed.emplace(c0.key(), stored_super(c0)).first;
    if (!it->second) {
      a.children.push_back(std::nullopt);
      all = false;
      continue;
    }
    const Rotation r = *s.move.rotation;
    a.children.push_back(-it->second->at(LocalRot::single(r.quadrant, r.direction > 0 ? 1 : 3).index));
  }
  if (all) {
    Value best = Value::loss;
    for (auto& v : a.children) best = std::max(best, *v);
    a.value = best;
  } else if (auto own = stored_super(b)) {
    a.value = own->at(0);
  } else {
    return std::nullopt;
  }
  return a;
}

std::optional<Service::Answer> Service::from_midgame(Board b) {
  if (b.stones() < config_.midgame_threshold) return std::nullopt;
  std::promise<std::shared_ptr<const MidgameResult>> promise;
  std::shared_future<std::shared_ptr<const MidgameResult>> future;
  bool leader = false;
  {
    std::lock_guard lock(mutex_);
    auto it = running_.find(b.key());
    if (it != running_.end()) {
      future = it->second;
    } else {
      future = promise.get_future().share();
      running_.emplace(b.key(), future);
      leader = true;
    }
  }
  if (leader) {
    try {
      MidgameOptions options;
      options.threshold = config_.midgame_threshold;
      options.memory_budget = config_.midgame_memory;
      midgame_solves_++;
      promise.set_value(std::make_shared<const MidgameResult>(solve_midgame(b, options)));
    } catch (...) {
      promise.set_exception(std::current_exception());
    }
    std::lock_guard lock(mutex_);
    running_.erase(b.key());
  }
  std::shared_ptr<const MidgameResult> r;
  try {
    r = future.get();
  } catch (const Error& e) {
    if (e.code() == Errc::too_few_stones) return std::nullopt;
    throw;
  }
  Answer a;
  a.source = "midgame";
  a.value = r->value;
  for (const MoveValue& m : r->moves) a.children.push_back(m.value);
  return a;
}

std::optional<Service::Answer> Service::from_search(Board b, const std::vector<Successor>& moves) {
  SearchOptions options;
  options.node_limit = config_.search_nodes;
  if (search_estimate(b, options) > double(options.node_limit)) return std::nullopt;
  Searcher search(options);
  Answer a;
  a.source = "search";
  Value best = Value::loss;
  for (const Successor& s : moves) {
    const Value v = s.move.rotation ? -search.value(s.board).value : Value::win;
    a.children.push_back(v);
    best = std::max(best, v);
  }
  a.value = best;
  return a;
}

nlohmann::json Service::value(const std::string& text) {
  requests_++;
  const Board b = parse_board(text);
  if (!b.valid_position()) throw Error(Errc::invalid_argument, "black must have as many stones as white or one more");
  json out = {{"version", kApiVersion},
              {"board", to_string(b)},
              {"key", std::to_string(b.key())},
              {"stones", b.stones()},
              {"to_move", color_name(b.to_move())}};
  if (auto t = terminal_value(b)) {
    out["value"] = value_name(*t);
    out["source"] = "search";
    out["terminal"] = true;
    out["children"] = json::array();
    return out;
  }
  out["terminal"] = false;
  const auto succ = moves(b);
  std::optional<Answer> a = from_database(b, succ);
  if (!a) a = from_midgame(b);
  if (!a) a = from_search(b, succ);
  json children = json::array();
  for (size_t i = 0; i < succ.size(); i++) children.push_back(move_json(succ[i], a ? a->children[i] : std::nullopt));
  out["value"] = value_json(a ? a->value : std::nullopt);
  if (a) {
    out["source"] = a->source;
  } else {
    out["source"] = nullptr;
    out["reason"] = "outside computed range";
  }
  out["children"] = std::move(children);
  return out;
}

nlohmann::json Service::health() const {
  json stores = json::array();
  {
    std::lock_guard lock(mutex_);
    for (size_t i = 0; i < config_.stores.size(); i++) {
      json slices = json::array();
      for (int k = 0; k <= 36; k++)
        if (slots_[i][k].reader) slices.push_back(k);
      stores.push_back({{"location", config_.stores[i]}, {"slices_opened", slices}});
    }
  }
  return {{"version", kApiVersion},
          {"status", "ok"},
          {"stores", stores},
          {"cache",
           {{"entries", cache_.entries()},
            {"bytes", cache_.bytes()},
            {"capacity_bytes", cache_.capacity()},
            {"hits", cache_.hits()},
            {"misses", cache_.misses()},
            {"block_reads", block_reads_.load()}}},
          {"midgame", {{"threshold", config_.midgame_threshold}, {"solves", midgame_solves_.load()}}},
          {"search", {{"node_limit", config_.search_nodes}}},
          {"requests", requests_.load()}};
}

struct HttpServer::Impl {
  Service& service;
  httplib::Server http;
};

HttpServer::HttpServer(Service& service) : impl_(new Impl{service, {}}) {
  auto reply = [](httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(body.dump(), "application/json");
  };
  impl_->http.Get("/value", [this, reply](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("board")) return reply(res, 400, {{"error", "missing board parameter"}});
    try {
      reply(res, 200, impl_->service.value(req.get_param_value("board")));
    } catch (const Error& e) {
      const int status = e.code() == Errc::unavailable || e.code() == Errc::io_error ? 503
                         : e.code() == Errc::invalid_argument                      ? 400
                                                                                   : 500;
      reply(res, status, {{"error", e.what()}});
    } catch (const std::exception& e) {
      reply(res, 500, {{"error", e.what()}});
    }
  });
  impl_->http.Get("/health", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, 200, impl_->service.health());
  });
}

HttpServer::~HttpServer() { delete impl_; }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->http.bind_to_any_port(host);
  if (!impl_->http.bind_to_port(host, port)) throw Error(Errc::unavailable, "cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpServer::listen() { impl_->http.listen_after_bind(); }
void HttpServer::stop() { impl_->http.stop(); }
void HttpServer::wait_until_ready() { impl_->http.wait_until_ready(); }

}  // namespace pentago
