#pragma once

// Position lookup service.  A query is answered from stored slices when the
// children's slice is on hand, else by the midgame solver above the stone
// threshold, else by forward search when the tree is small, and otherwise
// reported as unknown.

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <future>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "pentago/midgame.h"
#include "pentago/store.h"

namespace pentago {

inline constexpr int kApiVersion = 1;

struct ServiceConfig {
  std::vector<std::string> stores;  // directories or http URLs holding slice files
  int midgame_threshold = 17;
  uint64_t midgame_memory = uint64_t(5) << 29;
  uint64_t cache_bytes = uint64_t(64) << 20;  // decoded blocks; 0 disables the cache
  uint64_t search_nodes = uint64_t(1) << 22;
};

// Least recently used decoded blocks, bounded by bytes.
class BlockCache {
 public:
  using Block = std::shared_ptr<const std::vector<SuperValue>>;
  using Key = std::pair<int, BlockId>;  // store, block

  explicit BlockCache(uint64_t capacity) : capacity_(capacity) {}
  Block get(const Key& key);
  void put(const Key& key, Block block);

  uint64_t capacity() const { return capacity_; }
  size_t entries() const;
  uint64_t bytes() const;
  uint64_t hits() const { return hits_; }
  uint64_t misses() const { return misses_; }

 private:
  using Order = std::list<Key>;
  struct Slot {
    Block block;
    Order::iterator at;
  };

  uint64_t capacity_;
  mutable std::mutex mutex_;
  std::map<Key, Slot> slots_;
  Order order_;  // most recent first
  uint64_t bytes_ = 0;
  std::atomic<uint64_t> hits_{0}, misses_{0};
};

class Service {
 public:
  explicit Service(ServiceConfig config);

  // Throws Error: invalid_argument for a malformed or illegal board,
  // unavailable when a configured store cannot be reached.
  nlohmann::json value(const std::string& board);
  nlohmann::json health() const;

  uint64_t midgame_solves() const { return midgame_solves_; }

 private:
  struct Slot {
    bool probed = false;
    std::shared_ptr<SliceReader> reader;  // null when the store lacks the slice
  };
  struct Answer {
    std::string source;
    std::vector<std::optional<Value>> children;  // per move of the board
    std::optional<Value> value;
  };

  std::shared_ptr<SliceReader> reader(int store, int slice);
  // Super of b from the first store holding its block, if any.
  std::optional<SuperValue> stored_super(Board b);
  std::optional<Answer> from_database(Board b, const std::vector<Successor>& moves);
  std::optional<Answer> from_midgame(Board b);
  std::optional<Answer> from_search(Board b, const std::vector<Successor>& moves);

  ServiceConfig config_;
  BlockCache cache_;
  mutable std::mutex mutex_;
  std::vector<std::array<Slot, 37>> slots_;
  std::map<uint64_t, std::shared_future<std::shared_ptr<const MidgameResult>>> running_;
  std::atomic<uint64_t> midgame_solves_{0}, requests_{0}, block_reads_{0};
};

// HTTP front end: GET /value?board=KEY and GET /health.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds host:port (port 0 picks a free one) and returns the port.
  int bind(const std::string& host, int port);
  // Serves until stop().
  void listen();
  void stop();
  void wait_until_ready();

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace pentago
