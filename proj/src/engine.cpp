#include "pentago/engine.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <optional>
#include <thread>

#include "pentago/kernel.h"

namespace pentago {
namespace {

using Clock = std::chrono::steady_clock;

void for_each_subset(uint64_t cells, int count, uint64_t chosen, const std::function<void(uint64_t)>& f) {
  if (count == 0) return f(chosen);
  if (std::popcount(cells) < count) return;
  const uint64_t low = cells & -cells;
  for_each_subset(cells & ~low, count - 1, chosen | low, f);
  for_each_subset(cells & ~low, count, chosen, f);
}

uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  uint64_t r = 1;
  for (int i = 1; i <= k; i++) r = r * uint64_t(n - k + i) / uint64_t(i);
  return r;
}

// Position of a super inside its block.
size_t block_offset(const Index4& shape, const Index4& index) {
  size_t off = 0;
  for (int i = 0; i < 4; i++) off = off * size_t(block_extent(shape[i], index[i] / kBlockSize)) + index[i] % kBlockSize;
  return off;
}

BlockId block_of(int slice, int section, const Index4& index) {
  return BlockId{slice, section, {index[0] / kBlockSize, index[1] / kBlockSize, index[2] / kBlockSize, index[3] / kBlockSize}};
}

struct Message {
  enum class Kind { request_input, input_data, output_scatter, line_done, barrier, stop };
  Kind kind = Kind::stop;
  uint64_t id = 0;
  int from = 0;
  BlockId block;
  LineId line;
  uint64_t token = 0;
  int position = 0;
  bool absent = false;
  PackedBlock payload;
};

class Mailbox {
 public:
  void push(Message m) {
    {
      std::lock_guard lock(mutex_);
      queue_.push_back(std::move(m));
    }
    cv_.notify_one();
  }

  std::optional<Message> pop(double timeout) {
    std::unique_lock lock(mutex_);
    if (!cv_.wait_for(lock, std::chrono::duration<double>(timeout), [&] { return !queue_.empty(); })) return std::nullopt;
    Message m = std::move(queue_.front());
    queue_.pop_front();
    return m;
  }

  std::vector<Message> drain() {
    std::lock_guard lock(mutex_);
    std::vector<Message> out(std::make_move_iterator(queue_.begin()), std::make_move_iterator(queue_.end()));
    queue_.clear();
    return out;
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<Message> queue_;
};

struct Stopped {};

// Shared state of one slice; everything but the mailboxes and the abort flag is
// read-only while workers run, apart from each worker's own block store.
struct SliceRun {
  int slice = 0;
  const EngineConfig* config = nullptr;
  int workers = 1;
  std::unique_ptr<Partition> parent_part;
  std::unique_ptr<Partition> child_part;
  std::vector<BlockStore>* parents = nullptr;
  const std::vector<BlockStore>* children = nullptr;
  std::vector<std::vector<LineId>> lines;                      // per worker, in processing order
  std::map<LineId, std::vector<int>> coords;                   // subgame: parent blocks produced per line
  std::vector<Mailbox> boxes;
  Mailbox coordinator;
  std::atomic<bool> abort{false};
  std::mutex error_mutex;
  std::optional<Error> error;
  std::vector<uint64_t> sent;

  explicit SliceRun(int n) : boxes(size_t(n)), sent(size_t(n), 0) {}

  int parent_worker(const BlockId& b) const { return parent_part->block_owner(b) % workers; }
  int child_worker(const BlockId& b) const { return child_part->block_owner(b) % workers; }

  void fail(const Error& e) {
    {
      std::lock_guard lock(error_mutex);
      if (!error) error = e;
    }
    abort = true;
    for (auto& box : boxes) box.push(Message{});
  }
};

class Worker {
 public:
  Worker(SliceRun& run, int me) : run_(run), me_(me) {}

  void operator()() {
    try {
      loop();
    } catch (const Stopped&) {
    } catch (const Error& e) {
      run_.fail(e);
    } catch (const std::exception& e) {
      run_.fail(Error(Errc::invalid_argument, std::string("worker failure: ") + e.what()));
    }
  }

 private:
  struct Pending {
    LineId line;
    ChildLine child;
    LineInput input;
    int waiting = 0;
  };

  void send(int to, Message m) {
    m.from = me_;
    m.id = (uint64_t(me_) << 48) | ++seq_;
    run_.sent[me_]++;
    if (to < 0)
      run_.coordinator.push(std::move(m));
    else
      run_.boxes[to].push(std::move(m));
  }

  const std::vector<int>& coords(const LineId& line) const {
    static const std::vector<int> all;
    auto it = run_.coords.find(line);
    return it == run_.coords.end() ? all : it->second;
  }

  void finish(const LineId& line, const LineInput& input) {
    SuperFilter keep;
    if (const SubgameDomain* sub = run_.config->subgame) {
      const int slice = line.slice, section = line.section;
      keep = [sub, slice, section](const Index4& idx) { return sub->contains(slice, section, idx); };
    }
    const auto& wanted = coords(line);
    const auto blocks = compute_line(line, input, wanted, keep);
    for (size_t i = 0; i < blocks.size(); i++) {
      const BlockId id = line_block(line, wanted.empty() ? int(i) : wanted[i]);
      const auto raw = encode_block(blocks[i]);
      Message m;
      m.kind = Message::Kind::output_scatter;
      m.block = id;
      m.line = line;
      m.payload = PackedBlock{id, run_.config->codec, uint32_t(raw.size()), compress(run_.config->codec, raw)};
      send(run_.parent_worker(id), std::move(m));
    }
    Message done;
    done.kind = Message::Kind::line_done;
    done.line = line;
    send(-1, std::move(done));
  }

  void start(const LineId& line) {
    const auto cl = child_line(line);
    if (!cl) {
      finish(line, {});
      return;
    }
    const uint64_t token = next_token_++;
    Pending& p = pending_[token];
    p.line = line;
    p.child = *cl;
    const int len = line_length(cl->line);
    p.input.resize(size_t(len));
    p.waiting = len;
    for (int i = 0; i < len; i++) {
      Message m;
      m.kind = Message::Kind::request_input;
      m.block = line_block(cl->line, i);
      m.token = token;
      m.position = i;
      send(run_.child_worker(m.block), std::move(m));
    }
  }

  std::string diagnostics() const {
    std::string s = "worker " + std::to_string(me_) + " idle for " + std::to_string(run_.config->idle_timeout) + "s on slice " +
                    std::to_string(run_.slice) + ": " + std::to_string(next_) + "/" + std::to_string(run_.lines[me_].size()) +
                    " lines started, " + std::to_string(barriers_) + "/" + std::to_string(run_.workers) + " barriers";
    for (auto& [token, p] : pending_) s += "; " + to_string(p.line) + " waits for " + std::to_string(p.waiting) + " inputs";
    return s;
  }

  void loop() {
    const auto& lines = run_.lines[me_];
    const size_t limit = size_t(std::max(1, run_.config->max_in_flight));
    BlockStore& mine = (*run_.parents)[me_];
    for (;;) {
      while (!barrier_sent_ && pending_.size() < limit && next_ < lines.size()) start(lines[next_++]);
      if (!barrier_sent_ && next_ == lines.size() && pending_.empty()) {
        for (int w = 0; w < run_.workers; w++) {
          Message m;
          m.kind = Message::Kind::barrier;
          send(w, std::move(m));
        }
        barrier_sent_ = true;
      }
      if (barrier_sent_ && barriers_ == run_.workers) return;
      auto msg = run_.boxes[me_].pop(run_.config->idle_timeout);
      if (run_.abort) throw Stopped{};
      if (!msg) throw Error(Errc::deadlock, diagnostics());
      switch (msg->kind) {
        case Message::Kind::request_input: {
          Message reply;
          reply.kind = Message::Kind::input_data;
          reply.block = msg->block;
          reply.token = msg->token;
          reply.position = msg->position;
          const BlockStore* store = run_.children ? &(*run_.children)[me_] : nullptr;
          if (store && store->contains(msg->block))
            reply.payload = store->packed(msg->block);
          else
            reply.absent = true;
          send(msg->from, std::move(reply));
          break;
        }
        case Message::Kind::input_data: {
          auto it = pending_.find(msg->token);
          if (it == pending_.end()) throw Error(Errc::invalid_argument, "input for an unknown line");
          Pending& p = it->second;
          if (!msg->absent)
            p.input[msg->position] = decode_block(decompress(msg->payload.codec, msg->payload.data, msg->payload.raw_size));
          if (--p.waiting == 0) {
            finish(p.line, p.input);
            pending_.erase(it);
          }
          break;
        }
        case Message::Kind::output_scatter:
          mine.contribute(msg->block, msg->line.dim,
                          decode_block(decompress(msg->payload.codec, msg->payload.data, msg->payload.raw_size)));
          break;
        case Message::Kind::barrier:
          barriers_++;
          break;
        default:
          throw Stopped{};
      }
    }
  }

  SliceRun& run_;
  int me_;
  uint64_t seq_ = 0;
  uint64_t next_token_ = 0;
  size_t next_ = 0;
  bool barrier_sent_ = false;
  int barriers_ = 0;
  std::map<uint64_t, Pending> pending_;
};

void run_workers(int n, const std::function<void(int)>& body) {
  std::vector<std::thread> threads;
  for (int w = 0; w < n; w++) threads.emplace_back(body, w);
  for (auto& t : threads) t.join();
}

// Blocks of slice n holding needed supers, or every block.
std::vector<BlockId> slice_blocks(int n, const SubgameDomain* sub) {
  std::vector<BlockId> out;
  if (sub) {
    for (auto& [section, idx] : sub->needed[n]) out.push_back(block_of(n, section, idx));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  const SliceLayout layout(n);
  out.reserve(layout.blocks());
  for (uint64_t i = 0; i < layout.blocks(); i++) out.push_back(layout.block(i));
  return out;
}

std::vector<PackedBlock> collect(const std::vector<BlockStore>& stores) {
  std::vector<PackedBlock> out;
  for (const auto& s : stores)
    for (const BlockId& id : s.ids()) out.push_back(s.packed(id));
  std::sort(out.begin(), out.end(), [](const PackedBlock& a, const PackedBlock& b) { return a.id < b.id; });
  return out;
}

struct Artifacts {
  CountsRecord counts;
  std::vector<Sample> samples;
};

Artifacts emit_artifacts(int n, const std::vector<BlockStore>& stores, const EngineConfig& config) {
  const auto& sections = sections_of_slice(n);
  std::map<BlockId, int> where;
  for (int w = 0; w < int(stores.size()); w++)
    for (const BlockId& id : stores[w].ids()) where[id] = w;
  auto read = [&](const BlockId& id) {
    auto it = where.find(id);
    if (it == where.end()) throw Error(Errc::block_not_found, to_string(id));
    return stores[it->second].read(id);
  };

  Artifacts a;
  a.counts.slice = n;
  auto tally = [&](const SuperValue& v) {
    const uint64_t win = uint64_t(v.win.count()), notloss = uint64_t(v.notloss.count());
    a.counts.supers++;
    a.counts.win += win;
    a.counts.tie += notloss - win;
    a.counts.loss += 256 - notloss;
  };

  // candidates for samples, in a fixed order
  std::vector<std::pair<int, Index4>> subset;
  uint64_t total = 0;
  if (config.subgame) {
    subset.assign(config.subgame->needed[n].begin(), config.subgame->needed[n].end());
    total = subset.size();
    std::map<BlockId, std::vector<SuperValue>> cache;
    for (auto& [section, idx] : subset) {
      const BlockId id = block_of(n, section, idx);
      auto it = cache.find(id);
      if (it == cache.end()) it = cache.emplace(id, read(id)).first;
      tally(it->second[block_offset(section_shape(sections[section]), idx)]);
    }
  } else {
    for (auto& [id, w] : where)
      for (const SuperValue& v : stores[w].read(id)) tally(v);
    total = a.counts.supers;
  }

  const uint64_t k = std::min<uint64_t>(uint64_t(std::max(0, config.samples)), total);
  std::vector<uint64_t> picks;
  for (uint64_t i = 0; i < k; i++) picks.push_back(permute(config.seed, total, i));
  std::sort(picks.begin(), picks.end());
  std::vector<uint64_t> section_start{0};
  for (const Section& s : sections) {
    const Index4 shape = section_shape(s);
    section_start.push_back(section_start.back() + uint64_t(shape[0]) * shape[1] * shape[2] * shape[3]);
  }
  for (uint64_t p : picks) {
    int section;
    Index4 idx;
    if (config.subgame) {
      section = subset[p].first;
      idx = subset[p].second;
    } else {
      section = int(std::upper_bound(section_start.begin(), section_start.end(), p) - section_start.begin()) - 1;
      const Index4 shape = section_shape(sections[section]);
      uint64_t r = p - section_start[section];
      for (int i = 3; i >= 0; i--) {
        idx[i] = int(r % uint64_t(shape[i]));
        r /= uint64_t(shape[i]);
      }
    }
    const auto block = read(block_of(n, section, idx));
    a.samples.push_back(Sample{board_at(sections[section], idx), block[block_offset(section_shape(sections[section]), idx)]});
  }
  return a;
}

}  // namespace

std::vector<Board> supported_boards(Board root, int k) {
  const int n = root.stones();
  if (k < n || k > 36) throw Error(Errc::invalid_argument, "slice " + std::to_string(k) + " below the root");
  const int add = k - n;
  const int add_black = (k + 1) / 2 - root.count(Color::black);
  std::vector<Board> out;
  if (add_black < 0 || add_black > add) return out;
  const uint64_t black = root.side(Color::black), white = root.side(Color::white);
  for_each_subset(root.empty(), add, 0, [&](uint64_t cells) {
    for_each_subset(cells, add_black, 0, [&](uint64_t b) { out.push_back(Board::from_sides(black | b, white | (cells & ~b))); });
  });
  return out;
}

SubgameDomain subgame_domain(Board root, uint64_t limit) {
  if (!root.valid_position()) throw Error(Errc::invalid_argument, "root is not a legal position");
  const int n = root.stones();
  const int e = 36 - n;
  uint64_t boards = 0;
  for (int k = n; k <= 36; k++) {
    const int add = k - n, add_black = (k + 1) / 2 - root.count(Color::black);
    boards += binomial(e, add) * binomial(add, add_black);
  }
  if (boards > limit)
    throw Error(Errc::tree_too_large, "subgame of a " + std::to_string(n) + "-stone root has " + std::to_string(boards) +
                                          " boards (limit " + std::to_string(limit) + ")");
  SubgameDomain sub;
  sub.root = root;
  for (int k = n; k <= 35; k++)
    for (Board b : supported_boards(root, k)) {
      const Located l = locate(b);
      sub.needed[k].insert({section_index(l.section), l.index});
    }
  for (int k = n; k <= 34; k++) {
    const auto& sections = sections_of_slice(k);
    for (auto& [section, idx] : sub.needed[k]) {
      const Section& s = sections[section];
      const Board b = board_at(s, idx);
      for (int q = 0; q < 4; q++) {
        if (s.counts[q][0] + s.counts[q][1] == 9) continue;
        const auto [cs, d] = child_section(s, q, s.to_move());
        const int child = section_index(cs);
        const uint16_t empty = uint16_t(511 & ~((b.side(Color::black) | b.side(Color::white)) >> (9 * q)));
        for (int local = 0; local < 9; local++)
          if (empty >> local & 1) sub.needed[k + 1].insert({child, map_child(b, Cell::from_bit(9 * q + local), d).index});
      }
    }
  }
  return sub;
}

uint64_t slice_memory_estimate(int n, const SubgameDomain* subgame) {
  auto supers = [&](int k) -> uint64_t {
    if (k >= 36) return 0;
    return subgame ? subgame->needed[k].size() : SliceLayout(k).supers();
  };
  return kSuperBytes * (supers(n) + supers(n + 1));
}

SolveResult solve(int from, int to, const BoundarySpec& boundary, const EngineConfig& config) {
  if (from > 36 || to < 0 || from < to)
    throw Error(Errc::invalid_argument, "need 36 >= from >= to >= 0, got from " + std::to_string(from) + " to " + std::to_string(to));
  if (boundary.mode == BoundarySpec::Mode::real_terminal && from != 36)
    throw Error(Errc::invalid_argument, "the terminal boundary starts at slice 36");
  if (boundary.mode == BoundarySpec::Mode::injected && from == 36)
    throw Error(Errc::invalid_argument, "injected boundaries need a slice below 36");
  if (config.workers < 1 || config.ranks < 1) throw Error(Errc::invalid_argument, "workers and ranks must be positive");
  const SubgameDomain* sub = config.subgame;
  for (int n = from - 1; n >= to; n--) {
    const uint64_t need = slice_memory_estimate(n, sub);
    if (need > config.memory_budget)
      throw Error(Errc::out_of_memory, "slice " + std::to_string(n) + " needs about " + std::to_string(need >> 20) +
                                           " MiB uncompressed (budget " + std::to_string(config.memory_budget >> 20) + " MiB)");
  }
  if (!config.store_dir.empty()) std::filesystem::create_directories(config.store_dir);
  auto path = [&](const std::string& name) { return (std::filesystem::path(config.store_dir) / name).string(); };

  const int workers = config.workers;
  SolveResult result;
  std::vector<BlockStore> children;

  if (boundary.mode == BoundarySpec::Mode::injected) {
    const Partition part(config.seed, from, config.ranks);
    const auto blocks = slice_blocks(from, sub);
    for (int w = 0; w < workers; w++) children.emplace_back(from, config.codec);
    run_workers(workers, [&](int w) {
      for (const BlockId& id : blocks)
        if (part.block_owner(id) % workers == w) children[w].put(id, inject_block(boundary.seed, id));
    });
    if (!config.store_dir.empty()) write_slice(path(slice_file_name(from)), from, collect(children));
  }

  for (int n = from - 1; n >= to; n--) {
    const auto start = Clock::now();
    SliceRun run(workers);
    run.slice = n;
    run.config = &config;
    run.workers = workers;
    run.parent_part = std::make_unique<Partition>(config.seed, n, config.ranks);
    if (n + 1 < 36) {
      run.child_part = std::make_unique<Partition>(config.seed, n + 1, config.ranks);
      run.children = &children;
    }
    std::vector<BlockStore> parents;
    for (int w = 0; w < workers; w++) parents.emplace_back(n, config.codec);
    run.parents = &parents;

    // line sets: every line with children, or those through needed blocks
    std::set<BlockId> needed_blocks;
    if (sub) {
      const auto blocks = slice_blocks(n, sub);
      needed_blocks.insert(blocks.begin(), blocks.end());
      for (const BlockId& b : blocks)
        for (int dim = 0; dim < 4; dim++) {
          LineId line{n, b.section, dim, b.block};
          line.block[dim] = 0;
          if (line_has_children(line)) run.coords[line].push_back(b.block[dim]);
        }
    }
    run.lines.resize(size_t(workers));
    uint64_t total_lines = 0;
    for (int r = 0; r < config.ranks; r++)
      for (const LineId& line : run.parent_part->lines_of_rank(r)) {
        if (!line_has_children(line)) continue;
        if (sub && !run.coords.count(line)) continue;
        run.lines[r % workers].push_back(line);
        total_lines++;
      }

    run_workers(workers, [&](int w) { Worker(run, w)(); });
    if (run.error) throw *run.error;

    std::set<LineId> done;
    for (Message& m : run.coordinator.drain()) {
      if (m.kind != Message::Kind::line_done) continue;
      if (!done.insert(m.line).second) throw Error(Errc::duplicate_contribution, to_string(m.line) + " computed twice");
    }
    if (done.size() != total_lines)
      throw Error(Errc::incomplete_block, "slice " + std::to_string(n) + ": " + std::to_string(done.size()) + " of " +
                                              std::to_string(total_lines) + " lines finished");
    uint64_t blocks = 0;
    SliceReport report;
    report.slice = n;
    report.lines = total_lines;
    for (BlockStore& s : parents) {
      s.check_complete();
      blocks += s.ids().size();
      report.arena_bytes += s.arena_bytes();
      s.compact();
      report.live_bytes += s.live_bytes();
    }
    const uint64_t expected = sub ? needed_blocks.size() : SliceLayout(n).blocks();
    if (blocks != expected)
      throw Error(Errc::incomplete_block, "slice " + std::to_string(n) + " has " + std::to_string(blocks) + " of " +
                                              std::to_string(expected) + " blocks");
    report.blocks = blocks;
    for (uint64_t s : run.sent) report.messages += s;

    Artifacts art = emit_artifacts(n, parents, config);
    result.counts.push_back(art.counts);
    auto packed = collect(parents);
    if (!config.store_dir.empty()) {
      write_slice(path(slice_file_name(n)), n, packed);
      write_counts(path(kCountsFileName), result.counts);
      write_samples(path(samples_file_name(n)), art.samples);
    }
    result.samples[n] = std::move(art.samples);
    if (config.keep_slices || n == to) result.slices[n] = std::move(packed);
    children = std::move(parents);
    report.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    result.reports.push_back(report);
  }
  return result;
}

SolvedSlice::Fetch SolvedSlice::memoized(Fetch fetch) {
  struct Memo {
    std::mutex mutex;
    std::map<BlockId, Block> blocks;
  };
  auto memo = std::make_shared<Memo>();
  return [memo, fetch = std::move(fetch)](const BlockId& id) {
    std::lock_guard lock(memo->mutex);
    auto it = memo->blocks.find(id);
    if (it == memo->blocks.end()) it = memo->blocks.emplace(id, fetch(id)).first;
    return it->second;
  };
}

SolvedSlice::SolvedSlice(int slice, const std::vector<PackedBlock>& blocks) : slice_(slice) {
  auto table = std::make_shared<std::map<BlockId, const PackedBlock*>>();
  for (const PackedBlock& b : blocks) (*table)[b.id] = &b;
  fetch_ = memoized([table](const BlockId& id) {
    auto it = table->find(id);
    if (it == table->end()) throw Error(Errc::block_not_found, to_string(id));
    const PackedBlock& b = *it->second;
    return std::make_shared<const std::vector<SuperValue>>(decode_block(decompress(b.codec, b.data, b.raw_size)));
  });
}

SolvedSlice::SolvedSlice(std::shared_ptr<SliceReader> reader)
    : slice_(reader->slice()), fetch_(memoized([reader](const BlockId& id) { return std::make_shared<const std::vector<SuperValue>>(reader->read_block(id)); })) {}

SuperValue SolvedSlice::super(int section, const Index4& index) const {
  const BlockId id = block_of(slice_, section, index);
  const Index4 shape = section_shape(sections_of_slice(slice_)[section]);
  return fetch_(id)->at(block_offset(shape, index));
}

SuperValue SolvedSlice::super_of(Board b) const {
  if (b.stones() != slice_)
    throw Error(Errc::invalid_argument, "board has " + std::to_string(b.stones()) + " stones, slice is " + std::to_string(slice_));
  const Located l = locate(b);
  return transform_super(inverse(l.g), super(section_index(l.section), l.index));
}

}  // namespace pentago
