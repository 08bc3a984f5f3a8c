#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "slap/bytes.hpp"
#include "slap/rng.hpp"
#include "slap/sha256.hpp"

namespace slap::store {

struct GridParams {
  double origin_x = 0;
  double origin_y = 0;
  double cell_m = 100.0;
  uint64_t window_ns = 900ull * 1000000000ull;  // 15 minutes
  uint32_t cells_x = 16;
  uint32_t cells_y = 16;
  uint32_t n_bands = 4;
};

struct RecordKey {
  int32_t cx = 0;
  int32_t cy = 0;
  uint64_t window_start_ns = 0;
  uint32_t band = 0;

  friend bool operator<(const RecordKey& a, const RecordKey& b) {
    if (a.cx != b.cx) return a.cx < b.cx;
    if (a.cy != b.cy) return a.cy < b.cy;
    if (a.window_start_ns != b.window_start_ns) return a.window_start_ns < b.window_start_ns;
    return a.band < b.band;
  }
  friend bool operator==(const RecordKey& a, const RecordKey& b) {
    return a.cx == b.cx && a.cy == b.cy && a.window_start_ns == b.window_start_ns && a.band == b.band;
  }
};

/// One availability block, padded to the fixed wire size.
struct SpectrumRecord {
  static constexpr size_t kEncodedSize = 560;

  RecordKey key;
  bool available = false;
  uint8_t incumbent_class = 0;
  int16_t max_power_cdbm = 0;  // centi-dBm
  uint64_t updated_at_ns = 0;
  uint32_t writer_id = 0;

  Bytes encode() const {
    Bytes out;
    out.reserve(kEncodedSize);
    append_u32be(out, uint32_t(key.cx));
    append_u32be(out, uint32_t(key.cy));
    append_u64be(out, key.window_start_ns);
    append_u32be(out, key.band);
    append_u8(out, available ? 1 : 0);
    append_u8(out, incumbent_class);
    append_u32be(out, uint32_t(uint16_t(max_power_cdbm)));
    append_u64be(out, updated_at_ns);
    append_u32be(out, writer_id);
    out.resize(kEncodedSize, 0);
    return out;
  }

  static SpectrumRecord decode(std::span<const uint8_t> in) {
    if (in.size() != kEncodedSize)
      throw Error(ErrorCode::bad_encoding, "spectrum record: wrong size");
    ByteReader r(in);
    SpectrumRecord rec;
    rec.key.cx = int32_t(r.u32be());
    rec.key.cy = int32_t(r.u32be());
    rec.key.window_start_ns = r.u64be();
    rec.key.band = r.u32be();
    rec.available = r.u8() != 0;
    rec.incumbent_class = r.u8();
    rec.max_power_cdbm = int16_t(uint16_t(r.u32be()));
    rec.updated_at_ns = r.u64be();
    rec.writer_id = r.u32be();
    return rec;
  }
};

/// rho: coordinates (16 B), timestamp (8 B), band.
struct Query {
  double lx = 0;
  double ly = 0;
  uint64_t ts_ns = 0;
  uint32_t band = 0;

  Bytes encode() const {
    Bytes out;
    append_f64be(out, lx);
    append_f64be(out, ly);
    append_u64be(out, ts_ns);
    append_u32be(out, band);
    return out;
  }
};

struct AuditEntry {
  Bytes nym_digest;
  uint64_t ts_ns;
  RecordKey key;
};

struct SyncDivergence {
  RecordKey key;
  uint32_t winner_store;
  uint64_t winner_ts;
};

struct SyncReport {
  std::vector<SyncDivergence> reconciled;
};

class SpectrumStore {
 public:
  SpectrumStore() = default;
  SpectrumStore(GridParams grid, uint32_t store_id) : grid_(grid), store_id_(store_id) {}

  const GridParams& grid() const { return grid_; }
  uint32_t store_id() const { return store_id_; }
  size_t record_count() const { return records_.size(); }
  const std::vector<AuditEntry>& audit_log() const { return audit_; }

  std::pair<int32_t, int32_t> cell_of(double lx, double ly) const {
    double fx = (lx - grid_.origin_x) / grid_.cell_m;
    double fy = (ly - grid_.origin_y) / grid_.cell_m;
    if (fx < 0 || fy < 0 || fx >= grid_.cells_x || fy >= grid_.cells_y)
      throw Error(ErrorCode::no_coverage, "spectrum store: location outside region");
    return {int32_t(fx), int32_t(fy)};
  }

  uint64_t window_of(uint64_t ts_ns) const { return ts_ns - ts_ns % grid_.window_ns; }

  RecordKey key_for(const Query& q) const {
    if (q.band >= grid_.n_bands) throw Error(ErrorCode::no_coverage, "spectrum store: unknown band");
    auto [cx, cy] = cell_of(q.lx, q.ly);
    return {cx, cy, window_of(q.ts_ns), q.band};
  }

  SpectrumRecord lookup(const Query& q) const {
    RecordKey k = key_for(q);
    auto it = records_.find(k);
    if (it == records_.end())
      throw Error(ErrorCode::no_coverage, "spectrum store: no record for cell/window/band");
    return it->second;
  }

  /// Caller has already validated credentials and PoL; the audit trail keeps
  /// the pseudonym digest, never an identity.
  void populate(const SpectrumRecord& rec, std::span<const uint8_t> nym_digest) {
    records_[rec.key] = rec;
    audit_.push_back({Bytes(nym_digest.begin(), nym_digest.end()), rec.updated_at_ns, rec.key});
  }

  void upsert(const SpectrumRecord& rec) { records_[rec.key] = rec; }

  /// Last-writer-wins by timestamp; ties break toward the smaller store id.
  SyncReport sync_from(const SpectrumStore& peer) {
    SyncReport report;
    for (const auto& [key, theirs] : peer.records_) {
      auto it = records_.find(key);
      if (it == records_.end()) {
        records_[key] = theirs;
        report.reconciled.push_back({key, theirs.writer_id, theirs.updated_at_ns});
        continue;
      }
      SpectrumRecord& ours = it->second;
      bool take_theirs = theirs.updated_at_ns > ours.updated_at_ns ||
                         (theirs.updated_at_ns == ours.updated_at_ns &&
                          theirs.writer_id < ours.writer_id);
      if (take_theirs && !(theirs.encode() == ours.encode())) {
        ours = theirs;
        report.reconciled.push_back({key, theirs.writer_id, theirs.updated_at_ns});
      }
    }
    return report;
  }

  /// Deterministic synthetic population; rate of available records tracks
  /// `density`.
  void synth_populate(uint64_t seed, double density, uint32_t n_windows, uint64_t start_ts_ns) {
    Drbg rng = Drbg(seed).fork("store.synth");
    for (uint32_t w = 0; w < n_windows; ++w) {
      uint64_t window_start = window_of(start_ts_ns) + uint64_t(w) * grid_.window_ns;
      for (uint32_t cx = 0; cx < grid_.cells_x; ++cx)
        for (uint32_t cy = 0; cy < grid_.cells_y; ++cy)
          for (uint32_t b = 0; b < grid_.n_bands; ++b) {
            SpectrumRecord rec;
            rec.key = {int32_t(cx), int32_t(cy), window_start, b};
            rec.available = rng.unit_double() < density;
            rec.incumbent_class = uint8_t(rng.uniform(4));
            rec.max_power_cdbm = int16_t(rng.uniform(4000)) - 1000;
            rec.updated_at_ns = window_start;
            rec.writer_id = store_id_;
            records_[rec.key] = rec;
          }
    }
  }

  // ---- persistence: fixed header then 560-byte records in key order ----

  Bytes dump() const {
    Bytes out;
    append(out, to_bytes("SLAPSTR1"));
    append_u32be(out, 1);  // version
    append_f64be(out, grid_.origin_x);
    append_f64be(out, grid_.origin_y);
    append_f64be(out, grid_.cell_m);
    append_u64be(out, grid_.window_ns);
    append_u32be(out, grid_.cells_x);
    append_u32be(out, grid_.cells_y);
    append_u32be(out, grid_.n_bands);
    append_u32be(out, store_id_);
    append_u64be(out, records_.size());
    for (const auto& [key, rec] : records_) append(out, rec.encode());
    return out;
  }

  static SpectrumStore load(std::span<const uint8_t> data) {
    ByteReader r(data);
    Bytes magic = r.fixed(8);
    if (magic != to_bytes("SLAPSTR1")) throw Error(ErrorCode::bad_encoding, "store: bad magic");
    uint32_t version = r.u32be();
    if (version != 1) throw Error(ErrorCode::bad_encoding, "store: unsupported version");
    SpectrumStore s;
    s.grid_.origin_x = r.f64be();
    s.grid_.origin_y = r.f64be();
    s.grid_.cell_m = r.f64be();
    s.grid_.window_ns = r.u64be();
    s.grid_.cells_x = r.u32be();
    s.grid_.cells_y = r.u32be();
    s.grid_.n_bands = r.u32be();
    s.store_id_ = r.u32be();
    uint64_t count = r.u64be();
    for (uint64_t i = 0; i < count; ++i) {
      auto rec = SpectrumRecord::decode(r.fixed(SpectrumRecord::kEncodedSize));
      s.records_[rec.key] = rec;
    }
    return s;
  }

  void save_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::bad_argument, "store: cannot open " + path);
    Bytes d = dump();
    f.write(reinterpret_cast<const char*>(d.data()), std::streamsize(d.size()));
  }

  static SpectrumStore load_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::bad_argument, "store: cannot open " + path);
    Bytes d((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return load(d);
  }

  double availability_rate() const {
    if (records_.empty()) return 0;
    size_t avail = 0;
    for (const auto& [k, r] : records_)
      if (r.available) ++avail;
    return double(avail) / double(records_.size());
  }

 private:
  GridParams grid_;
  uint32_t store_id_ = 0;
  std::map<RecordKey, SpectrumRecord> records_;
  std::vector<AuditEntry> audit_;
};

}  // namespace slap::store
