#include "romns/container.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "romns/grid.hpp"

namespace romns {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
T to_le(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

class Writer {
 public:
  template <class T>
  void put(T v) {
    v = to_le(v);
    out_.append(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void put_string(const std::string& s) {
    put(static_cast<std::uint32_t>(s.size()));
    out_ += s;
  }
  void put_raw(const char* p, std::size_t n) { out_.append(p, n); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  Reader(const std::string& bytes, const std::string& origin) : in_(bytes), origin_(origin) {}

  template <class T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return to_le(v);
  }
  std::string get_string() {
    const auto n = get<std::uint32_t>();
    need(n);
    std::string s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  void get_raw(char* dst, std::size_t n) {
    need(n);
    std::memcpy(dst, in_.data() + pos_, n);
    pos_ += n;
  }
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw ArtifactError(origin_ + ": truncated container");
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  const std::string& in_;
  const std::string& origin_;
  std::size_t pos_ = 0;
};

}  // namespace

void Container::add(std::string name, DenseMatrix m) {
  for (auto& b : blocks) {
    if (b.first == name) {
      b.second = std::move(m);
      return;
    }
  }
  blocks.emplace_back(std::move(name), std::move(m));
}

void Container::add_series(std::string name, const std::vector<double>& v) {
  add(std::move(name), Eigen::Map<const DenseMatrix>(v.data(), static_cast<Index>(v.size()), 1));
}

bool Container::has(const std::string& name) const {
  for (const auto& b : blocks) {
    if (b.first == name) return true;
  }
  return false;
}

const DenseMatrix& Container::block(const std::string& name) const {
  for (const auto& b : blocks) {
    if (b.first == name) return b.second;
  }
  throw ArtifactError("container: missing block '" + name + "'");
}

Vector Container::vector(const std::string& name) const {
  const DenseMatrix& m = block(name);
  return Eigen::Map<const Vector>(m.data(), m.size());
}

std::vector<double> Container::series(const std::string& name) const {
  const DenseMatrix& m = block(name);
  return std::vector<double>(m.data(), m.data() + m.size());
}

const std::string& Container::get(const std::string& key) const {
  const auto it = meta.find(key);
  if (it == meta.end()) throw ArtifactError("container: missing metadata '" + key + "'");
  return it->second;
}

std::string serialize(const Container& c) {
  Writer w;
  w.put_raw(kContainerMagic, sizeof kContainerMagic);
  w.put(c.n_v);
  w.put(c.n_p);
  w.put(c.steps);
  w.put(c.grid_hash);
  w.put(static_cast<std::uint32_t>(c.meta.size()));
  for (const auto& [k, v] : c.meta) {
    w.put_string(k);
    w.put_string(v);
  }
  w.put(static_cast<std::uint32_t>(c.blocks.size()));
  for (const auto& [name, m] : c.blocks) {
    w.put_string(name);
    w.put(static_cast<std::uint64_t>(m.rows()));
    w.put(static_cast<std::uint64_t>(m.cols()));
    if constexpr (std::endian::native == std::endian::little) {
      w.put_raw(reinterpret_cast<const char*>(m.data()), static_cast<std::size_t>(m.size()) * sizeof(double));
    } else {
      for (Index k = 0; k < m.size(); ++k) w.put(m.data()[k]);
    }
  }
  return w.take();
}

Container deserialize(const std::string& bytes, const std::string& origin) {
  if (bytes.size() < sizeof kContainerMagic ||
      std::memcmp(bytes.data(), kContainerMagic, sizeof kContainerMagic) != 0) {
    throw ArtifactError(origin + ": not a ROMNS1 container");
  }
  Reader r(bytes, origin);
  for (std::size_t i = 0; i < sizeof kContainerMagic; ++i) r.get<char>();
  Container c;
  c.n_v = r.get<std::uint64_t>();
  c.n_p = r.get<std::uint64_t>();
  c.steps = r.get<std::uint64_t>();
  c.grid_hash = r.get<std::uint64_t>();
  const auto n_meta = r.get<std::uint32_t>();
  for (std::uint32_t i = 0; i < n_meta; ++i) {
    std::string k = r.get_string();
    c.meta[k] = r.get_string();
  }
  const auto n_blocks = r.get<std::uint32_t>();
  for (std::uint32_t i = 0; i < n_blocks; ++i) {
    std::string name = r.get_string();
    const auto rows = r.get<std::uint64_t>();
    const auto cols = r.get<std::uint64_t>();
    if (cols != 0 && rows > (bytes.size() / 8) / cols) throw ArtifactError(origin + ": block '" + name + "' is truncated");
    r.need(rows * cols * 8);
    DenseMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
    if constexpr (std::endian::native == std::endian::little) {
      r.get_raw(reinterpret_cast<char*>(m.data()), static_cast<std::size_t>(m.size()) * sizeof(double));
    } else {
      for (Index k = 0; k < m.size(); ++k) m.data()[k] = r.get<double>();
    }
    c.blocks.emplace_back(std::move(name), std::move(m));
  }
  if (!r.done()) throw ArtifactError(origin + ": trailing bytes after last block");
  return c;
}

void atomic_write(const std::string& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ArtifactError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw ArtifactError("short write to " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ArtifactError("cannot move " + tmp.string() + " into place: " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError("missing artifact " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_container(const std::string& path, const Container& c) { atomic_write(path, serialize(c)); }

Container read_container(const std::string& path) { return deserialize(read_file(path), path); }

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

std::string content_hash(const std::string& bytes) { return hex64(fnv1a(bytes.data(), bytes.size())); }

}  // namespace romns
