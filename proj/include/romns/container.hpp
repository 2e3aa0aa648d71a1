#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "romns/linalg.hpp"

namespace romns {

/// Binary artifact. Layout (all integers little-endian):
///   "ROMNS1"                       6 bytes
///   n_v, n_p, steps, grid_hash     4 x u64
///   metadata count, then (key, value) strings, each as u32 length + bytes
///   block count, then per block: name string, rows u64, cols u64,
///   rows*cols f64 values column by column
struct Container {
  std::uint64_t n_v = 0;
  std::uint64_t n_p = 0;
  std::uint64_t steps = 0;
  std::uint64_t grid_hash = 0;
  std::map<std::string, std::string> meta;
  std::vector<std::pair<std::string, DenseMatrix>> blocks;

  void add(std::string name, DenseMatrix m);
  void add_vector(std::string name, const Vector& v) { add(std::move(name), DenseMatrix(v)); }
  void add_series(std::string name, const std::vector<double>& v);
  bool has(const std::string& name) const;
  const DenseMatrix& block(const std::string& name) const;
  Vector vector(const std::string& name) const;
  std::vector<double> series(const std::string& name) const;
  const std::string& get(const std::string& key) const;
};

inline constexpr char kContainerMagic[6] = {'R', 'O', 'M', 'N', 'S', '1'};

std::string serialize(const Container& c);
Container deserialize(const std::string& bytes, const std::string& origin = "<memory>");

/// Writes to a temporary sibling and renames it into place.
void atomic_write(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);

void write_container(const std::string& path, const Container& c);
Container read_container(const std::string& path);

/// FNV-1a content hash as 16 hex digits.
std::string content_hash(const std::string& bytes);
std::string hex64(std::uint64_t v);

}  // namespace romns
