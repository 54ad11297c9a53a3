#include "wavecascade/kernel_table.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <fstream>
#include <sstream>

#include "wavecascade/errors.hpp"

namespace wavecascade {

namespace {

constexpr std::array<char, 8> kMagic = {'W', 'C', 'K', 'T', 'A', 'B', 'L', 'E'};
constexpr std::uint32_t kFormatVersion = 1;

class Fnv1a {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t k = 0; k < n; ++k) {
      h_ ^= c[k];
      h_ *= 0x100000001b3ULL;
    }
  }
  template <class T>
  void value(const T& v) {
    bytes(&v, sizeof(T));
  }
  std::uint64_t digest() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

bool keeps(std::size_t i, std::size_t j, std::size_t l, std::size_t n, Truncation t) {
  if (i + j < l) return false;
  if (i + j - l >= n) return false;
  if (t == Truncation::kResonant) return true;
  std::size_t a = i, b = j, c = l;
  if (a < b) std::swap(a, b);
  if (b < c) std::swap(b, c);
  if (a < b) std::swap(a, b);
  return a + b - c < n;
}

}  // namespace

std::uint64_t table_fingerprint(const KernelWeights& kw, const OmegaGrid& grid,
                                const KernelBuildOptions& options) {
  Fnv1a h;
  h.value(kFormatVersion);
  h.value(static_cast<std::uint64_t>(grid.size()));
  h.value(grid.spacing());
  const std::string& name = grid.dispersion().name();
  h.bytes(name.data(), name.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    h.value(grid.radius(i));
    h.value(grid.mho(i));
  }
  h.value(kw.c_q());
  h.value(kw.cutoff());
  h.value(static_cast<int>(options.truncation));
  h.value(options.deduplicate);
  h.value(options.keep_zero_weights);
  return h.digest();
}

KernelTable::KernelTable(const KernelWeights& kw, const OmegaGrid& grid,
                         const KernelBuildOptions& options)
    : weights_(kw), grid_(grid), options_(options),
      fingerprint_(table_fingerprint(kw, grid, options)) {}

std::size_t KernelTable::estimate_bytes(std::size_t n, const KernelBuildOptions& options) {
  // Exact count for the resonant rule, which bounds the closed rule.
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = options.deduplicate ? i : 0; j < n; ++j) {
      const std::size_t s = i + j;
      const std::size_t lo = s >= n ? s - n + 1 : 0;
      const std::size_t hi = std::min(s, n - 1);
      count += hi - lo + 1;
    }
  }
  return count * sizeof(KernelEntry);
}

KernelTable KernelTable::build(const KernelWeights& kw, const OmegaGrid& grid,
                               const KernelBuildOptions& options) {
  const std::size_t n = grid.size();
  const std::size_t need = estimate_bytes(n, options);
  if (need > options.memory_budget_bytes) {
    std::ostringstream msg;
    msg << "kernel table for " << n << " nodes needs up to " << need << " bytes ("
        << (need >> 20) << " MiB); budget is " << options.memory_budget_bytes << " bytes";
    throw BudgetError(msg.str(), need);
  }

  KernelTable table(kw, grid, options);
  const double c_q = kw.c_q();
  std::vector<std::vector<KernelEntry>> rows(n);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    auto& row = rows[i];
    for (std::size_t j = options.deduplicate ? i : 0; j < n; ++j) {
      const double multiplicity = (options.deduplicate && i != j) ? 2.0 : 1.0;
      for (std::size_t l = 0; l < n; ++l) {
        if (!keeps(i, j, l, n, options.truncation)) continue;
        const std::size_t m = i + j - l;
        const double w = c_q * cutoff_kernel_from_radii(kw, grid.radius(i), grid.radius(j),
                                                        grid.radius(l), grid.radius(m),
                                                        grid.mho(m));
        if (w == 0.0 && !options.keep_zero_weights) continue;
        row.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                       static_cast<std::uint32_t>(l), static_cast<std::uint32_t>(m),
                       w * multiplicity});
      }
    }
  }

  std::size_t total = 0;
  for (const auto& row : rows) total += row.size();
  table.entries_.reserve(total);
  for (auto& row : rows) {
    table.entries_.insert(table.entries_.end(), row.begin(), row.end());
    std::vector<KernelEntry>().swap(row);
  }
  return table;
}

void KernelTable::save(const std::filesystem::path& path) const {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open table cache for writing: " + path.string());
  const std::uint64_t count = entries_.size();
  out.write(kMagic.data(), kMagic.size());
  out.write(reinterpret_cast<const char*>(&kFormatVersion), sizeof(kFormatVersion));
  out.write(reinterpret_cast<const char*>(&fingerprint_), sizeof(fingerprint_));
  out.write(reinterpret_cast<const char*>(&count), sizeof(count));
  out.write(reinterpret_cast<const char*>(entries_.data()),
            static_cast<std::streamsize>(count * sizeof(KernelEntry)));
  if (!out) throw IoError("failed writing table cache: " + path.string());
}

KernelTable KernelTable::load(const std::filesystem::path& path, const KernelWeights& kw,
                              const OmegaGrid& grid, const KernelBuildOptions& options) {
  static_assert(std::endian::native == std::endian::little, "cache format is little-endian");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open table cache: " + path.string());
  std::array<char, 8> magic{};
  std::uint32_t version = 0;
  std::uint64_t fingerprint = 0, count = 0;
  in.read(magic.data(), magic.size());
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  in.read(reinterpret_cast<char*>(&fingerprint), sizeof(fingerprint));
  in.read(reinterpret_cast<char*>(&count), sizeof(count));
  if (!in || magic != kMagic) throw ContractError("not a kernel table cache: " + path.string());
  if (version != kFormatVersion) {
    throw ContractError("kernel table cache version " + std::to_string(version) +
                        " unsupported: " + path.string());
  }
  KernelTable table(kw, grid, options);
  if (fingerprint != table.fingerprint_) {
    throw ContractError("kernel table cache was built for different parameters: " + path.string());
  }
  table.entries_.resize(count);
  in.read(reinterpret_cast<char*>(table.entries_.data()),
          static_cast<std::streamsize>(count * sizeof(KernelEntry)));
  if (!in) throw ContractError("truncated kernel table cache: " + path.string());
  return table;
}

}  // namespace wavecascade
