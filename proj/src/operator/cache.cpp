#include "dtnlab/cache.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace dtn {

namespace {

constexpr char kMagic[8] = {'D', 'T', 'N', 'L', 'A', 'B', 'C', '\0'};

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
bool get(std::istream& is, T& v) {
  return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof(T)));
}

}  // namespace

std::string content_hash(std::string_view content) {
  const std::string header = "blob " + std::to_string(content.size()) + std::string(1, '\0');
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw std::runtime_error("content_hash: cannot allocate digest context");
  EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr);
  EVP_DigestUpdate(ctx, header.data(), header.size());
  EVP_DigestUpdate(ctx, content.data(), content.size());
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return os.str();
}

std::string operator_cache_key(const PlanarDomain& domain, const PotentialField& V, Provenance backend,
                               std::size_t resolution, std::size_t max_mode) {
  std::ostringstream os;
  os << "dtnlab-operator v" << kCacheVersion << "|" << domain.describe() << "|" << V.describe() << "|"
     << to_string(backend) << "|n=" << resolution;
  if (backend == Provenance::exact_spectral) os << "|modes=" << max_mode;
  return os.str();
}

std::filesystem::path cache_path(const std::filesystem::path& dir, const std::string& key) {
  return dir / (content_hash(key) + ".dtn");
}

void save_operator(const std::filesystem::path& file, const std::string& key, const DtnOperator& op) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  const std::filesystem::path tmp = file.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("save_operator: cannot write " + tmp.string());
    os.write(kMagic, sizeof kMagic);
    put(os, kCacheVersion);
    put(os, static_cast<std::uint64_t>(key.size()));
    os.write(key.data(), static_cast<std::streamsize>(key.size()));
    put(os, static_cast<std::uint8_t>(op.provenance == Provenance::exact_spectral ? 1 : 0));
    put(os, static_cast<std::uint64_t>(op.size()));
    put(os, static_cast<std::uint64_t>(op.rank()));
    os.write(reinterpret_cast<const char*>(op.weights().data()), static_cast<std::streamsize>(sizeof(double) * op.size()));
    os.write(reinterpret_cast<const char*>(op.eigenvalues.data()), static_cast<std::streamsize>(sizeof(double) * op.rank()));
    os.write(reinterpret_cast<const char*>(op.eigenvectors.data()),
             static_cast<std::streamsize>(sizeof(double) * op.size() * op.rank()));
    if (!os) throw std::runtime_error("save_operator: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

CacheLookup load_operator(const std::filesystem::path& file, const std::string& key,
                          std::shared_ptr<const BoundarySpace> boundary, const PotentialField& V) {
  CacheLookup out;
  std::ifstream is(file, std::ios::binary);
  if (!is) return out;
  out.status = CacheStatus::stale;
  char magic[sizeof kMagic];
  std::uint32_t version = 0;
  if (!is.read(magic, sizeof magic) || !std::equal(magic, magic + sizeof magic, kMagic) || !get(is, version)) {
    out.message = "unrecognized cache file " + file.string();
    return out;
  }
  if (version != kCacheVersion) {
    out.message = "cache version " + std::to_string(version) + " != " + std::to_string(kCacheVersion) + " in " +
                  file.string() + "; rebuilding";
    return out;
  }
  std::uint64_t klen = 0;
  if (!get(is, klen) || klen > (1u << 20)) {
    out.message = "corrupt cache header in " + file.string();
    return out;
  }
  std::string stored(klen, '\0');
  is.read(stored.data(), static_cast<std::streamsize>(klen));
  if (stored != key) {
    out.message = "cache key mismatch in " + file.string();
    return out;
  }
  std::uint8_t prov = 0;
  std::uint64_t n = 0, rank = 0;
  if (!get(is, prov) || !get(is, n) || !get(is, rank) || n != boundary->size() || rank > n) {
    out.message = "cache layout does not match the boundary in " + file.string();
    return out;
  }
  Eigen::VectorXd w(static_cast<Eigen::Index>(n));
  DtnOperator op;
  op.eigenvalues.resize(static_cast<Eigen::Index>(rank));
  op.eigenvectors.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(rank));
  is.read(reinterpret_cast<char*>(w.data()), static_cast<std::streamsize>(sizeof(double) * n));
  is.read(reinterpret_cast<char*>(op.eigenvalues.data()), static_cast<std::streamsize>(sizeof(double) * rank));
  is.read(reinterpret_cast<char*>(op.eigenvectors.data()), static_cast<std::streamsize>(sizeof(double) * n * rank));
  if (!is || (w - boundary->weights).cwiseAbs().maxCoeff() > 1e-12) {
    out.message = "truncated or inconsistent cache file " + file.string();
    return out;
  }
  op.boundary = std::move(boundary);
  op.potential = V;
  op.provenance = prov ? Provenance::exact_spectral : Provenance::fem_schur;
  if (op.provenance == Provenance::exact_spectral) {
    std::vector<double> radii;
    for (std::size_t k = 0; k < op.boundary->component_count(); ++k) radii.push_back(op.boundary->domain.circle_radius(k));
    op.rotational = std::make_shared<const RotationalSpectrum>(radii, V.constant_value());
  }
  out.status = CacheStatus::hit;
  out.op = std::move(op);
  return out;
}

}  // namespace dtn
