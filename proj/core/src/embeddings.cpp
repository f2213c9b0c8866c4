#include "litgraph/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "litgraph/error.hpp"

namespace litgraph {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string stable_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = kHex[h & 0xF];
  return out;
}

EmbeddingTable::EmbeddingTable(std::vector<std::string> entities, DenseMatrix vectors, std::string model,
                               std::string config_hash)
    : entities_(std::move(entities)),
      vectors_(std::move(vectors)),
      model_(std::move(model)),
      config_hash_(std::move(config_hash)) {
  if (vectors_.rows() != entities_.size()) throw InputError("embedding table: row count differs from entity count");
  if (!entities_.empty() && vectors_.cols() == 0) throw InputError("embedding table: zero dimension");
  if (!vectors_.all_finite()) throw NumericError("embedding table '" + model_ + "' has non-finite values");
  index_.reserve(entities_.size());
  for (EntityId i = 0; i < entities_.size(); ++i) {
    if (!index_.emplace(entities_[i], i).second) throw InputError("embedding table: duplicate entity " + entities_[i]);
  }
}

std::optional<EntityId> EmbeddingTable::find(std::string_view label) const {
  if (auto it = index_.find(std::string(label)); it != index_.end()) return it->second;
  return std::nullopt;
}

void EmbeddingTable::write_tsv(std::ostream& out) const {
  out << "#dim=" << dimension() << " model=" << model_ << '\n';
  if (!config_hash_.empty()) out << "#config=" << config_hash_ << '\n';
  for (EntityId i = 0; i < size(); ++i) {
    out << entities_[i];
    for (const double v : vector(i)) out << '\t' << format_number(v);
    out << '\n';
  }
}

EmbeddingTable EmbeddingTable::read_tsv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  std::string model, config;
  std::vector<std::string> labels;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream header(line.substr(1));
      std::string tok;
      while (header >> tok) {
        if (tok.starts_with("dim=")) {
          dim = std::stoul(tok.substr(4));
        } else if (tok.starts_with("model=")) {
          model = tok.substr(6);
        } else if (tok.starts_with("config=")) {
          config = tok.substr(7);
        }
      }
      continue;
    }
    if (dim == 0) throw ParseError(line_no, "embedding row before '#dim=' header");
    std::string_view rest = line;
    const auto tab = rest.find('\t');
    if (tab == std::string_view::npos) throw ParseError(line_no, "expected entity<TAB>values");
    labels.emplace_back(rest.substr(0, tab));
    rest.remove_prefix(tab + 1);
    std::size_t count = 0;
    for (;;) {
      const auto next = rest.find('\t');
      const auto field = rest.substr(0, next);
      double v = 0;
      const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
      if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
        throw ParseError(line_no, "malformed value '" + std::string(field) + "'");
      }
      values.push_back(v);
      ++count;
      if (next == std::string_view::npos) break;
      rest.remove_prefix(next + 1);
    }
    if (count != dim) {
      throw ParseError(line_no, "expected " + std::to_string(dim) + " values, found " + std::to_string(count));
    }
  }
  if (labels.empty()) throw InputError("embedding file has no rows");
  DenseMatrix m(labels.size(), dim);
  std::copy(values.begin(), values.end(), m.values().begin());
  return EmbeddingTable(std::move(labels), std::move(m), std::move(model), std::move(config));
}

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw InputError("cosine_similarity: dimension mismatch");
  const double nu = l2_norm(u);
  const double nv = l2_norm(v);
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

EmbeddingTable concat_embeddings(const EmbeddingTable& a, const EmbeddingTable& b, const HybridConfig& config,
                                 std::string model) {
  std::vector<std::string> missing;
  for (const auto& label : a.entities()) {
    if (!b.find(label)) missing.push_back(label);
  }
  for (const auto& label : b.entities()) {
    if (!a.find(label)) missing.push_back(label);
  }
  if (!missing.empty()) {
    std::string msg = "concat_embeddings: entity sets differ:";
    for (const auto& m : missing) msg += " " + m;
    throw InputError(msg);
  }

  const std::size_t da = a.dimension();
  const std::size_t db = b.dimension();
  DenseMatrix out(a.size(), da + db);
  auto copy_part = [&](std::span<const double> src, std::span<double> dst) {
    const double norm = config.l2_normalize_sources ? l2_norm(src) : 0.0;
    const double scale = norm > 0.0 ? 1.0 / norm : 1.0;
    for (std::size_t k = 0; k < src.size(); ++k) dst[k] = src[k] * scale;
  };
  for (EntityId i = 0; i < a.size(); ++i) {
    auto row = out.row(i);
    copy_part(a.vector(i), row.subspan(0, da));
    copy_part(b.vector(*b.find(a.entities()[i])), row.subspan(da, db));
  }
  return EmbeddingTable(a.entities(), std::move(out), std::move(model),
                        a.config_hash() + "+" + b.config_hash());
}

RankedList rank_candidates(const EmbeddingTable& table, EntityId query, std::span<const EntityId> candidates,
                           std::size_t top_k) {
  if (query >= table.size()) throw UnknownEntityError("rank_candidates: unknown query id " + std::to_string(query));
  std::vector<EntityId> pool(candidates.begin(), candidates.end());
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  RankedList list;
  list.query = query;
  list.entries.reserve(pool.size());
  const auto q = table.vector(query);
  for (const auto c : pool) {
    if (c >= table.size()) throw UnknownEntityError("rank_candidates: unknown candidate id " + std::to_string(c));
    if (c == query) continue;
    list.entries.push_back({c, cosine_similarity(q, table.vector(c))});
  }
  std::stable_sort(list.entries.begin(), list.entries.end(), [](const RankedEntry& x, const RankedEntry& y) {
    if (x.score != y.score) return x.score > y.score;
    return x.candidate < y.candidate;
  });
  if (list.entries.size() > top_k) list.entries.resize(top_k);
  return list;
}

double score_edge_shallow(const EmbeddingTable& table, const Triple& triple) {
  if (triple.head >= table.size() || triple.tail >= table.size()) {
    throw UnknownEntityError("score_edge_shallow: endpoint has no embedding");
  }
  return cosine_similarity(table.vector(triple.head), table.vector(triple.tail));
}

void write_ranked_csv(std::ostream& out, const RankedList& list, const EmbeddingTable& table) {
  out << "rank,candidate,score\n";
  std::size_t rank = 1;
  for (const auto& e : list.entries) {
    out << rank++ << ',' << table.entities()[e.candidate] << ',' << format_number(e.score) << '\n';
  }
}

}  // namespace litgraph
