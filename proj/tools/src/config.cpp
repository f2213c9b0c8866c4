#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "litgraph/embeddings.hpp"
#include "litgraph/error.hpp"

namespace litgraph::cli {

namespace pt = boost::property_tree;

std::filesystem::path PipelineConfig::embedding_path(ModelKind kind) const {
  return out_dir / "embeddings" / (std::string(model_key(kind)) + ".tsv");
}

std::filesystem::path PipelineConfig::result_path(ModelKind kind) const {
  return out_dir / "results" / (std::string(model_key(kind)) + ".tsv");
}

std::vector<std::size_t> parse_ks(const std::string& text) {
  std::vector<std::size_t> ks;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t k = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), k);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size() || k == 0) {
      throw InputError("bad K value '" + item + "' (expected positive integers separated by commas)");
    }
    ks.push_back(k);
  }
  if (ks.empty()) throw InputError("empty K list");
  return ks;
}

namespace {

template <typename T>
T convert(const std::string& section, const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T out{};
  in >> out;
  if (!in || !(in >> std::ws).eof()) throw InputError("config [" + section + "] " + key + ": bad value '" + value + "'");
  return out;
}

bool convert_bool(const std::string& section, const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw InputError("config [" + section + "] " + key + ": expected a boolean, got '" + value + "'");
}

void apply_shallow(ShallowSettings& s, const std::string& sec, const std::string& key, const std::string& v) {
  if (key == "walks_per_node") s.walk.walks_per_node = convert<int>(sec, key, v);
  else if (key == "walk_length") s.walk.walk_length = convert<int>(sec, key, v);
  else if (key == "dimension") s.skipgram.dimension = convert<int>(sec, key, v);
  else if (key == "window") s.skipgram.window = convert<int>(sec, key, v);
  else if (key == "negatives") s.skipgram.negatives_per_pair = convert<int>(sec, key, v);
  else if (key == "epochs") s.skipgram.epochs = convert<int>(sec, key, v);
  else if (key == "learning_rate") s.skipgram.learning_rate = convert<double>(sec, key, v);
  else throw InputError("config [" + sec + "]: unknown key " + key);
}

void apply_rgcn(RgcnConfig& c, const std::string& sec, const std::string& key, const std::string& v) {
  if (key == "hidden_dim") c.hidden_dim = convert<int>(sec, key, v);
  else if (key == "num_layers") c.num_layers = convert<int>(sec, key, v);
  else if (key == "use_basis") c.use_basis = convert_bool(sec, key, v);
  else if (key == "num_bases") c.num_bases = convert<int>(sec, key, v);
  else if (key == "learning_rate") c.learning_rate = convert<double>(sec, key, v);
  else if (key == "weight_decay") c.weight_decay = convert<double>(sec, key, v);
  else if (key == "epochs") c.epochs = convert<int>(sec, key, v);
  else if (key == "patience") c.patience = convert<int>(sec, key, v);
  else if (key == "negatives") c.negatives_per_positive = convert<int>(sec, key, v);
  else throw InputError("config [" + sec + "]: unknown key " + key);
}

}  // namespace

void apply_config(PipelineConfig& config, std::istream& in, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(e.line(), e.message());
  }
  auto path_of = [&](const std::string& v) {
    std::filesystem::path p(v);
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  };
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw InputError("config: key '" + section + "' outside a section");
    for (const auto& [key, node] : body) {
      const std::string v = node.data();
      if (section == "run") {
        if (key == "seed") config.seed = convert<std::uint64_t>(section, key, v);
        else if (key == "threads") config.models.threads = convert<unsigned>(section, key, v);
        else throw InputError("config [run]: unknown key " + key);
      } else if (section == "paths") {
        if (key == "graph") config.graph = path_of(v);
        else if (key == "ground_truth") config.ground_truth = path_of(v);
        else if (key == "candidates") config.candidates = path_of(v);
        else if (key == "weights") config.weights = path_of(v);
        else if (key == "out_dir") config.out_dir = path_of(v);
        else throw InputError("config [paths]: unknown key " + key);
      } else if (section == "deepwalk") {
        apply_shallow(config.models.deepwalk, section, key, v);
      } else if (section == "brw") {
        apply_shallow(config.models.brw, section, key, v);
      } else if (section == "hybrid") {
        if (key == "l2_normalize") config.models.hybrid.l2_normalize_sources = convert_bool(section, key, v);
        else throw InputError("config [hybrid]: unknown key " + key);
      } else if (section == "rgcn") {
        apply_rgcn(config.models.rgcn, section, key, v);
      } else if (section == "eval") {
        if (key == "ks") config.ks = parse_ks(v);
        else throw InputError("config [eval]: unknown key " + key);
      } else {
        throw InputError("config: unknown section [" + section + "]");
      }
    }
  }
}

void apply_config_file(PipelineConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path.string());
  apply_config(config, in, path.parent_path());
}

void write_model_config(std::ostream& out, const PipelineConfig& config, ModelKind kind) {
  out << "[run]\nseed = " << config.seed << "\n";
  auto shallow = [&](const char* name, const ShallowSettings& s) {
    out << "\n[" << name << "]\n"
        << "walks_per_node = " << s.walk.walks_per_node << "\n"
        << "walk_length = " << s.walk.walk_length << "\n"
        << "dimension = " << s.skipgram.dimension << "\n"
        << "window = " << s.skipgram.window << "\n"
        << "negatives = " << s.skipgram.negatives_per_pair << "\n"
        << "epochs = " << s.skipgram.epochs << "\n"
        << "learning_rate = " << format_number(s.skipgram.learning_rate) << "\n";
  };
  const auto& m = config.models;
  if (kind == ModelKind::deepwalk || kind == ModelKind::hybrid) shallow("deepwalk", m.deepwalk);
  if (kind == ModelKind::brw || kind == ModelKind::hybrid) shallow("brw", m.brw);
  if (kind == ModelKind::hybrid) {
    out << "\n[hybrid]\nl2_normalize = " << (m.hybrid.l2_normalize_sources ? "true" : "false") << "\n";
  }
  if (kind == ModelKind::rgcn) {
    const auto& c = m.rgcn;
    out << "\n[rgcn]\n"
        << "hidden_dim = " << c.hidden_dim << "\n"
        << "num_layers = " << c.num_layers << "\n"
        << "use_basis = " << (c.use_basis ? "true" : "false") << "\n"
        << "num_bases = " << c.num_bases << "\n"
        << "learning_rate = " << format_number(c.learning_rate) << "\n"
        << "weight_decay = " << format_number(c.weight_decay) << "\n"
        << "epochs = " << c.epochs << "\n"
        << "patience = " << c.patience << "\n"
        << "negatives = " << c.negatives_per_positive << "\n";
  }
}

}  // namespace litgraph::cli
