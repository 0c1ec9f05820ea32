#include "depforge/model_io.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

#include "depforge/error.hpp"

namespace depforge {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kParamPrefix = "param.";

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::BadModel, "missing " + path.string());
  return in;
}

std::map<std::string, std::string> read_meta(const fs::path& path) {
  auto in = open_in(path);
  std::map<std::string, std::string> meta;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(Errc::BadModel, "meta.txt: bad line '" + line + "'");
    meta[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return meta;
}

const std::string& require(const std::map<std::string, std::string>& meta, const std::string& key) {
  const auto it = meta.find(key);
  if (it == meta.end()) throw Error(Errc::BadModel, "meta.txt lacks " + key);
  return it->second;
}

}  // namespace

void save_model(const std::string& dir, const ParserModel& model) {
  if (!model.classifier) throw Error(Errc::ModelMismatch, "model has no classifier");
  const fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw Error(Errc::Io, "cannot create " + dir + ": " + ec.message());

  {
    auto out = open_out(root / "meta.txt");
    out << "format-version=" << kModelFormatVersion << '\n';
    out << "classifier=" << model.classifier->kind() << '\n';
    out << "system=" << system_name(model.system) << '\n';
    out << "default-relation=" << model.default_relation << '\n';
    for (const auto& [key, value] : model.classifier->params()) {
      out << kParamPrefix << key << '=' << value << '\n';
    }
  }
  {
    auto out = open_out(root / "features.txt");
    model.features.save_templates(out);
  }
  for (std::size_t i = 0; i < kAttributeCount; ++i) {
    const auto attr = static_cast<Attribute>(i);
    auto out = open_out(root / ("symbols-" + std::string(attribute_name(attr)) + ".txt"));
    model.features.table(attr).save(out);
  }
  {
    auto out = open_out(root / "labels.txt");
    for (const auto& label : model.labels.labels()) out << label << '\n';
  }
  {
    auto out = open_out(root / "classifier.txt");
    model.classifier->save(out);
    if (!out) throw Error(Errc::Io, "write failed for classifier.txt");
  }
}

ParserModel load_model(const std::string& dir, const std::optional<RemoteConfig>& remote_override) {
  const fs::path root(dir);
  if (!fs::is_directory(root)) throw Error(Errc::BadModel, dir + " is not a model directory");
  const auto meta = read_meta(root / "meta.txt");
  if (require(meta, "format-version") != std::to_string(kModelFormatVersion)) {
    throw Error(Errc::BadModel, "unsupported model format " + require(meta, "format-version"));
  }

  ParserModel model;
  model.system = parse_system_name(require(meta, "system"));
  model.default_relation = require(meta, "default-relation");

  {
    auto in = open_in(root / "features.txt");
    model.features = FeatureModel(FeatureModel::parse_templates(in));
  }
  for (std::size_t i = 0; i < kAttributeCount; ++i) {
    const auto attr = static_cast<Attribute>(i);
    auto in = open_in(root / ("symbols-" + std::string(attribute_name(attr)) + ".txt"));
    model.features.table(attr) = SymbolTable::load(in);
  }
  {
    auto in = open_in(root / "labels.txt");
    std::string line;
    while (std::getline(in, line)) {
      const auto before = model.labels.size();
      model.labels.intern(line);
      if (model.labels.size() == before) throw Error(Errc::BadModel, "duplicate label " + line);
      Transition::from_label(line);
    }
    if (model.labels.size() == 0) throw Error(Errc::BadModel, "labels.txt is empty");
  }

  Params params;
  for (const auto& [key, value] : meta) {
    if (key.rfind(kParamPrefix, 0) == 0) params[key.substr(kParamPrefix.size())] = value;
  }
  const auto& kind = require(meta, "classifier");
  ClassifierSpec spec;
  spec.kind = kind;
  if (kind == "remote") {
    RemoteConfig remote;
    remote.host = params.count("host") ? params.at("host") : remote.host;
    remote.port = static_cast<int>(param_int(params, "port", 0));
    remote.timeout = std::chrono::milliseconds(param_int(params, "timeout_ms", remote.timeout.count()));
    remote.retries = static_cast<int>(param_int(params, "retries", remote.retries));
    spec.remote = remote_override.value_or(remote);
  } else {
    spec.params = params;
  }
  model.classifier = build_classifier(spec, model.features, model.labels);

  const Schema schema{model.features.vocab_sizes(), model.labels.size()};
  auto in = open_in(root / "classifier.txt");
  try {
    model.classifier->load(in, schema);
  } catch (const std::logic_error& e) {  // number parsing in the bodies
    throw Error(Errc::BadModel, std::string("classifier.txt: ") + e.what());
  }
  return model;
}

}  // namespace depforge
