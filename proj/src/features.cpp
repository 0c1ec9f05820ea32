#include "depforge/features.hpp"

#include <charconv>
#include <istream>
#include <ostream>

#include "depforge/error.hpp"

namespace depforge {

namespace {

const std::string kNullName = "__NULL__";
const std::string kUnknownName = "__UNKNOWN__";

constexpr std::size_t kMaxChain = 2;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string_view fn_name(AddressFn fn) {
  switch (fn) {
    case AddressFn::Head: return "head";
    case AddressFn::Ldep: return "ldep";
    case AddressFn::Rdep: return "rdep";
  }
  return "";
}

std::optional<AddressFn> parse_fn(std::string_view name) {
  if (name == "head") return AddressFn::Head;
  if (name == "ldep") return AddressFn::Ldep;
  if (name == "rdep") return AddressFn::Rdep;
  return std::nullopt;
}

[[noreturn]] void bad_spec(std::string_view text, std::string_view why) {
  throw Error(Errc::BadFeatureSpec, "'" + std::string(text) + "': " + std::string(why));
}

// Splits "name(inner)" into name and inner.
std::pair<std::string_view, std::string_view> split_call(std::string_view text,
                                                         std::string_view whole) {
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') bad_spec(whole, "expected name(...)");
  return {trim(text.substr(0, open)), trim(text.substr(open + 1, text.size() - open - 2))};
}

void parse_address(std::string_view text, std::string_view whole, FeatureTemplate& out) {
  const auto bracket = text.find('[');
  if (bracket != std::string_view::npos && text.find('(') == std::string_view::npos) {
    const auto source = trim(text.substr(0, bracket));
    if (source == "stack") {
      out.source = AddressSource::Stack;
    } else if (source == "buffer") {
      out.source = AddressSource::Buffer;
    } else {
      bad_spec(whole, "unknown source");
    }
    if (text.back() != ']') bad_spec(whole, "missing ']'");
    const auto digits = trim(text.substr(bracket + 1, text.size() - bracket - 2));
    std::size_t depth = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), depth);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty()) {
      bad_spec(whole, "bad index");
    }
    out.depth = depth;
    return;
  }
  const auto [name, inner] = split_call(text, whole);
  const auto fn = parse_fn(name);
  if (!fn) bad_spec(whole, "unknown address function");
  parse_address(inner, whole, out);
  out.chain.push_back(*fn);
  if (out.chain.size() > kMaxChain) bad_spec(whole, "address chain longer than 2");
}

std::optional<int> walk(const Configuration& config, const FeatureTemplate& feature) {
  std::optional<int> token;
  if (feature.source == AddressSource::Stack) {
    if (feature.depth < config.stack.size()) {
      token = config.stack[config.stack.size() - 1 - feature.depth];
    }
  } else if (feature.depth < config.buffer.size()) {
    token = config.buffer[feature.depth];
  }
  for (AddressFn fn : feature.chain) {
    if (!token) break;
    switch (fn) {
      case AddressFn::Head: token = config.arcs.head(*token); break;
      case AddressFn::Ldep: token = config.arcs.leftmost_dependent(*token); break;
      case AddressFn::Rdep: token = config.arcs.rightmost_dependent(*token); break;
    }
  }
  return token;
}

}  // namespace

SymbolId SymbolTable::intern(std::string_view symbol) {
  if (auto it = index_.find(symbol); it != index_.end()) return SymbolId{it->second};
  const auto id = static_cast<std::uint32_t>(symbols_.size()) + kFirstId;
  symbols_.emplace_back(symbol);
  index_.emplace(symbols_.back(), id);
  return SymbolId{id};
}

SymbolId SymbolTable::lookup(std::string_view symbol) const {
  if (auto it = index_.find(symbol); it != index_.end()) return SymbolId{it->second};
  return kUnknownSymbol;
}

const std::string& SymbolTable::name(SymbolId id) const {
  if (id == kNullSymbol) return kNullName;
  if (id == kUnknownSymbol) return kUnknownName;
  const auto slot = id.raw() - kFirstId;
  if (slot >= symbols_.size()) {
    throw Error(Errc::VocabularyMismatch, "symbol id " + std::to_string(id.raw()) + " out of range");
  }
  return symbols_[slot];
}

void SymbolTable::save(std::ostream& out) const {
  for (const auto& s : symbols_) out << s << '\n';
}

SymbolTable SymbolTable::load(std::istream& in) {
  SymbolTable table;
  std::string line;
  while (std::getline(in, line)) {
    const auto before = table.size();
    table.intern(line);
    if (table.size() == before) throw Error(Errc::BadModel, "duplicate symbol '" + line + "'");
  }
  return table;
}

ClassId LabelSet::intern(std::string_view label) {
  if (auto it = index_.find(std::string(label)); it != index_.end()) return it->second;
  const auto id = static_cast<ClassId>(labels_.size());
  labels_.emplace_back(label);
  index_.emplace(labels_.back(), id);
  return id;
}

std::optional<ClassId> LabelSet::find(std::string_view label) const {
  if (auto it = index_.find(std::string(label)); it != index_.end()) return it->second;
  return std::nullopt;
}

std::string_view attribute_name(Attribute a) {
  switch (a) {
    case Attribute::Form: return "form";
    case Attribute::Lemma: return "lemma";
    case Attribute::Cpostag: return "cpostag";
    case Attribute::Postag: return "postag";
    case Attribute::Deprel: return "deprel";
  }
  return "";
}

std::optional<Attribute> parse_attribute(std::string_view name) {
  for (std::size_t i = 0; i < kAttributeCount; ++i) {
    const auto a = static_cast<Attribute>(i);
    if (attribute_name(a) == name) return a;
  }
  return std::nullopt;
}

std::string FeatureTemplate::to_string() const {
  std::string address = (source == AddressSource::Stack ? "stack[" : "buffer[") +
                        std::to_string(depth) + "]";
  for (AddressFn fn : chain) address = std::string(fn_name(fn)) + "(" + address + ")";
  return std::string(attribute_name(attribute)) + "(" + address + ")";
}

FeatureTemplate FeatureTemplate::parse(std::string_view text) {
  const auto whole = trim(text);
  if (whole.empty()) bad_spec(text, "empty template");
  FeatureTemplate out;
  const auto [name, inner] = split_call(whole, whole);
  const auto attr = parse_attribute(name);
  if (!attr) bad_spec(whole, "unknown attribute");
  out.attribute = *attr;
  parse_address(inner, whole, out);
  return out;
}

FeatureModel::FeatureModel(std::vector<FeatureTemplate> templates)
    : templates_(std::move(templates)) {
  if (templates_.empty()) throw Error(Errc::BadFeatureSpec, "feature model has no templates");
}

std::vector<std::size_t> FeatureModel::vocab_sizes() const {
  std::vector<std::size_t> sizes;
  sizes.reserve(templates_.size());
  for (const auto& t : templates_) sizes.push_back(table(t.attribute).size());
  return sizes;
}

void FeatureModel::save_templates(std::ostream& out) const {
  for (const auto& t : templates_) out << t.to_string() << '\n';
}

std::vector<FeatureTemplate> FeatureModel::parse_templates(std::istream& in) {
  std::vector<FeatureTemplate> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    out.push_back(FeatureTemplate::parse(text));
  }
  if (out.empty()) throw Error(Errc::BadFeatureSpec, "feature model has no templates");
  return out;
}

std::vector<FeatureTemplate> default_templates() {
  const char* const specs[] = {
      "postag(stack[0])",        "postag(stack[1])",        "postag(buffer[0])",
      "postag(buffer[1])",       "postag(buffer[2])",       "postag(buffer[3])",
      "deprel(stack[0])",        "deprel(ldep(stack[0]))",  "deprel(rdep(stack[0]))",
      "deprel(ldep(buffer[0]))", "form(stack[0])",          "form(buffer[0])",
      "form(buffer[1])",         "form(head(stack[0]))",
  };
  std::vector<FeatureTemplate> out;
  for (const char* spec : specs) out.push_back(FeatureTemplate::parse(spec));
  return out;
}

std::optional<std::string_view> resolve(const Configuration& config, const Sentence& sentence,
                                        const FeatureTemplate& feature) {
  const auto token = walk(config, feature);
  if (!token) return std::nullopt;
  if (feature.attribute == Attribute::Deprel) {
    const auto* rel = config.arcs.relation(*token);
    if (!rel) return std::nullopt;
    return std::string_view(*rel);
  }
  if (*token == kRoot) return kRootSymbol;
  if (*token < 0 || static_cast<std::size_t>(*token) > sentence.size()) return std::nullopt;
  const auto& tok = sentence.token(*token);
  switch (feature.attribute) {
    case Attribute::Form: return std::string_view(tok.form);
    case Attribute::Lemma:
      if (!tok.lemma) return std::nullopt;
      return std::string_view(*tok.lemma);
    case Attribute::Cpostag: return std::string_view(tok.cpostag);
    case Attribute::Postag: return std::string_view(tok.postag);
    case Attribute::Deprel: break;
  }
  return std::nullopt;
}

std::vector<SymbolId> extract(const Configuration& config, const Sentence& sentence,
                              FeatureModel& model, ExtractMode mode) {
  if (mode == ExtractMode::Predict) return extract(config, sentence, std::as_const(model));
  std::vector<SymbolId> values;
  values.reserve(model.size());
  for (const auto& feature : model.templates()) {
    const auto symbol = resolve(config, sentence, feature);
    values.push_back(symbol ? model.table(feature.attribute).intern(*symbol) : kNullSymbol);
  }
  return values;
}

std::vector<SymbolId> extract(const Configuration& config, const Sentence& sentence,
                              const FeatureModel& model) {
  std::vector<SymbolId> values;
  values.reserve(model.size());
  for (const auto& feature : model.templates()) {
    const auto symbol = resolve(config, sentence, feature);
    values.push_back(symbol ? model.table(feature.attribute).lookup(*symbol) : kNullSymbol);
  }
  return values;
}

std::vector<std::uint32_t> binarize(std::span<const SymbolId> values,
                                    std::span<const std::size_t> vocab_sizes) {
  if (values.size() != vocab_sizes.size()) {
    throw Error(Errc::DimensionMismatch, std::to_string(values.size()) + " values for " +
                                             std::to_string(vocab_sizes.size()) + " templates");
  }
  std::vector<std::uint32_t> active;
  active.reserve(values.size());
  std::size_t offset = 0;
  for (std::size_t t = 0; t < values.size(); ++t) {
    const SymbolId v = values[t];
    if (v != kUnknownSymbol) {
      if (v.raw() >= vocab_sizes[t]) {
        throw Error(Errc::VocabularyMismatch, "template " + std::to_string(t) + " value " +
                                                  std::to_string(v.raw()) + " beyond vocabulary " +
                                                  std::to_string(vocab_sizes[t]));
      }
      active.push_back(static_cast<std::uint32_t>(offset + v.raw()));
    }
    offset += vocab_sizes[t];
  }
  return active;
}

}  // namespace depforge
