#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "depforge/conllx.hpp"
#include "depforge/transition.hpp"

namespace depforge {

/// Interned nominal value. Only equality is defined: ids carry no order and
/// no magnitude. `raw()` exists for storage layout and serialization.
class SymbolId {
 public:
  constexpr SymbolId() = default;
  constexpr explicit SymbolId(std::uint32_t raw) : raw_(raw) {}

  constexpr std::uint32_t raw() const { return raw_; }

  friend constexpr bool operator==(SymbolId, SymbolId) = default;

 private:
  std::uint32_t raw_ = 0;
};

/// Address did not resolve to a token (or the attribute was absent).
inline constexpr SymbolId kNullSymbol{0};
/// Symbol never seen during training.
inline constexpr SymbolId kUnknownSymbol{1};

}  // namespace depforge

template <>
struct std::hash<depforge::SymbolId> {
  std::size_t operator()(depforge::SymbolId id) const noexcept {
    return std::hash<std::uint32_t>{}(id.raw());
  }
};

namespace depforge {

class SymbolTable {
 public:
  static constexpr std::uint32_t kFirstId = 2;

  /// Returns the existing id or assigns the next dense one.
  SymbolId intern(std::string_view symbol);
  /// kUnknownSymbol when absent.
  SymbolId lookup(std::string_view symbol) const;
  /// Reserved ids render as "__NULL__" / "__UNKNOWN__".
  const std::string& name(SymbolId id) const;

  /// Includes the two reserved ids.
  std::size_t size() const { return symbols_.size() + kFirstId; }
  const std::vector<std::string>& symbols() const { return symbols_; }

  /// One symbol per line, first line = id 2.
  void save(std::ostream& out) const;
  static SymbolTable load(std::istream& in);

  bool operator==(const SymbolTable& other) const { return symbols_ == other.symbols_; }

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>> index_;
};

using ClassId = std::uint32_t;

/// Dense class-label inventory ("SHIFT", "LEFT-ARC:det", ...), ids from 0.
class LabelSet {
 public:
  ClassId intern(std::string_view label);
  std::optional<ClassId> find(std::string_view label) const;
  const std::string& name(ClassId id) const { return labels_.at(id); }
  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

  bool operator==(const LabelSet& other) const { return labels_ == other.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, ClassId> index_;
};

enum class Attribute { Form, Lemma, Cpostag, Postag, Deprel };
inline constexpr std::size_t kAttributeCount = 5;

std::string_view attribute_name(Attribute a);
std::optional<Attribute> parse_attribute(std::string_view name);

enum class AddressSource { Stack, Buffer };
enum class AddressFn { Head, Ldep, Rdep };

struct FeatureTemplate {
  AddressSource source = AddressSource::Stack;
  std::size_t depth = 0;
  std::vector<AddressFn> chain;  // applied innermost first; at most 2
  Attribute attribute = Attribute::Postag;

  /// `attr(source[depth])`, `attr(fn(source[depth]))`, ...
  std::string to_string() const;
  static FeatureTemplate parse(std::string_view text);

  bool operator==(const FeatureTemplate&) const = default;
};

/// Literal attribute value of the artificial root for form, lemma and POS.
inline constexpr std::string_view kRootSymbol = "ROOT";

class FeatureModel {
 public:
  FeatureModel() = default;
  explicit FeatureModel(std::vector<FeatureTemplate> templates);

  const std::vector<FeatureTemplate>& templates() const { return templates_; }
  std::size_t size() const { return templates_.size(); }

  SymbolTable& table(Attribute a) { return tables_[static_cast<std::size_t>(a)]; }
  const SymbolTable& table(Attribute a) const { return tables_[static_cast<std::size_t>(a)]; }
  const SymbolTable& table_for(std::size_t template_index) const {
    return table(templates_.at(template_index).attribute);
  }

  /// Size of each template's attribute table, in template order.
  std::vector<std::size_t> vocab_sizes() const;

  /// Feature-model file: one template per line, '#' comments.
  void save_templates(std::ostream& out) const;
  static std::vector<FeatureTemplate> parse_templates(std::istream& in);

  bool operator==(const FeatureModel&) const = default;

 private:
  std::vector<FeatureTemplate> templates_;
  std::array<SymbolTable, kAttributeCount> tables_;
};

/// The 14-template arc-eager model used when no feature file is given.
std::vector<FeatureTemplate> default_templates();

/// Symbol for a template in a configuration, or nullopt for NULL.
std::optional<std::string_view> resolve(const Configuration& config, const Sentence& sentence,
                                        const FeatureTemplate& feature);

enum class ExtractMode { Train, Predict };

struct Instance {
  std::vector<SymbolId> values;
  ClassId label = 0;

  bool operator==(const Instance&) const = default;
};

/// Train mode interns unseen symbols; predict mode maps them to kUnknownSymbol.
std::vector<SymbolId> extract(const Configuration& config, const Sentence& sentence,
                              FeatureModel& model, ExtractMode mode);
std::vector<SymbolId> extract(const Configuration& config, const Sentence& sentence,
                              const FeatureModel& model);

/// One-hot layout: template t occupies [offset(t), offset(t) + vocab_sizes[t]).
/// Active coordinate = offset + raw id; kUnknownSymbol activates nothing.
/// Throws Errc::VocabularyMismatch or Errc::DimensionMismatch.
std::vector<std::uint32_t> binarize(std::span<const SymbolId> values,
                                    std::span<const std::size_t> vocab_sizes);

}  // namespace depforge
