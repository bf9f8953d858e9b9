#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grpcert/element.hpp"
#include "grpcert/error.hpp"

namespace grpcert {

/// Backend parameters plus named element bindings. Names are unique and
/// every bound element shares the context's backend parameters.
class GroupContext {
 public:
  GroupContext() = default;
  explicit GroupContext(BackendSpec spec) : spec_(spec) {}

  const BackendSpec& spec() const noexcept { return spec_; }
  Element identity() const { return Element::identity(spec_); }

  void bind(const std::string& name, Element element) {
    if (!(element.spec() == spec_)) {
      throw CompositionError("binding '" + name + "' is one of " + element.spec().describe() +
                             ", context holds " + spec_.describe());
    }
    if (index_.contains(name)) throw Error("name '" + name + "' is already bound");
    index_.emplace(name, bindings_.size());
    bindings_.emplace_back(name, std::move(element));
  }

  /// Binds or replaces.
  void rebind(const std::string& name, Element element) {
    if (auto it = index_.find(name); it != index_.end()) {
      if (!(element.spec() == spec_)) throw CompositionError("rebinding '" + name + "' across backends");
      bindings_[it->second].second = std::move(element);
      return;
    }
    bind(name, std::move(element));
  }

  void bind_text(const std::string& name, std::string_view text) { bind(name, parse_element(text, spec_)); }

  bool contains(std::string_view name) const { return index_.contains(std::string(name)); }

  const Element* find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? nullptr : &bindings_[it->second].second;
  }

  const Element& at(std::string_view name) const {
    if (const Element* e = find(name)) return *e;
    throw UnboundNameError(std::string(name));
  }

  const std::vector<std::pair<std::string, Element>>& bindings() const noexcept { return bindings_; }

  std::vector<Element> elements() const {
    std::vector<Element> out;
    out.reserve(bindings_.size());
    for (const auto& [_, e] : bindings_) out.push_back(e);
    return out;
  }

 private:
  BackendSpec spec_;
  std::vector<std::pair<std::string, Element>> bindings_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace grpcert
