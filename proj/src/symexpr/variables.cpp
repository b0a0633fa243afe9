#include "cwb/symexpr/variables.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

namespace cwb::sym {
namespace {

struct Registry {
  std::shared_mutex mu;
  std::vector<std::unique_ptr<std::string>> names;
  std::unordered_map<std::string, std::uint32_t> index;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> derivs;
  std::vector<bool> dependent;
  std::vector<bool> opaque;
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

Var Variables::intern(std::string_view name) {
  auto& r = registry();
  {
    std::shared_lock lock(r.mu);
    auto it = r.index.find(std::string(name));
    if (it != r.index.end()) return Var{it->second};
  }
  std::unique_lock lock(r.mu);
  auto it = r.index.find(std::string(name));
  if (it != r.index.end()) return Var{it->second};
  auto id = static_cast<std::uint32_t>(r.names.size());
  r.names.push_back(std::make_unique<std::string>(name));
  r.index.emplace(std::string(name), id);
  r.dependent.push_back(false);
  r.opaque.push_back(false);
  return Var{id};
}

std::optional<Var> Variables::find(std::string_view name) {
  auto& r = registry();
  std::shared_lock lock(r.mu);
  auto it = r.index.find(std::string(name));
  if (it == r.index.end()) return std::nullopt;
  return Var{it->second};
}

const std::string& Variables::name(Var v) {
  auto& r = registry();
  std::shared_lock lock(r.mu);
  if (v.id >= r.names.size()) throw std::out_of_range("unknown variable id");
  return *r.names[v.id];
}

void Variables::set_derivative(Var base, Var wrt, Var derivative) {
  auto& r = registry();
  std::unique_lock lock(r.mu);
  r.derivs[{base.id, wrt.id}] = derivative.id;
  r.dependent.at(base.id) = true;
}

void Variables::set_opaque(Var v) {
  auto& r = registry();
  std::unique_lock lock(r.mu);
  r.opaque.at(v.id) = true;
  r.dependent.at(v.id) = true;
}

Variables::DerivRule Variables::derivative_of(Var base, Var wrt) {
  auto& r = registry();
  std::shared_lock lock(r.mu);
  if (base.id >= r.dependent.size() || !r.dependent[base.id]) return {};
  auto it = r.derivs.find({base.id, wrt.id});
  if (it != r.derivs.end()) return {DerivKind::Mapped, Var{it->second}};
  return {DerivKind::Opaque, {}};
}

bool Variables::has_dependencies(Var v) {
  auto& r = registry();
  std::shared_lock lock(r.mu);
  return v.id < r.dependent.size() && r.dependent[v.id];
}

}  // namespace cwb::sym
