#include "love/observation.hpp"

#include "love/error.hpp"

namespace love {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

}  // namespace

bool SensorId::is_valid_token(std::string_view token) noexcept {
  if (token.empty() || is_space(token.front()) || is_space(token.back())) {
    return false;
  }
  for (char c : token) {
    if (c == ',' || c == '"' || c == '{' || c == '}' || c == '\n' || c == '\r') {
      return false;
    }
  }
  return true;
}

SensorId::SensorId(std::string token) : id_(std::move(token)) {
  if (!is_valid_token(id_)) {
    throw DomainError("invalid sensor id '" + id_ + "'");
  }
}

std::optional<SensorId> SensorId::normalize(std::string_view raw) {
  while (!raw.empty() && is_space(raw.front())) raw.remove_prefix(1);
  while (!raw.empty() && is_space(raw.back())) raw.remove_suffix(1);
  if (!is_valid_token(raw)) return std::nullopt;
  return SensorId(std::string(raw));
}

}  // namespace love
