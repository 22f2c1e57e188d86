#include "pide/errors.hpp"

namespace pide {

namespace {
std::string format_config_error(int line, const std::string& key, const std::string& what) {
  std::string msg = "config";
  if (line > 0) msg += " line " + std::to_string(line);
  if (!key.empty()) msg += " key '" + key + "'";
  return msg + ": " + what;
}
}  // namespace

ConfigError::ConfigError(int line, std::string key, const std::string& what)
    : std::runtime_error(format_config_error(line, key, what)), line_(line), key_(std::move(key)) {}

}  // namespace pide
