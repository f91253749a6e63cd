#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

#include "holosens/error.hpp"

namespace holosens::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string scalar_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  throw Error(ErrorKind::InvalidArgument, "unsupported config value " + v.dump());
}

void flatten(const nlohmann::json& node, const std::string& prefix, ConfigEntries& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      flatten(value, prefix.empty() ? key : prefix + "." + key, out);
    }
  } else if (node.is_array()) {
    std::string joined;
    for (const auto& v : node) {
      if (!joined.empty()) joined += ',';
      joined += scalar_text(v);
    }
    out.emplace_back(prefix, joined);
  } else {
    out.emplace_back(prefix, scalar_text(node));
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  require(ec == std::errc() && ptr == value.data() + value.size(), ErrorKind::InvalidArgument,
          "config key '" + key + "' expects a non-negative integer, got '" + value + "'");
  return v;
}

double to_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == value.size() && !value.empty(), ErrorKind::InvalidArgument,
          "config key '" + key + "' expects a number, got '" + value + "'");
  return v;
}

bool to_bool(const std::string& key, std::string value) {
  std::transform(value.begin(), value.end(), value.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw Error(ErrorKind::InvalidArgument,
              "config key '" + key + "' expects a boolean, got '" + value + "'");
}

void set_bound(FmhBounds& bounds, const std::string& name, const std::string& key,
               const std::string& value) {
  const auto parts = split_list(value);
  require(parts.size() == 2, ErrorKind::InvalidArgument,
          "config key '" + key + "' expects 'lower,upper'");
  const double lo = to_double(key, parts[0]);
  const double hi = to_double(key, parts[1]);
  for (auto& p : bounds.parameters) {
    if (p.name == name) {
      p.lower = lo;
      p.upper = hi;
      return;
    }
  }
  bounds.parameters.push_back(ParameterBound{name, lo, hi, name == "M"});
}

}  // namespace

ConfigEntries parse_config_text(std::string_view text) {
  ConfigEntries entries;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::MalformedHeader, std::string("config JSON: ") + e.what());
    }
    flatten(j, "", entries);
    return entries;
  }

  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorKind::MalformedHeader,
            "config line " + std::to_string(number) + " is not key = value");
    entries.emplace_back(trim(std::string_view(line).substr(0, eq)),
                         trim(std::string_view(line).substr(eq + 1)));
  }
  return entries;
}

ConfigEntries load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open config " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config_text(text);
}

void apply_config(CampaignConfig& cfg, const ConfigEntries& entries) {
  for (const auto& [key, value] : entries) {
    if (key.rfind("bounds.", 0) == 0) {
      set_bound(cfg.bounds, key.substr(7), key, value);
    } else if (key == "base_samples" || key == "N") {
      cfg.base_samples = to_u64(key, value);
    } else if (key == "second_order") {
      cfg.second_order = to_bool(key, value);
    } else if (key == "forward_models" || key == "forward_model") {
      cfg.forward_models.clear();
      for (const auto& fm : split_list(value)) cfg.forward_models.push_back(parse_forward_model(fm));
    } else if (key == "iterations") {
      cfg.iterations = to_u64(key, value);
    } else if (key == "record_iterations") {
      cfg.record_iterations.clear();
      for (const auto& it : split_list(value)) cfg.record_iterations.push_back(to_u64(key, it));
    } else if (key == "corpus") {
      cfg.corpus = value;
    } else if (key == "image_limit") {
      cfg.image_limit = to_u64(key, value);
    } else if (key == "master_seed" || key == "seed") {
      cfg.master_seed = to_u64(key, value);
    } else if (key == "workers") {
      cfg.workers = to_u64(key, value);
    } else if (key == "bootstrap_resamples") {
      cfg.bootstrap_resamples = to_u64(key, value);
    } else {
      throw Error(ErrorKind::InvalidArgument, "unknown config key '" + key + "'");
    }
  }
}

nlohmann::ordered_json config_snapshot(const CampaignConfig& cfg) {
  nlohmann::ordered_json bounds = nlohmann::ordered_json::object();
  for (const auto& p : cfg.bounds.parameters) bounds[p.name] = {p.lower, p.upper};
  std::vector<std::string> fms;
  for (ForwardModel fm : cfg.forward_models) fms.emplace_back(to_string(fm));
  return {
      {"bounds", bounds},
      {"base_samples", cfg.base_samples},
      {"second_order", cfg.second_order},
      {"forward_models", fms},
      {"iterations", cfg.iterations},
      {"record_iterations", cfg.recorded_iterations()},
      {"corpus", cfg.corpus.string()},
      {"image_limit", cfg.image_limit},
      {"master_seed", cfg.master_seed},
      {"workers", cfg.workers},
      {"bootstrap_resamples", cfg.bootstrap_resamples},
  };
}

}  // namespace holosens::cli
