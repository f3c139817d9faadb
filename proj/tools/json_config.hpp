// Copyright 2026 The VQM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <istream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace vqm_cli {

/// Flat JSON object as CLI11 config items. Keys are long option names
/// without dashes; arrays supply multiple values.
class JsonConfig : public CLI::Config {
public:
  std::string to_config(const CLI::App *app, bool default_also, bool,
                        std::string) const override {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const CLI::Option *opt : app->get_options({})) {
      if (opt->get_lnames().empty() || !opt->get_configurable())
        continue;
      const std::string &name = opt->get_lnames().front();
      if (opt->count() > 0) {
        const auto &res = opt->results();
        if (res.size() == 1)
          j[name] = res.front();
        else
          j[name] = res;
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    return j.dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream &input) const override {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(input);
    } catch (const nlohmann::json::exception &e) {
      throw CLI::ConversionError("config", std::string("invalid JSON config: ") + e.what());
    }
    if (!j.is_object())
      throw CLI::ConversionError("config", "config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (const auto &[key, value] : j.items()) {
      CLI::ConfigItem item;
      item.name = key;
      if (value.is_array()) {
        for (const auto &v : value)
          item.inputs.push_back(scalar(key, v));
      } else {
        item.inputs.push_back(scalar(key, value));
      }
      items.push_back(std::move(item));
    }
    return items;
  }

private:
  static std::string scalar(const std::string &key, const nlohmann::json &v) {
    if (v.is_string())
      return v.get<std::string>();
    if (v.is_boolean())
      return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer())
      return std::to_string(v.get<long long>());
    if (v.is_number())
      return v.dump();
    throw CLI::ConversionError(key, "config value for '" + key + "' must be a scalar or array");
  }
};

} // namespace vqm_cli
