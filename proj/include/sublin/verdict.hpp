#pragma once

#include <string>

#include <json.hpp>

namespace sublin {

enum class Decision { accept, reject };

inline const char* to_string(Decision d) { return d == Decision::accept ? "accept" : "reject"; }

struct Verdict {
  Decision decision = Decision::reject;
  nlohmann::json diagnostics = nlohmann::json::object();

  bool accepted() const { return decision == Decision::accept; }
};

}  // namespace sublin
