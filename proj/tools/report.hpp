#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "cstar/json_io.hpp"

namespace cstar::cli {

using json = nlohmann::json;

/// Non-finite doubles become null in JSON; keep them readable instead.
inline json number_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

/// 64-bit FNV-1a.
class Digest {
public:
  void add(const std::string& s) {
    for (unsigned char c : s) {
      h_ ^= c;
      h_ *= 0x100000001b3ULL;
    }
    // separator so ("ab","c") and ("a","bc") differ
    h_ ^= 0xff;
    h_ *= 0x100000001b3ULL;
  }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h_));
    return buf;
  }

private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

struct Check {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  double tolerance = 0.0;
};

class RunReport {
public:
  explicit RunReport(std::string command) : command_(std::move(command)), start_(std::chrono::steady_clock::now()) {
    digest_.add(command_);
  }

  void add_input(const std::string& name, const std::string& content) {
    digest_.add(name);
    digest_.add(content);
  }
  void set_seed(std::uint64_t s) { seed_ = s; }
  json& outputs() { return outputs_; }
  void residual(const std::string& name, double v) { residuals_[name] = number_json(v); }
  void check(const std::string& name, bool pass, double residual, double tolerance) {
    checks_.push_back({name, pass, residual, tolerance});
    residuals_[name] = number_json(residual);
  }
  void warning(const std::string& w) { warnings_.push_back(w); }
  void warnings(const Warnings& w) {
    for (const auto& m : w.messages) warnings_.push_back(m);
  }
  void counterexample(json c) { counterexample_ = std::move(c); }

  bool pass() const {
    for (const auto& c : checks_)
      if (!c.pass) return false;
    return true;
  }

  json to_json() const {
    json checks = json::array();
    for (const auto& c : checks_)
      checks.push_back({{"name", c.name}, {"pass", c.pass}, {"residual", number_json(c.residual)}, {"tolerance", c.tolerance}});
    json j = {{"command", command_},
              {"inputs_digest", digest_.hex()},
              {"outputs", outputs_.is_null() ? json::object() : outputs_},
              {"residuals", residuals_.is_null() ? json::object() : residuals_},
              {"checks", checks},
              {"pass", pass()}};
    if (seed_) j["seed"] = *seed_;
    if (!warnings_.empty()) j["warnings"] = warnings_;
    if (!counterexample_.is_null()) j["counterexample"] = counterexample_;
    j["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return j;
  }

private:
  std::string command_;
  Digest digest_;
  std::optional<std::uint64_t> seed_;
  json outputs_;
  json residuals_;
  std::vector<Check> checks_;
  std::vector<std::string> warnings_;
  json counterexample_;
  std::chrono::steady_clock::time_point start_;
};


} // namespace cstar::cli
