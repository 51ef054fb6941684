#pragma once

#include <chrono>
#include <optional>
#include <string>

#include "kform/error.hpp"
#include "kform/verify.hpp"

namespace kform::verify {

class Runner {
 public:
  explicit Runner(Report& rep) : rep_(rep) {}

  // Runs `body` and records its check. Library errors turn into a failed
  // check carrying the message rather than aborting the report.
  template <class Body>
  void check(const std::string& name, std::optional<bool> expected, const Body& body) {
    CheckRecord rec;
    rec.name = name;
    rec.expected = expected;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body(rec);
    } catch (const Error& e) {
      rec.observed = false;
      rec.details["error"] = e.what();
    }
    const auto t1 = std::chrono::steady_clock::now();
    rep_.timings.emplace_back(name, std::chrono::duration<double>(t1 - t0).count());
    rep_.checks.push_back(std::move(rec));
  }

 private:
  Report& rep_;
};

}  // namespace kform::verify
