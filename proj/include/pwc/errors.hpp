#pragma once

#include <stdexcept>
#include <string>

namespace pwc {

enum class Errc {
  out_of_domain,
  arithmetic_budget_exceeded,
  degenerate_owner,
  precondition_failed,
  layer_hit_breakpoint,
  beta_hit_not_found,
  resolution_exceeded,
  not_inward,
  corner_hit,
  non_injective,
  incommensurable_edges,
  generation_failed,
  empty_chain,
  budget_exceeded,
  unknown_kind,
};

const char* errc_name(Errc code);

/// Library-wide exception; carries the error code so callers (and the CLI's
/// exit-code mapping) can dispatch without string matching.
class PwcError : public std::runtime_error {
 public:
  PwcError(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace pwc
