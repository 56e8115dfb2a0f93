#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kempe/graph.hpp"
#include "kempe/graph_vector.hpp"
#include "kempe/integer.hpp"
#include "kempe/straighten.hpp"

namespace kempe {

// Local picture: edges on vertices 0..k-1, each oriented low -> high.
struct IdentityTerm {
  Integer coeff;
  std::vector<Edge> edges;
};

// lhs.coeff * X_lhs = sum of rhs coeff * X_term, as bracket polynomials in the
// visible vertices. Loose ends (vertices of degree < 2) are completed by the
// same edges in every term when the identity is used inside a host graph.
struct LocalIdentity {
  std::string name;
  int vertices = 0;
  IdentityTerm lhs;
  std::vector<IdentityTerm> rhs;
};

const std::vector<LocalIdentity>& standard_identities();
const LocalIdentity& identity_by_name(const std::string& name);

// X_host written through the identity: host = phi(lhs) + rest, and every term
// is phi(term) + rest. phi need not be injective; terms acquiring a loop
// vanish. `trace` holds the host images of the Plücker moves that derive the
// identity by straightening each local term.
struct IdentityApplication {
  GraphVector<Rational> rhs;
  ReductionTrace trace;
};

// Returns nullopt if the host does not contain phi(lhs) or the substituted
// identity degenerates (host coefficient cancels).
std::optional<IdentityApplication> apply_identity(const LocalIdentity& id, const CanonicalGraph& host,
                                                  std::span<const int> phi);

struct IdentityReport {
  std::string name;
  bool bracket_ok = false;      // evaluation at random assignments
  bool derivation_ok = false;   // local straightening of all terms cancels
  bool host_ok = false;         // embedded check inside random n = 10 hosts
  int assignments = 0;
  int hosts = 0;
  std::vector<std::pair<std::string, std::string>> terms;  // (signed coefficient, local graph)
  std::string counterexample;

  bool passed() const { return bracket_ok && derivation_ok && host_ok; }
};

IdentityReport verify_identity(const LocalIdentity& id, uint64_t seed, int assignments = 10, int hosts = 5,
                               int host_n = 10);

}  // namespace kempe
