#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ricperp::cspace {

enum class Family { A, B, C, D, E6, E7, E8, F4, G2 };

std::string_view to_string(Family f);
/// Accepts "A".."D", "E6", "E7", "E8", "F4", "G2" (case-insensitive).
/// Throws InvalidArgument.
Family parse_family(std::string_view s);
bool is_exceptional(Family f);

/// Simple-root coordinates n_1..n_r of a positive root.
using RootVector = std::vector<int>;

/// (g, α_i) with Bourbaki numbering; node is 1-based.
struct CSpaceDescriptor {
  Family family;
  int rank;
  int node;

  /// Throws UnsupportedFamilyRank (rank rules) or IndexOutOfRange (node).
  void check() const;
  std::string label() const;  // e.g. "(B3, a2)"
};

/// Exact rational constant; stored as numerator/denominator.
struct Rational {
  long num = 0;
  long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// A constant quoted by the catalog together with where it comes from.
struct StatedConstant {
  Rational value;
  bool is_upper_bound = false;  // ν for B-type: "2 or 1", stored as 2
  std::string source;
};

enum class QbVerdict { Positive, NonnegBoundary, Fails };
enum class RicPerpVerdict { Positive, UnknownE0, ExcludedP1 };

std::string_view to_string(QbVerdict v);
std::string_view to_string(RicPerpVerdict v);

struct RicPerpResult {
  RicPerpVerdict verdict;
  std::string reason;  // nu_lt_mu | qb_positive | special_C3a3 | hermitian_symmetric_bound | e0_member | dimension_one
};

struct ClassificationRecord {
  CSpaceDescriptor descriptor;
  int dimension;
  std::optional<StatedConstant> mu;
  std::optional<StatedConstant> nu;
  std::optional<QbVerdict> qb;  // empty: outside the QB classification range
  RicPerpResult ricperp;
  std::string identification;  // e.g. "Gr(2,4)", "Q^5"; empty when not Hermitian symmetric
};

/// Complete positive root list in simple-root coordinates, sorted by height
/// then lexicographically. Throws UnsupportedFamilyRank.
std::vector<RootVector> positive_roots(Family f, int rank);

/// Δ_i⁺(k): positive roots whose coefficient on α_node equals k.
std::vector<RootVector> delta_plus_k(const CSpaceDescriptor& d, int k);

/// |Δ_i⁺| = Σ_{k>0} |Δ_i⁺(k)|.
int cspace_dimension(const CSpaceDescriptor& d);

/// μ as stated for the family/node, or nullopt ("unstated").
std::optional<StatedConstant> einstein_constant(const CSpaceDescriptor& d);
/// ν bound as stated, or nullopt.
std::optional<StatedConstant> itoh_nu(const CSpaceDescriptor& d);

/// Hermitian symmetric identification, if any.
std::optional<std::string> hermitian_symmetric_name(const CSpaceDescriptor& d);

bool in_e0(const CSpaceDescriptor& d);

/// Throws OutOfTheoremRange for descriptors outside the QB classification.
QbVerdict qb_verdict(const CSpaceDescriptor& d);

RicPerpResult ricperp_verdict(const CSpaceDescriptor& d);

ClassificationRecord classify(const CSpaceDescriptor& d);

/// All valid descriptors of the given families with rank ≤ r_max (exceptional
/// families are included when their fixed rank is ≤ r_max), ordered by
/// family, rank, node.
std::vector<ClassificationRecord> classify_range(const std::vector<Family>& families, int r_max);

}  // namespace ricperp::cspace
