#include "ricperp/cspace.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "ricperp/error.hpp"

namespace ricperp::cspace {

namespace {

int fixed_rank(Family f) {
  switch (f) {
    case Family::E6: return 6;
    case Family::E7: return 7;
    case Family::E8: return 8;
    case Family::F4: return 4;
    case Family::G2: return 2;
    default: return 0;
  }
}

int min_rank(Family f) {
  switch (f) {
    case Family::A: return 1;
    case Family::B: return 2;
    case Family::C: return 3;
    case Family::D: return 4;
    default: return fixed_rank(f);
  }
}

void check_family_rank(Family f, int rank) {
  const bool ok = is_exceptional(f) ? rank == fixed_rank(f) : rank >= min_rank(f);
  if (!ok) {
    throw Error(ErrorCode::UnsupportedFamilyRank,
                std::string("unsupported rank ") + std::to_string(rank) + " for family " +
                    std::string(to_string(f)));
  }
}

// Gram matrix (α_i, α_j) of the simple roots, Bourbaki numbering, scaled to integers.
std::vector<std::vector<int>> gram_matrix(Family f, int r) {
  std::vector<std::vector<int>> b(r, std::vector<int>(r, 0));
  const auto bond = [&](int i, int j, int v) {  // 1-based
    b[i - 1][j - 1] = v;
    b[j - 1][i - 1] = v;
  };
  switch (f) {
    case Family::A:
      for (int i = 0; i < r; ++i) b[i][i] = 2;
      for (int i = 1; i < r; ++i) bond(i, i + 1, -1);
      break;
    case Family::B:
      for (int i = 0; i < r; ++i) b[i][i] = 2;
      b[r - 1][r - 1] = 1;
      for (int i = 1; i < r; ++i) bond(i, i + 1, -1);
      break;
    case Family::C:
      for (int i = 0; i < r; ++i) b[i][i] = 2;
      b[r - 1][r - 1] = 4;
      for (int i = 1; i < r - 1; ++i) bond(i, i + 1, -1);
      bond(r - 1, r, -2);
      break;
    case Family::D:
      for (int i = 0; i < r; ++i) b[i][i] = 2;
      for (int i = 1; i < r - 1; ++i) bond(i, i + 1, -1);
      bond(r - 2, r, -1);
      break;
    case Family::E6:
    case Family::E7:
    case Family::E8:
      for (int i = 0; i < r; ++i) b[i][i] = 2;
      bond(1, 3, -1);
      bond(3, 4, -1);
      bond(2, 4, -1);
      for (int i = 4; i < r; ++i) bond(i, i + 1, -1);
      break;
    case Family::F4:
      b[0][0] = b[1][1] = 4;
      b[2][2] = b[3][3] = 2;
      bond(1, 2, -2);
      bond(2, 3, -2);
      bond(3, 4, -1);
      break;
    case Family::G2:
      b[0][0] = 2;
      b[1][1] = 6;
      bond(1, 2, -3);
      break;
  }
  return b;
}

int height(const RootVector& v) { return std::accumulate(v.begin(), v.end(), 0); }

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

StatedConstant stated(long v, std::string source, bool bound = false) {
  return StatedConstant{Rational{v, 1}, bound, std::move(source)};
}

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::C: return "C";
    case Family::D: return "D";
    case Family::E6: return "E6";
    case Family::E7: return "E7";
    case Family::E8: return "E8";
    case Family::F4: return "F4";
    case Family::G2: return "G2";
  }
  return "?";
}

Family parse_family(std::string_view s) {
  static const std::map<std::string, Family> table{
      {"A", Family::A},   {"B", Family::B},   {"C", Family::C},   {"D", Family::D},  {"E6", Family::E6},
      {"E7", Family::E7}, {"E8", Family::E8}, {"F4", Family::F4}, {"G2", Family::G2}};
  const auto it = table.find(upper(s));
  if (it == table.end()) throw Error(ErrorCode::UnsupportedFamilyRank, "unknown Lie family '" + std::string(s) + "'");
  return it->second;
}

bool is_exceptional(Family f) { return fixed_rank(f) != 0; }

void CSpaceDescriptor::check() const {
  check_family_rank(family, rank);
  if (node < 1 || node > rank) {
    throw Error(ErrorCode::IndexOutOfRange, "node must lie in [1, rank]");
  }
}

std::string CSpaceDescriptor::label() const {
  std::string fam(to_string(family));
  if (!is_exceptional(family)) fam += std::to_string(rank);
  return "(" + fam + ", a" + std::to_string(node) + ")";
}

std::string_view to_string(QbVerdict v) {
  switch (v) {
    case QbVerdict::Positive: return "positive";
    case QbVerdict::NonnegBoundary: return "nonneg_boundary";
    case QbVerdict::Fails: return "fails";
  }
  return "?";
}

std::string_view to_string(RicPerpVerdict v) {
  switch (v) {
    case RicPerpVerdict::Positive: return "positive";
    case RicPerpVerdict::UnknownE0: return "unknown_E0";
    case RicPerpVerdict::ExcludedP1: return "excluded_P1";
  }
  return "?";
}

std::vector<RootVector> positive_roots(Family f, int rank) {
  check_family_rank(f, rank);
  const auto b = gram_matrix(f, rank);
  std::set<RootVector> known;
  std::vector<RootVector> level;
  for (int j = 0; j < rank; ++j) {
    RootVector e(rank, 0);
    e[j] = 1;
    known.insert(e);
    level.push_back(e);
  }
  // Grow by height using α_j-strings: β + α_j is a root iff p − ⟨β, α_j^∨⟩ > 0,
  // where p is the largest k with β − k·α_j a root.
  while (!level.empty()) {
    std::set<RootVector> next;
    for (const RootVector& beta : level) {
      for (int j = 0; j < rank; ++j) {
        int p = 0;
        RootVector down = beta;
        while (true) {
          down[j] -= 1;
          if (down[j] < 0 || !known.count(down)) break;
          ++p;
        }
        int pairing2 = 0;  // 2(β, α_j)
        for (int i = 0; i < rank; ++i) pairing2 += 2 * beta[i] * b[i][j];
        const int cartan = pairing2 / b[j][j];
        if (p - cartan > 0) {
          RootVector up = beta;
          up[j] += 1;
          if (!known.count(up)) next.insert(up);
        }
      }
    }
    level.assign(next.begin(), next.end());
    known.insert(next.begin(), next.end());
  }
  std::vector<RootVector> out(known.begin(), known.end());
  std::stable_sort(out.begin(), out.end(), [](const RootVector& x, const RootVector& y) {
    const int hx = height(x), hy = height(y);
    if (hx != hy) return hx < hy;
    return x < y;
  });
  return out;
}

std::vector<RootVector> delta_plus_k(const CSpaceDescriptor& d, int k) {
  d.check();
  std::vector<RootVector> out;
  for (RootVector& v : positive_roots(d.family, d.rank)) {
    if (v[d.node - 1] == k) out.push_back(std::move(v));
  }
  return out;
}

int cspace_dimension(const CSpaceDescriptor& d) {
  d.check();
  int n = 0;
  for (const RootVector& v : positive_roots(d.family, d.rank)) {
    if (v[d.node - 1] > 0) ++n;
  }
  return n;
}

std::optional<std::string> hermitian_symmetric_name(const CSpaceDescriptor& d) {
  d.check();
  const int r = d.rank, i = d.node;
  const auto s = [](int v) { return std::to_string(v); };
  switch (d.family) {
    case Family::A:
      if (i == 1 || i == r) return "P^" + s(r);
      return "Gr(" + s(i) + "," + s(r + 1) + ")";
    case Family::B:
      if (i == 1) return "Q^" + s(2 * r - 1);
      if (i == r) return r == 2 ? std::string("P^3") : "II_" + s(r + 1);
      return std::nullopt;
    case Family::C:
      if (i == 1) return "P^" + s(2 * r - 1);
      if (i == r) return "III_" + s(r);
      return std::nullopt;
    case Family::D:
      if (i == 1) return "Q^" + s(2 * r - 2);
      if (i == r - 1 || i == r) return "II_" + s(r);
      return std::nullopt;
    case Family::E6:
      if (i == 1 || i == 6) return std::string("M_V^16");
      return std::nullopt;
    case Family::E7:
      if (i == 7) return std::string("M_VI^27");
      return std::nullopt;
    case Family::G2:
      if (i == 1) return std::string("Q^5");
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

std::optional<StatedConstant> einstein_constant(const CSpaceDescriptor& d) {
  d.check();
  const int r = d.rank, i = d.node;
  switch (d.family) {
    case Family::A:
      return stated(r + 1, "mu = r+1 (Grassmannian)");
    case Family::B:
      if (r >= 3) return stated(2 * r - i, "mu = 2r-i");
      // B2: (B2, a1) = Q^3, (B2, a2) = P^3.
      return i == 1 ? stated(3, "mu = n (quadric Q^3)") : stated(4, "mu = n+1 (P^3)");
    case Family::C:
      return stated(2 * r - i + 1, "mu = 2r-i+1");
    case Family::D:
      return stated(2 * r - i - 1, "mu = 2r-i-1");
    case Family::E6:
      if (i == 1 || i == 6) return stated(12, "mu = 12");
      return std::nullopt;
    case Family::E7:
      if (i == 7) return stated(18, "mu = 18");
      return std::nullopt;
    case Family::G2:
      if (i == 1) return stated(5, "mu = n (quadric Q^5)");
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

std::optional<StatedConstant> itoh_nu(const CSpaceDescriptor& d) {
  d.check();
  const int r = d.rank, i = d.node;
  switch (d.family) {
    case Family::B:
      if (r >= 3) return stated(2, "nu = 2 or 1 (upper bound kept)", true);
      return std::nullopt;
    case Family::C:
      return i == r ? stated(4, "nu = 4 (i = r)") : stated(2, "nu = 2");
    case Family::D:
      return stated(2, "nu = 2");
    case Family::E6:
      if (i == 1 || i == 6) return stated(2, "nu = 2");
      return std::nullopt;
    case Family::E7:
      if (i == 7) return stated(2, "nu = 2");
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

bool in_e0(const CSpaceDescriptor& d) {
  d.check();
  const int i = d.node;
  switch (d.family) {
    case Family::F4: return i == 3;
    case Family::E6: return i == 4;
    case Family::E7: return i == 3 || i == 4 || i == 6;
    case Family::E8: return i >= 3 && i <= 7;
    default: return false;
  }
}

QbVerdict qb_verdict(const CSpaceDescriptor& d) {
  d.check();
  const int r = d.rank, i = d.node;
  const auto compare = [&](int lhs) {
    if (lhs < 4 * r) return QbVerdict::Positive;
    if (lhs == 4 * r) return QbVerdict::NonnegBoundary;
    return QbVerdict::Fails;
  };
  const auto out_of_range = [&]() -> QbVerdict {
    throw Error(ErrorCode::OutOfTheoremRange, d.label() + " lies outside the QB classification range");
  };
  switch (d.family) {
    case Family::B:
      if (r >= 3 && i > 1 && i < r) return compare(5 * i + 1);
      return out_of_range();
    case Family::C:
      if (r >= 3 && i > 1 && i < r) return compare(5 * i - 3);
      return out_of_range();
    case Family::D:
      if (r >= 4 && i > 1 && i < r - 1) return compare(5 * i + 3);
      return out_of_range();
    case Family::A:
      return out_of_range();
    default:
      break;
  }
  if (in_e0(d)) return QbVerdict::Fails;
  if (hermitian_symmetric_name(d)) return out_of_range();
  // Remaining exceptional nodes: (G2,a2), (F4,a1,2,4), (E6,a2,3,5), (E7,a1,2,5), (E8,a1,2,8).
  return QbVerdict::Positive;
}

RicPerpResult ricperp_verdict(const CSpaceDescriptor& d) {
  d.check();
  if (cspace_dimension(d) == 1) return {RicPerpVerdict::ExcludedP1, "dimension_one"};
  if (in_e0(d)) return {RicPerpVerdict::UnknownE0, "e0_member"};
  if (d.family == Family::C && d.rank == 3 && d.node == 3) {
    return {RicPerpVerdict::Positive, "special_C3a3"};
  }
  const auto mu = einstein_constant(d);
  const auto nu = itoh_nu(d);
  if (mu && nu && nu->value.value() < mu->value.value()) return {RicPerpVerdict::Positive, "nu_lt_mu"};
  if (mu && hermitian_symmetric_name(d) && mu->value.value() > 2.0) {
    return {RicPerpVerdict::Positive, "hermitian_symmetric_bound"};
  }
  if (qb_verdict(d) == QbVerdict::Positive) return {RicPerpVerdict::Positive, "qb_positive"};
  throw std::logic_error("no verdict rule applies to " + d.label());
}

ClassificationRecord classify(const CSpaceDescriptor& d) {
  d.check();
  ClassificationRecord rec{d, cspace_dimension(d), einstein_constant(d), itoh_nu(d), std::nullopt,
                           ricperp_verdict(d), hermitian_symmetric_name(d).value_or("")};
  try {
    rec.qb = qb_verdict(d);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::OutOfTheoremRange) throw;
  }
  return rec;
}

std::vector<ClassificationRecord> classify_range(const std::vector<Family>& families, int r_max) {
  std::vector<Family> fams = families;
  std::sort(fams.begin(), fams.end());
  fams.erase(std::unique(fams.begin(), fams.end()), fams.end());
  std::vector<ClassificationRecord> out;
  for (Family f : fams) {
    const int lo = min_rank(f);
    const int hi = is_exceptional(f) ? fixed_rank(f) : r_max;
    if (lo > r_max) continue;
    for (int r = lo; r <= hi; ++r)
      for (int i = 1; i <= r; ++i) out.push_back(classify({f, r, i}));
  }
  return out;
}

}  // namespace ricperp::cspace
