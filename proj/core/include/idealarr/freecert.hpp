#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "idealarr/arrangement.hpp"
#include "idealarr/errors.hpp"

namespace idealarr {

enum class Status { certified_yes, certified_no, unknown };

// ---------------------------------------------------------------------------
// Inductive freeness
// ---------------------------------------------------------------------------
//
// A certificate is a pool of induction tables, one per arrangement reached,
// keyed by Arrangement::canonical_key().  Each table lists the hyperplanes of
// its arrangement (in the canonical coordinates of that key) in an addition
// order starting from the empty arrangement; every row records the exponents
// after the addition and the key of the restriction to the hyperplane just
// added.  Verification replays every row: the exponent transition must follow
// the addition pattern (exp_after = exp_before minus {b-1} plus {b}), and the
// restriction's own table — looked up by key — must reproduce exactly the
// exponents exp_after minus {b}.  Induction grounds out at the empty
// arrangement, so a verified pool proves inductive freeness of the target.

struct IFRow {
  Vec add;                      // normal added, in the entry's canonical coords
  std::vector<int> exp_after;   // exponents padded to the entry's coordinate dim
  std::string restriction_key;  // canonical key of the restriction
};

struct IFEntry {
  std::vector<IFRow> rows;
};

struct IFCertificate {
  std::string target_key;
  std::vector<int> exponents;   // padded with zeros to the target's ambient dim
  std::map<std::string, IFEntry> pool;
};

struct IFVerdict {
  Status status = Status::unknown;
  std::vector<int> exponents;   // meaningful when certified_yes (padded)
  std::optional<IFCertificate> certificate;
  std::string note;
  long long nodes = 0;
};

IFVerdict inductively_free(const Arrangement& a, const Budget& budget = {});
// Replays the certificate against the arrangement; on failure returns false
// and, if `why` is non-null, stores a reason.
bool verify_if_certificate(const Arrangement& a, const IFCertificate& cert,
                           std::string* why = nullptr);

// Extends a certificate of the localization A_X to one of A, where X is a
// modular coatom of A's intersection lattice given by its hyperplane set.
// The hyperplanes outside A_X are appended in index order; the new exponent
// equals their count.  The base certificate is verified first.
IFCertificate lift_by_modular_coatom(const Arrangement& a, const Bits128& flat,
                                     const IFCertificate& base,
                                     const Budget& budget = {});

std::string if_certificate_to_json(const IFCertificate& cert);
IFCertificate if_certificate_from_json(const std::string& text);

// ---------------------------------------------------------------------------
// Supersolvability
// ---------------------------------------------------------------------------
//
// Certificate: a maximal chain of flats, each given by the hyperplane indices
// of the target arrangement it contains.  Verification checks ranks 0..r,
// closure-closedness, inclusions, and that each flat is a modular coatom of
// the localization at its successor (checked by the pairwise dependence
// test), which certifies supersolvability without building any lattice.

struct SSChain {
  std::vector<std::vector<int>> chain;  // ascending: chain[k] has rank k
  std::vector<int> exponents;           // |A_{X_k}| - |A_{X_{k-1}}|, k = 1..r
};

struct SSVerdict {
  Status status = Status::unknown;
  std::vector<int> exponents;
  std::optional<SSChain> chain;
  std::string note;
  long long nodes = 0;
};

SSVerdict supersolvable(const Arrangement& a, const Budget& budget = {});
bool verify_ss_chain(const Arrangement& a, const SSChain& chain,
                     std::string* why = nullptr);

std::string ss_chain_to_json(const SSChain& chain);
SSChain ss_chain_from_json(const std::string& text);

// ---------------------------------------------------------------------------
// Nice partitions and inductive factorizations
// ---------------------------------------------------------------------------

struct HPartition {
  std::vector<std::vector<int>> blocks;  // hyperplane indices, disjoint cover
};

// Terao's conditions: every transversal of the blocks is linearly
// independent, and for every flat above the bottom the induced partition has
// a singleton block.  Builds the intersection lattice (budgeted).
bool nice_partition(const Arrangement& a, const HPartition& pi,
                    const Budget& budget = {});

// Certificate: the partition of the target plus, for every (arrangement,
// partition) pair reached in the induction, the hyperplane H0 whose triple
// carries the induction step.  Pairs are keyed canonically; H0 is stored as
// a position in the canonical hyperplane order.  Verification replays the
// definition: the restriction map away from H0's block must be a bijection
// onto the restriction, and both the deleted and restricted pairs must
// verify recursively, ending in empty arrangements with empty partitions.

struct IFacCertificate {
  std::vector<std::vector<int>> blocks;  // partition of the target
  std::map<std::string, int> pool;       // pair key -> canonical index of H0
};

struct IFacVerdict {
  Status status = Status::unknown;
  std::optional<IFacCertificate> certificate;
  std::string note;
  long long nodes = 0;
};

// Searches for an inductive factorization.  Candidate partitions are pruned
// by the factorization theorem: block sizes must match the roots of the
// characteristic polynomial; if chi does not split over the integers the
// answer is certified_no outright.
IFacVerdict inductively_factored(const Arrangement& a, const Budget& budget = {});
// Tests a specific partition for being an inductive factorization.
IFacVerdict inductively_factored_with(const Arrangement& a, const HPartition& pi,
                                      const Budget& budget = {});
bool verify_ifac_certificate(const Arrangement& a, const IFacCertificate& cert,
                             std::string* why = nullptr);

std::string ifac_certificate_to_json(const IFacCertificate& cert);
IFacCertificate ifac_certificate_from_json(const std::string& text);

// Canonical hyperplane order used by certificates: positions of each
// hyperplane's expressed normal in the sorted canonical list.  perm[k] =
// concrete hyperplane index at canonical position k.
std::vector<int> canonical_order(const Arrangement& a);

}  // namespace idealarr
