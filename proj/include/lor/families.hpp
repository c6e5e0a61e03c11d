#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "lor/core.hpp"

namespace lor {

// The weight-sequence families implemented by the generators. The first
// four are the introductory examples; the last four are the layered
// low-resilience construction, the p_k lower-bound constructions and the
// Janson-Spencer construction.
enum class Family {
    ones,
    arithmetic,
    powers2,
    planted_log,
    layered,
    pk_lower,
    p1_sharp,
    janson_spencer,
};

const char* family_name(Family f);
std::optional<Family> family_from_string(const std::string& s);

struct FamilySpec {
    Family family = Family::ones;
    int64_t n = 1;
    std::optional<int> k;       // basis order for pk_lower
    int64_t eps_num = 1;        // epsilon = eps_num / eps_den in (0,1)
    int64_t eps_den = 10;
    int64_t cheb_l = 20;        // |X| <= cheb_l * sigma gate (janson_spencer)
};

// Builds the family member of length exactly n. Construction parameters
// (layer boundaries, basis contents, derived exponents) are recorded in
// the params field so that certificates can locate layers. Total sums
// are made even exactly where the constructions require it. Throws
// ConstructionError (naming the violated count) when n is below the
// family minimum.
WeightSequence generate(const FamilySpec& spec);

struct FlipCertificate {
    enum class Strategy { layered, harmonic, exact };
    IndexSet flips;
    BigInt achieved_target;
    Strategy strategy = Strategy::exact;
};

enum class CertFail {
    none,
    chebyshev,      // |X| over the concentration gate
    coverage,       // the power-of-two layer cannot reach the window
    sign_missing,   // a needed element has no copy of the required sign
    progress,       // greedy descent stalled
    budget,         // flip budget exhausted
};

const char* cert_fail_name(CertFail f);

struct CertificateOutcome {
    bool success = false;
    FlipCertificate certificate;  // meaningful when success
    CertFail reason = CertFail::none;
    int size_bound = 0;           // declared bound for this sequence
};

// Constructive flip strategy for the layered family: adjust the
// power-of-two layer into the basis window, then descend through the two
// planted bases. Fails (without error) on the almost-sure bad events.
CertificateOutcome layered_certificate(const WeightSequence& a, const SignVector& xi);

// Flip strategy for the Janson-Spencer family: drain with the largest
// harmonic value, square-descend through the harmonic values, finish
// with one exact flip.
CertificateOutcome harmonic_certificate(const WeightSequence& a, const SignVector& xi);

// Applies the certificate to a copy of xi and re-evaluates X exactly.
bool certificate_is_valid(const WeightSequence& a, const SignVector& xi,
                          const FlipCertificate& cert);

// Seeded success-rate measurement over i.i.d. uniform sign vectors.
struct CertifyStats {
    uint64_t samples = 0;
    uint64_t successes = 0;
    std::map<std::string, uint64_t> failures;  // reason -> count
    int max_size = 0;
    int size_bound = 0;
    bool all_verified = true;
};

CertifyStats certify_monte_carlo(const WeightSequence& a, uint64_t samples,
                                 uint64_t seed, int threads = 0);

}  // namespace lor
