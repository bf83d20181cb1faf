#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

#include "tauforge/grouplike.hpp"
#include "tauforge/tau.hpp"

namespace tauforge::cli {

// Insertion-ordered objects keep the output byte-identical for identical jobs.
using Json = nlohmann::ordered_json;

inline constexpr int kSchema = 1;

class JobError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Integers that fit in 64 bits become JSON numbers, everything else the string "p/q".
Json rational_json(const Q& q);
// Accepts a JSON integer or a decimal string "p" or "p/q".
Q rational_from(const Json& j);
Json partition_json(const Partition& l);
Partition partition_from(const Json& j);
// {"vars": [...], "cutoff": D, "terms": [{"exp": {...}, "num": "...", "den": "..."}]}, graded-lex order
Json poly_json(const Poly& p);
// Constant coefficients as rationals, anything else as a polynomial.
Json coeff_json(const Poly& p);
// {"kind", "charge", "cutoff", "terms", "tau"} per charge
Json series_json(const TauSeries& s);

// Element descriptions with a "kind" discriminator:
//   identity | scalar{value} | exponent{lo, matrix} | normal_ordered{lo, matrix, vacuum|null}
//   word{letters} | soliton{p, q, A} | diagonal{lo, weights} | projector{sign, charge, partition}
//   outer{ket, bra} | character{partition, charge} | product{factors}
// Matrices are row-major rational arrays whose first row and column are mode `lo`.
GroupLike element_from_json(const Json& j);
// The modes [lo, hi) a description touches explicitly (empty range if none).
std::pair<int, int> element_mode_span(const Json& j);
// A window holding the element, charges n_lo..n_hi and weights up to `margin`.
ModeWindow window_for(const Json& element, int n_lo, int n_hi, int margin);

// Random banded bilinear elements and products with diagonals, as used by the suites.
Json random_element_json(Rng& rng);

// Caps the worker count at TAU_FORGE_THREADS when set.
int thread_cap();

// Jobs: {"command": "expand" | "verify" | "soliton" | "matrix-model", ...}.  Each runner validates
// its keys first (JobError on unknown or malformed fields) and returns the output document.
// `ok` is false when a requested check fails.
struct Outcome {
    Json doc;
    bool ok = true;
};
Outcome run_job(const Json& job);

}  // namespace tauforge::cli
