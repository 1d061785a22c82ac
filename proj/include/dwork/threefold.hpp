#pragma once

#include <string>
#include <vector>

#include "dwork/frobenius.hpp"

namespace dwork {

/*
 * Graded Frobenius structure on the middle cohomology of the local threefold
 * x y + P(u, v) = 0 attached to the affine curve P = 0.  It splits into the
 * curve block scaled by p and a distinguished line with eigenvalue p^3.  Only
 * the associated graded is produced: the extension entry coupling the line to
 * the block is not computed, and `extension_known` stays false to say so.
 */
struct ThreefoldFrobenius {
    long p = 0;
    PrecMatrix block;     // exactly p times the curve Frobenius
    PadicScalar line;     // exactly p^3
    bool extension_known = false;

    long graded_dim() const { return block.dim + 1; }
};

// Scale the (normalized) curve Frobenius by p and attach the p^3 line.
ThreefoldFrobenius assemble(const PrecMatrix& curve_fr, long p);

// Root valuations of the graded characteristic polynomial (block char poly
// times (T - p^3)), ascending with multiplicity.  Throws precision_exhausted
// when the block certificate cannot resolve a vertex.
std::vector<mpq_class> newton_slopes(const ThreefoldFrobenius& tf);

struct ScalingReport {
    bool pass = true;
    long graded_dim = 0;
    std::string detail;  // first mismatch location when pass is false
};

/*
 * Regression tripwire for the defining invariants: the block must equal
 * p * curve_fr entrywise in exact representation (scaling sheds no digits),
 * the line must be exactly p^3, and the graded dimension must exceed the
 * curve block dimension by one.
 */
ScalingReport verify_scaling(const ThreefoldFrobenius& tf, const PrecMatrix& curve_fr, long p);

}  // namespace dwork
