#include "dwork/threefold.hpp"

namespace dwork {

ThreefoldFrobenius assemble(const PrecMatrix& curve_fr, long p) {
    ThreefoldFrobenius tf;
    tf.p = p;
    tf.block = mat_scale_p_power(curve_fr, 1);
    long w = std::max<long>(curve_fr.certificate, 8);
    tf.line = PadicScalar::from_integer(1, p, w).mul_p_power(3);
    tf.extension_known = false;
    return tf;
}

std::vector<mpq_class> newton_slopes(const ThreefoldFrobenius& tf) {
    std::vector<PadicScalar> bc = charpoly(tf.block);
    // Multiply by (T - p^3): the line contributes one more root.
    PadicScalar p3 = tf.line;
    std::vector<PadicScalar> gc(bc.size() + 1, PadicScalar::zero(tf.p));
    for (size_t k = 0; k < gc.size(); ++k) {
        PadicScalar c = PadicScalar::zero(tf.p);
        if (k > 0) c += bc[k - 1];
        if (k < bc.size()) c += bc[k] * p3.mul_small(-1);
        gc[k] = c;
    }
    return newton_slopes(gc);
}

ScalingReport verify_scaling(const ThreefoldFrobenius& tf, const PrecMatrix& curve_fr, long p) {
    ScalingReport rep;
    rep.graded_dim = tf.graded_dim();
    if (tf.p != p || curve_fr.p != p) {
        rep.pass = false;
        rep.detail = "prime mismatch";
        return rep;
    }
    if (tf.block.dim != curve_fr.dim || tf.graded_dim() != curve_fr.dim + 1) {
        rep.pass = false;
        rep.detail = "graded dimension is not curve dim + 1";
        return rep;
    }
    PadicScalar p3 = PadicScalar::from_integer(1, p, std::max<long>(tf.line.prec(), 1)).mul_p_power(3);
    if (!tf.line.same_value(p3)) {
        rep.pass = false;
        rep.detail = "line eigenvalue is not p^3";
        return rep;
    }
    for (long i = 0; i < curve_fr.dim; ++i)
        for (long j = 0; j < curve_fr.dim; ++j) {
            PadicScalar want = curve_fr.at(i, j).mul_p_power(1);
            if (!tf.block.at(i, j).same_value(want)) {
                rep.pass = false;
                rep.detail = "block entry (" + std::to_string(i) + "," + std::to_string(j) +
                             ") is not p times the curve entry";
                return rep;
            }
        }
    return rep;
}

}  // namespace dwork
