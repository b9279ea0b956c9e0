"""Fault-line dynamics in one dimension, step by step.

Two substitutions act on the rows touching a horizontal boundary: sigma1 on
the row just above, sigma2 on the row just below.  Because sigma2 is a cyclic
shift of sigma1 (same tiling space), the two rows drift against each other,
and the drift is controlled by the second eigenvalue of the substitution
matrix.
"""

from faultline import Substitution, boundary_trace, classify_boundary, discrepancy_growth
from faultline.fault import offset_statistics

sigma1 = Substitution(["a", "b"], {"a": "ba", "b": "aaa"})
sigma2 = Substitution(["a", "b"], {"a": "ab", "b": "aaa"})

print("sigma1:", sigma1)
print("sigma2:", sigma2)
print("abelianization:", sigma1.matrix().tolist())

# Perron data: the expansion factor is the larger root of x^2 - x - 3
pd = sigma1.perron()
print("charpoly coefficients (ascending):", pd.charpoly)
print("expansion factor lambda ~", float(pd.root))

# tile widths making the substitution self-similar: a is lambda wide, b is 3
widths = sigma1.tile_lengths()
print("tile widths:", [str(round(float(w), 6)) for w in widths])

# the second eigenvalue 1 - lambda has modulus > 1, so letter-count
# discrepancies between the two rows grow without bound
sc = sigma1.spectral_class()
print("spectral class:", sc.kind.value,
      "| second eigenvalue modulus ~", float(sc.second_eigenvalue_modulus[0]))

# start from an aligned pair of a tiles and substitute four times
trace = boundary_trace(sigma1, sigma2, "a", 4)
for step in trace.steps:
    print(f"round {step.round}:")
    print("   top:", sigma1.text(step.top))
    print("   bot:", sigma2.text(step.bottom))
    print("   max |discrepancy|:", step.max_abs_discrepancy)

# over twelve rounds the max discrepancy multiplies by about |1 - lambda|
trace12 = boundary_trace(sigma1, sigma2, "a", 12)
lo, hi = discrepancy_growth(trace12)
print("max |discrepancy| by round:", trace12.max_abs_by_round())
print("geometric-mean growth over the last half:", float(lo), "..", float(hi))
print("(compare lambda - 1 ~ 1.302776)")

# the shear offsets lambda*m mod 3 keep accumulating new exact values:
# evidence for density in the limit
stats = offset_statistics(trace12)
print("distinct offsets per round:", stats.per_round_counts)
print("total distinct offsets:", stats.distinct_count,
      "| smallest positive gap ~", float(stats.min_gap))

# the classifier puts it together
print("classify(sigma1, sigma2):", classify_boundary(sigma1, sigma2).kind.value)
print("classify(sigma1, sigma1):", classify_boundary(sigma1, sigma1).kind.value)
