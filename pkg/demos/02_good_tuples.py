"""Solving the multiplicative conditions for normal extensions.

For each omitted index k the scalars p must satisfy p_k = q_k together
with one product equation per monomial of w.  The solver returns complete
parametric families; this script prints them for three corpus entries and
checks a few members by direct substitution.
"""

from normext import Superpotential, parse_algebra_file
from normext.cli import default_corpus_path
from normext.tuples import goodness_system, is_good, solve_units, w_hash

corpus = default_corpus_path()

for name in ("w_poly", "cubic_s2", "sklyanin", "skew"):
    af = parse_algebra_file(corpus / f"{name}.alg")
    sp = Superpotential(af.w)
    print(f"=== {name} (n = {sp.n}, degree {sp.ell}) ===")
    for k in range(sp.n):
        system = goodness_system(sp, k)
        eqs = ", ".join(lab for lab in system.labels)
        fams = solve_units(system, w_hash(sp.w))
        if not fams:
            print(f"  k={k + 1}: no good tuple")
            continue
        fam = fams[0]
        members = [fam.entry_texts(i, af.conductor) for i in range(len(fam.cosets))]
        free = f" with free {', '.join(fam.symbols)}" if fam.directions else ""
        print(f"  k={k + 1}: {members}{free}")
    print()

print("=== spot checks by substitution ===")
af = parse_algebra_file(corpus / "w_poly.alg")
sp = Superpotential(af.w)
from normext import Scalar

one = Scalar.one(1)
two = Scalar.from_rational(2)
print("(1,1,1) good for the polynomial ring:", bool(is_good(sp, 0, (one, one, one))))
verdict = is_good(sp, 0, (one, two, one))
print("(1,2,1) good:", bool(verdict), "-", verdict.detail)
