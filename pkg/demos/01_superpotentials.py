"""Recognizing twisted superpotentials and their linear data.

Walks through the bundled algebra files: derivative bundles, the diagonal
twist, the coefficient matrix, and recovery of the potential from its own
relations.  Run with `python demos/01_superpotentials.py`.
"""

from normext import (
    Superpotential,
    coefficient_matrix,
    parse_algebra_file,
    print_poly,
    superpotential_from_relations,
)
from normext.cli import default_corpus_path

corpus = default_corpus_path()

print("=== the antisymmetrizer (commutative polynomial ring) ===")
af = parse_algebra_file(corpus / "w_poly.alg")
sp = Superpotential(af.w)
print("w =", print_poly(sp.w))
for name, f in zip(af.gens, sp.f):
    print(f"  d_{name} w =", print_poly(f))
print("twist:", [str(s) for s in sp.twist.scales], "(identity: 3-Calabi-Yau input)")

m = coefficient_matrix(sp.w)
print("coefficient matrix of w = x^t M x:")
for row in m:
    print("  [", ", ".join(print_poly(e) if not e.is_zero() else "0" for e in row), "]")

print()
print("=== recovering w from the relations ===")
w_again = superpotential_from_relations(sp.f)
print("span intersection returns:", print_poly(w_again))
print("(a scalar multiple of w, normalized monic at the largest word)")

print()
print("=== a genuinely twisted example: the cubic of type S2 ===")
af2 = parse_algebra_file(corpus / "cubic_s2.alg")
sp2 = Superpotential(af2.w)
print("w =", print_poly(sp2.w))
for name, f in zip(af2.gens, sp2.f):
    print(f"  d_{name} w =", print_poly(f))
print("twist Q:", [s.text(af2.params) for s in sp2.twist.scales])
print("so the trailing bundle satisfies g_i = q_i f_i with q = (alpha, -alpha^{-1}).")
