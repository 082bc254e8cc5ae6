"""Exact checks of the projection and unitary identities in the tensor algebra.

Run with ``python3 demos/ck_lemmas.py``.
"""
from sftacoe.ck import (TensorElement, alpha_A, compress, compression_criterion,
                        diagonal_generator, parse_term, projection_EA, unitary_UA,
                        verify_lemmas)
from sftacoe.sft import validate

m = validate([[1, 1], [1, 0]])
e = projection_EA(m)
u = unitary_UA(m)
print("E_A =", e)
print("U_A =", u)
print("U_A U_A* == E_A:", u * u.adjoint() == e)

term = parse_term("T[1]T[1]* x S[1 2]S[1 2]*")
x = TensorElement(m, {term: 1})
print("E_A x E_A for", x, "=", compress(x, m), " criterion:", compression_criterion(m, term))

g = diagonal_generator(m, (1,), (2,))
print("alpha_A of", g, "=", alpha_A(g, m))

report = verify_lemmas(m, max_len=2)
print("lemma suite passed:", report.passed,
      f"({report.compression_checked} compression monomials, "
      f"{report.shift_checked} shift checks)")
