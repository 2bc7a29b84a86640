"""Set discrete logarithms: every k with T^k = S as multisets, and the eigenvalue version."""
from grpiso.dlog_conj import ConjLogInstance, dlog_up_to_conjugacy
from grpiso.field_poly import GF
from grpiso.matrix_forms import Matrix
from grpiso.setdlog import FieldMultiset, bruteforce_solutions, set_discrete_log

F = GF(31)
T = FieldMultiset([F(2), F(4), F(8), F(16), F(3)], F)
S = T.power(7)
sol = set_discrete_log([S], [T])
print("T =", T, " S = T^7 =", S)
print("solutions mod", sol.modulus, ":", sol.members())
print("brute force:        ", bruteforce_solutions([S], [T]))

# the same question asked about matrices up to conjugacy
M2 = Matrix.from_ints(5, [[0, 1, 0], [0, 0, 1], [2, 0, 0]])
P = Matrix.from_ints(5, [[1, 2, 0], [0, 1, 3], [1, 0, 1]])
M1 = P * M2 ** 11 * P.inverse()
inst = ConjLogInstance([(M1, M2)])
res = dlog_up_to_conjugacy(inst)
print("k =", res.k, "; every valid k mod", res.coset.modulus, ":", res.coset.members())
print("conjugator verifies:", res.verify(inst))
