"""Tour of the GF(2^m) layer: arithmetic, trace, and matrix encodings.

Every field element is an int whose bits are coefficients in the power
basis {1, alpha, ..., alpha^(m-1)}.  The context exposes multiplication
both as table lookups and as binary matrices A_z acting on coordinate
row vectors, plus the symmetric Gram matrix W that converts between the
power basis and its trace-dual basis.

Run:  python demos/01_field_basics.py
"""

import numpy as np

from kerdock3 import FieldContext

ctx = FieldContext(3)
n = ctx.order
print(f"GF(2^{ctx.m}) with primitive polynomial {ctx.poly:#x}, {n} elements")

print("\npowers of alpha:")
for i in range(n - 1):
    print(f"  alpha^{i} = {ctx.alpha_power(i):#05b}")

a, b = 0b011, 0b101
print(f"\narithmetic with a={a:#05b}, b={b:#05b}:")
print(f"  a*b   = {ctx.mul(a, b):#05b}")
print(f"  a/b   = {ctx.div(a, b):#05b}")
print(f"  1/a   = {ctx.inv(a):#05b}")
print(f"  a^5   = {ctx.pow(a, 5):#05b}")
print(f"  sqrt(a) = {ctx.sqrt(a):#05b}  (squaring is a bijection)")

print("\ntrace of each element (a linear map onto GF(2)):")
print(" ", {x: ctx.trace(x) for x in range(n)})
zeros = sum(ctx.trace(x) == 0 for x in range(n))
print(f"  exactly half have trace zero: {zeros} of {n}")

print("\nmultiplication as a binary matrix (row-vector convention):")
a_alpha = ctx.mul_matrix(ctx.alpha_power(1))
print(np.array2string(a_alpha))
x = 0b110
coords = np.array([(x >> j) & 1 for j in range(ctx.m)])
image = coords @ a_alpha % 2
packed = int((image << np.arange(ctx.m)).sum())
print(f"  {x:#05b} * alpha via the matrix: {packed:#05b}"
      f"  (table says {ctx.mul(x, ctx.alpha_power(1)):#05b})")

print("\nGram matrix W relating the basis to its trace-dual:")
print(np.array2string(ctx.w_matrix()))
print("  Tr(x*y) computed three ways, for a few pairs:")
for x, y in ((1, 5), (3, 6), (7, 7)):
    via_field = ctx.trace(ctx.mul(x, y))
    via_dual = ctx.trace_product(x, y)
    xc = np.array([(x >> j) & 1 for j in range(ctx.m)])
    yc = np.array([(y >> j) & 1 for j in range(ctx.m)])
    via_w = int(xc @ ctx.w_matrix() @ yc % 2)
    print(f"    x={x} y={y}: field {via_field}, dual-coordinate {via_dual}, "
          f"matrix {via_w}")
