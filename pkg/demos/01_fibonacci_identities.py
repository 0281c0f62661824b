"""Fibonacci numbers with f_0 = f_1 = 1, the identities behind the matrix,
and how fast the ratios f_{n+1}/f_n close in on the golden ratio."""

from fibspaces.fibcore import cassini, cassini_variant, fib, fib_prefix_sum, fib_ratio, golden_ratio

print("f_0..f_11:", [fib(n) for n in range(12)])

ok = sum(cassini(n) == (-1) ** (n + 1) and cassini_variant(n) == (-1) ** (n + 1)
         and fib_prefix_sum(n) == fib(n + 2) - 1 for n in range(1, 1001))
print(f"identities hold for {ok}/1000 values of n")

phi = golden_ratio(200)
for n in (5, 10, 20, 40):
    err = fib_ratio(n) - phi
    print(f"n={n:2d}  ratio={fib_ratio(n)}  error ~ {float(err):+.3e}")
