"""Koszul signs, ledger replay and the orientation sign tables."""

from ainfcat.domains import sign_table_ledgers
from ainfcat.graded import GradingDatum, koszul_reorder_sign, parse_ledger

G = GradingDatum.standard()
print("swap two odd symbols:", koszul_reorder_sign([1, 1], [1, 0]))
print("cycle (odd, odd, even):", koszul_reorder_sign([1, 1, 0], [2, 0, 1]))

# a ledger is a list of moves on a word of graded symbols
text = """
name demo
start a:1 b:1 c:2
swap 0
swap 1
expect b:1 c:2 a:1
"""
script = parse_ledger(text, {}, name="demo")
end, sign = script.run()
print("ledger end:", end, "sign:", sign)

for n in range(5):
    print("n =", n, sign_table_ledgers(n))
